"""Seeded Monte-Carlo verification harness.

Distributional contracts are asymptotic total-variation statements; the
harness never estimates TV directly (hopeless in d^2 dimensions) and instead
runs falsifiable proxies at desk scale:

* Kolmogorov-Smirnov tests of pooled entries against N(0, 1) / N(0, 2) /
  N(mu, 1) targets,
* moment batteries (means, variances, sampled pairwise correlations) with
  3-sigma Monte-Carlo bounds and Bonferroni control across comparisons,
* higher-order dependence probes.  Linear pairwise correlations of distinct
  entries vanish identically for both the Wishart and the cross inner-product
  constructions, so residual dependence is probed through a sampled average
  of 4-cycle products E[S_ij S_jk S_kl S_li] (cross-product case, decays as
  1/(2n)) and the diagonal/off-diagonal-square coupling
  E[M_ii (M_ij^2 - 1)] = 2/sqrt(n) (Wishart case),
* an exact enumeration oracle for the Rademacher denoiser, and
* a coupled-run measurement of how a planted spike propagates through
  Gram-Schmidt.

Every report is reproducible bit-for-bit from (name, master seed, trials).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from .core import ParameterError, ScParams, thresholds
from .detect import rescaled_covariance
from .primitives import denoise_order, gram_schmidt
from .reductions import clone_cov
from .sampling import SeedStream, sample_sc, sample_sparse_signal


@dataclass
class TestReport:
    """Universal harness output: one named statistic against one threshold."""

    name: str
    statistic: float
    threshold: float
    passed: bool
    trials: int
    seed: int
    details: Dict[str, object] = field(default_factory=dict)

    def to_json_line(self) -> str:
        doc = {
            "name": self.name,
            "statistic": self.statistic,
            "threshold": self.threshold,
            "pass": self.passed,
            "trials": self.trials,
            "seed": self.seed,
            "details": self.details,
        }
        return json.dumps(doc, sort_keys=True)


def write_reports_jsonl(reports: Sequence[TestReport], path) -> None:
    Path(path).write_text("".join(r.to_json_line() + "\n" for r in reports))


def write_summary_csv(reports: Sequence[TestReport], path) -> None:
    """One row per battery; columns: name, statistic, threshold, pass, trials, seed."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["name", "statistic", "threshold", "pass", "trials", "seed"])
        for r in reports:
            writer.writerow([r.name, repr(r.statistic), repr(r.threshold), int(r.passed), r.trials, r.seed])


def bonferroni_z(level: float, comparisons: int) -> float:
    """Two-sided per-comparison z critical value after Bonferroni correction.

    Never below 3, so single comparisons keep the plain 3-sigma bound.
    """
    z = float(stats.norm.isf(level / (2.0 * max(comparisons, 1))))
    return max(3.0, z)


def ks_normality(
    samples: np.ndarray,
    mean: float = 0.0,
    var: float = 1.0,
    level: float = 0.01,
    name: str = "ks_normality",
    seed: int = 0,
) -> TestReport:
    """Two-sided KS test of pooled samples against N(mean, var)."""
    samples = np.asarray(samples, dtype=np.float64).ravel()
    if samples.size < 100:
        raise ParameterError(f"need at least 100 samples, got {samples.size}")
    sd = math.sqrt(var)
    res = stats.kstest(samples, "norm", args=(mean, sd))
    crit = float(stats.kstwobign.isf(level)) / math.sqrt(samples.size)
    return TestReport(
        name=name,
        statistic=float(res.statistic),
        threshold=crit,
        passed=bool(res.pvalue >= level),
        trials=int(samples.size),
        seed=seed,
        details={"pvalue": float(res.pvalue), "level": level, "mean": mean, "var": var},
    )


def _distinct_cycles(rng: np.random.Generator, d: int, count: int) -> np.ndarray:
    """(4, count) index array of 4-cycles with pairwise-distinct vertices."""
    out = np.empty((4, count), dtype=np.int64)
    filled = 0
    while filled < count:
        c = rng.integers(0, d, size=(4, count - filled))
        ok = (
            (c[0] != c[1]) & (c[0] != c[2]) & (c[0] != c[3])
            & (c[1] != c[2]) & (c[1] != c[3]) & (c[2] != c[3])
        )
        got = c[:, ok]
        out[:, filled : filled + got.shape[1]] = got
        filled += got.shape[1]
    return out


def _entry_pairs(rng: np.random.Generator, d: int, count: int, symmetric: bool) -> np.ndarray:
    """(count, 4) array of two distinct entry positions per row."""
    pairs = np.empty((count, 4), dtype=np.int64)
    filled = 0
    while filled < count:
        e = rng.integers(0, d, size=(count - filled, 4))
        if symmetric:
            e[:, :2] = np.sort(e[:, :2], axis=1)
            e[:, 2:] = np.sort(e[:, 2:], axis=1)
        distinct = (e[:, 0] != e[:, 1]) & (e[:, 2] != e[:, 3])
        different = (e[:, 0] != e[:, 2]) | (e[:, 1] != e[:, 3])
        got = e[distinct & different]
        pairs[filled : filled + got.shape[0]] = got
        filled += got.shape[0]
    return pairs


@dataclass
class _MomentAccumulator:
    """Streaming sums for per-entry means/variances and pair/cycle products."""

    count: int = 0
    entry_sum: Optional[np.ndarray] = None
    entry_sumsq: Optional[np.ndarray] = None
    pair_prod_sum: Optional[np.ndarray] = None
    cycle_means: List[float] = field(default_factory=list)
    diag_coupling: List[float] = field(default_factory=list)

    def update(self, m, pairs, cycles, diag_square):
        if self.entry_sum is None:
            self.entry_sum = np.zeros(m.shape)
            self.entry_sumsq = np.zeros(m.shape)
            if pairs is not None:
                self.pair_prod_sum = np.zeros(len(pairs))
        self.count += 1
        self.entry_sum += m
        self.entry_sumsq += m * m
        if pairs is not None:
            self.pair_prod_sum += m[pairs[:, 0], pairs[:, 1]] * m[pairs[:, 2], pairs[:, 3]]
        if cycles is not None:
            i, j, k, l = cycles
            self.cycle_means.append(float((m[i, j] * m[j, k] * m[k, l] * m[l, i]).mean()))
        if diag_square:
            dg = np.diagonal(m)
            sq = m * m
            np.fill_diagonal(sq, np.nan)
            self.diag_coupling.append(float(np.nanmean(sq - 1.0, axis=1) @ dg / m.shape[0]))


def cross_moment_battery(
    matrices: np.ndarray,
    stream: SeedStream,
    structure: str = "iid-null",
    u=None,
    predicted_mean: Optional[float] = None,
    symmetric_goe: bool = False,
    level: float = 0.01,
    corr_pairs: int = 100,
    cycles_per_trial: int = 0,
    diag_square_check: bool = False,
    name: str = "cross_moment_battery",
    seed: int = 0,
) -> TestReport:
    """Mean / variance / correlation battery over a stack of matrix trials.

    ``matrices`` has shape (T, r, c) with T >= 30.  In ``iid-null`` mode the
    targets are zero means and unit variances (diagonal variance 2 when
    ``symmetric_goe``).  In ``support-signal`` mode entry (i, j) is compared
    against ``predicted_mean * u_i * u_j`` for the supplied signal ``u``.

    Every sub-check is expressed as a z-score divided by its critical value
    (3-sigma, Bonferroni-corrected across per-entry comparisons); the report
    statistic is the worst such ratio and the battery passes iff it is <= 1.
    """
    matrices = np.asarray(matrices, dtype=np.float64)
    if matrices.ndim != 3:
        raise ParameterError(f"expected (T, r, c) stack, got shape {matrices.shape}")
    t_n, r, c = matrices.shape
    if t_n < 30:
        raise ParameterError(f"need at least 30 trials, got {t_n}")
    if structure not in ("iid-null", "support-signal"):
        raise ParameterError(f"unknown structure {structure!r}")
    if structure == "support-signal" and (u is None or predicted_mean is None):
        raise ParameterError("support-signal mode needs u and predicted_mean")

    rng = stream.generator()
    pairs = _entry_pairs(rng, min(r, c), corr_pairs, symmetric_goe) if corr_pairs else None
    cycles = _distinct_cycles(rng, min(r, c), cycles_per_trial) if cycles_per_trial else None

    acc = _MomentAccumulator()
    for m in matrices:
        acc.update(m, pairs, cycles, diag_square_check)

    details: Dict[str, object] = {}
    ratios: Dict[str, float] = {}

    entry_mean = acc.entry_sum / t_n
    entry_var = acc.entry_sumsq / t_n - entry_mean**2
    entry_sd = np.sqrt(np.maximum(entry_var, 0.0))
    # Floor the standard error so exactly-constant entries (noiseless
    # support-signal inputs) compare at fp granularity instead of 0/0.
    se_mean = np.maximum(entry_sd / math.sqrt(t_n), 1e-9)

    if structure == "iid-null":
        target_mean = np.zeros((r, c))
        target_var = np.ones((r, c))
        if symmetric_goe:
            np.fill_diagonal(target_var, 2.0)
    else:
        uv = u.vector() if hasattr(u, "vector") else np.asarray(u, dtype=np.float64)
        target_mean = predicted_mean * np.outer(uv, uv)
        target_var = None

    z_mean = (entry_mean - target_mean) / se_mean
    crit_entries = bonferroni_z(level, r * c)
    ratios["entry_means"] = float(np.abs(z_mean).max() / crit_entries)
    details["entry_means"] = {
        "max_abs_z": float(np.abs(z_mean).max()),
        "critical": crit_entries,
        "pass": bool(np.abs(z_mean).max() <= crit_entries),
    }

    if target_var is not None:
        # Var(sample variance) ~ 2 sigma^4 / T for Gaussian entries.
        z_var = (entry_var - target_var) / (target_var * math.sqrt(2.0 / t_n))
        ratios["entry_variances"] = float(np.abs(z_var).max() / crit_entries)
        details["entry_variances"] = {
            "max_abs_z": float(np.abs(z_var).max()),
            "critical": crit_entries,
            "pass": bool(np.abs(z_var).max() <= crit_entries),
        }

    if pairs is not None:
        prod_mean = acc.pair_prod_sum / t_n
        m1 = entry_mean[pairs[:, 0], pairs[:, 1]]
        m2 = entry_mean[pairs[:, 2], pairs[:, 3]]
        s1 = entry_sd[pairs[:, 0], pairs[:, 1]]
        s2 = entry_sd[pairs[:, 2], pairs[:, 3]]
        corr = (prod_mean - m1 * m2) / np.maximum(s1 * s2, 1e-18)
        z_corr = corr * math.sqrt(t_n)
        crit_pairs = bonferroni_z(level, len(pairs))
        ratios["pairwise_corr"] = float(np.abs(z_corr).max() / crit_pairs)
        details["pairwise_corr"] = {
            "max_abs_z": float(np.abs(z_corr).max()),
            "critical": crit_pairs,
            "pairs": len(pairs),
            "pass": bool(np.abs(z_corr).max() <= crit_pairs),
        }

    if cycles is not None:
        vals = np.array(acc.cycle_means)
        se = vals.std(ddof=1) / math.sqrt(t_n)
        z = float(vals.mean() / se)
        ratios["cycle_corr"] = abs(z) / 3.0
        details["cycle_corr"] = {
            "mean": float(vals.mean()),
            "se": float(se),
            "z": z,
            "pass": bool(abs(z) <= 3.0),
        }

    if diag_square_check:
        vals = np.array(acc.diag_coupling)
        se = vals.std(ddof=1) / math.sqrt(t_n)
        z = float(vals.mean() / se)
        ratios["diag_square_corr"] = abs(z) / 3.0
        details["diag_square_corr"] = {
            "mean": float(vals.mean()),
            "se": float(se),
            "z": z,
            "pass": bool(abs(z) <= 3.0),
        }

    corr_keys = [k for k in ("pairwise_corr", "cycle_corr", "diag_square_corr") if k in ratios]
    details["correlation_pass"] = bool(all(ratios[k] <= 1.0 for k in corr_keys))

    worst = max(ratios.values())
    return TestReport(
        name=name,
        statistic=float(worst),
        threshold=1.0,
        passed=bool(worst <= 1.0),
        trials=t_n,
        seed=seed,
        details=details,
    )


def denoise_exact_oracle(n_bits: int, a: float, delta: float) -> float:
    """Exact mean of the denoiser output for iid Rad(a + delta) inputs.

    Computed by brute enumeration, independently of the closed form: sum
    over all 2^N input patterns weighted by prod((1 +- (a+delta))/2), with
    the internal Rademacher products replaced by their exact means and the
    uniform mixture over the M branch values averaged explicitly.
    """
    if n_bits > 12:
        raise ParameterError(f"enumeration is limited to N <= 12, got {n_bits}")
    m = denoise_order(n_bits)
    if abs(a) > 1.0 / m:
        raise ParameterError(f"|a|={abs(a):.6g} exceeds 1/M={1.0 / m:.6g}")
    if abs(a + delta) > 1.0:
        raise ParameterError(f"|a+delta|={abs(a + delta):.6g} exceeds 1")

    q = a + delta
    p_plus = (1.0 + q) / 2.0
    p_minus = (1.0 - q) / 2.0
    slices = []
    w_parts = []
    for i in range(m):
        k_i = ((2 * m + 1) * i - i * i) // 2
        slices.append(range(k_i, k_i + m - i))
        w_parts.append((-a * math.comb(m, i) ** (1.0 / i)) ** i if i else 1.0)

    terms = []
    for pattern in range(2**n_bits):
        bits = [1.0 if pattern & (1 << t) else -1.0 for t in range(n_bits)]
        weight = math.prod(p_plus if b > 0 else p_minus for b in bits)
        branch_sum = math.fsum(
            math.prod(bits[t] for t in slices[i]) * w_parts[i] for i in range(m)
        )
        terms.append(weight * branch_sum / m)
    return ((-1.0) ** (m + 1)) * math.fsum(terms)


@dataclass(frozen=True)
class GsBoundParams:
    """Slack for the polylog factors: bounds scale as c1 * (ln n)^c2."""

    c1: float = 64.0
    c2: float = 2.0

    def __post_init__(self):
        if self.c1 <= 0 or self.c2 < 0:
            raise ParameterError(f"need c1 > 0 and c2 >= 0, got {self}")


@dataclass
class GsPerturbRecord:
    """Summary of the coupled Gram-Schmidt perturbation measurement."""

    params: ScParams
    residuals: np.ndarray  # last trial's rho vector
    support_mask: np.ndarray
    off_support_bound: float
    on_support_bound: float
    pass_rate: float
    median_ratio: float


def gs_perturb_harness(
    params: ScParams,
    bound: GsBoundParams,
    trials: int,
    stream: SeedStream,
    epsilon_decl: float = 0.1,
    min_pass_rate: float = 0.99,
    max_median_ratio: float = 0.2,
    name: str = "gs_perturbation",
) -> Tuple[TestReport, GsPerturbRecord]:
    """Measure spike propagation through coupled Gram-Schmidt runs.

    Per trial: draw u, a fixed-norm spike profile g (||g|| = sqrt(n)
    exactly), and noise X; orthogonalize X and Z = X + sqrt(theta) g u^T
    with the *same* X, and record

        rho_j = <g, Ztilde_j> - <g, Xtilde_j> - sqrt(theta n) u_j.

    A trial passes when max off-support |rho_j| <= c1 (ln n)^c2 sqrt(theta)
    and max on-support |rho_j| <= c1 (ln n)^c2 (theta sqrt(n)/k
    + sqrt(theta) d/(sqrt(n) sqrt(k)) + theta^(3/2) sqrt(n)/sqrt(k)).
    The relative-error claim is tracked by the pooled median of
    |rho_j| / (sqrt(theta n) |u_j|) over on-support coordinates.
    """
    d, k, theta, n = params.d, params.k, params.theta, params.n
    if n < d ** (1.0 + epsilon_decl):
        raise ParameterError(f"need n >= d^(1+eps) with eps={epsilon_decl}, got d={d}, n={n}")
    th = thresholds(d, k, n)
    if theta != 0.0 and not th.theta_stat <= theta < th.theta_comp:
        raise ParameterError(
            f"theta={theta:.6g} outside [theta_stat, theta_comp) = "
            f"[{th.theta_stat:.6g}, {th.theta_comp:.6g})"
        )

    slack = bound.c1 * math.log(n) ** bound.c2
    off_bound = slack * math.sqrt(theta)
    on_bound = slack * (
        theta * math.sqrt(n) / k
        + math.sqrt(theta) * d / (math.sqrt(n) * math.sqrt(k))
        + theta**1.5 * math.sqrt(n) / math.sqrt(k)
    )

    passes = 0
    ratios: List[float] = []
    rho = np.zeros(d)
    support_mask = np.zeros(d, dtype=bool)
    for t in range(trials):
        u = sample_sparse_signal(d, k, stream.child(t, 0))
        rng = stream.child(t, 1).generator()
        g = rng.standard_normal(n)
        g *= math.sqrt(n) / np.linalg.norm(g)
        x = rng.standard_normal((n, d))
        uv = u.vector()
        z = x + math.sqrt(theta) * np.outer(g, uv)
        qx = gram_schmidt(x).q
        qz = gram_schmidt(z).q
        rho = g @ qz - g @ qx - math.sqrt(theta * n) * uv
        support_mask = np.zeros(d, dtype=bool)
        support_mask[u.support] = True

        off_ok = np.abs(rho[~support_mask]).max() <= off_bound
        on_ok = np.abs(rho[support_mask]).max() <= on_bound
        passes += bool(off_ok and on_ok)
        if theta > 0.0:
            denom = math.sqrt(theta * n) * np.abs(uv[support_mask])
            ratios.extend(np.abs(rho[support_mask]) / denom)

    pass_rate = passes / trials
    median_ratio = float(np.median(ratios)) if ratios else 0.0
    passed = pass_rate >= min_pass_rate and median_ratio <= max_median_ratio
    report = TestReport(
        name=name,
        statistic=pass_rate,
        threshold=min_pass_rate,
        passed=bool(passed),
        trials=trials,
        seed=stream.master_seed,
        details={
            "median_on_support_ratio": median_ratio,
            "max_median_ratio": max_median_ratio,
            "off_support_bound": off_bound,
            "on_support_bound": on_bound,
            "theta": theta,
        },
    )
    record = GsPerturbRecord(
        params=params,
        residuals=rho,
        support_mask=support_mask,
        off_support_bound=off_bound,
        on_support_bound=on_bound,
        pass_rate=pass_rate,
        median_ratio=median_ratio,
    )
    return report, record


def clone_cov_null_battery(
    d: int,
    n: int,
    trials: int,
    stream: SeedStream,
    level: float = 0.01,
    corr_pairs: int = 100,
    cycles_per_trial: int = 60000,
    name: str = "clone_cov_null",
) -> TestReport:
    """Distributional battery for the cross inner-product reduction at null.

    Runs clone_cov on iid N(0, 1) inputs, then: pooled off-diagonal KS vs
    N(0, 1), pooled diagonal KS vs N(0, 2) (Bonferroni over the two tests),
    and the moment battery including the 4-cycle dependence probe.  In the
    n >> d^2 regime everything passes; at n = d^2 the cycle average sits
    near 1/(2n), several sigma from zero, and the correlation check fails.
    """
    outputs = np.empty((trials, d, d))
    for t in range(trials):
        z = stream.child(1, t, 0).generator().standard_normal((n, d))
        outputs[t] = clone_cov(z, stream.child(1, t, 1))

    iu, ju = np.triu_indices(d, k=1)
    offdiag = outputs[:, iu, ju].ravel()
    diag = outputs[:, np.arange(d), np.arange(d)].ravel()
    ks_level = level / 2.0  # Bonferroni across the two KS tests
    ks_off = ks_normality(offdiag, 0.0, 1.0, ks_level, name=f"{name}/ks_offdiag")
    ks_diag = ks_normality(diag, 0.0, 2.0, ks_level, name=f"{name}/ks_diag")
    moments = cross_moment_battery(
        outputs,
        stream.child(0),
        structure="iid-null",
        symmetric_goe=True,
        level=level,
        corr_pairs=corr_pairs,
        cycles_per_trial=cycles_per_trial,
        name=f"{name}/moments",
    )

    passed = ks_off.passed and ks_diag.passed and moments.passed
    return TestReport(
        name=name,
        statistic=moments.statistic,
        threshold=1.0,
        passed=bool(passed),
        trials=trials,
        seed=stream.master_seed,
        details={
            "ks_offdiag": {"statistic": ks_off.statistic, "pvalue": ks_off.details["pvalue"], "pass": ks_off.passed},
            "ks_diag": {"statistic": ks_diag.statistic, "pvalue": ks_diag.details["pvalue"], "pass": ks_diag.passed},
            "moments": moments.details,
            "correlation_pass": moments.details["correlation_pass"],
        },
    )


def wishart_clt_comparison(
    d: int,
    n: int,
    trials: int,
    stream: SeedStream,
    k: Optional[int] = None,
    theta: float = 0.0,
    level: float = 0.01,
    name: str = "wishart_clt",
) -> TestReport:
    """Compare sqrt(n)(Z^T Z / n - I) against spiked Wigner targets.

    Null mode (theta = 0): KS batteries plus the moment battery with the
    diagonal/off-diagonal-square coupling probe E[M_ii (M_ij^2 - 1)]
    = 2/sqrt(n), the statistic that separates the n >> d^3 regime (passes)
    from n = d^2 (fails).  Planted mode additionally checks the support-pair
    mean against theta sqrt(n) u_i u_j.
    """
    outputs = np.empty((trials, d, d))
    mean_zs: List[float] = []
    offdiag_pool: List[np.ndarray] = []
    diag_pool: List[np.ndarray] = []
    iu, ju = np.triu_indices(d, k=1)
    for t in range(trials):
        if theta > 0.0:
            if k is None:
                raise ParameterError("planted mode needs k")
            sample = sample_sc(ScParams(d=d, k=k, theta=theta, n=n), stream.child(1, t))
            m = rescaled_covariance(sample.data)
            uv = sample.truth.u.vector()
            sup = sample.truth.u.support
            pred = theta * math.sqrt(n) * np.outer(uv, uv)
            ii, jj = np.meshgrid(sup, sup, indexing="ij")
            mask = ii < jj
            mean_zs.extend((m[ii[mask], jj[mask]] - pred[ii[mask], jj[mask]]).ravel())
            # KS pools exclude the planted block: those entries carry means.
            on = np.zeros(d, dtype=bool)
            on[sup] = True
            keep = ~(on[iu] & on[ju])
            offdiag_pool.append(m[iu[keep], ju[keep]])
            diag_pool.append(np.diagonal(m)[~on])
        else:
            z = stream.child(1, t).generator().standard_normal((n, d))
            m = rescaled_covariance(z)
            offdiag_pool.append(m[iu, ju])
            diag_pool.append(np.diagonal(m))
        outputs[t] = m

    ks_level = level / 2.0
    ks_off = ks_normality(np.concatenate(offdiag_pool), 0.0, 1.0, ks_level, name=f"{name}/ks_offdiag")
    ks_diag = ks_normality(np.concatenate(diag_pool), 0.0, 2.0, ks_level, name=f"{name}/ks_diag")
    moments = None
    if theta == 0.0:
        moments = cross_moment_battery(
            outputs,
            stream.child(0),
            structure="iid-null",
            symmetric_goe=True,
            level=level,
            corr_pairs=100,
            diag_square_check=True,
            name=f"{name}/moments",
        )

    details: Dict[str, object] = {
        "ks_offdiag": {"statistic": ks_off.statistic, "pvalue": ks_off.details["pvalue"], "pass": ks_off.passed},
        "ks_diag": {"statistic": ks_diag.statistic, "pvalue": ks_diag.details["pvalue"], "pass": ks_diag.passed},
    }
    checks = [ks_off.passed, ks_diag.passed]
    statistic = 0.0
    if moments is not None:
        details["moments"] = moments.details
        details["correlation_pass"] = moments.details["correlation_pass"]
        checks.append(moments.passed)
        statistic = moments.statistic
    if mean_zs:
        # Pooled support-pair deviation from the planted mean, in MC sigmas.
        arr = np.array(mean_zs)
        z = float(arr.mean() / (arr.std(ddof=1) / math.sqrt(arr.size)))
        details["support_mean_z"] = z
        checks.append(abs(z) <= 3.0)
        statistic = max(statistic, abs(z) / 3.0)

    return TestReport(
        name=name,
        statistic=float(statistic),
        threshold=1.0,
        passed=bool(all(checks)),
        trials=trials,
        seed=stream.master_seed,
        details=details,
    )
