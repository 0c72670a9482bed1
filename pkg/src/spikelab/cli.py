"""Command-line front end.

Subcommands: ``sample``, ``reduce``, ``detect``, ``verify``, ``experiment``.
Everything is driven by a JSON config file (``--config``); ``--seed``,
``--out``, and ``--workers`` override the corresponding config fields.  A
run directory receives a copy of the resolved config, JSONL test reports,
and CSV summaries.  Unknown config keys are hard errors (with the offending
field path) so experiment provenance stays trustworthy.

Exit code 0 iff every configured battery passed.

The full config schema is documented in the project README; the canonical
source of truth is ``SCHEMA`` below.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from multiprocessing import Pool
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import matio
from .core import ParameterError, ScParams, WigParams, derive_constants, thresholds
from .detect import (
    covariance_detect_sc,
    power_iteration,
    recover_topk,
    rescaled_covariance,
    spectral_detect_wig,
    threshold_detect_wig,
)
from .reductions import (
    clone_cov,
    pad_reduce,
    reflection_clone,
    sample_double,
    spcov_to_spwig,
    subsample_reduce,
)
from .sampling import SeedStream, sample_sc, sample_wig
from .verify import (
    GsBoundParams,
    TestReport,
    clone_cov_null_battery,
    gs_perturb_harness,
    wishart_clt_comparison,
    write_reports_jsonl,
    write_summary_csv,
)

# Schema: key -> "leaf" (any JSON scalar/array) or a nested schema dict.
SCHEMA: Dict[str, object] = {
    "mode": "leaf",
    "seed": "leaf",
    "out": "leaf",
    "workers": "leaf",
    "sample": {
        "model": "leaf", "d": "leaf", "k": "leaf", "theta": "leaf", "lambda": "leaf",
        "n": "leaf", "count": "leaf", "fixed_spike_norm": "leaf", "format": "leaf",
    },
    "reduce": {
        "kind": "leaf", "input": "leaf", "two_k": "leaf", "psi": "leaf",
        "alpha": "leaf", "epsilon": "leaf", "theta": "leaf", "n": "leaf", "k": "leaf",
        "dump_intermediates": "leaf",
    },
    "detect": {"detector": "leaf", "input": "leaf", "k": "leaf", "c": "leaf"},
    "verify": {
        "level": "leaf", "c1": "leaf", "c2": "leaf",
        "batteries": "leaf",  # list of battery dicts, validated separately
    },
    "experiment": {
        "kind": "leaf",
        "transfer": {
            "d": "leaf", "k": "leaf", "n": "leaf", "theta": "leaf",
            "trials": "leaf", "calibration_trials": "leaf", "alpha_level": "leaf",
            "sc_detector": "leaf", "wig_detector": "leaf",
            "recovery": {
                "enabled": "leaf", "d": "leaf", "k": "leaf", "n": "leaf",
                "theta": "leaf", "trials": "leaf", "loss_margin": "leaf",
            },
        },
        "phase_sweep": {
            "d": "leaf", "gamma": "leaf", "alpha_grid": "leaf", "beta_grid": "leaf",
            "trials": "leaf", "calibration_trials": "leaf", "alpha_level": "leaf",
        },
    },
}

_BATTERY_KEYS = {
    "clone_cov_null": {"name", "d", "n", "trials", "corr_pairs", "cycles_per_trial"},
    "wishart_clt": {"name", "d", "n", "trials", "k", "theta"},
    "gs_perturbation": {"name", "d", "k", "n", "theta", "trials", "epsilon_decl"},
}


class ConfigError(ValueError):
    pass


def _validate(doc: dict, schema: Dict[str, object], path: str = "") -> None:
    for key, value in doc.items():
        where = f"{path}.{key}" if path else key
        if key not in schema:
            raise ConfigError(f"unknown config key: {where}")
        sub = schema[key]
        if isinstance(sub, dict):
            if not isinstance(value, dict):
                raise ConfigError(f"{where} must be an object")
            _validate(value, sub, where)


def _validate_batteries(batteries, path="verify.batteries") -> None:
    if not isinstance(batteries, list):
        raise ConfigError(f"{path} must be a list")
    for i, b in enumerate(batteries):
        if not isinstance(b, dict) or "name" not in b:
            raise ConfigError(f"{path}[{i}] must be an object with a 'name'")
        name = b["name"]
        if name not in _BATTERY_KEYS:
            raise ConfigError(f"{path}[{i}].name: unknown battery {name!r}")
        extra = set(b) - _BATTERY_KEYS[name]
        if extra:
            raise ConfigError(f"{path}[{i}]: unknown keys {sorted(extra)} for battery {name!r}")


@dataclass
class ExperimentConfig:
    """Validated run configuration; ``raw`` is the resolved JSON document."""

    mode: str
    seed: int
    out: Path
    workers: int
    raw: dict

    def section(self, name: str) -> dict:
        sec = self.raw.get(name)
        if sec is None:
            raise ConfigError(f"mode {self.mode!r} needs a {name!r} config section")
        return sec


def parse_config(text: str) -> dict:
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise ConfigError("config root must be an object")
    _validate(doc, SCHEMA)
    if "verify" in doc and "batteries" in doc["verify"]:
        _validate_batteries(doc["verify"]["batteries"])
    return doc


def serialize_config(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def load_config(path, seed=None, out=None, workers=None) -> ExperimentConfig:
    doc = parse_config(Path(path).read_text())
    if seed is not None:
        doc["seed"] = int(seed)
    if out is not None:
        doc["out"] = str(out)
    if workers is not None:
        doc["workers"] = int(workers)
    mode = doc.get("mode")
    if mode not in ("sample", "reduce", "detect", "verify", "experiment"):
        raise ConfigError(f"mode must be one of sample|reduce|detect|verify|experiment, got {mode!r}")
    return ExperimentConfig(
        mode=mode,
        seed=int(doc.get("seed", 0)),
        out=Path(doc.get("out", "runs/out")),
        workers=int(doc.get("workers", 1)),
        raw=doc,
    )


def _prepare_out(config: ExperimentConfig) -> Path:
    config.out.mkdir(parents=True, exist_ok=True)
    (config.out / "config.json").write_text(serialize_config(config.raw))
    return config.out


# ---------------------------------------------------------------------------
# sample / reduce / detect modes


def _run_sample(config: ExperimentConfig) -> int:
    sec = config.section("sample")
    out = _prepare_out(config)
    model = sec.get("model", "sc")
    count = int(sec.get("count", 1))
    fmt = sec.get("format", "bin")
    stream = SeedStream(config.seed)
    for i in range(count):
        if model == "sc":
            params = ScParams(d=int(sec["d"]), k=int(sec["k"]), theta=float(sec.get("theta", 0.0)), n=int(sec["n"]))
            sample = sample_sc(params, stream.child(i), fixed_spike_norm=bool(sec.get("fixed_spike_norm", False)))
        elif model == "wig":
            params = WigParams(d=int(sec["d"]), k=int(sec["k"]), lam=float(sec.get("lambda", 0.0)))
            sample = sample_wig(params, stream.child(i))
        else:
            raise ConfigError(f"sample.model must be 'sc' or 'wig', got {model!r}")
        base = out / f"{model}_{i:04d}"
        if fmt == "csv":
            matio.write_matrix_csv(base.with_suffix(".csv"), sample.data)
            matio.maybe_write_truth(base.with_suffix(".csv"), sample.truth)
        else:
            matio.write_matrix(base.with_suffix(".mat"), sample.data)
            matio.maybe_write_truth(base.with_suffix(".mat"), sample.truth)
    print(f"wrote {count} {model} sample(s) to {out}")
    return 0


def _run_reduce(config: ExperimentConfig) -> int:
    sec = config.section("reduce")
    out = _prepare_out(config)
    z = matio.read_matrix(sec["input"])
    stream = SeedStream(config.seed)
    kind = sec.get("kind", "clone_cov")
    trace = None
    if kind == "clone_cov":
        result = clone_cov(z, stream)
    elif kind == "spcov_to_spwig":
        if "two_k" in sec and "psi" in sec:
            two_k, psi = int(sec["two_k"]), float(sec["psi"])
        else:
            consts = derive_constants(
                float(sec["alpha"]), float(sec["epsilon"]), float(sec["theta"]),
                int(sec.get("n", z.shape[0])), int(sec["k"]),
            )
            two_k, psi = 2 * consts.K, consts.psi
        result, trace = spcov_to_spwig(
            z, two_k, psi, stream, keep_trace=bool(sec.get("dump_intermediates", False))
        )
    elif kind == "subsample":
        result = subsample_reduce(z, stream)
    elif kind == "pad":
        result = pad_reduce(z, stream)
    elif kind == "reflection":
        result = reflection_clone(z)
    elif kind == "sample_double":
        result = sample_double(z, stream)
    else:
        raise ConfigError(f"unknown reduce.kind {kind!r}")
    matio.write_matrix(out / "reduced.mat", result)
    if trace is not None and trace.stage_outputs:
        for label, value in trace.stage_outputs.items():
            if isinstance(value, np.ndarray) and value.ndim == 2:
                matio.write_matrix(out / f"stage_{label}.mat", value)
    print(f"wrote {out / 'reduced.mat'} shape={result.shape}")
    return 0


def _run_detect(config: ExperimentConfig) -> int:
    sec = config.section("detect")
    _prepare_out(config)
    y = matio.read_matrix(sec["input"])
    detector = sec.get("detector", "spectral_wig")
    c = float(sec.get("c", 0.5))
    if detector == "threshold_wig":
        outcome = threshold_detect_wig(y, int(sec["k"]), c)
    elif detector == "spectral_wig":
        outcome = spectral_detect_wig(y, c)
    elif detector == "covariance_sc":
        outcome = covariance_detect_sc(y, int(sec["k"]), c)
    else:
        raise ConfigError(f"unknown detect.detector {detector!r}")
    print(json.dumps({
        "decision": outcome.decision,
        "statistic": outcome.statistic,
        "threshold": outcome.threshold,
    }, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# verify mode


def _run_verify(config: ExperimentConfig) -> int:
    sec = config.section("verify")
    out = _prepare_out(config)
    level = float(sec.get("level", 0.01))
    bound = GsBoundParams(c1=float(sec.get("c1", 64.0)), c2=float(sec.get("c2", 2.0)))
    reports: List[TestReport] = []
    for i, b in enumerate(sec.get("batteries", [])):
        stream = SeedStream(config.seed, (i,))
        if b["name"] == "clone_cov_null":
            reports.append(clone_cov_null_battery(
                int(b["d"]), int(b["n"]), int(b["trials"]), stream, level=level,
                corr_pairs=int(b.get("corr_pairs", 100)),
                cycles_per_trial=int(b.get("cycles_per_trial", 60000)),
            ))
        elif b["name"] == "wishart_clt":
            reports.append(wishart_clt_comparison(
                int(b["d"]), int(b["n"]), int(b["trials"]), stream,
                k=b.get("k"), theta=float(b.get("theta", 0.0)), level=level,
            ))
        elif b["name"] == "gs_perturbation":
            params = ScParams(d=int(b["d"]), k=int(b["k"]), theta=float(b["theta"]), n=int(b["n"]))
            report, _ = gs_perturb_harness(
                params, bound, int(b["trials"]), stream,
                epsilon_decl=float(b.get("epsilon_decl", 0.1)),
            )
            reports.append(report)
    write_reports_jsonl(reports, out / "reports.jsonl")
    write_summary_csv(reports, out / "summary.csv")
    for r in reports:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}  statistic={r.statistic:.6g}")
    return 0 if all(r.passed for r in reports) else 1


# ---------------------------------------------------------------------------
# experiment mode: hardness-transfer runs and phase sweeps


def _spectral_sc_statistic(z: np.ndarray) -> float:
    m = rescaled_covariance(z)
    eig, _ = power_iteration(m)
    return eig / math.sqrt(m.shape[0])


def _max_offdiag_statistic(y: np.ndarray) -> float:
    off = np.abs(y - np.diag(np.diagonal(y)))
    return float(off.max())


@dataclass(frozen=True)
class _TransferSpec:
    d: int
    k: int
    n: int
    theta: float
    sc_detector: str
    wig_detector: str
    seed: int


def _transfer_statistics(spec: _TransferSpec, trial: int, planted: bool) -> Tuple[float, float]:
    """(direct statistic, reduced-route statistic) for one trial."""
    stream = SeedStream(spec.seed, (2 if planted else 1, trial))
    theta = spec.theta if planted else 0.0
    sample = sample_sc(ScParams(d=spec.d, k=spec.k, theta=theta, n=spec.n), stream.child(0))
    z = sample.data
    if spec.sc_detector == "threshold":
        stat_a = _max_offdiag_statistic(rescaled_covariance(z))
    else:
        stat_a = _spectral_sc_statistic(z)
    y = clone_cov(z, stream.child(1))
    if spec.wig_detector == "threshold":
        stat_b = _max_offdiag_statistic(y)
    else:
        eig, _ = power_iteration(y)
        stat_b = eig / math.sqrt(spec.d)
    return stat_a, stat_b


def _transfer_worker(args) -> Tuple[float, float]:
    spec, trial, planted = args
    return _transfer_statistics(spec, trial, planted)


def _map_trials(fn, jobs, workers: int):
    if workers > 1:
        with Pool(workers) as pool:
            return pool.map(fn, jobs)
    return [fn(j) for j in jobs]


def _recovery_trial(args) -> Tuple[float, float]:
    """(direct loss, reduced-chain loss) for one planted trial."""
    d, k, n, theta, seed, trial = args
    stream = SeedStream(seed, (3, trial))
    sample = sample_sc(ScParams(d=d, k=k, theta=theta, n=n), stream.child(0))
    z = sample.data
    u = sample.truth.u

    direct = recover_topk(rescaled_covariance(z), k)
    loss_direct = 1.0 - float(u.vector() @ direct.u_hat) ** 2

    # Half-sample chain: reduce the first half, recover the support there,
    # then spectral recovery on the support-restricted second half.
    half = z.shape[0] // 2
    z1, z2 = z[:half], z[half:]
    y = clone_cov(z1, stream.child(1))
    support_est = recover_topk(y, k)
    sel = np.flatnonzero(support_est.u_hat)
    sub = rescaled_covariance(z2[:, sel])
    _, v = power_iteration(sub)
    u_hat = np.zeros(d)
    u_hat[sel] = v
    u_hat /= np.linalg.norm(u_hat)
    loss_chain = 1.0 - float(u.vector() @ u_hat) ** 2
    return loss_direct, loss_chain


def run_transfer_experiment(config: ExperimentConfig) -> List[TestReport]:
    """Direct-vs-reduced detection (and optionally recovery) comparison.

    Detection: thresholds for both routes are calibrated as the
    (1 - alpha_level) null quantile over dedicated calibration trials, then
    evaluated on fresh trials that are planted or null with probability 1/2
    each.  Emits Type I / Type II / total error per route.
    """
    sec = config.section("experiment")
    tsec = sec.get("transfer")
    if tsec is None:
        raise ConfigError("experiment.kind 'transfer' needs an experiment.transfer section")
    out = _prepare_out(config)
    d, k, n = int(tsec["d"]), int(tsec["k"]), int(tsec["n"])
    theta = float(tsec["theta"])
    trials = int(tsec.get("trials", 200))
    cal_trials = int(tsec.get("calibration_trials", 200))
    alpha_level = float(tsec.get("alpha_level", 0.02))
    spec = _TransferSpec(
        d=d, k=k, n=n, theta=theta,
        sc_detector=tsec.get("sc_detector", "spectral"),
        wig_detector=tsec.get("wig_detector", "spectral"),
        seed=config.seed,
    )

    cal = _map_trials(_transfer_worker, [(spec, t, False) for t in range(cal_trials)], config.workers)
    cal_a = np.array([s[0] for s in cal])
    cal_b = np.array([s[1] for s in cal])
    thr_a = float(np.quantile(cal_a, 1.0 - alpha_level))
    thr_b = float(np.quantile(cal_b, 1.0 - alpha_level))

    labels = SeedStream(config.seed, (0,)).generator().random(trials) < 0.5
    evals = _map_trials(
        _transfer_worker, [(spec, t, bool(labels[t])) for t in range(trials)], config.workers
    )
    stats_a = np.array([s[0] for s in evals])
    stats_b = np.array([s[1] for s in evals])

    reports: List[TestReport] = []
    rows = []
    for route, stats, thr in (("direct", stats_a, thr_a), ("clone_cov", stats_b, thr_b)):
        decide = stats > thr
        fp = float(np.mean(decide[~labels])) if (~labels).any() else 0.0
        fn = float(np.mean(~decide[labels])) if labels.any() else 0.0
        total = fp + fn
        rows.append([route, repr(thr), repr(fp), repr(fn), repr(total)])
        reports.append(TestReport(
            name=f"transfer_detection/{route}",
            statistic=total,
            threshold=0.1,
            passed=bool(total <= 0.1),
            trials=trials,
            seed=config.seed,
            details={"type_i": fp, "type_ii": fn, "threshold_value": thr,
                     "theta": theta, "d": d, "k": k, "n": n},
        ))

    rsec = tsec.get("recovery", {})
    if rsec.get("enabled", False):
        rd = int(rsec.get("d", d))
        rk = int(rsec.get("k", k))
        rn = int(rsec.get("n", n))
        rtheta = float(rsec["theta"])
        rtrials = int(rsec.get("trials", 200))
        margin = float(rsec.get("loss_margin", 0.1))
        losses = _map_trials(
            _recovery_trial, [(rd, rk, rn, rtheta, config.seed, t) for t in range(rtrials)],
            config.workers,
        )
        loss_direct = float(np.mean([x[0] for x in losses]))
        loss_chain = float(np.mean([x[1] for x in losses]))
        rows.append(["recovery", "", repr(loss_direct), repr(loss_chain), repr(loss_chain - loss_direct)])
        reports.append(TestReport(
            name="transfer_recovery",
            statistic=loss_chain,
            threshold=loss_direct + margin,
            passed=bool(loss_chain <= loss_direct + margin),
            trials=rtrials,
            seed=config.seed,
            details={"loss_direct": loss_direct, "loss_chain": loss_chain,
                     "margin": margin, "theta": rtheta, "d": rd, "k": rk, "n": rn},
        ))

    with open(out / "transfer.csv", "w", newline="") as fh:
        import csv as _csv

        w = _csv.writer(fh)
        w.writerow(["route", "threshold", "type_i_or_direct_loss", "type_ii_or_chain_loss", "total_or_diff"])
        w.writerows(rows)
    write_reports_jsonl(reports, out / "reports.jsonl")
    write_summary_csv(reports, out / "summary.csv")
    return reports


def run_phase_sweep(config: ExperimentConfig) -> List[dict]:
    """Empirical detection power over an (alpha, beta) grid at fixed gamma.

    Desk-scale d cannot resolve the asymptotic boundaries sharply; the sweep
    is illustrative, with boundaries expected to blur by ~0.1 in beta.
    """
    sec = config.section("experiment")
    psec = sec.get("phase_sweep")
    if psec is None:
        raise ConfigError("experiment.kind 'phase_sweep' needs an experiment.phase_sweep section")
    out = _prepare_out(config)
    d = int(psec["d"])
    gamma = float(psec["gamma"])
    trials = int(psec.get("trials", 50))
    cal_trials = int(psec.get("calibration_trials", 100))
    alpha_level = float(psec.get("alpha_level", 0.05))
    n = int(math.ceil(d**gamma))

    rows: List[dict] = []
    for gi, alpha in enumerate(psec["alpha_grid"]):
        for bi, beta in enumerate(psec["beta_grid"]):
            k = max(1, min(d, int(math.ceil(d**float(alpha)))))
            theta = float(d**float(beta))
            base = SeedStream(config.seed, (gi, bi))
            cal_thr, cal_spec = [], []
            for t in range(cal_trials):
                z = sample_sc(ScParams(d=d, k=k, theta=0.0, n=n), base.child(0, t)).data
                cal_thr.append(_max_offdiag_statistic(rescaled_covariance(z)))
                cal_spec.append(_spectral_sc_statistic(z))
            q_thr = float(np.quantile(cal_thr, 1.0 - alpha_level))
            q_spec = float(np.quantile(cal_spec, 1.0 - alpha_level))
            hits_thr = hits_spec = 0
            for t in range(trials):
                z = sample_sc(ScParams(d=d, k=k, theta=theta, n=n), base.child(1, t)).data
                hits_thr += _max_offdiag_statistic(rescaled_covariance(z)) > q_thr
                hits_spec += _spectral_sc_statistic(z) > q_spec
            rows.append({
                "alpha": float(alpha), "beta": float(beta), "gamma": gamma, "d": d,
                "power_threshold": hits_thr / trials, "power_spectral": hits_spec / trials,
            })

    with open(out / "phase_sweep.csv", "w", newline="") as fh:
        import csv as _csv

        w = _csv.writer(fh)
        w.writerow(["alpha", "beta", "gamma", "d", "power_threshold", "power_spectral"])
        for r in rows:
            w.writerow([r["alpha"], r["beta"], r["gamma"], r["d"],
                        r["power_threshold"], r["power_spectral"]])
    return rows


def _run_experiment(config: ExperimentConfig) -> int:
    sec = config.section("experiment")
    kind = sec.get("kind", "transfer")
    if kind == "transfer":
        reports = run_transfer_experiment(config)
        for r in reports:
            print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}  statistic={r.statistic:.6g}")
        return 0 if all(r.passed for r in reports) else 1
    if kind == "phase_sweep":
        rows = run_phase_sweep(config)
        print(f"wrote {len(rows)} grid rows to {config.out / 'phase_sweep.csv'}")
        return 0
    raise ConfigError(f"unknown experiment.kind {kind!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(prog="spikelab", description=__doc__)
    parser.add_argument("command", choices=["sample", "reduce", "detect", "verify", "experiment"])
    parser.add_argument("--config", required=True, help="path to the JSON config file")
    parser.add_argument("--seed", type=int, default=None, help="master seed (overrides config)")
    parser.add_argument("--workers", type=int, default=None, help="worker pool size")
    parser.add_argument("--out", default=None, help="output directory (overrides config)")
    args = parser.parse_args(argv)

    try:
        config = load_config(args.config, seed=args.seed, out=args.out, workers=args.workers)
        if config.mode != args.command:
            # The subcommand wins; the config's mode field is a default.
            config = ExperimentConfig(
                mode=args.command, seed=config.seed, out=config.out,
                workers=config.workers, raw=dict(config.raw, mode=args.command),
            )
        handler = {
            "sample": _run_sample,
            "reduce": _run_reduce,
            "detect": _run_detect,
            "verify": _run_verify,
            "experiment": _run_experiment,
        }[config.mode]
        return handler(config)
    except (ConfigError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
