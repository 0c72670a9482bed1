"""Reusable reduction primitives.

Five pieces that the pipelines compose:

* Gaussian cloning -- split one Gaussian-noise matrix into two independent
  copies sharing the planted signal, ``(Z + G)/sqrt(2)`` and
  ``(Z - G)/sqrt(2)``, each at half the SNR (theta scale); repeated binary
  doubling yields K copies at SNR divided by ``2^ceil(log2 K)``.
* Classical Gram-Schmidt column orthogonalization, kept deliberately plain
  (no re-orthogonalization pass) because the perturbation harness measures
  exactly this procedure.
* Rademacher denoising: a polynomial of N noisy Rad(a + delta) inputs and
  fresh internal Rad draws whose output is Rad(a^M/M + (-1)^(M+1) delta^M/M)
  with M = floor((sqrt(1+8N)-1)/2), attenuating an unknown mean perturbation
  delta relative to the design level a.
* A rejection kernel lifting a single Rademacher bit to a Gaussian: the same
  code path sends Rad(0) within negligible total variation of N(0, 1) and
  Rad(2p) near N(mu, 1), mu = p / (2 sqrt(6 ln n + 2 ln(1/p))).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .core import ParameterError
from .sampling import SeedStream

SQRT2 = math.sqrt(2.0)

# Residual norms below RANK_TOL * sqrt(n) abort Gram-Schmidt.
RANK_TOL = 1e-10


class RankDeficiencyError(RuntimeError):
    """A Gram-Schmidt residual collapsed; input columns are dependent."""


@dataclass(frozen=True)
class CloneSet:
    """K cloned matrices; planted theta is divided by ``snr_scale``."""

    copies: List[np.ndarray]
    snr_scale: int


@dataclass(frozen=True)
class OrthoBasis:
    """Orthonormal columns q plus the pre-normalization residual norms."""

    q: np.ndarray
    norms: np.ndarray


def gauss_clone(z: np.ndarray, stream: SeedStream) -> Tuple[np.ndarray, np.ndarray]:
    """Split z into ((z+G)/sqrt2, (z-G)/sqrt2) with G fresh iid N(0, 1).

    If z has N(mu, I) columns the outputs are independent with mean
    mu/sqrt(2) columns; a planted sqrt(theta) g u^T spike comes out as
    sqrt(theta/2) g u^T in each copy.
    """
    g = stream.generator().standard_normal(z.shape)
    return (z + g) / SQRT2, (z - g) / SQRT2


def gauss_clone_rep(z: np.ndarray, k: int, stream: SeedStream) -> CloneSet:
    """ceil(log2 k) rounds of binary doubling; returns the first k copies.

    The planted spike vector is scaled by 2^(-rounds/2), i.e. theta is
    divided by ``snr_scale`` = 2^rounds.
    """
    if k < 1:
        raise ParameterError(f"need k >= 1, got {k}")
    rounds = (k - 1).bit_length()
    copies = [z]
    for t in range(rounds):
        nxt: List[np.ndarray] = []
        for i, c in enumerate(copies):
            a, b = gauss_clone(c, stream.child(t, i))
            nxt.append(a)
            nxt.append(b)
        copies = nxt
    return CloneSet(copies=copies[:k], snr_scale=2**rounds)


def gram_schmidt(m: np.ndarray) -> OrthoBasis:
    """Classical Gram-Schmidt on the columns of m, in column order.

    Column i is projected against the already-orthonormalized basis using
    coefficients taken from the *original* column, then normalized;
    ``norms[i]`` records the residual length before normalization.
    """
    n, d = m.shape
    if n < d:
        raise ParameterError(f"need n >= d, got shape {m.shape}")
    q = np.empty((n, d))
    norms = np.empty(d)
    guard = RANK_TOL * math.sqrt(n)
    for i in range(d):
        v = m[:, i].copy()
        if i:
            v -= q[:, :i] @ (q[:, :i].T @ m[:, i])
        norms[i] = np.linalg.norm(v)
        if norms[i] <= guard:
            raise RankDeficiencyError(
                f"column {i} residual norm {norms[i]:.3e} below guard {guard:.3e}"
            )
        q[:, i] = v / norms[i]
    return OrthoBasis(q=q, norms=norms)


def _rademacher(rng: np.random.Generator, mean: float, size) -> np.ndarray:
    """+-1 variates with the given expectation."""
    return np.where(rng.random(size) < (1.0 + mean) / 2.0, 1.0, -1.0)


def denoise_order(n_bits: int) -> int:
    """The denoising exponent M = floor((sqrt(1+8N)-1)/2); uses exact isqrt."""
    if n_bits < 1:
        raise ParameterError(f"need at least one bit, got {n_bits}")
    return (math.isqrt(1 + 8 * n_bits) - 1) // 2


def denoise_batch(bits: np.ndarray, a: float, stream: SeedStream) -> np.ndarray:
    """Vectorized denoiser: each row of ``bits`` (shape T x N) gives one +-1 output.

    Construction, per row: with M = denoise_order(N) and
    k_i = ((2M+1) i - i^2)/2 for i = 0..M-1,

        Y_i = prod(bits[k_i : k_i + M - i]) * prod of i fresh draws from
              Rad(-a * binom(M, i)^(1/i)),

    then one Y_i is selected uniformly and the result is (-1)^(M+1) Y_i.
    Rows with iid Rad(a + delta) entries, |delta| <= |a|, produce
    Rad(a^M/M + (-1)^(M+1) delta^M/M); rows of Rad(0) produce Rad(0).
    """
    bits = np.asarray(bits, dtype=np.float64)
    if bits.ndim != 2:
        raise ParameterError(f"expected a T x N array, got shape {bits.shape}")
    t_rows, n_bits = bits.shape
    m = denoise_order(n_bits)
    if abs(a) > 1.0 / m:
        raise ParameterError(f"|a|={abs(a):.6g} exceeds 1/M={1.0 / m:.6g}")
    rng = stream.generator()
    y = np.empty((m, t_rows))
    for i in range(m):
        k_i = ((2 * m + 1) * i - i * i) // 2
        val = bits[:, k_i : k_i + m - i].prod(axis=1)
        if i:
            w_mean = -a * math.comb(m, i) ** (1.0 / i)
            if abs(w_mean) > 1.0:
                raise ParameterError(f"internal Rademacher mean {w_mean:.6g} out of [-1, 1]")
            val = val * _rademacher(rng, w_mean, (t_rows, i)).prod(axis=1)
        y[i] = val
    pick = rng.integers(0, m, size=t_rows)
    out = y[pick, np.arange(t_rows)]
    return ((-1.0) ** (m + 1)) * out


def denoise(bits, a: float, stream: SeedStream) -> int:
    """Single-instance denoiser; see denoise_batch for the construction."""
    out = denoise_batch(np.asarray(bits, dtype=np.float64)[None, :], a, stream)
    return int(out[0])


def gaussianize_mu(p: float, n: int) -> float:
    """Planted-case output mean of the rejection kernel."""
    return p / (2.0 * math.sqrt(6.0 * math.log(n) + 2.0 * math.log(1.0 / p)))


def _gaussianize_params(p: float, n: int):
    if not 0.0 < p < 0.5:
        raise ParameterError(f"need 0 < p < 1/2, got {p}")
    if n < 2:
        raise ParameterError(f"need n >= 2, got {n}")
    mu = gaussianize_mu(p, n)
    # Acceptance window on which the tilt h stays in [-1, 1] exactly.
    lo = math.log1p(-2.0 * p) / mu + mu / 2.0
    hi = math.log1p(2.0 * p) / mu + mu / 2.0
    rounds = math.ceil(6.0 * math.log(n))
    return mu, lo, hi, rounds


def gaussianize_batch(x: np.ndarray, p: float, n: int, stream: SeedStream) -> np.ndarray:
    """Vectorized rejection kernel for an array of +-1 inputs.

    Candidates z ~ N(0, 1) are accepted with probability
    (1 + x h(z))/2 on the window where h(z) = (exp(mu z - mu^2/2) - 1)/(2p)
    lies in [-1, 1].  Mixing over x ~ Rad(0) reproduces (truncated) N(0, 1)
    exactly; mixing over x ~ Rad(2p) reproduces truncated N(mu, 1).  The
    input value only tilts the acceptance probability -- a single kernel
    serves both hypotheses.
    """
    x = np.asarray(x, dtype=np.float64)
    mu, lo, hi, rounds = _gaussianize_params(p, n)
    rng = stream.generator()
    out = np.zeros(x.shape)
    pending = np.ones(x.shape, dtype=bool)
    for _ in range(rounds):
        z = rng.standard_normal(x.shape)
        u = rng.random(x.shape)
        h = np.expm1(mu * z - mu * mu / 2.0) / (2.0 * p)
        ok = pending & (z >= lo) & (z <= hi) & (u <= (1.0 + x * h) / 2.0)
        out[ok] = z[ok]
        pending &= ~ok
        if not pending.any():
            break
    # Unconverted slots (probability ~2^-rounds) fall back to 0.
    return out


def gaussianize_rad(x: int, p: float, n: int, stream: SeedStream) -> float:
    """Scalar rejection kernel; see gaussianize_batch."""
    if x not in (-1, 1):
        raise ParameterError(f"input must be +-1, got {x}")
    return float(gaussianize_batch(np.array([float(x)]), p, n, stream)[0])
