"""Reduction pipelines between the spiked covariance and spiked Wigner models.

Two main routes:

* ``clone_cov`` (needs n >> d^2): clone once, take the cross inner-product
  matrix ``Y_ij = <Z_i^(1), Z_j^(2)> / sqrt(n)``, and symmetrize as
  ``(Y + Y^T)/sqrt(2)``.  Conditional on the planted (g, u) with
  ||g||^2 = n, the symmetrized output has mean (theta sqrt(n)/sqrt(2))
  u_i u_j -- the constant the harness tests.

* ``spcov_to_spwig`` (needs n >= d): clone into 2K+1 copies, Gram-Schmidt
  the first copy into an orthonormal basis, form coefficient matrices
  Y^(l) = (Z^(l))^T Ztilde^(0), erase off-support means by flipping
  (sign of Y_ij^(l) * Y_ji^(l+K)), denoise each entry's K flipped values at
  level psi, and lift the +-1 entries to Gaussians with the rejection
  kernel at bias p = (psi^M / M) / 2.

The sample-size and sparsity manipulations (subsample, noise-pad,
reflection cloning, sample doubling) live here as well.

Reductions accept and return bare matrices; planted ground truth is never
consulted.  Every function takes an explicit SeedStream and consumes child
streams in a fixed, documented order, so outputs are bitwise reproducible.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .core import DerivedConstants, ParameterError
from .primitives import (
    SQRT2,
    denoise_batch,
    denoise_order,
    gauss_clone,
    gauss_clone_rep,
    gaussianize_batch,
    gram_schmidt,
)
from .sampling import SeedStream


@dataclass
class ReductionTrace:
    """Optional retained intermediates plus constants and stage timings."""

    stage_outputs: Optional[Dict[str, object]] = None
    constants: Optional[DerivedConstants] = None
    timings: Dict[str, float] = field(default_factory=dict)


def clone_cov(z: np.ndarray, stream: SeedStream) -> np.ndarray:
    """Cross inner-product reduction; child streams: 0 = cloning noise."""
    n = z.shape[0]
    z1, z2 = gauss_clone(z, stream.child(0))
    y = z1.T @ z2 / np.sqrt(n)
    return (y + y.T) / SQRT2


def _sign_no_zero(x: np.ndarray) -> np.ndarray:
    # Exact zeros (a measure-zero event) resolve to +1.
    return np.where(x >= 0.0, 1.0, -1.0)


def flip_combine(ya: np.ndarray, yb: np.ndarray) -> np.ndarray:
    """Symmetric +-1 matrix with entry (i, j), i <= j, sign(ya_ij * yb_ji)."""
    if ya.shape != yb.shape or ya.ndim != 2 or ya.shape[0] != ya.shape[1]:
        raise ParameterError(f"need equal square shapes, got {ya.shape} and {yb.shape}")
    s = _sign_no_zero(ya * yb.T)
    upper = np.triu(s)
    return upper + np.triu(s, 1).T


def spcov_to_spwig(
    z: np.ndarray,
    two_k: int,
    psi: float,
    stream: SeedStream,
    *,
    keep_trace: bool = False,
) -> Tuple[np.ndarray, ReductionTrace]:
    """Full covariance-to-Wigner pipeline; returns (d x d symmetric, trace).

    Child streams: 0 = first clone, 1 = repeated cloning, 2 = denoising,
    3 = gaussianization.  The diagonal of the output is scaled by sqrt(2)
    so its variance matches the GOE diagonal; distributional comparisons
    exclude the diagonal.
    """
    n, d = z.shape
    if n < d:
        raise ParameterError(f"need n >= d, got shape {z.shape}")
    if two_k < 2 or two_k % 2:
        raise ParameterError(f"need an even copy count >= 2, got {two_k}")
    k_copies = two_k // 2
    m = denoise_order(k_copies)
    if not 0.0 < psi <= 1.0 / m:
        raise ParameterError(f"need 0 < psi <= 1/M = {1.0 / m:.6g}, got {psi}")

    trace = ReductionTrace(stage_outputs={} if keep_trace else None)
    tic = time.perf_counter()

    z0, z1 = gauss_clone(z, stream.child(0))
    trace.timings["clone"] = time.perf_counter() - tic
    tic = time.perf_counter()

    clones = gauss_clone_rep(z1, two_k, stream.child(1))
    trace.timings["clone_rep"] = time.perf_counter() - tic
    tic = time.perf_counter()

    basis = gram_schmidt(z0)
    trace.timings["gram_schmidt"] = time.perf_counter() - tic
    tic = time.perf_counter()

    coeffs = np.stack([c.T @ basis.q for c in clones.copies])  # (2K, d, d)
    trace.timings["coefficients"] = time.perf_counter() - tic
    tic = time.perf_counter()

    prod = coeffs[:k_copies] * np.transpose(coeffs[k_copies:], (0, 2, 1))
    flipped_upper = _sign_no_zero(prod)  # entry (l, i, j) valid for i <= j
    trace.timings["flip"] = time.perf_counter() - tic
    tic = time.perf_counter()

    iu, ju = np.triu_indices(d)
    bits = flipped_upper[:, iu, ju].T  # (d(d+1)/2, K)
    rad_flat = denoise_batch(bits, psi, stream.child(2))
    trace.timings["denoise"] = time.perf_counter() - tic
    tic = time.perf_counter()

    p = (psi**m / m) / 2.0
    gauss_flat = gaussianize_batch(rad_flat, p, n, stream.child(3))
    out = np.zeros((d, d))
    out[iu, ju] = gauss_flat
    out = out + np.triu(out, 1).T
    out[np.diag_indices(d)] *= SQRT2
    trace.timings["gaussianize"] = time.perf_counter() - tic

    if keep_trace:
        flipped = np.zeros((k_copies, d, d))
        for l in range(k_copies):
            up = np.triu(flipped_upper[l])
            flipped[l] = up + np.triu(up, 1).T
        rad = np.zeros((d, d))
        rad[iu, ju] = rad_flat
        rad = rad + np.triu(rad, 1).T
        trace.stage_outputs.update(
            clones=clones,
            basis=basis,
            coefficients=coeffs,
            flipped=flipped,
            denoised=rad,
        )
    return out, trace


def subsample_reduce(z: np.ndarray, stream: SeedStream) -> np.ndarray:
    """Keep each column with probability 1/2, else replace it with fresh N(0, I).

    Halves the planted support size in expectation while preserving (d, n);
    an iid null input stays iid.
    """
    n, d = z.shape
    rng = stream.generator()
    keep = rng.random(d) < 0.5
    out = z.copy()
    dropped = int((~keep).sum())
    if dropped:
        out[:, ~keep] = rng.standard_normal((n, dropped))
    return out


def pad_reduce(z: np.ndarray, stream: SeedStream) -> np.ndarray:
    """Append d fresh N(0, I) columns and uniformly permute all 2d columns."""
    n, d = z.shape
    rng = stream.generator()
    fresh = rng.standard_normal((n, d))
    wide = np.hstack([z, fresh])
    return wide[:, rng.permutation(2 * d)]


def reflection_clone(z: np.ndarray) -> np.ndarray:
    """Recombine column halves A, B as [(A+B)/sqrt2, (A-B)/sqrt2].

    Doubles the effective support of a planted signal at 1/sqrt(2) entry
    scale; applying it twice returns the input.
    """
    d = z.shape[1]
    if d % 2:
        raise ParameterError(f"need an even number of columns, got {d}")
    a, b = z[:, : d // 2], z[:, d // 2 :]
    return np.hstack([(a + b) / SQRT2, (a - b) / SQRT2])


def sample_orthogonal(n: int, stream: SeedStream) -> np.ndarray:
    """Haar-distributed n x n orthogonal matrix (QR with sign-fixed diagonal)."""
    a = stream.generator().standard_normal((n, n))
    q, r = np.linalg.qr(a)
    return q * _sign_no_zero(np.diagonal(r))


def sample_double(z: np.ndarray, stream: SeedStream) -> np.ndarray:
    """Clone, randomly rotate the second copy, and stack to 2n rows.

    Maps SC(d, k, theta, n) to SC(d, k, theta/2, 2n): both clones carry the
    spike at theta/2, and the rotation gives the bottom half a fresh,
    independent spike row-profile.  Child streams: 0 = cloning noise,
    1 = rotation.
    """
    z1, z2 = gauss_clone(z, stream.child(0))
    u = sample_orthogonal(z.shape[0], stream.child(1))
    return np.vstack([z1, u @ z2])
