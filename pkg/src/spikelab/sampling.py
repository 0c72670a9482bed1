"""Seed-stream-driven samplers for signals, noise, and both planted models.

All randomness flows through :class:`SeedStream`, a counter-based scheme:
a stream is identified by a 64-bit master seed plus a path of integers, and
two streams with different paths are statistically independent while the
same (seed, path) reproduces bit-identical draws.  Trial-level parallelism
therefore cannot change any draw.

Ground truth (the planted u, g, theta or u, lambda) rides along with each
sample for harness use, but reductions and detectors accept only the bare
data matrix, so nothing downstream can peek.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .core import ParameterError, ScParams, WigParams

NORM_TOL = 1e-12


@dataclass(frozen=True)
class SeedStream:
    """Counter-based randomness source: (master_seed, path) -> generator.

    ``child(i, j, ...)`` extends the path; ``generator()`` returns a fresh
    numpy Generator positioned at the start of this stream.  Derivation uses
    numpy's SeedSequence spawn keys, so no draw depends on call order across
    streams.
    """

    master_seed: int
    path: Tuple[int, ...] = ()

    def child(self, *indices: int) -> "SeedStream":
        return SeedStream(self.master_seed, self.path + tuple(int(i) for i in indices))

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.master_seed, spawn_key=self.path)
        return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class SparseSignal:
    """A k-sparse unit vector with entries +-k^{-1/2} on its support."""

    d: int
    support: np.ndarray  # sorted indices, length k
    signs: np.ndarray  # +-1 per support index

    @property
    def k(self) -> int:
        return len(self.support)

    def vector(self) -> np.ndarray:
        u = np.zeros(self.d)
        u[self.support] = self.signs / np.sqrt(self.k)
        return u


@dataclass(frozen=True)
class ScTruth:
    u: SparseSignal
    g: np.ndarray
    theta: float


@dataclass(frozen=True)
class WigTruth:
    u: SparseSignal
    lam: float


@dataclass(frozen=True)
class ScSample:
    """n x d data matrix Z, optionally with the planted (u, g, theta)."""

    data: np.ndarray
    truth: Optional[ScTruth] = None


@dataclass(frozen=True)
class WigSample:
    """Symmetric d x d data matrix Y, optionally with the planted (u, lambda)."""

    data: np.ndarray
    truth: Optional[WigTruth] = None


def sample_sparse_signal(d: int, k: int, stream: SeedStream) -> SparseSignal:
    """Uniform support over k-subsets of [d], independent uniform +-1 signs."""
    if not 1 <= k <= d:
        raise ParameterError(f"need 1 <= k <= d, got k={k}, d={d}")
    rng = stream.generator()
    support = np.sort(rng.choice(d, size=k, replace=False))
    signs = rng.choice(np.array([-1.0, 1.0]), size=k)
    return SparseSignal(d=d, support=support, signs=signs)


def sample_goe(d: int, stream: SeedStream) -> np.ndarray:
    """Draw from GOE(d): (A + A^T)/sqrt(2) with A iid standard normal.

    Off-diagonal entries are N(0, 1), diagonal entries N(0, 2).
    """
    if d < 1:
        raise ParameterError(f"need d >= 1, got {d}")
    a = stream.generator().standard_normal((d, d))
    return (a + a.T) / np.sqrt(2.0)


def sample_sc(params: ScParams, stream: SeedStream, *, fixed_spike_norm: bool = False) -> ScSample:
    """Draw Z = X + sqrt(theta) g u^T with X, g iid standard normal.

    With ``fixed_spike_norm`` the spike profile g is rescaled to
    ||g|| = sqrt(n) exactly, removing the chi-distributed randomness in the
    size of the spike.
    """
    rng = stream.generator()
    u = sample_sparse_signal(params.d, params.k, stream.child(0))
    g = rng.standard_normal(params.n)
    if fixed_spike_norm:
        g = g * (np.sqrt(params.n) / np.linalg.norm(g))
    x = rng.standard_normal((params.n, params.d))
    z = x + np.sqrt(params.theta) * np.outer(g, u.vector())
    return ScSample(data=z, truth=ScTruth(u=u, g=g, theta=params.theta))


def sample_wig(params: WigParams, stream: SeedStream) -> WigSample:
    """Draw Y = lam u u^T + W with W from GOE(d)."""
    u = sample_sparse_signal(params.d, params.k, stream.child(0))
    w = sample_goe(params.d, stream.child(1))
    uv = u.vector()
    y = params.lam * np.outer(uv, uv) + w
    return WigSample(data=y, truth=WigTruth(u=u, lam=params.lam))
