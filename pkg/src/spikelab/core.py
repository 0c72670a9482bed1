"""Parameter algebra for the two sparse spiked models.

The spiked covariance model SC(d, k, theta, n) observes n rows of
``Z = X + sqrt(theta) g u^T`` and the spiked Wigner model SpWig(d, k, lambda)
observes ``Y = lambda u u^T + W`` with W drawn from the Gaussian orthogonal
ensemble.  Their signal-to-noise scales are linked by ``lambda <-> theta *
sqrt(n)``, which in the exponent parametrization (k = d^alpha,
theta = d^beta, n = d^gamma, lambda = d^beta') reads

    (alpha, beta, gamma)  <->  (alpha, beta + gamma/2).

This module holds that map, the detection thresholds

    theta_comp = min(k/sqrt(n), sqrt(d/n))     theta_stat = sqrt(k/n)
    lambda_comp = min(k, sqrt(d))              lambda_stat = sqrt(k)

the easy/hard/impossible classification they induce, and the tuning
constants (A, K, C, psi, M) consumed by the covariance-to-Wigner pipeline.

Everything here is pure arithmetic; no randomness, safe to call from any
thread.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional


class ParameterError(ValueError):
    """A parameter combination violates its domain."""


class PsiRangeError(ParameterError):
    """The denoising level psi exceeds 1/M; the caller must lower theta."""


class Region(enum.Enum):
    EASY = "easy"
    HARD = "hard"
    IMPOSSIBLE = "impossible"


@dataclass(frozen=True)
class ExponentPoint:
    """A point in the exponent parametrization.

    ``gamma`` is present for covariance-model points (the sample-count
    exponent) and absent (None) for Wigner points.
    """

    alpha: float
    beta: float
    gamma: Optional[float] = None

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ParameterError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.gamma is not None and self.gamma < 1.0:
            raise ParameterError(f"gamma must be >= 1 when present, got {self.gamma}")

    @property
    def is_covariance(self) -> bool:
        return self.gamma is not None


@dataclass(frozen=True)
class ScParams:
    """Concrete spiked covariance parameters; theta = 0 encodes the null."""

    d: int
    k: int
    theta: float
    n: int

    def __post_init__(self):
        if not 1 <= self.k <= self.d:
            raise ParameterError(f"need 1 <= k <= d, got k={self.k}, d={self.d}")
        if self.n < self.d:
            raise ParameterError(f"need n >= d, got n={self.n}, d={self.d}")
        if self.theta < 0:
            raise ParameterError(f"theta must be >= 0, got {self.theta}")


@dataclass(frozen=True)
class WigParams:
    """Concrete spiked Wigner parameters; lam = 0 encodes the null."""

    d: int
    k: int
    lam: float

    def __post_init__(self):
        if not 1 <= self.k <= self.d:
            raise ParameterError(f"need 1 <= k <= d, got k={self.k}, d={self.d}")
        if self.lam < 0:
            raise ParameterError(f"lam must be >= 0, got {self.lam}")


@dataclass(frozen=True)
class Thresholds:
    theta_comp: float
    theta_stat: float
    lambda_comp: float
    lambda_stat: float


@dataclass(frozen=True)
class DerivedConstants:
    """Tuning constants of the covariance-to-Wigner pipeline.

    A sets the denoising power demanded by the exponent pair, K is the
    number of flipped copies fed to the denoiser, C the total SNR division
    incurred by cloning into 2K + 1 copies, psi the design mean of the
    flipped entries, and M the effective denoising exponent.
    """

    A: float
    K: int
    C: int
    psi: float
    M: int


def canonical_map(point: ExponentPoint) -> ExponentPoint:
    """Map a covariance exponent point to its Wigner partner.

    (alpha, beta, gamma) -> (alpha, beta + gamma/2); injective for fixed
    gamma.
    """
    if point.gamma is None:
        raise ParameterError("canonical_map needs a covariance point (gamma present)")
    return ExponentPoint(alpha=point.alpha, beta=point.beta + point.gamma / 2.0)


def thresholds(d: int, k: int, n: int) -> Thresholds:
    """Computational and statistical SNR thresholds at concrete (d, k, n)."""
    if not 1 <= k <= d <= n:
        raise ParameterError(f"need 1 <= k <= d <= n, got k={k}, d={d}, n={n}")
    sqrt_n = math.sqrt(n)
    return Thresholds(
        theta_comp=min(k / sqrt_n, math.sqrt(d / n)),
        theta_stat=math.sqrt(k / n),
        lambda_comp=min(float(k), math.sqrt(d)),
        lambda_stat=math.sqrt(k),
    )


def classify_region(point: ExponentPoint) -> Region:
    """Classify an exponent point as EASY, HARD, or IMPOSSIBLE.

    Compares beta against

        beta_comp = min(alpha - gamma/2, 1/2 - gamma/2)   (covariance)
                    min(alpha, 1/2)                        (Wigner)
        beta_stat = alpha/2 - gamma/2                      (covariance)
                    alpha/2                                (Wigner)

    Points exactly on a boundary go to the closed non-hard side: EASY when
    beta == beta_comp, IMPOSSIBLE when beta == beta_stat.
    """
    if point.gamma is not None:
        beta_comp = min(point.alpha, 0.5) - point.gamma / 2.0
        beta_stat = point.alpha / 2.0 - point.gamma / 2.0
    else:
        beta_comp = min(point.alpha, 0.5)
        beta_stat = point.alpha / 2.0
    if point.beta >= beta_comp:
        return Region.EASY
    if point.beta <= beta_stat:
        return Region.IMPOSSIBLE
    return Region.HARD


def derive_constants(alpha: float, epsilon: float, theta: float, n: int, k: int) -> DerivedConstants:
    """Derive the pipeline constants for an exponent pair and SNR level.

        A = max(2 alpha / epsilon, 4 alpha / (1 + epsilon))
        K = ceil(A^2 + 3A + 4)
        C = 2^(ceil(log2(2K)) + 1)
        psi = theta^2 n / (2 C k^2)
        M = floor((sqrt(1 + 8K) - 1) / 2)

    The result does not depend on d.  Raises PsiRangeError when
    |psi| > 1/M, in which case the caller must lower theta.
    """
    if epsilon <= 0:
        raise ParameterError(f"epsilon must be > 0, got {epsilon}")
    if not 0 < alpha <= 0.5:
        raise ParameterError(f"alpha must lie in (0, 1/2], got {alpha}")
    if theta < 0:
        raise ParameterError(f"theta must be >= 0, got {theta}")
    if n < 1 or k < 1:
        raise ParameterError(f"need n >= 1 and k >= 1, got n={n}, k={k}")

    A = max(2.0 * alpha / epsilon, 4.0 * alpha / (1.0 + epsilon))
    K = math.ceil(A * A + 3.0 * A + 4.0)
    # (2K - 1).bit_length() == ceil(log2(2K)); exact, no float log.
    C = 2 ** ((2 * K - 1).bit_length() + 1)
    M = (math.isqrt(1 + 8 * K) - 1) // 2
    psi = theta * theta * n / (2.0 * C * k * k)
    if abs(psi) > 1.0 / M:
        raise PsiRangeError(
            f"psi={psi:.6g} exceeds 1/M={1.0 / M:.6g}; lower theta below "
            f"{math.sqrt(2.0 * C / M) * k / math.sqrt(n):.6g}"
        )
    return DerivedConstants(A=A, K=K, C=C, psi=psi, M=M)
