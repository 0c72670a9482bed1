"""Baseline detectors and recovery for both models, plus the loss functional.

Two detector families: entry thresholding (max off-diagonal magnitude,
suited to k <= sqrt(d)) and spectral (top eigenvalue of Y/sqrt(d) against
the semicircle edge at 2, suited to k >= sqrt(d)).  The covariance-side
detector applies the threshold test to the rescaled empirical covariance
sqrt(n) (Z^T Z / n - I).

Recovery keeps the k largest-magnitude coordinates of the leading
eigenvector; quality is measured by ``loss(u, u_hat) = 1 - <u, u_hat>^2``,
which ignores global sign.

The threshold constants c are empirical: calibrate them on null runs at the
target (d, k, n) rather than from asymptotic formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .core import ParameterError
from .sampling import SparseSignal

POWER_TOL = 1e-8


@dataclass(frozen=True)
class DetectorOutcome:
    decision: str  # "planted" iff statistic > threshold, else "null"
    statistic: float
    threshold: float


@dataclass(frozen=True)
class RecoveryEstimate:
    u_hat: np.ndarray  # unit vector, at most k nonzeros
    loss_vs_truth: Optional[float] = None


def _outcome(statistic: float, threshold: float) -> DetectorOutcome:
    decision = "planted" if statistic > threshold else "null"
    return DetectorOutcome(decision=decision, statistic=float(statistic), threshold=float(threshold))


def power_iteration(
    y: np.ndarray, tol: float = POWER_TOL, max_iter: Optional[int] = None
) -> Tuple[float, np.ndarray]:
    """Largest (signed) eigenvalue and eigenvector of a symmetric matrix.

    Deterministic all-ones start.  Two phases within the iteration budget
    (10 d, floored at 300 for tiny matrices): first iterate on y^2 to pin
    the spectral radius, then on y shifted by 1.1 times that estimate --
    a tight shift, so the largest signed eigenvalue dominates with a usable
    convergence ratio even when the spectrum is nearly symmetric.
    """
    d = y.shape[0]
    if max_iter is None:
        max_iter = max(10 * d, 300)
    if d == 1:
        return float(y[0, 0]), np.ones(1)
    ones = np.ones(d) / math.sqrt(d)
    v = ones

    radius = 0.0
    for _ in range(max_iter // 4):
        w = y @ (y @ v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0, v
        w /= nw
        done = np.linalg.norm(w - v) < tol
        v = w
        radius = float(np.linalg.norm(y @ v))
        if done:
            break

    # Remix the deterministic start so phase 2 cannot begin exactly
    # orthogonal to the dominant eigenvector of the shifted matrix.
    v = v + 0.5 * ones
    v /= np.linalg.norm(v)
    shift = 1.1 * radius + tol
    b = y + shift * np.eye(d)
    for _ in range(max_iter - max_iter // 4):
        w = b @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            break
        w /= nw
        done = np.linalg.norm(w - v) < tol
        v = w
        if done:
            break
    eig = float(v @ y @ v)
    return eig, v


def threshold_detect_wig(y: np.ndarray, k: int, c: float) -> DetectorOutcome:
    """Max off-diagonal |Y_ij| against c * sqrt(ln d).

    A 1 x 1 matrix has no off-diagonal entries; its statistic is 0 and the
    decision is always null.
    """
    d = y.shape[0]
    if d == 1:
        return _outcome(0.0, c)
    off = np.abs(y - np.diag(np.diagonal(y)))
    return _outcome(off.max(), c * math.sqrt(math.log(d)))


def spectral_detect_wig(y: np.ndarray, c: float) -> DetectorOutcome:
    """Top eigenvalue of Y/sqrt(d) against the semicircle edge 2 + c."""
    d = y.shape[0]
    if d == 1:
        return _outcome(y[0, 0], 2.0 + c)
    eig, _ = power_iteration(y)
    return _outcome(eig / math.sqrt(d), 2.0 + c)


def rescaled_covariance(z: np.ndarray) -> np.ndarray:
    """sqrt(n) (Z^T Z / n - I), the Wigner-comparable covariance statistic."""
    n, d = z.shape
    return math.sqrt(n) * (z.T @ z / n - np.eye(d))


def covariance_detect_sc(z: np.ndarray, k: int, c: float) -> DetectorOutcome:
    """Threshold test on the rescaled empirical covariance."""
    return threshold_detect_wig(rescaled_covariance(z), k, c)


def recover_topk(y: np.ndarray, k: int) -> RecoveryEstimate:
    """Leading eigenvector restricted to its k largest-magnitude coordinates."""
    d = y.shape[0]
    if k > d:
        raise ParameterError(f"need k <= d, got k={k}, d={d}")
    _, v = power_iteration(y)
    idx = np.argsort(-np.abs(v))[:k]
    u_hat = np.zeros(d)
    u_hat[idx] = v[idx]
    norm = np.linalg.norm(u_hat)
    if norm == 0.0:
        u_hat[idx[0]] = 1.0
    else:
        u_hat /= norm
    return RecoveryEstimate(u_hat=u_hat)


def loss(u, u_hat: np.ndarray) -> float:
    """1 - <u, u_hat>^2; symmetric under sign flips of either argument."""
    uv = u.vector() if isinstance(u, SparseSignal) else np.asarray(u, dtype=np.float64)
    u_hat = np.asarray(u_hat, dtype=np.float64)
    for name, vec in (("u", uv), ("u_hat", u_hat)):
        if abs(np.linalg.norm(vec) - 1.0) > 1e-6:
            raise ParameterError(f"{name} must be unit norm, got {np.linalg.norm(vec):.8f}")
    return 1.0 - float(uv @ u_hat) ** 2
