"""Numerical Hessians, sandwich covariance and significance markers."""
from __future__ import annotations

import numpy as np
from scipy import stats

# two-sided p-value thresholds used for the star markers
STAR_LEVELS = ((0.005, "***"), (0.01, "**"), (0.05, "*"))


def numerical_hessian(grad, x: np.ndarray, rel_step: float = 1e-5) -> np.ndarray:
    """Central differences of an analytic gradient, symmetrized."""
    x = np.asarray(x, dtype=float)
    k = x.size
    H = np.empty((k, k))
    for j in range(k):
        h = rel_step * max(1.0, abs(x[j]))
        up, dn = x.copy(), x.copy()
        up[j] += h
        dn[j] -= h
        H[:, j] = (grad(up) - grad(dn)) / (up[j] - dn[j])
    return 0.5 * (H + H.T)


def sandwich(hessian: np.ndarray, scores: np.ndarray) -> np.ndarray:
    """Robust covariance ``H^-1 B H^-1`` with ``B`` the summed score outer products.

    ``scores`` holds one row per observation.
    """
    B = np.einsum("ni,nj->ij", scores, scores)
    try:
        Hinv = np.linalg.inv(hessian)
    except np.linalg.LinAlgError:
        Hinv = np.linalg.pinv(hessian)
    cov = Hinv @ B @ Hinv
    return 0.5 * (cov + cov.T)


def identified_basis(information: np.ndarray, rtol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal bases of the identified and the flat parameter directions.

    Directions whose information eigenvalue falls below ``rtol`` times the
    largest one leave the likelihood unchanged.
    """
    w, V = np.linalg.eigh(information)
    if w.size == 0:
        return V, V
    flat = w <= rtol * max(w[-1], 0.0)
    return V[:, ~flat], V[:, flat]


def p_values(t: np.ndarray) -> np.ndarray:
    return 2.0 * stats.norm.sf(np.abs(t))


def stars(t: float) -> str:
    if not np.isfinite(t):
        return ""
    p = 2.0 * stats.norm.sf(abs(t))
    for level, mark in STAR_LEVELS:
        if p < level:
            return mark
    return ""
