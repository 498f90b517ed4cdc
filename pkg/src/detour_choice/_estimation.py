"""Maximization driver shared by the MNL and mixed-logit estimators.

A problem object exposes ``evaluate(theta, scores=False)`` returning the
log-likelihood, its gradient and, on request, per-observation scores.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize

from .errors import IdentificationWarning, SeparationWarning
from .inference import numerical_hessian, sandwich


@dataclass(frozen=True)
class EstimationOptions:
    max_iterations: int = 500
    tolerance: float = 1e-6           # max-norm of the LL gradient
    threads: int | None = None
    separation_threshold: float = 50.0
    polish_steps: int = 50


@dataclass
class Fit:
    theta: np.ndarray
    ll: float
    gradient: np.ndarray
    covariance: np.ndarray
    iterations: int
    converged: bool
    message: str
    unidentified: tuple[str, ...] = ()


class _Reduced:
    """A problem restricted to ``theta0 + U a``."""

    def __init__(self, problem, theta0, U):
        self.problem, self.theta0, self.U = problem, theta0, U

    def full(self, a):
        return self.theta0 + self.U @ a

    def evaluate(self, a, scores=False):
        out = self.problem.evaluate(self.full(a), scores)
        if scores:
            ll, g, sc = out
            return ll, self.U.T @ g, sc @ self.U
        ll, g = out
        return ll, self.U.T @ g


def _newton_polish(problem, theta, ll, grad, tol, steps):
    """Newton steps on the finite-difference Hessian with step halving."""
    used = 0
    for _ in range(steps):
        if np.max(np.abs(grad)) < tol:
            break
        H = numerical_hessian(lambda x: problem.evaluate(x)[1], theta)
        try:
            step = np.linalg.solve(H, -grad)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(step)) or grad @ step <= 0:
            break
        t = 1.0
        while t > 1e-10:
            cand = theta + t * step
            ll_c, g_c = problem.evaluate(cand)
            # near the optimum the LL is flat to rounding; tolerate that much
            if np.isfinite(ll_c) and ll_c >= ll - 1e-12 * max(1.0, abs(ll)):
                theta, ll, grad = cand, ll_c, g_c
                break
            t *= 0.5
        else:
            break
        used += 1
    return theta, ll, grad, used


def maximize(problem, theta0: np.ndarray, names, options: EstimationOptions,
             basis: np.ndarray | None = None) -> Fit:
    """Maximize over ``theta0 + basis @ a``; ``basis=None`` means all directions."""
    theta0 = np.asarray(theta0, dtype=float)
    k = theta0.size
    if basis is None or basis.shape[1] == k:
        return _maximize(problem, theta0, names, options)
    reduced = _Reduced(problem, theta0, basis)
    # tighter reduced tolerance keeps the full gradient's max-norm within bounds
    inner = replace(options, tolerance=options.tolerance / np.sqrt(max(basis.shape[1], 1)))
    fit = _maximize(reduced, np.zeros(basis.shape[1]), names, inner, full=reduced.full)
    # a coefficient is unidentified when it has any weight on a flat direction
    loose = 1.0 - np.einsum("ij,ij->i", basis, basis) > 1e-9
    unidentified = tuple(n for n, f in zip(names, loose) if f)
    cov = basis @ fit.covariance @ basis.T
    cov[loose, :] = np.nan
    cov[:, loose] = np.nan
    warnings.warn(
        f"{k - basis.shape[1]} flat likelihood direction(s); not separately identified: "
        f"{', '.join(unidentified)}", IdentificationWarning, stacklevel=3)
    _, grad = problem.evaluate(fit.theta)
    fit.covariance, fit.gradient, fit.unidentified = cov, grad, unidentified
    fit.converged = bool(np.max(np.abs(grad)) < options.tolerance) if grad.size else True
    return fit


def _maximize(problem, theta0, names, options, full=None) -> Fit:
    full = full or (lambda x: x)

    def objective(x):
        ll, g = problem.evaluate(x)
        if not np.isfinite(ll):
            return np.inf, np.zeros_like(x)
        return -ll, -g

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        res = minimize(objective, theta0, jac=True, method="BFGS",
                       options=dict(gtol=options.tolerance, maxiter=options.max_iterations,
                                    norm=np.inf))
    theta = res.x
    ll, grad = problem.evaluate(theta)
    iterations = int(res.nit)
    theta, ll, grad, extra = _newton_polish(
        problem, theta, ll, grad, options.tolerance,
        max(0, min(options.polish_steps, options.max_iterations - iterations)))
    iterations += extra
    gnorm = float(np.max(np.abs(grad))) if grad.size else 0.0
    converged = gnorm < options.tolerance
    message = "converged" if converged else f"gradient max-norm {gnorm:.3g} after {iterations} iterations ({res.message})"

    big = [n for n, v in zip(names, full(theta)) if abs(v) > options.separation_threshold]
    if big:
        warnings.warn(
            f"possible separation: |coefficient| > {options.separation_threshold:g} "
            f"for {', '.join(big)}", SeparationWarning, stacklevel=3)

    H = numerical_hessian(lambda x: problem.evaluate(x)[1], theta)
    _, _, scores = problem.evaluate(theta, scores=True)
    cov = sandwich(H, scores)
    return Fit(theta=full(theta), ll=float(ll), gradient=grad, covariance=cov,
               iterations=iterations, converged=converged, message=message)
