"""Multinomial logit: utilities, probabilities, likelihood and estimation."""
from __future__ import annotations

from typing import Mapping

import numpy as np

from ._estimation import EstimationOptions, maximize
from .inference import identified_basis
from ._parallel import chunk_slices, ordered_map, resolve_threads
from .core import MODES, Mode
from .errors import DataError, DegenerateChoiceSetError, SpecificationError
from .model_spec import ModelSpec, term_tensor
from .results import EstimationResult, adjusted_rho_square
from .synthesis import DesignMatrix

__all__ = [
    "EstimationOptions", "utilities", "choice_probabilities", "probabilities",
    "log_likelihood", "null_log_likelihood", "estimate", "fit_statistics", "MnlProblem",
]


def fit_statistics(ll_null: float, ll_final: float, k: int) -> float:
    """Adjusted rho-square against the null model."""
    return adjusted_rho_square(ll_null, ll_final, k)


def choice_probabilities(v: Mapping[Mode, float]) -> dict[Mode, float]:
    """Logit probabilities over the modes present in ``v``."""
    if len(v) < 2:
        raise DegenerateChoiceSetError("choice set needs at least two alternatives")
    keys = list(v)
    arr = np.array([v[k] for k in keys], dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DataError("utilities must be finite")
    e = np.exp(arr - arr.max())
    p = e / e.sum()
    return dict(zip(keys, p.tolist()))


def _coefficient_vector(beta, spec: ModelSpec) -> np.ndarray:
    """Full term-order coefficients from a mapping or a free-parameter vector."""
    if isinstance(beta, Mapping):
        return spec.full_coefficients(beta)
    beta = np.asarray(beta, dtype=float)
    free = spec.free_names
    if beta.shape[0] < len(free):
        raise SpecificationError(f"expected {len(free)} free coefficients, got {beta.shape[0]}")
    return spec.full_coefficients(dict(zip(free, beta)))


def utilities(block: DesignMatrix, beta, spec: ModelSpec, row: int = 0) -> dict[Mode, float]:
    """Deterministic utility of each available mode for one observation."""
    coef = _coefficient_vector(beta, spec)
    Z = term_tensor(block.take([row]), spec)[0]
    V = Z @ coef
    return {m: float(V[m]) for m in MODES if block.available[row, m]}


def probabilities(X: DesignMatrix, beta, spec: ModelSpec) -> np.ndarray:
    """``(n, 6)`` choice probabilities; unavailable modes get exactly zero."""
    coef = _coefficient_vector(beta, spec)
    Z = term_tensor(X, spec)
    V = np.einsum("nmk,k->nm", Z, coef)
    return _softmax(V, X.available)


def _softmax(V: np.ndarray, available: np.ndarray) -> np.ndarray:
    V = np.where(available, V, -np.inf)
    vmax = V.max(axis=-1, keepdims=True)
    e = np.exp(V - vmax)
    return e / e.sum(axis=-1, keepdims=True)


def null_log_likelihood(X: DesignMatrix) -> float:
    """Log-likelihood with every coefficient at zero: equal shares per choice set."""
    counts = X.available.sum(axis=1)
    return float(-np.sum(np.log(np.sort(counts))))


def _check_design(X: DesignMatrix, spec: ModelSpec):
    counts = X.available.sum(axis=1)
    if np.any(counts < 2):
        q = int(np.argmax(counts < 2))
        raise DegenerateChoiceSetError(f"observation {X.ids[q]} has fewer than two available modes")
    for attr in spec.attributes:
        col = X.attribute(attr)
        bad = ~np.isfinite(col) & X.available
        if bad.any():
            q, m = map(int, np.argwhere(bad)[0])
            raise DataError(f"non-finite {attr} for observation {X.ids[q]}, mode {Mode(m).key}")


class MnlProblem:
    """Log-likelihood of a fixed design under one specification.

    The parameter vector holds the free (non-fixed) coefficients in term
    order.
    """

    def __init__(self, X: DesignMatrix, spec: ModelSpec, threads: int | None = None):
        _check_design(X, spec)
        self.X, self.spec = X, spec
        self.threads = resolve_threads(threads)
        Z = term_tensor(X, spec)
        names = spec.coefficient_names
        free = [names.index(n) for n in spec.free_names]
        fixed = [j for j in range(len(names)) if j not in free]
        self.Zf = np.ascontiguousarray(Z[:, :, free])
        if fixed:
            vals = np.array([spec.fixed[names[j]] for j in fixed])
            self.offset = np.einsum("nmk,k->nm", Z[:, :, fixed], vals)
        else:
            self.offset = np.zeros(Z.shape[:2])
        self.available = X.available
        self.chosen = X.chosen
        self.slices = chunk_slices(X.n_obs)

    @property
    def n_params(self) -> int:
        return self.Zf.shape[2]

    def _chunk(self, theta, sl):
        Zf = self.Zf[sl]
        n = Zf.shape[0]
        rows = np.arange(n)
        ch = self.chosen[sl]
        V = np.einsum("nmk,k->nm", Zf, theta) + self.offset[sl]
        V = np.where(self.available[sl], V, -np.inf)
        vmax = V.max(axis=1)
        e = np.exp(V - vmax[:, None])
        S = e.sum(axis=1)
        ll_q = V[rows, ch] - vmax - np.log(S)
        P = e / S[:, None]
        scores = Zf[rows, ch, :] - np.einsum("nm,nmk->nk", P, Zf)
        return ll_q, scores

    def information(self, theta) -> np.ndarray:
        """Expected information ``sum_q sum_m P (z - zbar)(z - zbar)'``."""
        theta = np.asarray(theta, dtype=float)

        def part(sl):
            Zf = self.Zf[sl]
            V = np.where(self.available[sl], np.einsum("nmk,k->nm", Zf, theta) + self.offset[sl], -np.inf)
            e = np.exp(V - V.max(axis=1, keepdims=True))
            P = e / e.sum(axis=1, keepdims=True)
            D = Zf - np.einsum("nm,nmk->nk", P, Zf)[:, None, :]
            return np.einsum("nm,nmk,nml->kl", P, D, D)

        out = np.zeros((self.n_params, self.n_params))
        for I in ordered_map(part, self.slices, self.threads):
            out += I
        return out

    def evaluate(self, theta, scores: bool = False):
        theta = np.asarray(theta, dtype=float)
        parts = ordered_map(lambda sl: self._chunk(theta, sl), self.slices, self.threads)
        ll = 0.0
        grad = np.zeros(self.n_params)
        for ll_q, sc in parts:
            ll += float(np.sum(ll_q))
            grad += sc.sum(axis=0)
        if scores:
            return ll, grad, np.concatenate([sc for _, sc in parts], axis=0)
        return ll, grad


def log_likelihood(X: DesignMatrix, beta, spec: ModelSpec, threads: int | None = None):
    """Log-likelihood and its gradient in one pass.

    The gradient is ordered as ``spec.free_names``.
    """
    coef = _coefficient_vector(beta, spec)
    names = spec.coefficient_names
    theta = np.array([coef[names.index(n)] for n in spec.free_names])
    return MnlProblem(X, spec, threads).evaluate(theta)


def estimate(X: DesignMatrix, spec: ModelSpec, options: EstimationOptions | None = None,
             start: Mapping[str, float] | None = None) -> EstimationResult:
    """Maximum likelihood estimates with sandwich standard errors.

    Starts from zero unless ``start`` is given. BFGS runs first; if its
    gradient is not yet below tolerance, Newton steps on the numerical
    Hessian finish the job. A diverging coefficient raises a
    ``SeparationWarning`` but still returns a result.

    Directions along which the likelihood is exactly flat are held at
    the start (so the default start gives the minimum-norm optimum);
    coefficients moving along them get NaN standard errors and an
    ``IdentificationWarning``.
    """
    if spec.mixing:
        raise SpecificationError("specification has mixing; use mixed.estimate_mixed")
    options = options or EstimationOptions()
    problem = MnlProblem(X, spec, options.threads)
    names = spec.free_names
    theta0 = np.zeros(len(names)) if start is None else np.array([start[n] for n in names], float)
    basis, flat = identified_basis(problem.information(np.zeros(len(names))))
    fit = maximize(problem, theta0, names, options, basis=basis)
    return EstimationResult(
        names=names, values=fit.theta, robust_covariance=fit.covariance,
        ll_null=null_log_likelihood(X), ll_final=fit.ll, sample_size=X.n_obs,
        converged=fit.converged, iterations=fit.iterations,
        gradient_norm=float(np.max(np.abs(fit.gradient))) if len(names) else 0.0,
        model=spec.name, mixture=False, message=fit.message,
        extra={"unidentified": fit.unidentified} if fit.unidentified else {},
    )
