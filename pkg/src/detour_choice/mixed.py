"""Mixed logit by maximum simulated likelihood.

Mixed coefficients are normal, ``beta = b + sigma * z``, independent
across coefficients. Each observation keeps the same draws for the whole
estimation so the simulated log-likelihood is a smooth deterministic
function of the parameters. Probabilities are averaged in log space to
survive utilities far apart.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Mapping

import numpy as np
from scipy.special import logsumexp

from . import mnl
from ._estimation import EstimationOptions, maximize
from ._parallel import chunk_slices, ordered_map, resolve_threads
from .core import MODES, Mode
from .draws import make_draws
from .inference import identified_basis
from .errors import IdentificationWarning, SpecificationError
from .model_spec import ModelSpec, term_tensor
from .results import EstimationResult
from .synthesis import DesignMatrix


@dataclass(frozen=True)
class MixedOptions(EstimationOptions):
    n_draws: int = 100
    draw_type: str = "halton"
    seed: int = 0
    initial_sigma: float = 0.1


def draws_for(X: DesignMatrix, spec: ModelSpec, n_draws: int = 100,
              draw_type: str = "halton", seed: int = 0) -> np.ndarray:
    return make_draws(X.n_obs, n_draws, len(spec.mixing), draw_type, seed)


class MixedProblem:
    """Simulated log-likelihood; parameters are free coefficients then sigmas."""

    def __init__(self, X: DesignMatrix, spec: ModelSpec, draws: np.ndarray,
                 threads: int | None = None):
        mnl._check_design(X, spec)
        if draws.ndim != 3 or draws.shape[0] != X.n_obs or draws.shape[2] != len(spec.mixing):
            raise SpecificationError(
                f"draws must be (n_obs, n_draws, {len(spec.mixing)}), got {draws.shape}")
        if draws.shape[1] < 1:
            raise ValueError("at least one draw is required")
        self.X, self.spec, self.draws = X, spec, draws
        self.threads = resolve_threads(threads)
        base = mnl.MnlProblem(X, spec.without_mixing(), threads)
        self.Zf, self.offset = base.Zf, base.offset
        free = spec.free_names
        self.mix_idx = [free.index(c) for c in spec.mixing]
        self.available, self.chosen = X.available, X.chosen
        self.k_free = len(free)
        self.slices = chunk_slices(X.n_obs)

    @property
    def n_params(self) -> int:
        return self.k_free + len(self.mix_idx)

    def _log_probs(self, theta, sl):
        b, sigma = theta[:self.k_free], theta[self.k_free:]
        Zf = self.Zf[sl]
        V = np.einsum("nmk,k->nm", Zf, b) + self.offset[sl]
        Zc = Zf[:, :, self.mix_idx]                      # (n, 6, D)
        sz = self.draws[sl] * sigma                      # (n, R, D)
        Vr = V[:, None, :] + np.einsum("nrd,nmd->nrm", sz, Zc)
        Vr = np.where(self.available[sl][:, None, :], Vr, -np.inf)
        vmax = Vr.max(axis=2, keepdims=True)
        logP = Vr - vmax - np.log(np.exp(Vr - vmax).sum(axis=2, keepdims=True))
        return logP, Zf, Zc

    def probabilities(self, theta, sl=slice(None)) -> np.ndarray:
        logP, _, _ = self._log_probs(np.asarray(theta, float), sl)
        return np.exp(logP).mean(axis=1)

    def _chunk(self, theta, sl):
        logP, Zf, Zc = self._log_probs(theta, sl)
        n, R = logP.shape[:2]
        rows = np.arange(n)
        ch = self.chosen[sl]
        logL = logP[rows, :, ch]                         # (n, R)
        lse = logsumexp(logL, axis=1)
        ll_q = lse - np.log(R)
        w = np.exp(logL - lse[:, None])                  # draw weights, rows sum to 1
        P = np.exp(logP)
        W = np.einsum("nr,nrm->nm", w, P)
        s_mean = Zf[rows, ch, :] - np.einsum("nm,nmk->nk", W, Zf)
        G = np.einsum("nrm,nmd->nrd", P, Zc)
        dev = Zc[rows, ch, :][:, None, :] - G           # (n, R, D)
        s_sigma = np.einsum("nr,nrd->nd", w, self.draws[sl] * dev)
        return ll_q, np.concatenate([s_mean, s_sigma], axis=1)

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


def _theta(params: Mapping[str, float], spec: ModelSpec) -> np.ndarray:
    return spec.vector(params)


def simulated_probabilities(X: DesignMatrix, params: Mapping[str, float], spec: ModelSpec,
                            draws: np.ndarray) -> np.ndarray:
    """``(n, 6)`` simulated probabilities, zero for unavailable modes."""
    if draws.shape[1] == 0:
        raise ValueError("at least one draw is required")
    return MixedProblem(X, spec, draws).probabilities(_theta(params, spec))


def simulated_probability(block: DesignMatrix, params: Mapping[str, float], spec: ModelSpec,
                          draws: np.ndarray, row: int = 0) -> dict[Mode, float]:
    """Simulated choice probabilities of one observation.

    ``draws`` is ``(n_draws, n_dims)`` for that observation.
    """
    draws = np.asarray(draws, dtype=float)
    if draws.ndim == 2:
        draws = draws[None]
    if draws.shape[1] == 0:
        raise ValueError("at least one draw is required")
    one = block.take([row])
    P = simulated_probabilities(one, params, spec, draws)[0]
    return {m: float(P[m]) for m in MODES if one.available[0, m]}


def simulated_log_likelihood(X, params, spec, draws, threads=None):
    return MixedProblem(X, spec, draws, threads).evaluate(_theta(params, spec))


def estimate_mixed(X: DesignMatrix, spec: ModelSpec, options: MixedOptions | None = None,
                   start: Mapping[str, float] | None = None) -> EstimationResult:
    """Maximum simulated likelihood estimates.

    Without ``start``, the plain MNL fit provides the means and every
    sigma starts at ``options.initial_sigma``. A spec without mixing is
    estimated as a plain MNL. The null log-likelihood is the all-zero,
    no-spread model, i.e. equal shares over each choice set.
    """
    options = options or MixedOptions()
    if not spec.mixing:
        return mnl.estimate(X, spec, options, start)
    if start is None:
        with warnings.catch_warnings():
            # the mixed fit reports identification itself
            warnings.simplefilter("ignore", IdentificationWarning)
            base = mnl.estimate(X, spec.without_mixing(), options)
        start = dict(base.parameters)
        start.update({s: options.initial_sigma for s in spec.sigma_names})
    draws = draws_for(X, spec, options.n_draws, options.draw_type, options.seed)
    problem = MixedProblem(X, spec, draws, options.threads)
    names = spec.parameter_names
    means = mnl.MnlProblem(X, spec.without_mixing(), options.threads)
    mean_basis, _ = identified_basis(means.information(np.zeros(means.n_params)))
    k, d = mean_basis.shape[0], len(spec.sigma_names)
    basis = np.zeros((k + d, mean_basis.shape[1] + d))
    basis[:k, :mean_basis.shape[1]] = mean_basis
    basis[k:, mean_basis.shape[1]:] = np.eye(d)
    fit = maximize(problem, spec.vector(start), names, options, basis=basis)
    return EstimationResult(
        names=names, values=fit.theta, robust_covariance=fit.covariance,
        ll_null=mnl.null_log_likelihood(X), ll_final=fit.ll, sample_size=X.n_obs,
        converged=fit.converged, iterations=fit.iterations,
        gradient_norm=float(np.max(np.abs(fit.gradient))),
        model=spec.name, mixture=True, n_draws=options.n_draws,
        draw_type=options.draw_type, seed=options.seed, message=fit.message,
        extra={"unidentified": fit.unidentified} if fit.unidentified else {},
    )


def predict_probabilities(X: DesignMatrix, result: EstimationResult, spec: ModelSpec) -> np.ndarray:
    """Choice probabilities implied by a fitted result (simulated when mixed)."""
    params = result.parameters
    if result.mixture and spec.mixing:
        draws = draws_for(X, spec, result.n_draws or 100, result.draw_type or "halton",
                          result.seed or 0)
        return simulated_probabilities(X, params, spec, draws)
    return mnl.probabilities(X, params, spec.without_mixing())
