"""Verification harness: a synthetic data generator and brute-force oracles.

The oracles evaluate logit probabilities with their own code and never
call into :mod:`detour_choice.mnl` or :mod:`detour_choice.mixed`; only
the specification and design-matrix containers are shared.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from numpy.polynomial.hermite import hermgauss

from .core import (
    AGE_BANDS, FREQUENCIES, INCOME_BANDS, MODES, N_MODES, TRIP_CHAINS,
    Dataset, Mode, NetworkParams, Observation, ScalingConfig,
)
from .errors import GridBoundaryWarning, SpecificationError
from .model_spec import MixingSpec, ModelSpec, Term
from .synthesis import DesignMatrix, assemble_design, attributes_from_distance

# Sample breakdowns of the survey, used as sampling weights.
GENDER_WEIGHTS = {"female": 121, "male": 128}
AGE_WEIGHTS = dict(zip(AGE_BANDS, (81, 58, 62, 48)))
INCOME_WEIGHTS = (28, 83, 80, 30, 6, 9, 13)
TRIP_CHAIN_WEIGHTS = {
    "male": dict(zip(TRIP_CHAINS, (12, 47, 20, 49))),
    "female": dict(zip(TRIP_CHAINS, (20, 47, 30, 24))),
}
FREQUENCY_WEIGHTS = {
    "male": dict(zip(FREQUENCIES, (5, 25, 40, 16, 21, 21))),
    "female": dict(zip(FREQUENCIES, (6, 33, 25, 15, 22, 20))),
}
DETOUR_OPTIONS_MIN = (15.0, 30.0, 45.0, 60.0)
REMUNERATION_OPTIONS_UAH = (50.0, 60.0, 75.0, 90.0, 100.0, 120.0)


@dataclass
class SyntheticConfig:
    """Recipe for a synthetic respondent sample.

    Covariates come from the survey's discrete answer options. Each
    respondent's detour distance is fixed before the choice is drawn:
    a detour time from the options, at the speed of a mode picked
    uniformly from the available ones. The recorded stated detour is the
    chosen mode's time over that distance, so reloading the data rebuilds
    the same attributes the choice was drawn from.

    For specifications with mixing, each respondent gets one draw of the
    random coefficients.
    """

    true_parameters: Mapping[str, float]
    spec: ModelSpec
    n_obs: int = 249
    car_ownership_rate: float = 166 / 249
    car_available_count: int | None = None   # exact count instead of Bernoulli draws
    seed: int = 0
    detour_options: Sequence[float] = DETOUR_OPTIONS_MIN
    remuneration_options: Sequence[float] = REMUNERATION_OPTIONS_UAH
    net: NetworkParams = field(default_factory=NetworkParams)
    scaling: ScalingConfig = field(default_factory=ScalingConfig)


@dataclass
class GenerationLog:
    dataset: Dataset
    design: DesignMatrix
    probabilities: np.ndarray        # (n, 6) true-model probabilities of each row
    car_available_count: int
    choice_counts: dict[str, int]
    gender_counts: dict[str, int]

    @property
    def choice_shares(self) -> dict[str, float]:
        n = sum(self.choice_counts.values())
        return {k: v / n for k, v in self.choice_counts.items()}


def _pick(rng, options, weights, size):
    w = np.asarray(weights, dtype=float)
    return rng.choice(len(options), size=size, p=w / w.sum())


def _plain_probabilities(V: np.ndarray, available: np.ndarray) -> np.ndarray:
    V = np.where(available, V, -np.inf)
    top = np.max(V, axis=-1, keepdims=True)
    e = np.exp(V - top)
    return e / np.sum(e, axis=-1, keepdims=True)


def _term_columns(X: DesignMatrix, spec: ModelSpec) -> list[np.ndarray]:
    cols = []
    for t in spec.terms:
        c = np.zeros((X.n_obs, N_MODES))
        j = X.attributes.index(t.attribute)
        for m in t.modes:
            c[:, m] = X.values[:, m, j]
        cols.append(c)
    return cols


def _check_parameters(spec: ModelSpec, params: Mapping[str, float]):
    expected = set(spec.parameter_names)
    given = set(params)
    if expected - given:
        raise SpecificationError(f"missing true value for {sorted(expected - given)[0]!r}")
    if given - expected:
        raise SpecificationError(f"true value for unknown parameter {sorted(given - expected)[0]!r}")


def generate_with_log(cfg: SyntheticConfig) -> GenerationLog:
    spec, n = cfg.spec, cfg.n_obs
    _check_parameters(spec, cfg.true_parameters)
    if n < 1:
        raise ValueError("n_obs must be positive")
    rng = np.random.default_rng(cfg.seed)

    genders = np.array(list(GENDER_WEIGHTS))[_pick(rng, GENDER_WEIGHTS, list(GENDER_WEIGHTS.values()), n)]
    ages = np.array(AGE_BANDS)[_pick(rng, AGE_BANDS, list(AGE_WEIGHTS.values()), n)]
    income = np.array([v for _, v in INCOME_BANDS])[_pick(rng, INCOME_BANDS, INCOME_WEIGHTS, n)]
    if cfg.car_available_count is not None:
        car = np.zeros(n, bool)
        car[rng.permutation(n)[:cfg.car_available_count]] = True
    else:
        car = rng.random(n) < cfg.car_ownership_rate
    rem = np.asarray(cfg.remuneration_options, float)[rng.integers(0, len(cfg.remuneration_options), n)]
    minutes = np.asarray(cfg.detour_options, float)[rng.integers(0, len(cfg.detour_options), n)]
    available = np.ones((n, N_MODES), bool)
    available[:, Mode.CAR] = car
    anchor = np.array([rng.choice(np.flatnonzero(row)) for row in available])
    distance = cfg.net.speeds()[anchor] * minutes / 60.0

    ids = tuple(f"S{q + 1:05d}" for q in range(n))
    att = attributes_from_distance(ids, distance, rem, net=cfg.net)
    X = assemble_design(att, income, available, anchor, cfg.scaling)

    coef = spec.full_coefficients(cfg.true_parameters)
    cols = _term_columns(X, spec)
    V = sum(c * b for c, b in zip(cols, coef)) if cols else np.zeros((n, N_MODES))
    for k, (name, mix) in enumerate(spec.mixing.items()):
        z = rng.standard_normal(n)
        j = spec.coefficient_names.index(name)
        V = V + cols[j] * (cfg.true_parameters[mix.sigma] * z)[:, None]
    P = _plain_probabilities(V, available)
    u = rng.random(n)
    chosen = np.minimum((np.cumsum(P, axis=1) < u[:, None]).sum(axis=1), N_MODES - 1)
    # guard against rounding pushing the pick onto an unavailable mode
    for q in np.flatnonzero(~available[np.arange(n), chosen]):
        chosen[q] = np.flatnonzero(available[q])[np.argmax(P[q, available[q]])]

    stated = att.time_min[np.arange(n), chosen]
    chains = [TRIP_CHAINS[_pick(rng, TRIP_CHAINS, list(TRIP_CHAIN_WEIGHTS[g].values()), 1)[0]]
              for g in genders]
    freqs = [FREQUENCIES[_pick(rng, FREQUENCIES, list(FREQUENCY_WEIGHTS[g].values()), 1)[0]]
             for g in genders]
    obs = tuple(
        Observation(id=ids[q], gender=str(genders[q]), age_band=str(ages[q]),
                    income_uah=float(income[q]), car_available=bool(car[q]),
                    chosen_mode=Mode(int(chosen[q])), stated_detour_min=float(stated[q]),
                    remuneration_uah=float(rem[q]), trip_chain=chains[q], frequency=freqs[q])
        for q in range(n))
    d = Dataset(obs)
    X_final = assemble_design(att, income, available, chosen, cfg.scaling)
    return GenerationLog(
        dataset=d, design=X_final, probabilities=P,
        car_available_count=int(car.sum()),
        choice_counts={m.key: int((chosen == m).sum()) for m in MODES},
        gender_counts={g: int((genders == g).sum()) for g in GENDER_WEIGHTS},
    )


def generate(cfg: SyntheticConfig) -> Dataset:
    """Synthetic dataset drawn from the true model; deterministic per seed."""
    return generate_with_log(cfg).dataset


def grid_log_likelihood(X: DesignMatrix, spec: ModelSpec, points: np.ndarray,
                        batch: int = 2048) -> np.ndarray:
    """Log-likelihood at each row of ``points`` (free coefficients in order)."""
    cols = _term_columns(X, spec)
    names = spec.coefficient_names
    base = np.zeros((X.n_obs, N_MODES))
    for name, value in spec.fixed.items():
        base = base + cols[names.index(name)] * value
    free = np.stack([cols[names.index(nm)] for nm in spec.free_names])  # (k, n, 6)
    used = X.available.any(axis=0)            # modes nobody can choose add nothing
    base, free, available = base[:, used], free[:, :, used], X.available[:, used]
    chosen = np.cumsum(used)[X.chosen] - 1
    rows = np.arange(X.n_obs)
    out = np.empty(len(points))
    for start in range(0, len(points), batch):
        th = points[start:start + batch]                                # (g, k)
        V = base[None] + np.tensordot(th, free, axes=(1, 0))           # (g, n, 6)
        V = np.where(available[None], V, -np.inf)
        top = V.max(axis=2)
        log_denominator = top + np.log(np.exp(V - top[:, :, None]).sum(axis=2))
        out[start:start + batch] = (V[:, rows, chosen] - log_denominator).sum(axis=1)
    return out


def grid_mle(X: DesignMatrix, spec: ModelSpec, ranges: Sequence[tuple[float, float]] | None = None,
             step: float = 1e-4, coarse_points: int = 201, refine_points: int = 41) -> dict[str, float]:
    """Exhaustive grid maximization of the MNL log-likelihood, at most two free parameters.

    A full grid covers ``ranges`` with ``coarse_points`` per axis; nested
    grids ten times finer are then laid around the incumbent until the
    spacing reaches ``step``.
    """
    names = spec.free_names
    if spec.mixing or not 1 <= len(names) <= 2:
        raise SpecificationError("grid search needs one or two free coefficients and no mixing")
    ranges = list(ranges) if ranges is not None else [(-20.0, 20.0)] * len(names)
    lo0 = np.array([r[0] for r in ranges], float)
    hi0 = np.array([r[1] for r in ranges], float)
    lo, hi, npts = lo0.copy(), hi0.copy(), coarse_points
    first = True
    while True:
        axes = [np.linspace(a, b, npts) for a, b in zip(lo, hi)]
        spacing = max((b - a) / (npts - 1) for a, b in zip(lo, hi))
        mesh = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1)
        ll = grid_log_likelihood(X, spec, mesh)
        best = mesh[int(np.argmax(ll))]
        if first:
            on_edge = np.isclose(best, lo0) | np.isclose(best, hi0)
            if on_edge.any():
                warnings.warn(f"grid optimum on the boundary for "
                              f"{', '.join(n for n, e in zip(names, on_edge) if e)}",
                              GridBoundaryWarning, stacklevel=2)
            first = False
        if spacing <= step:
            break
        half = 2.0 * spacing
        lo = np.maximum(best - half, lo0)
        hi = np.minimum(best + half, hi0)
        npts = refine_points
    return dict(zip(names, map(float, best)))


@dataclass(frozen=True)
class MixingToy:
    """One choice situation with a single normal random coefficient.

    Utility of alternative ``j`` is ``fixed_utility[j] + beta * attribute[j]``
    with ``beta ~ N(mean, sigma**2)``.
    """

    fixed_utility: tuple[float, ...]
    attribute: tuple[float, ...]
    mean: float
    sigma: float
    chosen: int = 0

    def as_problem(self) -> tuple[DesignMatrix, ModelSpec, dict[str, float]]:
        """The same toy as a one-row design matrix, spec and parameter set."""
        J = len(self.fixed_utility)
        if not 2 <= J <= N_MODES or len(self.attribute) != J:
            raise ValueError("toy needs 2..6 alternatives with matching attributes")
        values = np.zeros((1, N_MODES, 2))
        values[0, :J, 0] = self.fixed_utility
        values[0, :J, 1] = self.attribute
        available = np.zeros((1, N_MODES), bool)
        available[0, :J] = True
        X = DesignMatrix.from_arrays(values, available, [self.chosen], attributes=("fixed", "x"))
        modes = MODES[:J]
        spec = ModelSpec((Term("FIXED", "fixed", modes), Term("B", "x", modes)),
                         fixed={"FIXED": 1.0}, mixing={"B": MixingSpec("SIGMA_B")}, name="toy")
        return X, spec, {"B": self.mean, "SIGMA_B": self.sigma}


def quadrature_mixed_probability(toy: MixingToy, nodes: int = 64) -> float:
    """Gauss-Hermite evaluation of the mixed logit probability of ``toy.chosen``."""
    if nodes < 1:
        raise ValueError("need at least one quadrature node")
    x, w = hermgauss(nodes)
    beta = toy.mean + toy.sigma * np.sqrt(2.0) * x                     # (nodes,)
    V = np.asarray(toy.fixed_utility)[None, :] + beta[:, None] * np.asarray(toy.attribute)[None, :]
    top = V.max(axis=1, keepdims=True)
    e = np.exp(V - top)
    logit = e[:, toy.chosen] / e.sum(axis=1)
    return float(np.dot(w, logit) / np.sqrt(np.pi))
