import sys
import warnings

import numpy as np
import pytest

from detour_choice.cli import bundled_dataset
from detour_choice.core import Mode, Observation, load_dataset
from detour_choice.errors import IdentificationWarning, RangeWarning
from detour_choice.synthesis import DesignMatrix, build_design_matrix


def make_obs(i=1, **kw):
    base = dict(id=f"R{i:03d}", gender="female", age_band="25-34", income_uah=15000.0,
                car_available=True, chosen_mode=Mode.BUS, stated_detour_min=30.0,
                remuneration_uah=90.0, trip_chain="WH", frequency="once_per_week")
    base.update(kw)
    return Observation(**base)


def two_mode_toy(rng, n=200, asc=0.5, beta=-1.0, with_attribute=True):
    """Binary logit data: V0 = 0, V1 = asc + beta * x, x ~ U(0, 3)."""
    values = np.zeros((n, 6, 2))
    values[:, 1, 0] = 1.0
    x = rng.uniform(0.0, 3.0, n) if with_attribute else np.zeros(n)
    values[:, 1, 1] = x
    available = np.zeros((n, 6), bool)
    available[:, :2] = True
    p1 = 1.0 / (1.0 + np.exp(-(asc + beta * x)))
    chosen = (rng.random(n) < p1).astype(int)
    return DesignMatrix.from_arrays(values, available, chosen, attributes=("asc", "x"))


@pytest.fixture(scope="session")
def bundled():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RangeWarning)
        return load_dataset(bundled_dataset())


@pytest.fixture(scope="session")
def bundled_design(bundled):
    return build_design_matrix(bundled)


@pytest.fixture
def quiet_identification():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IdentificationWarning)
        yield


def fixed_result(params, model="custom", mixture=False, n=249, unidentified=()):
    """An estimation result carrying given coefficients, for prediction-only use."""
    from detour_choice.results import EstimationResult

    names = tuple(params)
    k = len(names)
    return EstimationResult(
        names=names, values=np.array([params[n] for n in names], dtype=float),
        robust_covariance=np.eye(k) * 0.01, ll_null=-1.0, ll_final=-0.5, sample_size=n,
        converged=True, iterations=0, gradient_norm=0.0, model=model, mixture=mixture,
        n_draws=100 if mixture else None, draw_type="halton" if mixture else None,
        seed=0 if mixture else None,
        extra={"unidentified": tuple(unidentified)} if unidentified else {})


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(module.VERDICTS, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
        terminalreporter.write_line(line)
