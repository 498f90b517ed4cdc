"""Built-in cost-time and profit-time specifications and published estimates.

Both models normalize on walking. Alternative-specific constants and
income interactions enter the five non-walking modes; detour time enters
all six. The cost-time model prices detours only for modes that pay
(bus, car, electric ground PT, metro); the profit-time model uses
remuneration minus detour cost for every mode. Remuneration alone does
not vary across modes and is left out of the cost-time utility.
"""
from __future__ import annotations

from pathlib import Path

from .core import Mode
from .errors import SpecificationError
from .model_spec import MixingSpec, ModelSpec, Term, load_spec_file

M = Mode
# row order of the published coefficient tables
_TABLE_ORDER = (M.BIKE, M.BUS, M.CAR, M.ELECTRIC_GROUND_PT, M.METRO, M.WALKING)
_NON_BASE = tuple(m for m in _TABLE_ORDER if m != M.WALKING)
_PAID = (M.BUS, M.CAR, M.ELECTRIC_GROUND_PT, M.METRO)


def _tag(m: Mode) -> str:
    return m.name


def _asc_terms():
    return [Term(f"ASC_{_tag(m)}", "asc", [m]) for m in _NON_BASE]


def _income_terms():
    return [Term(f"INCOME_{_tag(m)}", "income", [m]) for m in _NON_BASE]


def _time_terms():
    return [Term(f"DT_{_tag(m)}", "time", [m]) for m in _TABLE_ORDER]


def time_mixing(modes=_TABLE_ORDER) -> dict[str, MixingSpec]:
    return {f"DT_{_tag(m)}": MixingSpec(f"SIGMA_TIME_{_tag(m)}") for m in modes}


def cost_time_spec(mixture: bool = False) -> ModelSpec:
    terms = (_asc_terms()
             + [Term(f"DC_{_tag(m)}", "cost", [m]) for m in _PAID]
             + _time_terms() + _income_terms())
    spec = ModelSpec(tuple(terms), name="cost-time")
    return spec.with_mixing(time_mixing()) if mixture else spec


def profit_time_spec(mixture: bool = False) -> ModelSpec:
    terms = (_asc_terms()
             + [Term(f"PROFIT_{_tag(m)}", "profit", [m]) for m in _TABLE_ORDER]
             + _time_terms() + _income_terms())
    spec = ModelSpec(tuple(terms), name="profit-time")
    return spec.with_mixing(time_mixing()) if mixture else spec


PRESETS = {"cost-time": cost_time_spec, "profit-time": profit_time_spec}

# MNL columns of the published cost-time and profit-time tables (scaled units).
COST_TIME_MNL = {
    "ASC_BIKE": -14.09, "ASC_BUS": -0.87, "ASC_CAR": -9.59,
    "ASC_ELECTRIC_GROUND_PT": -2.62, "ASC_METRO": -2.19,
    "DC_BUS": -0.63, "DC_CAR": -4.92, "DC_ELECTRIC_GROUND_PT": -2.49, "DC_METRO": -3.16,
    "DT_BIKE": -21.18, "DT_BUS": -9.82, "DT_CAR": -14.59,
    "DT_ELECTRIC_GROUND_PT": -7.55, "DT_METRO": -12.35, "DT_WALKING": -4.57,
    "INCOME_BIKE": 1.28, "INCOME_BUS": 0.28, "INCOME_CAR": 1.39,
    "INCOME_ELECTRIC_GROUND_PT": 0.743, "INCOME_METRO": -0.29,
}

COST_TIME_MIXTURE = {
    "ASC_BIKE": -14.19, "ASC_BUS": -0.68, "ASC_CAR": -9.77,
    "ASC_ELECTRIC_GROUND_PT": -3.12, "ASC_METRO": -2.97,
    "DC_BUS": -0.67, "DC_CAR": -5.08, "DC_ELECTRIC_GROUND_PT": -1.87, "DC_METRO": -2.38,
    "DT_BIKE": -21.00, "DT_BUS": -9.92, "DT_CAR": -14.22,
    "DT_ELECTRIC_GROUND_PT": -7.50, "DT_METRO": -12.26, "DT_WALKING": -4.57,
    "INCOME_BIKE": 1.27, "INCOME_BUS": 0.26, "INCOME_CAR": 1.42,
    "INCOME_ELECTRIC_GROUND_PT": 0.75, "INCOME_METRO": -0.27,
    "SIGMA_TIME_BIKE": -0.01, "SIGMA_TIME_BUS": -0.25, "SIGMA_TIME_CAR": -0.07,
    "SIGMA_TIME_ELECTRIC_GROUND_PT": 0.01, "SIGMA_TIME_METRO": 0.09,
    "SIGMA_TIME_WALKING": 0.03,
}

PROFIT_TIME_MNL = {
    "ASC_BIKE": -7.49, "ASC_BUS": 8.21, "ASC_CAR": -7.70,
    "ASC_ELECTRIC_GROUND_PT": 3.10, "ASC_METRO": 3.73,
    "PROFIT_BIKE": 49.95, "PROFIT_BUS": 56.22, "PROFIT_CAR": 58.70,
    "PROFIT_ELECTRIC_GROUND_PT": 56.62, "PROFIT_METRO": 56.08, "PROFIT_WALKING": 63.98,
    "DT_BIKE": -31.06, "DT_BUS": -13.67, "DT_CAR": -23.07,
    "DT_ELECTRIC_GROUND_PT": -10.78, "DT_METRO": -17.85, "DT_WALKING": -6.76,
    "INCOME_BIKE": 1.55, "INCOME_BUS": 0.23, "INCOME_CAR": 1.45,
    "INCOME_ELECTRIC_GROUND_PT": 0.72, "INCOME_METRO": -0.29,
}

PROFIT_TIME_MIXTURE = {
    "ASC_BIKE": -8.34, "ASC_BUS": 11.73, "ASC_CAR": -8.09,
    "ASC_ELECTRIC_GROUND_PT": 3.67, "ASC_METRO": 4.17,
    "PROFIT_BIKE": 61.35, "PROFIT_BUS": 69.31, "PROFIT_CAR": 71.99,
    "PROFIT_ELECTRIC_GROUND_PT": 70.07, "PROFIT_METRO": 69.37, "PROFIT_WALKING": 80.73,
    "DT_BIKE": -40.36, "DT_BUS": -18.53, "DT_CAR": -30.50,
    "DT_ELECTRIC_GROUND_PT": -13.83, "DT_METRO": -22.99, "DT_WALKING": -9.01,
    "INCOME_BIKE": 1.80, "INCOME_BUS": 0.15, "INCOME_CAR": 1.57,
    "INCOME_ELECTRIC_GROUND_PT": 0.85, "INCOME_METRO": -0.007,
    "SIGMA_TIME_BIKE": -0.46, "SIGMA_TIME_BUS": -0.92, "SIGMA_TIME_CAR": 0.15,
    "SIGMA_TIME_ELECTRIC_GROUND_PT": 0.09, "SIGMA_TIME_METRO": 0.09,
    "SIGMA_TIME_WALKING": 0.41,
}

PUBLISHED = {
    ("cost-time", False): COST_TIME_MNL,
    ("cost-time", True): COST_TIME_MIXTURE,
    ("profit-time", False): PROFIT_TIME_MNL,
    ("profit-time", True): PROFIT_TIME_MIXTURE,
}

# fit statistics reported alongside the MNL columns
PUBLISHED_NULL_LL = -431.02
PUBLISHED_FINAL_LL = {"cost-time": -182.19, "profit-time": -165.202}
PUBLISHED_ADJ_RHO_SQ = {"cost-time": 0.531, "profit-time": 0.566}


def resolve_spec(model: str, mixture: bool = False) -> ModelSpec:
    """Preset name or path to a spec file."""
    if model in PRESETS:
        return PRESETS[model](mixture)
    path = Path(model)
    if path.suffix or path.exists():
        spec = load_spec_file(path)
        return spec if mixture or not spec.mixing else spec.without_mixing()
    raise SpecificationError(
        f"unknown model {model!r}; expected one of {sorted(PRESETS)} or a spec file")
