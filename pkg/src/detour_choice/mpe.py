"""Marginal probability effects of percentage attribute changes.

A cell perturbs one attribute of one mode (own-mode, own-attribute) by a
percentage and reports the sample-average change in that mode's choice
probability, in percentage points. Respondents for whom the mode is
unavailable are left out of the average by default.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import pandas as pd

from ._parallel import ordered_map, resolve_threads
from .core import Mode, fixed_decimals
from .errors import SpecificationError, UndefinedCellError
from .mixed import predict_probabilities
from .model_spec import ModelSpec
from .results import EstimationResult
from .synthesis import DesignMatrix

DEFAULT_LEVELS = (-10.0, -5.0, -1.0, 1.0, 5.0, 10.0)

ATTRIBUTE_LABELS = {
    "cost": "Detour cost, UAH",
    "time": "Detour time, min",
    "profit": "Profit, UAH",
}


def perturb(X: DesignMatrix, attribute: str, mode: Mode, percent: float) -> DesignMatrix:
    """Copy of ``X`` with one mode's attribute scaled by ``1 + percent / 100``."""
    if not percent > -100:
        raise ValueError("percent must exceed -100")
    j = X.index(attribute)
    mode = Mode(mode)
    values = X.values.copy()
    values[:, mode, j] *= 1.0 + percent / 100.0
    return X.with_values(values)


def _mask(X: DesignMatrix, mode: Mode, include_unavailable: bool) -> np.ndarray:
    mask = np.ones(X.n_obs, bool) if include_unavailable else X.available[:, mode]
    if not mask.any():
        raise UndefinedCellError(f"mode {Mode(mode).key} is available to no observation")
    return mask


def mpe(X: DesignMatrix, result: EstimationResult, spec: ModelSpec, attribute: str,
        mode: Mode, percent: float, include_unavailable: bool = False,
        base: np.ndarray | None = None) -> float:
    """Average change (percentage points) in ``mode``'s probability."""
    mode = Mode(mode)
    X.index(attribute)
    mask = _mask(X, mode, include_unavailable)
    if base is None:
        base = predict_probabilities(X, result, spec)
    moved = predict_probabilities(perturb(X, attribute, mode, percent), result, spec)
    return float(100.0 * np.mean(moved[mask, mode] - base[mask, mode]))


@dataclass
class MpeTable:
    rows: pd.DataFrame      # attribute, mode, percent, mpe, identified
    model: str
    sample_size: int

    def wide(self) -> pd.DataFrame:
        if self.rows.empty:
            return pd.DataFrame()
        out = self.rows.pivot_table(index=["attribute", "mode"], columns="percent",
                                    values="mpe", sort=False)
        return out

    def to_csv(self) -> str:
        df = self.rows.copy()
        df.insert(0, "model", self.model)
        df.insert(1, "sample_size", self.sample_size)
        return df.to_csv(index=False, lineterminator="\n", float_format="%.17g")

    @classmethod
    def read_csv(cls, path) -> "MpeTable":
        df = pd.read_csv(path, dtype={"model": str, "attribute": str, "mode": str},
                         float_precision="round_trip")
        if df.empty:
            raise ValueError(f"{path}: no MPE rows")
        model, n = str(df["model"].iloc[0]), int(df["sample_size"].iloc[0])
        return cls(df.drop(columns=["model", "sample_size"]).reset_index(drop=True), model, n)

    def to_text(self, decimals: int = 2) -> str:
        if self.rows.empty:
            return f"Marginal probability effects, {self.model}: no rows\n"
        levels = list(dict.fromkeys(self.rows["percent"]))
        head = f"{'Attribute':<18}{'Mode':<20}" + "".join(f"{_pct(p):>9}" for p in levels)
        lines = [f"Marginal probability effects (MPE, %), {self.model}, N = {self.sample_size}",
                 head, "-" * len(head)]
        last = None
        flagged = False
        for (attr, mode), grp in self.rows.groupby(["attribute", "mode"], sort=False):
            label = ATTRIBUTE_LABELS.get(attr, attr) if attr != last else ""
            last = attr
            vals = dict(zip(grp["percent"], grp["mpe"]))
            mark = ""
            if "identified" in grp and not bool(grp["identified"].iloc[0]):
                mark, flagged = " ~", True
            lines.append(f"{label:<18}{Mode.parse(mode).label:<20}"
                         + "".join(f"{fixed_decimals(vals[p], decimals):>9}" for p in levels) + mark)
        if flagged:
            lines.append("~ depends on a coefficient that is not separately identified")
        return "\n".join(lines) + "\n"


def _pct(p: float) -> str:
    return f"{p:+g}%"


def mpe_table(X: DesignMatrix, result: EstimationResult, spec: ModelSpec,
              attributes: Sequence[str], levels: Sequence[float] = DEFAULT_LEVELS,
              include_unavailable: bool = False, threads: int | None = None) -> MpeTable:
    """Grid of MPE cells over attributes x modes using them x levels."""
    cells = []
    for attr in attributes:
        X.index(attr)
        modes = spec.modes_for(attr)
        if not modes:
            raise SpecificationError(f"no term of the model uses attribute {attr!r}")
        cells.extend((attr, m) for m in modes)
    if not cells:
        return MpeTable(pd.DataFrame(columns=["attribute", "mode", "percent", "mpe", "identified"]),
                        result.label, X.n_obs)
    base = predict_probabilities(X, result, spec)

    def run(cell):
        attr, m = cell
        return [mpe(X, result, spec, attr, m, p, include_unavailable, base) for p in levels]

    values = ordered_map(run, cells, resolve_threads(threads))
    loose = set(result.extra.get("unidentified", ()))
    identified = {cell: not any(t.name in loose for t in spec.terms
                                if t.attribute == cell[0] and cell[1] in t.modes)
                  for cell in cells}
    rows = [dict(attribute=a, mode=m.key, percent=float(p), mpe=v, identified=identified[(a, m)])
            for (a, m), vs in zip(cells, values) for p, v in zip(levels, vs)]
    return MpeTable(pd.DataFrame(rows), result.label, X.n_obs)


def parse_levels(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise ValueError(f"cannot parse levels {text!r}") from None
