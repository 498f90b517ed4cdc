"""Rebuild detour attributes for every mode from one stated detour.

The respondent states a detour time for the mode they would use. That
time, at the chosen mode's network speed, fixes a detour distance shared
by all modes; each alternative's time, cost and profit follow from the
distance and the network parameters.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace
from typing import Iterable

import numpy as np

from .core import MODES, N_MODES, Dataset, Mode, NetworkParams, ScalingConfig, format_number
from .errors import SpecificationError

ATTRIBUTES = ("asc", "time", "cost", "profit", "income")


def detour_distance(mode: Mode, detour_min: float, net: NetworkParams | None = None) -> float:
    """Distance in km covered by ``detour_min`` minutes at the mode's speed."""
    net = net or NetworkParams()
    if not detour_min > 0:
        raise ValueError(f"detour time must be positive, got {detour_min}")
    return net.speed_kmh[Mode(mode)] * detour_min / 60.0


def alternative_detour_times(distance_km: float, net: NetworkParams | None = None) -> dict[Mode, float]:
    net = net or NetworkParams()
    if distance_km < 0:
        raise ValueError("distance must be non-negative")
    return {m: distance_km / net.speed_kmh[m] * 60.0 for m in MODES}


def detour_cost(mode: Mode, distance_km: float, net: NetworkParams | None = None) -> float:
    """Out-of-pocket cost of the detour in UAH.

    Public transport pays one flat fare per detour; the car pays for fuel;
    walking and cycling are free.
    """
    net = net or NetworkParams()
    if distance_km < 0:
        raise ValueError("distance must be non-negative")
    mode = Mode(mode)
    if mode == Mode.CAR:
        return distance_km * net.fuel_consumption_l_per_km * net.fuel_price_uah_per_l
    return float(net.tariff_uah[mode])


def profit(remuneration_uah: float, cost_uah: float) -> float:
    return remuneration_uah - cost_uah


@dataclass(frozen=True)
class DetourAttributes:
    """Raw per-(observation, mode) detour attributes, modes in column order."""

    ids: tuple[str, ...]
    distance_km: np.ndarray   # (n,)
    time_min: np.ndarray      # (n, 6)
    cost_uah: np.ndarray      # (n, 6)
    profit_uah: np.ndarray    # (n, 6)
    remuneration_uah: np.ndarray  # (n,)


def _cost_matrix(distance: np.ndarray, net: NetworkParams) -> np.ndarray:
    cost = np.zeros((len(distance), N_MODES))
    for m in MODES:
        if m == Mode.CAR:
            cost[:, m] = distance * net.fuel_consumption_l_per_km * net.fuel_price_uah_per_l
        else:
            cost[:, m] = net.tariff_uah[m]
    return cost


def attributes_from_distance(ids, distance, remuneration, chosen=None, stated=None,
                             net: NetworkParams | None = None) -> DetourAttributes:
    """Fan a per-observation detour distance out to every mode.

    When ``chosen`` and ``stated`` are given, the chosen mode's time is
    the stated value itself rather than its reconstruction.
    """
    net = net or NetworkParams()
    distance = np.asarray(distance, dtype=float)
    rem = np.asarray(remuneration, dtype=float)
    time = distance[:, None] / net.speeds()[None, :] * 60.0
    if chosen is not None and stated is not None:
        time[np.arange(len(distance)), chosen] = stated
    cost = _cost_matrix(distance, net)
    return DetourAttributes(ids=tuple(ids), distance_km=distance, time_min=time,
                            cost_uah=cost, profit_uah=rem[:, None] - cost,
                            remuneration_uah=rem)


def reconstruct_attributes(d: Dataset, net: NetworkParams | None = None) -> DetourAttributes:
    net = net or NetworkParams()
    chosen = d.chosen
    stated = d.column("stated_detour_min").astype(float)
    distance = net.speeds()[chosen] * stated / 60.0
    return attributes_from_distance(d.ids, distance, d.column("remuneration_uah"),
                                    chosen, stated, net)


@dataclass(frozen=True)
class DesignMatrix:
    """Scaled attribute tensor ``values[obs, mode, attribute]`` with availability.

    Cells of unavailable modes keep their computed values; only the
    ``available`` mask marks them out.
    """

    ids: tuple[str, ...]
    values: np.ndarray            # (n, 6, n_attributes), scaled
    divisors: np.ndarray          # (n_attributes,)
    available: np.ndarray         # (n, 6) bool
    chosen: np.ndarray            # (n,) mode index
    attributes: tuple[str, ...] = ATTRIBUTES
    distance_km: np.ndarray | None = None

    def __post_init__(self):
        n = len(self.ids)
        if self.values.shape != (n, N_MODES, len(self.attributes)):
            raise ValueError(f"values shape {self.values.shape} inconsistent with "
                             f"{n} observations and {len(self.attributes)} attributes")
        if self.available.shape != (n, N_MODES):
            raise ValueError("availability mask must be (n, 6)")
        if not np.all(self.available[np.arange(n), self.chosen]):
            raise ValueError("chosen mode must be available")

    def __len__(self):
        return len(self.ids)

    @property
    def n_obs(self) -> int:
        return len(self.ids)

    def index(self, attribute: str) -> int:
        try:
            return self.attributes.index(attribute)
        except ValueError:
            raise SpecificationError(f"unknown attribute {attribute!r}; "
                                     f"available: {', '.join(self.attributes)}") from None

    def attribute(self, name: str) -> np.ndarray:
        return self.values[:, :, self.index(name)]

    def raw(self) -> np.ndarray:
        return self.values * self.divisors

    def with_values(self, values: np.ndarray) -> "DesignMatrix":
        return replace(self, values=values)

    def take(self, rows: Iterable[int]) -> "DesignMatrix":
        rows = np.asarray(list(rows), dtype=np.intp)
        return DesignMatrix(
            ids=tuple(self.ids[i] for i in rows), values=self.values[rows],
            divisors=self.divisors, available=self.available[rows],
            chosen=self.chosen[rows], attributes=self.attributes,
            distance_km=None if self.distance_km is None else self.distance_km[rows])

    def block(self, i: int) -> "DesignMatrix":
        """One observation's rows, still shaped as a design matrix."""
        return self.take([i])

    @classmethod
    def from_arrays(cls, values, available, chosen, attributes=ATTRIBUTES,
                    divisors=None, ids=None) -> "DesignMatrix":
        values = np.asarray(values, dtype=float)
        n = values.shape[0]
        if divisors is None:
            divisors = np.ones(len(attributes))
        return cls(
            ids=tuple(ids) if ids is not None else tuple(str(i + 1) for i in range(n)),
            values=values, divisors=np.asarray(divisors, dtype=float),
            available=np.asarray(available, dtype=bool),
            chosen=np.asarray(chosen, dtype=np.intp), attributes=tuple(attributes))


def scaling_divisors(s: ScalingConfig) -> np.ndarray:
    return np.array([1.0, s.detour_time_divisor, s.detour_cost_divisor,
                     s.profit_divisor, s.income_divisor])


def assemble_design(att: DetourAttributes, income_uah, available, chosen,
                    s: ScalingConfig | None = None) -> DesignMatrix:
    s = s or ScalingConfig()
    div = scaling_divisors(s)
    income = np.asarray(income_uah, dtype=float)
    n = len(att.ids)
    values = np.empty((n, N_MODES, len(ATTRIBUTES)))
    values[:, :, 0] = 1.0
    values[:, :, 1] = att.time_min / div[1]
    values[:, :, 2] = att.cost_uah / div[2]
    values[:, :, 3] = att.profit_uah / div[3]
    values[:, :, 4] = (income / div[4])[:, None]
    return DesignMatrix(ids=att.ids, values=values, divisors=div,
                        available=np.array(available, dtype=bool),
                        chosen=np.array(chosen, dtype=np.intp),
                        attributes=ATTRIBUTES, distance_km=att.distance_km)


def build_design_matrix(d: Dataset, net: NetworkParams | None = None,
                        s: ScalingConfig | None = None, spec=None) -> DesignMatrix:
    """Assemble the scaled design matrix for a dataset.

    ``spec`` is optional; when given, every attribute it references must
    be one this module produces.
    """
    if spec is not None:
        for term in spec.terms:
            if term.attribute not in ATTRIBUTES:
                raise SpecificationError(
                    f"term {term.name} uses unknown attribute {term.attribute!r}")
    att = reconstruct_attributes(d, net)
    return assemble_design(att, d.column("income_uah"), d.availability_matrix, d.chosen, s)


ATTRIBUTE_TABLE_COLUMNS = (
    "id", "mode", "available", "detour_km", "detour_min", "detour_cost", "profit",
    "time_scaled", "cost_scaled", "profit_scaled", "income_scaled",
)


def attribute_table_csv(X: DesignMatrix) -> str:
    """One row per observation x mode with raw and scaled attributes."""
    raw = X.raw()
    it, ic, ip, ii = (X.index(a) for a in ("time", "cost", "profit", "income"))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ATTRIBUTE_TABLE_COLUMNS)
    for q, oid in enumerate(X.ids):
        for m in MODES:
            w.writerow([
                oid, m.key, "true" if X.available[q, m] else "false",
                format_number(X.distance_km[q]) if X.distance_km is not None else "",
                format_number(raw[q, m, it]), format_number(raw[q, m, ic]),
                format_number(raw[q, m, ip]),
                format_number(X.values[q, m, it]), format_number(X.values[q, m, ic]),
                format_number(X.values[q, m, ip]), format_number(X.values[q, m, ii]),
            ])
    return buf.getvalue()
