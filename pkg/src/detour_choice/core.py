"""Domain types, the dataset container and its CSV form.

Modes carry a stable integer index used as the column position in every
per-mode array of the package.
"""
from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from enum import IntEnum
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    EmptyDatasetError,
    ParseError,
    RangeWarning,
    SchemaError,
    ValidationError,
)


class Mode(IntEnum):
    WALKING = 0
    BIKE = 1
    CAR = 2
    BUS = 3
    METRO = 4
    ELECTRIC_GROUND_PT = 5  # tram and trolleybus merged

    @property
    def key(self) -> str:
        return self.name.lower()

    @property
    def label(self) -> str:
        return _LABELS[self]

    @classmethod
    def parse(cls, text: str) -> "Mode":
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown mode {text!r}") from None


_LABELS = {
    Mode.WALKING: "Walking",
    Mode.BIKE: "Bike",
    Mode.CAR: "Car",
    Mode.BUS: "Bus",
    Mode.METRO: "Metro",
    Mode.ELECTRIC_GROUND_PT: "Electric ground PT",
}

MODES: tuple[Mode, ...] = tuple(Mode)
N_MODES = len(MODES)

GENDERS = ("female", "male")
AGE_BANDS = ("18-24", "25-34", "35-44", "45+")
TRIP_CHAINS = ("HW", "WH", "WG", "HH")
FREQUENCIES = (
    "everyday",
    "several_per_week",
    "once_per_week",
    "several_per_month",
    "once_per_month",
    "less_than_monthly",
)

# Monthly wage bands (UAH) and the value each band is encoded as.
INCOME_BANDS: tuple[tuple[str, float], ...] = (
    ("<5000", 2500.0),
    ("5000-9999", 7500.0),
    ("10000-19999", 15000.0),
    ("20000-29999", 25000.0),
    ("30000-39999", 35000.0),
    ("40000-49999", 45000.0),
    (">=50000", 55000.0),
)

DETOUR_RANGE_MIN = (15.0, 60.0)
REMUNERATION_RANGE_UAH = (50.0, 120.0)


def income_band_midpoint(band: str, top_band_value: float = 55000.0) -> float:
    """Encode a wage band label as a single income value in UAH."""
    for label, value in INCOME_BANDS:
        if label == band:
            return top_band_value if label == ">=50000" else value
    raise ValueError(f"unknown income band {band!r}")


@dataclass(frozen=True)
class NetworkParams:
    """Mode speeds and out-of-pocket prices used to rebuild detours.

    Defaults are the simulated Kharkiv network values. The car fuel
    consumption rate is not a published figure; 0.08 L/km is a typical
    compact car and is meant to be overridden for sensitivity runs.
    """

    speed_kmh: Mapping[Mode, float] = field(
        default_factory=lambda: {
            Mode.WALKING: 4.0,
            Mode.BIKE: 25.0,
            Mode.CAR: 23.0,
            Mode.BUS: 9.0,
            Mode.METRO: 13.0,
            Mode.ELECTRIC_GROUND_PT: 7.5,
        }
    )
    tariff_uah: Mapping[Mode, float] = field(
        default_factory=lambda: {
            Mode.WALKING: 0.0,
            Mode.BIKE: 0.0,
            Mode.CAR: 0.0,
            Mode.BUS: 10.0,
            Mode.METRO: 8.0,
            Mode.ELECTRIC_GROUND_PT: 6.0,
        }
    )
    fuel_price_uah_per_l: float = 27.0
    fuel_consumption_l_per_km: float = 0.08

    def __post_init__(self):
        for m in MODES:
            if m not in self.speed_kmh or not self.speed_kmh[m] > 0:
                raise ValueError(f"speed for {m.key} must be positive")
            if m not in self.tariff_uah or self.tariff_uah[m] < 0:
                raise ValueError(f"tariff for {m.key} must be non-negative")
        for m in (Mode.WALKING, Mode.BIKE, Mode.CAR):
            if self.tariff_uah[m] != 0:
                raise ValueError(f"{m.key} cannot carry a fare")
        if not self.fuel_price_uah_per_l > 0:
            raise ValueError("fuel price must be positive")
        if not self.fuel_consumption_l_per_km > 0:
            raise ValueError("fuel consumption must be positive")

    def speeds(self) -> np.ndarray:
        return np.array([self.speed_kmh[m] for m in MODES], dtype=float)


@dataclass(frozen=True)
class ScalingConfig:
    """Divisors applied to raw attributes before estimation."""

    detour_time_divisor: float = 10.0
    detour_cost_divisor: float = 10.0
    profit_divisor: float = 100.0
    income_divisor: float = 10000.0

    def __post_init__(self):
        for name in ("detour_time_divisor", "detour_cost_divisor",
                     "profit_divisor", "income_divisor"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")


@dataclass(frozen=True)
class Observation:
    id: str
    gender: str
    age_band: str
    income_uah: float
    car_available: bool
    chosen_mode: Mode
    stated_detour_min: float
    remuneration_uah: float
    trip_chain: str
    frequency: str

    def __post_init__(self):
        if self.gender not in GENDERS:
            raise ValidationError(f"{self.id}: gender must be one of {GENDERS}")
        if self.age_band not in AGE_BANDS:
            raise ValidationError(f"{self.id}: unknown age band {self.age_band!r}")
        if self.trip_chain not in TRIP_CHAINS:
            raise ValidationError(f"{self.id}: unknown trip chain {self.trip_chain!r}")
        if self.frequency not in FREQUENCIES:
            raise ValidationError(f"{self.id}: unknown frequency {self.frequency!r}")
        for name in ("income_uah", "stated_detour_min", "remuneration_uah"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValidationError(f"{self.id}: {name} must be positive, got {v}")
        if self.chosen_mode == Mode.CAR and not self.car_available:
            raise ValidationError(
                f"{self.id}: car chosen but no car available in household")

    def in_survey_range(self) -> bool:
        lo, hi = DETOUR_RANGE_MIN
        rlo, rhi = REMUNERATION_RANGE_UAH
        return (lo <= self.stated_detour_min <= hi
                and rlo <= self.remuneration_uah <= rhi)


@dataclass(frozen=True)
class Dataset:
    """Immutable, ordered collection of respondents.

    Car availability follows the household flag; every other mode is
    available to everyone, so each choice set has five or six members.
    """

    observations: tuple[Observation, ...]

    def __post_init__(self):
        object.__setattr__(self, "observations", tuple(self.observations))
        if not self.observations:
            raise EmptyDatasetError()
        seen = set()
        for o in self.observations:
            if o.id in seen:
                raise ValidationError(f"duplicate observation id {o.id!r}")
            seen.add(o.id)

    def __len__(self):
        return len(self.observations)

    def __iter__(self):
        return iter(self.observations)

    @cached_property
    def ids(self) -> tuple[str, ...]:
        return tuple(o.id for o in self.observations)

    @cached_property
    def availability_matrix(self) -> np.ndarray:
        av = np.ones((len(self), N_MODES), dtype=bool)
        av[:, Mode.CAR] = [o.car_available for o in self.observations]
        av.setflags(write=False)
        return av

    @property
    def availability(self) -> dict[tuple[str, Mode], bool]:
        av = self.availability_matrix
        return {(oid, m): bool(av[i, m])
                for i, oid in enumerate(self.ids) for m in MODES}

    @cached_property
    def chosen(self) -> np.ndarray:
        out = np.array([int(o.chosen_mode) for o in self.observations], dtype=np.intp)
        out.setflags(write=False)
        return out

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(o, name) for o in self.observations])

    def subset(self, mask: Sequence[bool]) -> "Dataset":
        return Dataset(tuple(o for o, keep in zip(self.observations, mask) if keep))


CSV_COLUMNS = (
    "id", "gender", "age_band", "income_uah", "car_available", "chosen_mode",
    "stated_detour_min", "remuneration_uah", "trip_chain", "frequency",
)
_NUMERIC = ("income_uah", "stated_detour_min", "remuneration_uah")


def format_number(x: float) -> str:
    """Shortest text that parses back to exactly ``x``."""
    x = float(x)
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def fixed_decimals(x: float, decimals: int) -> str:
    """Fixed-point text; a value that rounds to zero never shows a minus sign."""
    text = f"{x:.{decimals}f}"
    return text[1:] if text.startswith("-") and float(text) == 0 else text


def _parse_bool(text: str, row: int, col: str) -> bool:
    t = text.strip().lower()
    if t == "true":
        return True
    if t == "false":
        return False
    raise ParseError(f"row {row}: column {col!r} expects true/false, got {text!r}")


def parse_rows(rows: Iterable[Mapping[str, str]], header: Sequence[str] | None):
    if header is None:
        raise EmptyDatasetError()
    missing = [c for c in CSV_COLUMNS if c not in header]
    if missing:
        raise SchemaError(f"missing column {missing[0]!r}")
    out = []
    for k, row in enumerate(rows, start=1):
        vals = {}
        for col in _NUMERIC:
            raw = row[col]
            try:
                v = float(raw)
            except (TypeError, ValueError):
                raise ParseError(
                    f"row {k}: column {col!r} is not numeric: {raw!r}") from None
            if not math.isfinite(v):
                raise ParseError(f"row {k}: column {col!r} is not finite: {raw!r}")
            vals[col] = v
        try:
            mode = Mode.parse(row["chosen_mode"])
        except ValueError as exc:
            raise ParseError(f"row {k}: {exc}") from None
        car = _parse_bool(row["car_available"], k, "car_available")
        oid = row["id"].strip()
        try:
            out.append(Observation(
                id=oid,
                gender=row["gender"].strip().lower(),
                age_band=row["age_band"].strip(),
                income_uah=vals["income_uah"],
                car_available=car,
                chosen_mode=mode,
                stated_detour_min=vals["stated_detour_min"],
                remuneration_uah=vals["remuneration_uah"],
                trip_chain=row["trip_chain"].strip(),
                frequency=row["frequency"].strip(),
            ))
        except ValidationError as exc:
            raise ValidationError(f"row {k} (id {oid}): {exc}") from None
    if not out:
        raise EmptyDatasetError()
    outside = [o.id for o in out if not o.in_survey_range()]
    if outside:
        shown = ", ".join(outside[:5]) + (", ..." if len(outside) > 5 else "")
        warnings.warn(
            f"{len(outside)} rows have detour or remuneration outside the survey "
            f"option range ({shown})", RangeWarning, stacklevel=3)
    return Dataset(tuple(out))


def load_dataset(path: str | Path) -> Dataset:
    """Read and validate a respondent CSV.

    Raises
    ------
    FileNotFoundError
        The path does not exist.
    SchemaError
        A required column is missing from the header.
    ParseError
        A numeric or boolean cell cannot be parsed (message names the row).
    ValidationError
        A record breaks an invariant, e.g. car chosen without a car.
    EmptyDatasetError
        Header only.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        return parse_rows(reader, reader.fieldnames)


def dataset_to_csv(d: Dataset) -> str:
    """Canonical CSV text: fixed column order, shortest round-trip numbers."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for o in d:
        w.writerow([
            o.id, o.gender, o.age_band, format_number(o.income_uah),
            "true" if o.car_available else "false", o.chosen_mode.key,
            format_number(o.stated_detour_min), format_number(o.remuneration_uah),
            o.trip_chain, o.frequency,
        ])
    return buf.getvalue()


def write_dataset(d: Dataset, path: str | Path) -> None:
    Path(path).write_text(dataset_to_csv(d), encoding="utf-8")
