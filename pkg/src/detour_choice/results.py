"""Estimation results and their on-disk CSV form."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import format_number
from .inference import p_values, stars


def adjusted_rho_square(ll_null: float, ll_final: float, k: int) -> float:
    """``1 - (LL_final - K) / LL_null``, penalizing the fit for K parameters."""
    if ll_null == 0:
        raise ZeroDivisionError("null log-likelihood is zero")
    return 1.0 - (ll_final - k) / ll_null


@dataclass
class EstimationResult:
    names: tuple[str, ...]
    values: np.ndarray
    robust_covariance: np.ndarray
    ll_null: float
    ll_final: float
    sample_size: int
    converged: bool
    iterations: int
    gradient_norm: float
    model: str = "custom"
    mixture: bool = False
    n_draws: int | None = None
    draw_type: str | None = None
    seed: int | None = None
    message: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def parameters(self) -> dict[str, float]:
        return {n: float(v) for n, v in zip(self.names, self.values)}

    @property
    def n_parameters(self) -> int:
        return len(self.names)

    @property
    def robust_se(self) -> np.ndarray:
        return np.sqrt(np.clip(np.diag(self.robust_covariance), 0.0, None))

    @property
    def robust_t(self) -> np.ndarray:
        se = self.robust_se
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(se > 0, self.values / se, np.nan)

    @property
    def adjusted_rho_sq(self) -> float:
        return adjusted_rho_square(self.ll_null, self.ll_final, self.n_parameters)

    @property
    def label(self) -> str:
        return f"{self.model} {'mixture MNL' if self.mixture else 'MNL'}"

    def coefficient_rows(self) -> list[dict]:
        t = self.robust_t
        p = p_values(t)
        return [dict(name=n, value=float(v), robust_se=float(s), robust_t=float(tt),
                     p_value=float(pp), stars=stars(tt))
                for n, v, s, tt, pp in zip(self.names, self.values, self.robust_se, t, p)]

    def statistics(self) -> dict:
        return {
            "model": self.model,
            "mixture": "true" if self.mixture else "false",
            "n_parameters": self.n_parameters,
            "sample_size": self.sample_size,
            "ll_null": self.ll_null,
            "ll_final": self.ll_final,
            "adjusted_rho_sq": self.adjusted_rho_sq,
            "converged": "true" if self.converged else "false",
            "iterations": self.iterations,
            "gradient_norm": self.gradient_norm,
            "n_draws": "" if self.n_draws is None else self.n_draws,
            "draw_type": self.draw_type or "",
            "seed": "" if self.seed is None else self.seed,
            "unidentified": ";".join(self.extra.get("unidentified", ())),
        }


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format_number(v)
    return str(v)


def coefficients_csv(r: EstimationResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = ("name", "value", "robust_se", "robust_t", "p_value", "stars")
    w.writerow(cols)
    for row in r.coefficient_rows():
        w.writerow([_fmt(row[c]) for c in cols])
    return buf.getvalue()


def statistics_csv(r: EstimationResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("key", "value"))
    for k, v in r.statistics().items():
        w.writerow((k, _fmt(v)))
    return buf.getvalue()


def covariance_csv(r: EstimationResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("name",) + tuple(r.names))
    for n, row in zip(r.names, r.robust_covariance):
        w.writerow([n] + [format_number(x) for x in row])
    return buf.getvalue()


def sibling_paths(path: str | Path) -> tuple[Path, Path, Path]:
    """Coefficient, statistics and covariance file paths for a result stem."""
    path = Path(path)
    stem = path.with_suffix("") if path.suffix == ".csv" else path
    return (stem.with_name(stem.name + ".csv"),
            stem.with_name(stem.name + "_stats.csv"),
            stem.with_name(stem.name + "_cov.csv"))


def write_result(r: EstimationResult, path: str | Path) -> Path:
    coef, st, cov = sibling_paths(path)
    coef.parent.mkdir(parents=True, exist_ok=True)
    coef.write_text(coefficients_csv(r), encoding="utf-8")
    st.write_text(statistics_csv(r), encoding="utf-8")
    cov.write_text(covariance_csv(r), encoding="utf-8")
    return coef


def read_result(path: str | Path) -> EstimationResult:
    coef, st, cov = sibling_paths(path)
    with coef.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    names = tuple(r["name"] for r in rows)
    values = np.array([float(r["value"]) for r in rows])
    with st.open(newline="", encoding="utf-8") as fh:
        s = {r["key"]: r["value"] for r in csv.DictReader(fh)}
    if cov.exists():
        with cov.open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            next(reader)
            covariance = np.array([[float(x) for x in row[1:]] for row in reader])
    else:
        covariance = np.diag([float(r["robust_se"]) ** 2 for r in rows])
    return EstimationResult(
        names=names, values=values, robust_covariance=covariance,
        ll_null=float(s["ll_null"]), ll_final=float(s["ll_final"]),
        sample_size=int(s["sample_size"]), converged=s["converged"] == "true",
        iterations=int(s["iterations"]), gradient_norm=float(s["gradient_norm"]),
        model=s["model"], mixture=s["mixture"] == "true",
        n_draws=int(s["n_draws"]) if s.get("n_draws") else None,
        draw_type=s.get("draw_type") or None,
        seed=int(s["seed"]) if s.get("seed") else None,
        extra={"unidentified": tuple(s["unidentified"].split(";"))} if s.get("unidentified") else {},
    )
