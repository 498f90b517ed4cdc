"""Descriptive summaries of the respondent sample.

All tables are long-format DataFrames. Groups with no respondents keep
their row with count 0 and NaN statistics, so an empty cell is visibly
absent instead of looking like a zero.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from .core import FREQUENCIES, GENDERS, MODES, TRIP_CHAINS, Dataset


@dataclass
class SummaryReport:
    detour: pd.DataFrame          # mode x group: count, share, mean/sd/min/max
    remuneration: pd.DataFrame    # mode x group: quartiles of remuneration
    mode_shares: pd.DataFrame     # group x mode: count and percent
    trip_chain: pd.DataFrame      # scope x group x chain: count and percent
    frequency: pd.DataFrame       # scope x group x level: count and percent
    groups: tuple[str, ...]

    def to_text(self) -> str:
        parts = []
        with pd.option_context("display.width", 160, "display.max_rows", 500,
                               "display.float_format", "{:.2f}".format):
            for title, df in (
                ("Acceptable detour time, minutes", self.detour),
                ("Expected remuneration, UAH", self.remuneration),
                ("Mode shares", self.mode_shares),
                ("Trip-chain integration", self.trip_chain),
                ("Delivery frequency", self.frequency),
            ):
                parts.append(title)
                parts.append(df.to_string(index=False))
                parts.append("")
        return "\n".join(parts)


def _frame(d: Dataset, by_gender: bool) -> pd.DataFrame:
    return pd.DataFrame({
        "group": [o.gender if by_gender else "all" for o in d],
        "mode": [o.chosen_mode.key for o in d],
        "detour": [o.stated_detour_min for o in d],
        "remuneration": [o.remuneration_uah for o in d],
        "trip_chain": [o.trip_chain for o in d],
        "frequency": [o.frequency for o in d],
    })


def _describe(values: np.ndarray) -> dict:
    n = len(values)
    if n == 0:
        return dict(mean=np.nan, sd=np.nan, min=np.nan, max=np.nan)
    # sample standard deviation; a single respondent has zero spread
    sd = float(np.std(values, ddof=1)) if n > 1 else 0.0
    return dict(mean=float(np.mean(values)), sd=sd,
                min=float(np.min(values)), max=float(np.max(values)))


def _breakdown(df: pd.DataFrame, column: str, levels, groups) -> pd.DataFrame:
    rows = []
    scopes = [("sample", df)] + [(m.key, df[df["mode"] == m.key]) for m in MODES]
    for scope, sub in scopes:
        for g in groups:
            cell = sub[sub["group"] == g]
            total = len(cell)
            for level in levels:
                n = int((cell[column] == level).sum())
                rows.append(dict(scope=scope, group=g, level=level, count=n,
                                 percent=100.0 * n / total if total else np.nan))
    return pd.DataFrame(rows)


def summarize(d: Dataset, by_gender: bool = True) -> SummaryReport:
    """Tabulate detours, remuneration, mode shares and trip habits.

    Summaries are permutation invariant: only group-wise counts, order
    statistics and moments enter.
    """
    df = _frame(d, by_gender)
    groups = GENDERS if by_gender else ("all",)

    detour_rows, rem_rows, share_rows = [], [], []
    for m in MODES:
        for g in groups:
            in_group = df["group"] == g
            cell = df[in_group & (df["mode"] == m.key)]
            n_group = int(in_group.sum())
            n = len(cell)
            stats = _describe(np.sort(cell["detour"].to_numpy()))
            detour_rows.append(dict(
                mode=m.key, group=g, count=n,
                share_pct=100.0 * n / n_group if n_group else np.nan, **stats))
            r = np.sort(cell["remuneration"].to_numpy())
            if n:
                q1, med, q3 = np.quantile(r, [0.25, 0.5, 0.75])
                rem_rows.append(dict(mode=m.key, group=g, count=n, min=r[0], q1=q1,
                                     median=med, q3=q3, max=r[-1], mean=float(r.mean())))
            else:
                rem_rows.append(dict(mode=m.key, group=g, count=0, min=np.nan, q1=np.nan,
                                     median=np.nan, q3=np.nan, max=np.nan, mean=np.nan))
    for g in groups:
        sub = df[df["group"] == g]
        for m in MODES:
            n = int((sub["mode"] == m.key).sum())
            share_rows.append(dict(group=g, mode=m.key, count=n,
                                   percent=100.0 * n / len(sub) if len(sub) else np.nan))

    return SummaryReport(
        detour=pd.DataFrame(detour_rows),
        remuneration=pd.DataFrame(rem_rows),
        mode_shares=pd.DataFrame(share_rows),
        trip_chain=_breakdown(df, "trip_chain", TRIP_CHAINS, groups),
        frequency=_breakdown(df, "frequency", FREQUENCIES, groups),
        groups=groups,
    )
