"""Fixed-width report of coefficient and MPE tables, with a CSV twin.

Every number in the CSV is written with the same precision as the text,
so the two agree digit for digit.
"""
from __future__ import annotations

import csv
import io
import textwrap
from typing import Sequence

from .core import fixed_decimals as _num
from .mpe import MpeTable
from .results import EstimationResult

REPORT_COLUMNS = ("block", "model", "name", "mode", "percent", "value",
                  "robust_se", "robust_t", "stars")


def _footer(r: EstimationResult) -> list[tuple[str, str]]:
    rows = [
        ("Number of parameters", str(r.n_parameters)),
        ("Sample size", str(r.sample_size)),
        ("Null log-likelihood", _num(r.ll_null, 3)),
        ("Final log-likelihood", _num(r.ll_final, 3)),
        ("Adjusted rho-square", _num(r.adjusted_rho_sq, 3)),
        ("Converged", "yes" if r.converged else "no"),
    ]
    if r.mixture:
        rows.append(("Draws", f"{r.n_draws} {r.draw_type}, seed {r.seed}"))
    return rows


def render_result(r: EstimationResult, decimals: int = 3) -> tuple[str, list[list[str]]]:
    """Text block and CSV rows for one estimation result."""
    width = max([len("Coefficient")] + [len(n) for n in r.names]) + 2
    head = f"{'Coefficient':<{width}}{'Value':>10}{'Rob. SE':>10}{'Rob. t':>10}  "
    lines = [f"{r.label}", head.rstrip(), "-" * (len(head) + 3)]
    csv_rows = []
    for row in r.coefficient_rows():
        v, se, t = (_num(row[k], decimals) for k in ("value", "robust_se", "robust_t"))
        lines.append(f"{row['name']:<{width}}{v:>10}{se:>10}{t:>10}  {row['stars']}".rstrip())
        csv_rows.append(["coefficient", r.label, row["name"], "", "", v, se, t, row["stars"]])
    lines.append("-" * (len(head) + 3))
    for key, value in _footer(r):
        lines.append(f"{key:<24}{value}")
        csv_rows.append(["statistic", r.label, key, "", "", value, "", "", ""])
    unidentified = r.extra.get("unidentified", ())
    if unidentified:
        note = ("Not separately identified (standard errors undefined): "
                + ", ".join(unidentified))
        lines.extend(textwrap.wrap(note, width=len(head) + 3))
    lines.append("Significance: *** p < 0.005, ** p < 0.01, * p < 0.05 (robust, two-sided)")
    return "\n".join(lines) + "\n", csv_rows


def _mpe_csv_rows(table: MpeTable, decimals: int) -> list[list[str]]:
    return [["mpe", table.model, row.attribute, row.mode, _num(row.percent, 0),
             _num(row.mpe, decimals), "", "", ""]
            for row in table.rows.itertuples(index=False)]


def render_report(results: Sequence[EstimationResult], mpes: Sequence[MpeTable] = (),
                  coefficient_decimals: int = 3, mpe_decimals: int = 2) -> tuple[str, str]:
    """Text report and its CSV counterpart."""
    if not results:
        raise ValueError("nothing to report: no estimation results")
    blocks, rows = [], []
    for r in results:
        text, r_rows = render_result(r, coefficient_decimals)
        blocks.append(text)
        rows.extend(r_rows)
    for table in mpes:
        blocks.append(table.to_text(mpe_decimals))
        rows.extend(_mpe_csv_rows(table, mpe_decimals))
    if len(results) > 1:
        blocks.append(_comparison(results))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    w.writerows(rows)
    return "\n".join(blocks), buf.getvalue()


def _comparison(results: Sequence[EstimationResult]) -> str:
    width = max(len(r.label) for r in results) + 2
    lines = ["Model comparison", f"{'Model':<{width}}{'K':>4}{'Final LL':>12}{'Adj. rho-sq':>13}"]
    for r in results:
        lines.append(f"{r.label:<{width}}{r.n_parameters:>4}{_num(r.ll_final, 3):>12}"
                     f"{_num(r.adjusted_rho_sq, 3):>13}")
    return "\n".join(lines) + "\n"
