"""Report persistence: canonical JSON, aligned text and CSV gap tables."""

from __future__ import annotations

import csv
import io
from typing import Sequence

from .scenarios import dump_json

__all__ = ["reports_to_json", "reports_to_text", "reports_to_csv", "CSV_COLUMNS"]

CSV_COLUMNS = ("id", "kind", "status", "lhs", "rhs", "gap", "message")


def _document(reports, summary, timing: bool) -> dict:
    return {"summary": summary, "reports": [r.to_dict(timing=timing) for r in reports]}


def reports_to_json(reports: Sequence, summary: dict, timing: bool = True) -> str:
    """Canonical JSON; with ``timing=False`` the text depends only on the inputs."""
    return dump_json(_document(reports, summary, timing))


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.10g}"
    if isinstance(v, list):
        if v and all(isinstance(c, list) for c in v):
            return f"{len(v)} interval" + ("s" if len(v) != 1 else "")
        return "[" + ", ".join(_cell(c) for c in v) + "]" if v else "empty"
    if isinstance(v, dict):
        return "-"
    return str(v)


def reports_to_text(reports: Sequence, summary: dict) -> str:
    rows = [("id", "kind", "status", "lhs", "rhs", "gap", "time[s]")]
    for r in reports:
        d = r.to_dict()
        rows.append(
            (d["id"], d["kind"], d["status"], _cell(d["lhs"]), _cell(d["rhs"]), _cell(d["gap"]), f"{r.wall_time:.3f}")
        )
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    counts = ", ".join(f"{k} {summary[k]}" for k in ("pass", "fail", "vacuous", "error"))
    lines.append("")
    lines.append(f"{summary['total']} scenarios: {counts}")
    return "\n".join(lines) + "\n"


def reports_to_csv(reports: Sequence) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        d = r.to_dict(timing=False)
        w.writerow([d["id"], d["kind"], d["status"], _cell(d["lhs"]), _cell(d["rhs"]), _cell(d["gap"]), d["message"]])
    return buf.getvalue()
