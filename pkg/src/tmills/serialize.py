"""CSV / JSON rendering for reports.

Floats are written with 17 significant digits in CSV so every double
round-trips; JSON relies on ``repr`` which already does.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, is_dataclass
from typing import Any, Iterable, Sequence

from .verify import SweepReport

SWEEP_CSV_HEADER = ("suite", "nu", "a", "lhs", "rhs", "slack", "oracle_err", "flag")


def fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.17g}"
    return str(value)


def csv_table(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def sweep_csv(report: SweepReport) -> str:
    return csv_table(
        SWEEP_CSV_HEADER,
        ((r.suite, r.nu, r.a, r.lhs, r.rhs, r.slack, r.oracle_err, r.flag) for r in report.rows),
    )


def to_json(obj: Any) -> str:
    if isinstance(obj, SweepReport):
        obj = obj.to_dict()
    elif is_dataclass(obj):
        obj = asdict(obj)
    return json.dumps(obj, indent=2) + "\n"


def records_csv(records: Sequence[Any]) -> str:
    """CSV for a list of flat dataclasses or dicts sharing one schema."""
    dicts = [asdict(r) if is_dataclass(r) else dict(r) for r in records]
    header = list(dicts[0]) if dicts else []
    return csv_table(header, ([d[k] for k in header] for d in dicts))
