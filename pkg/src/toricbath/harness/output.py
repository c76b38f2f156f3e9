"""Serialisation of sweep, threshold and bath results to CSV or JSON bytes."""

import csv
import io
import json
import math

from .sweep import PointResult, SweepResult

SWEEP_COLUMNS = ("L", "param", "trials", "failures", "rate", "ci_lo", "ci_hi")
FORMATS = ("csv", "json")


def _point_row(p: PointResult):
    lo, hi = p.interval
    return {"L": p.L, "param": p.param, "trials": p.trials, "failures": p.failures,
            "rate": p.rate, "ci_lo": lo, "ci_hi": hi}


def _csv_bytes(columns, rows) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue().encode("utf-8")


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else str(value)
    return str(value)


def _json_bytes(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, indent=1, allow_nan=True) + "\n").encode("utf-8")


def _check_format(fmt):
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")


def emit_results(result: SweepResult, fmt: str = "csv") -> bytes:
    """Encode a sweep; identical results always give identical bytes."""
    _check_format(fmt)
    rows = [_point_row(p) for p in result.points]
    if fmt == "csv":
        return _csv_bytes(SWEEP_COLUMNS, rows)
    return _json_bytes({"model": result.model, "axis": result.axis,
                        "decoder": result.decoder, "points": rows})


def read_results_json(data) -> SweepResult:
    """Inverse of ``emit_results(..., "json")``."""
    obj = json.loads(data)
    points = [PointResult(int(r["L"]), float(r["param"]), int(r["trials"]), int(r["failures"]))
              for r in obj["points"]]
    return SweepResult(obj["model"], obj["axis"], obj["decoder"], points)


def emit_threshold(result, fmt: str = "csv") -> bytes:
    """Encode a threshold search: one row per candidate value tried."""
    _check_format(fmt)
    columns = ("value", "above", "resolved", "L_small", "trials_small", "failures_small",
               "L_large", "trials_large", "failures_large")
    rows = [{"value": d.value, "above": int(d.above), "resolved": int(d.resolved),
             "L_small": d.small.L, "trials_small": d.small.trials,
             "failures_small": d.small.failures, "L_large": d.large.L,
             "trials_large": d.large.trials, "failures_large": d.large.failures}
            for d in result.decisions]
    if fmt == "csv":
        return _csv_bytes(columns, rows)
    return _json_bytes({"axis": result.axis, "estimate": result.estimate,
                        "interval": list(result.interval), "bracket": list(result.bracket),
                        "decisions": rows})


def emit_table(columns, rows, fmt: str = "csv") -> bytes:
    """Generic table of dict rows (used by the bath commands)."""
    _check_format(fmt)
    rows = list(rows)
    if fmt == "csv":
        return _csv_bytes(columns, rows)
    return _json_bytes([{c: r[c] for c in columns} for r in rows])
