"""Reading observation files and writing byte-stable JSON."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Sequence

from .domains import REALS, Interval
from .errors import DataParseError, DomainError, EmptyData, ZeroWeightVector
from .solver import WeightedSample
from .verify.report import fmt_real

FORMATS = ("csv", "jsonl")


def _number(raw, what: str, line: int) -> float:
    if isinstance(raw, bool):
        raise DataParseError(f"{what} must be a number, got {raw!r}", line)
    try:
        v = float(raw)
    except (TypeError, ValueError):
        raise DataParseError(f"{what} must be a number, got {raw!r}", line) from None
    if not math.isfinite(v):
        raise DataParseError(f"{what} must be finite, got {raw!r}", line)
    return v


def _read_csv(text: str, column: str) -> list[tuple[int, float, float | None]]:
    reader = csv.reader(text.splitlines())
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise EmptyData("the file is empty") from None
    if "x" not in header:
        raise DataParseError(f"header must contain an 'x' column, got {header}", 1)
    ix = header.index("x")
    iw = header.index(column) if column in header else None
    rows = []
    for rec in reader:
        line = reader.line_num
        if not rec or all(not c.strip() for c in rec):
            continue
        if len(rec) != len(header):
            raise DataParseError(f"expected {len(header)} fields, got {len(rec)}", line)
        x = _number(rec[ix].strip(), "x", line)
        w = _number(rec[iw].strip(), column, line) if iw is not None else None
        rows.append((line, x, w))
    return rows


def _read_jsonl(text: str, column: str) -> list[tuple[int, float, float | None]]:
    rows = []
    for line, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise DataParseError(f"invalid JSON ({exc.msg})", line) from None
        if not isinstance(obj, dict) or "x" not in obj:
            raise DataParseError('each line must be an object with an "x" field', line)
        w = _number(obj[column], column, line) if column in obj else None
        rows.append((line, _number(obj["x"], "x", line), w))
    return rows


def ingest_data(
    path: str | Path,
    format: str = "csv",
    weights: str | Sequence[float] | None = None,
    domain: Interval = REALS,
) -> WeightedSample:
    """Load a weighted sample from a csv or jsonl file.

    ``weights`` is either a column/field name (default ``"weight"``, missing
    means weight 1) or an inline list with one weight per row.
    Observations outside ``domain`` and negative weights are reported together
    with their line numbers.
    """
    if format not in FORMATS:
        raise DomainError(f"format must be one of {FORMATS}, got {format!r}")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise DataParseError(f"not UTF-8 text ({exc.reason})", 1) from None
    column = weights if isinstance(weights, str) else "weight"
    rows = _read_csv(text, column) if format == "csv" else _read_jsonl(text, column)
    if not rows:
        raise EmptyData(f"{path}: no observations")
    if isinstance(weights, str) and any(w is None for _, _, w in rows):
        raise DataParseError(f"weight column {weights!r} not found", rows[0][0])
    if weights is not None and not isinstance(weights, str):
        inline = [float(w) for w in weights]
        if len(inline) != len(rows):
            raise DomainError(f"{len(inline)} inline weights for {len(rows)} observations")
        rows = [(line, x, w) for (line, x, _), w in zip(rows, inline)]
    ws = [1.0 if w is None else w for _, _, w in rows]
    bad_w = [line for (line, _, _), w in zip(rows, ws) if w < 0]
    if bad_w:
        raise DomainError(f"negative weights on lines {bad_w}")
    bad_x = [line for line, x, _ in rows if x not in domain]
    if bad_x:
        raise DomainError(f"observations outside {domain} on lines {bad_x}")
    if not any(w > 0 for w in ws):
        raise ZeroWeightVector("all weights are zero")
    return WeightedSample(tuple(x for _, x, _ in rows), tuple(ws))


# -- stable JSON ------------------------------------------------------------------------


def _encode(obj) -> str:
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return json.dumps(fmt_real(obj))
        return fmt_real(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k), ensure_ascii=False)}: {_encode(v)}"
                               for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    if hasattr(obj, "item"):
        return _encode(obj.item())
    if hasattr(obj, "value"):
        return _encode(obj.value)
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps_stable(obj) -> str:
    """JSON text with every float at 17 significant digits; key order is preserved."""
    return _encode(obj)
