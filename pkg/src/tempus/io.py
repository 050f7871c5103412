"""CSV and JSON emission and ingestion.

CSV files may start with ``#`` metadata lines; readers skip them. Floats are
written with ``format(x, '.{precision}g')``. At precision 17 every double
round-trips exactly; at 15 or fewer, re-emitting a reloaded file reproduces
it byte for byte (for magnitudes well below the largest double, which
rounding to few digits would push to infinity).
"""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import InputFormatError, InvalidModel
from .response_models import SampledResponse
from .temporal_core import TemporalFunction

DEFAULT_PRECISION = 17


def fmt(x, precision=DEFAULT_PRECISION):
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), f".{precision}g")


def csv_text(header, rows, precision=DEFAULT_PRECISION, meta=None):
    """Render rows as CSV with optional ``# key: value`` metadata lines."""
    buf = io.StringIO()
    for key, value in (meta or {}).items():
        buf.write(f"# {key}: {value}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else fmt(v, precision) for v in row])
    return buf.getvalue()


def _jsonable(obj, precision):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v, precision) for k, v in obj.items()}
    if isinstance(obj, tuple) and hasattr(obj, "_asdict"):
        return _jsonable(obj._asdict(), precision)
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v, precision) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
        return float(fmt(x, precision))
    if isinstance(obj, complex):
        return {"re": _jsonable(obj.real, precision), "im": _jsonable(obj.imag, precision)}
    return obj


def json_text(obj, precision=DEFAULT_PRECISION):
    """Deterministic JSON: sorted keys, floats rounded to ``precision`` digits."""
    return json.dumps(_jsonable(obj, precision), sort_keys=True, indent=2) + "\n"


def _data_rows(text):
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        rows.append((lineno, next(csv.reader([s]))))
    return rows


def _float(cell, row, name):
    try:
        return float(cell)
    except ValueError:
        raise InputFormatError(f"row {row}: {name} {cell!r} is not a number", row=row) from None


def parse_sampled_response(text) -> SampledResponse:
    """Parse ``omega,re,im`` CSV text (header optional) into a :class:`SampledResponse`.

    Diagnostics name the 1-based line number of the offending row.
    """
    rows = _data_rows(text)
    if rows and rows[0][1] and rows[0][1][0].strip().lower() == "omega":
        rows = rows[1:]
    omega, values = [], []
    prev = None
    for lineno, cells in rows:
        if len(cells) != 3:
            raise InputFormatError(f"row {lineno}: expected 3 columns, got {len(cells)}", row=lineno)
        w, re, im = (_float(c, lineno, n) for c, n in zip(cells, ("omega", "re", "im")))
        if not all(math.isfinite(v) for v in (w, re, im)):
            raise InputFormatError(f"row {lineno}: non-finite value", row=lineno)
        if prev is not None and w == prev:
            raise InputFormatError(f"row {lineno}: duplicate omega {w!r}", row=lineno)
        if prev is not None and w < prev:
            raise InputFormatError(f"row {lineno}: omega {w!r} not increasing", row=lineno)
        if re == 0 and im == 0:
            raise InputFormatError(f"row {lineno}: |S| = 0, log-derivative undefined", row=lineno)
        prev = w
        omega.append(w)
        values.append(complex(re, im))
    try:
        return SampledResponse(np.array(omega), np.array(values))
    except InvalidModel as exc:
        raise InputFormatError(str(exc)) from None


def load_sampled_response(path) -> SampledResponse:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc.strerror}") from None
    return parse_sampled_response(text)


def sampled_response_csv(data: SampledResponse, precision=DEFAULT_PRECISION):
    rows = zip(data.omega, data.value.real, data.value.imag)
    return csv_text(["omega", "re", "im"], rows, precision)


TEMPORAL_HEADER = ["omega", "tau1", "tau2", "masked"]


def temporal_csv(tf: TemporalFunction, precision=DEFAULT_PRECISION, meta=None):
    rows = zip(tf.omega, tf.tau1, tf.tau2, tf.masked)
    return csv_text(TEMPORAL_HEADER, rows, precision, meta)


def parse_temporal_csv(text) -> TemporalFunction:
    rows = _data_rows(text)
    if not rows or [c.strip() for c in rows[0][1]] != TEMPORAL_HEADER:
        raise InputFormatError("expected header omega,tau1,tau2,masked")
    cols = [[], [], [], []]
    for lineno, cells in rows[1:]:
        if len(cells) != 4:
            raise InputFormatError(f"row {lineno}: expected 4 columns", row=lineno)
        for j, (c, n) in enumerate(zip(cells, TEMPORAL_HEADER)):
            cols[j].append(_float(c, lineno, n))
    try:
        return TemporalFunction(np.array(cols[0]), np.array(cols[1]), np.array(cols[2]),
                                np.array(cols[3]) != 0)
    except ValueError as exc:
        raise InputFormatError(str(exc)) from None
