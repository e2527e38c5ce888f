"""Sampled-function files and deterministic CSV/JSON output.

Numbers are written with 17 significant digits (CSV) or Python's
round-trip ``repr`` (JSON) so that identical inputs produce identical
bytes.  Files are written to a temporary sibling and renamed into place.
"""
from __future__ import annotations

import csv
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ParseError
from .funcmodel import FunctionDescriptor

__all__ = [
    "MIN_ROWS",
    "TAIL_FRACTION",
    "load_sampled_function",
    "format_float",
    "csv_text",
    "json_text",
    "write_atomic",
]

MIN_ROWS = 16
#: share of samples on each side used for the power-law tail fit
TAIL_FRACTION = 0.2

_DERIV_COLUMNS = ("f1", "f2", "f3")


def format_float(v) -> str:
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.17g}"


def _parse_rows(path: Path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [(i, row) for i, row in enumerate(csv.reader(fh), start=1)]
    rows = [(i, r) for i, r in rows if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise ParseError("empty file", line=1)
    line, header = rows[0]
    header = [h.strip() for h in header]
    if header[:2] != ["x", "f"]:
        raise ParseError(f"header must start with 'x,f', got {','.join(header)!r}", line=line)
    extra = header[2:]
    if tuple(extra) != _DERIV_COLUMNS[: len(extra)]:
        raise ParseError(f"optional columns must be {','.join(_DERIV_COLUMNS)} in order", line=line)
    data = []
    for line, row in rows[1:]:
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(row)}", line=line)
        try:
            vals = [float(v) for v in row]
        except ValueError as exc:
            raise ParseError(f"not a number: {exc}", line=line) from None
        if not all(math.isfinite(v) for v in vals):
            raise ParseError("non-finite value", line=line)
        data.append((line, vals))
    if len(data) < MIN_ROWS:
        raise ParseError(f"need at least {MIN_ROWS} data rows, got {len(data)}", line=rows[-1][0])
    for (_, prev), (line, cur) in zip(data[:-1], data[1:]):
        if not cur[0] > prev[0]:
            raise ParseError(f"x must be strictly increasing ({cur[0]!r} after {prev[0]!r})", line=line)
    arr = np.array([v for _, v in data])
    return header, arr


def _tail_fit(x, y):
    """Fit ``y ~ s * C / |x|**p`` on one side; returns ``(s, C, p)`` or ``None``."""
    ok = (x != 0) & (y != 0)
    if np.count_nonzero(ok) < 2:
        return None
    xs, ys = np.abs(x[ok]), y[ok]
    signs = np.sign(ys)
    if np.any(signs != signs[-1]) or np.ptp(np.log(xs)) == 0:
        return None
    slope, icpt = np.polyfit(np.log(xs), np.log(np.abs(ys)), 1)
    return float(signs[-1]), float(math.exp(icpt)), float(-slope)


class _Extrapolated:
    """Cubic spline inside ``[x0, x1]``, power law (or zero) outside."""

    def __init__(self, x, y, derivs):
        self.x0, self.x1 = float(x[0]), float(x[-1])
        self.spline = CubicSpline(x, y)
        self.derivs = derivs  # list of splines for f', f'', f''' (or None to use spline derivatives)
        n = max(2, int(math.ceil(TAIL_FRACTION * x.size)))
        self.right = _tail_fit(x[-n:], y[-n:]) if self.x1 > 0 else None
        self.left = _tail_fit(x[:n], y[:n]) if self.x0 < 0 else None

    def describe(self):
        def side(fit):
            if fit is None:
                return "zero"
            s, C, p = fit
            return f"{s * C:.6g}/|x|^{p:.6g}"

        return {"left": side(self.left), "right": side(self.right)}

    def __call__(self, xq, order=0):
        xq = np.asarray(xq, dtype=float)
        out = np.zeros(xq.shape)
        inside = (xq >= self.x0) & (xq <= self.x1)
        if order == 0:
            out[inside] = self.spline(xq[inside])
        elif self.derivs[order - 1] is not None:
            out[inside] = self.derivs[order - 1](xq[inside])
        else:
            out[inside] = self.spline(xq[inside], order)
        for fit, mask in ((self.right, xq > self.x1), (self.left, xq < self.x0)):
            if fit is None or not np.any(mask):
                continue
            s, C, p = fit
            ax = np.abs(xq[mask])
            # d^j/dx^j of s*C*|x|^-p; the sign of x enters once per derivative
            coef = 1.0
            for j in range(order):
                coef *= -(p + j)
            sgn = np.sign(xq[mask]) ** order
            out[mask] = s * C * coef * sgn * ax ** (-p - order)
        return out


def load_sampled_function(path) -> FunctionDescriptor:
    """Build a descriptor from a CSV of samples ``x,f[,f1,f2,f3]``.

    Inside the sample range values come from a cubic spline (derivative
    columns, when present, are splined separately; otherwise spline
    derivatives are used).  Outside, each side continues as ``C/|x|**p``
    fitted to the outer 20% of samples on that side, or as zero when the
    fit is impossible (sign changes or zero samples).  Sup norms are the
    sampled maxima and therefore lower bounds.
    """
    path = Path(path)
    header, arr = _parse_rows(path)
    x, y = arr[:, 0], arr[:, 1]
    derivs = [CubicSpline(x, arr[:, 2 + j]) if 2 + j < arr.shape[1] else None for j in range(3)]
    model = _Extrapolated(x, y, derivs)

    def ev(order):
        return lambda xq: model(xq, order)

    sups = [float(np.max(np.abs(y)))]
    for j in range(3):
        col = arr[:, 2 + j] if 2 + j < arr.shape[1] else model.spline(x, j + 1)
        sups.append(float(np.max(np.abs(col))))
    return FunctionDescriptor(
        path.stem,
        ev(0),
        ev(1),
        ev(2),
        ev(3),
        sup_norms=tuple(sups),
        metadata={
            "source": str(path),
            "rows": int(x.size),
            "derivative_columns": list(header[2:]),
            "extrapolation": model.describe(),
            "sup_norms_are_lower_bounds": True,
        },
    )


def csv_text(columns: Sequence[str], rows: Iterable[Sequence], config: dict) -> str:
    """CSV with a ``# config:`` provenance line, a header and 17-digit floats."""
    lines = ["# config: " + json.dumps(config, sort_keys=True), ",".join(columns)]
    for row in rows:
        cells = []
        for v in row:
            if isinstance(v, (bool, np.bool_)):
                cells.append("true" if v else "false")
            elif isinstance(v, (int, np.integer)):
                cells.append(str(int(v)))
            elif v is None:
                cells.append("")
            elif isinstance(v, str):
                cells.append(v)
            else:
                cells.append(format_float(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def json_text(payload: dict, config: dict) -> str:
    """UTF-8 JSON with stable key order and the config embedded."""
    doc = {"config": config, **payload}
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_atomic(path, text: str) -> Path:
    """Write ``text`` to a temporary file next to ``path`` and rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
    return path
