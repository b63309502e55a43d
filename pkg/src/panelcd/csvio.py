"""Balanced-panel CSV ingestion and serialization.

Schema: header ``unit,time,y,x1,...,xk`` with one row per (unit, time).
Every unit must cover the same set of time values.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .errors import DuplicateRow, ParseError, UnbalancedPanel
from .panel import PanelData

FLOAT_FORMAT = "%.17g"


def read_panel_csv(path: str | Path) -> PanelData:
    """Parse a panel CSV into PanelData, verifying balancedness.

    Rows are sorted by (unit, time); unit ids sort numerically when every
    id parses as an integer, lexicographically otherwise.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        _check_header(path, header)
        k_x = len(header) - 3
        cells: dict[tuple[str, int], np.ndarray] = {}
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise ParseError(
                    f"{path}: row {lineno} has {len(row)} fields, expected {len(header)}"
                )
            unit = row[0].strip()
            time = _parse_int(path, lineno, "time", row[1])
            values = np.array(
                [
                    _parse_float(path, lineno, header[j], row[j])
                    for j in range(2, len(header))
                ]
            )
            key = (unit, time)
            if key in cells:
                raise DuplicateRow(
                    f"{path}: duplicate (unit, time) = {key} at row {lineno}"
                )
            cells[key] = values

    if not cells:
        raise ParseError(f"{path}: no data rows")
    units = sorted({u for u, _ in cells}, key=_unit_sort_key({u for u, _ in cells}))
    times = sorted({t for _, t in cells})
    missing = [
        (u, t) for u in units for t in times if (u, t) not in cells
    ]
    if missing:
        raise UnbalancedPanel(
            f"{path}: panel is unbalanced, missing cells {missing[:5]}"
            + ("..." if len(missing) > 5 else "")
        )
    n, T = len(units), len(times)
    y = np.empty((n, T))
    x = np.empty((n, T, k_x))
    for i, u in enumerate(units):
        for j, t in enumerate(times):
            vals = cells[(u, t)]
            y[i, j] = vals[0]
            x[i, j, :] = vals[1:]
    return PanelData(y=y, x=x)


def write_panel_csv(data: PanelData, path: str | Path) -> None:
    """Serialize a panel with 1-based integer unit and time labels."""
    path = Path(path)
    header = ["unit", "time", "y"] + [f"x{j}" for j in range(1, data.k_x + 1)]
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(data.n):
            for t in range(data.T):
                row = [str(i + 1), str(t + 1), FLOAT_FORMAT % data.y[i, t]]
                row += [FLOAT_FORMAT % v for v in data.x[i, t]]
                writer.writerow(row)


def _check_header(path, header):
    if len(header) < 4 or header[:3] != ["unit", "time", "y"]:
        raise ParseError(
            f"{path}: header must start with unit,time,y and at least one "
            f"regressor column, got {header}"
        )
    expected = [f"x{j}" for j in range(1, len(header) - 2)]
    if header[3:] != expected:
        raise ParseError(
            f"{path}: regressor columns must be {expected}, got {header[3:]}"
        )


def _unit_sort_key(units):
    try:
        numeric = {u: int(u) for u in units}
    except ValueError:
        return lambda u: u
    return lambda u: numeric[u]


def _parse_int(path, lineno, col, text):
    try:
        return int(text.strip())
    except ValueError:
        raise ParseError(
            f"{path}: row {lineno}, column '{col}': not an integer: {text!r}"
        ) from None


def _parse_float(path, lineno, col, text):
    try:
        value = float(text.strip())
    except ValueError:
        raise ParseError(
            f"{path}: row {lineno}, column '{col}': not a number: {text!r}"
        ) from None
    if not np.isfinite(value):
        raise ParseError(
            f"{path}: row {lineno}, column '{col}': non-finite value {text!r}"
        )
    return value
