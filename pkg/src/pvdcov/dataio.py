"""CSV input and output for data matrices and estimates.

Floats are written with ``repr`` so a written matrix reads back bit-exactly.
"""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path

import numpy as np

from .errors import DataFormatError, InvalidArgumentError

__all__ = ["read_data_csv", "write_matrix_csv", "write_rows_csv", "format_value"]

HEADER_MODES = ("auto", "yes", "no")


def format_value(v) -> str:
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return "nan" if math.isnan(v) else repr(v)
    if isinstance(v, (np.integer, np.bool_)):
        return str(v.item())
    return str(v)


def _parse_row(row: list[str], line: int) -> list[float]:
    out = []
    for col, cell in enumerate(row, start=1):
        try:
            v = float(cell)
        except ValueError:
            raise DataFormatError(f"column {col}: {cell!r} is not a number", line) from None
        if not math.isfinite(v):
            raise DataFormatError(f"column {col}: non-finite value {cell!r}", line)
        out.append(v)
    return out


def _numeric(row: list[str]) -> bool:
    try:
        [float(c) for c in row]
    except ValueError:
        return False
    return True


def read_data_csv(path, header: str = "auto") -> tuple[np.ndarray, list[str] | None]:
    """Read an ``n x p`` numeric CSV (rows are observations).

    Parameters
    ----------
    path : path-like
    header : {"auto", "yes", "no"}
        ``auto`` treats the first row as a header when any of its fields is
        not a number.

    Returns
    -------
    data : ndarray of shape (n, p)
    names : list of str or None
        Column names when a header was present.

    Raises
    ------
    DataFormatError
        On ragged rows, non-numeric or non-finite cells, or an empty file;
        the message carries the 1-based line number.
    """
    if header not in HEADER_MODES:
        raise InvalidArgumentError(f"header must be one of {HEADER_MODES}, got {header!r}")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from None
    except UnicodeDecodeError as exc:
        raise DataFormatError(f"{path} is not UTF-8: {exc}") from None

    rows = []
    for line, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not c.strip() for c in row):
            continue
        rows.append((line, [c.strip() for c in row]))
    if not rows:
        raise DataFormatError(f"{path} contains no data")

    names = None
    first_line, first = rows[0]
    if header == "yes" or (header == "auto" and not _numeric(first)):
        names = first
        rows = rows[1:]
        if not rows:
            raise DataFormatError(f"{path} has a header but no data rows", first_line)
    width = len(names) if names is not None else len(rows[0][1])
    data = []
    for line, row in rows:
        if len(row) != width:
            raise DataFormatError(f"expected {width} fields, found {len(row)}", line)
        data.append(_parse_row(row, line))
    return np.asarray(data, dtype=float), names


def write_rows_csv(path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([format_value(v) for v in row])


def write_matrix_csv(path, m, names: list[str] | None = None) -> None:
    """Write a matrix; ``names`` becomes the header when given."""
    m = np.asarray(m, dtype=float)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if names is not None:
            w.writerow(names)
        for row in m:
            w.writerow([format_value(v) for v in row])
