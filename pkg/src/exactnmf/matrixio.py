"""Matrix file formats.

Two formats are supported, both headerless numeric grids:

* the plain text format: a first line ``"m n"`` (ASCII decimals, one space),
  then m lines of n entries written as shortest round-trip decimal floats
  separated by single spaces, with ``\\n`` line endings;
* RFC 4180 CSV without a header row.

Readers reject NaN and Inf.  ``read_matrix``/``write_matrix`` dispatch on the
``.csv`` suffix.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .linalg import as_matrix

__all__ = [
    "write_matrix_text",
    "read_matrix_text",
    "write_matrix_csv",
    "read_matrix_csv",
    "write_matrix",
    "read_matrix",
]


def _fmt(x: float) -> str:
    # repr of a Python float is the shortest string that round-trips
    return repr(float(x))


def _parse_entry(token: str, where: str) -> float:
    try:
        x = float(token)
    except ValueError as exc:
        raise ValueError(f"bad numeric token {token!r} at {where}") from exc
    if not np.isfinite(x):
        raise ValueError(f"non-finite entry {token!r} at {where}")
    return x


def write_matrix_text(M, path) -> None:
    M = as_matrix(M)
    m, n = M.shape
    with open(path, "w", newline="") as fh:
        fh.write(f"{m} {n}\n")
        for row in M:
            fh.write(" ".join(_fmt(x) for x in row))
            fh.write("\n")


def read_matrix_text(path) -> np.ndarray:
    with open(path, "r", newline="") as fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) != 2:
            raise ValueError(f"bad header line {header!r}: expected 'm n'")
        try:
            m, n = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ValueError(f"bad header line {header!r}") from exc
        if m < 1 or n < 1:
            raise ValueError(f"bad dimensions {m}x{n}")
        M = np.empty((m, n))
        for i in range(m):
            line = fh.readline()
            if not line:
                raise ValueError(f"expected {m} rows, file ends after row {i}")
            tokens = line.split()
            if len(tokens) != n:
                raise ValueError(f"row {i} has {len(tokens)} entries, expected {n}")
            for j, tok in enumerate(tokens):
                M[i, j] = _parse_entry(tok, f"row {i}, column {j}")
    return M


def write_matrix_csv(M, path) -> None:
    M = as_matrix(M)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)  # RFC 4180: CRLF line endings, no header
        for row in M:
            writer.writerow([_fmt(x) for x in row])


def read_matrix_csv(path) -> np.ndarray:
    rows = []
    with open(path, "r", newline="") as fh:
        for i, record in enumerate(csv.reader(fh)):
            if not record:
                continue
            rows.append([_parse_entry(tok, f"row {i}, column {j}")
                         for j, tok in enumerate(record)])
    if not rows:
        raise ValueError("empty CSV file")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValueError(f"ragged CSV: row widths {sorted(widths)}")
    return np.array(rows)


def write_matrix(M, path) -> None:
    if Path(path).suffix.lower() == ".csv":
        write_matrix_csv(M, path)
    else:
        write_matrix_text(M, path)


def read_matrix(path) -> np.ndarray:
    if Path(path).suffix.lower() == ".csv":
        return read_matrix_csv(path)
    return read_matrix_text(path)
