"""
matrix_io.py
────────────
Read / write the residue-matrix text format used by every CLI subcommand:

    rows cols m
    a_11 a_12 ... a_1cols
    ...
    a_rows1 ...  a_rowscols

Entries are decimal residues in [0, m).
"""

from pathlib import Path

import numpy as np

from errors import MatrixFormatError
from zmod import Modulus, factorize


def parse_matrix(text: str):
    """Parse the text format. Returns (matrix, Modulus)."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MatrixFormatError("empty matrix file")
    header = lines[0].split()
    if len(header) != 3:
        raise MatrixFormatError(f"header must be 'rows cols m', got {lines[0]!r}")
    try:
        rows, cols, m = (int(v) for v in header)
    except ValueError:
        raise MatrixFormatError(f"non-integer header {lines[0]!r}")
    if rows < 1 or cols < 1:
        raise MatrixFormatError(f"dimensions must be positive, got {rows}x{cols}")
    mod = factorize(m)
    body = lines[1:]
    if len(body) != rows:
        raise MatrixFormatError(f"expected {rows} rows, found {len(body)}")
    data = []
    for idx, line in enumerate(body, start=1):
        try:
            row = [int(v) for v in line.split()]
        except ValueError:
            raise MatrixFormatError(f"row {idx}: non-integer entry in {line!r}")
        if len(row) != cols:
            raise MatrixFormatError(f"row {idx}: expected {cols} entries, found {len(row)}")
        if any(v < 0 or v >= m for v in row):
            raise MatrixFormatError(f"row {idx}: entries must lie in [0, {m})")
        data.append(row)
    return np.array(data, dtype=np.int64), mod


def format_matrix(matrix: np.ndarray, mod: Modulus) -> str:
    rows, cols = matrix.shape
    lines = [f"{rows} {cols} {mod.m}"]
    lines.extend(" ".join(str(int(v)) for v in row) for row in matrix % mod.m)
    return "\n".join(lines) + "\n"


def load_matrix(path):
    path = Path(path)
    if not path.exists():
        raise MatrixFormatError(f"matrix file not found: {path}")
    return parse_matrix(path.read_text(encoding="utf-8"))


def save_matrix(path, matrix: np.ndarray, mod: Modulus):
    Path(path).write_text(format_matrix(matrix, mod), encoding="utf-8")
