"""Matrix Market array/complex/general file I/O.

One interchange format for the whole package: the dense ("array") Matrix
Market layout with complex general entries, column-major, one "re im"
pair per line, written with 17 significant digits so doubles round-trip
exactly.  Parse failures carry the 1-based line number they occurred on.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "MatrixMarketError",
    "MalformedHeaderError",
    "UnsupportedFormatError",
    "EntryCountError",
    "MalformedEntryError",
    "NonFiniteEntryError",
    "read_matrix",
    "write_matrix",
]

_HEADER = "%%MatrixMarket matrix array complex general"


class MatrixMarketError(ValueError):
    """Base parse error; ``line`` is the 1-based offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class MalformedHeaderError(MatrixMarketError):
    pass


class UnsupportedFormatError(MatrixMarketError):
    pass


class EntryCountError(MatrixMarketError):
    pass


class MalformedEntryError(MatrixMarketError):
    pass


class NonFiniteEntryError(MatrixMarketError):
    pass


def read_matrix(path) -> np.ndarray:
    """Read a dense complex matrix; raises a typed error naming the bad line."""
    with open(path, encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise MalformedHeaderError("empty file", 1)
    header = lines[0].split()
    if len(header) != 5 or header[0] != "%%MatrixMarket":
        raise MalformedHeaderError(f"bad header {lines[0]!r}", 1)
    if [w.lower() for w in header[1:]] != ["matrix", "array", "complex", "general"]:
        raise UnsupportedFormatError(
            f"only 'matrix array complex general' is supported, got {lines[0]!r}", 1
        )
    body = [
        (idx, line)
        for idx, line in enumerate(lines[1:], start=2)
        if line.strip() and not line.lstrip().startswith("%")
    ]
    if not body:
        raise EntryCountError("missing dimensions line", len(lines))
    dim_line_no, dim_line = body[0]
    dims = dim_line.split()
    if len(dims) != 2:
        raise MalformedEntryError(f"expected 'rows cols', got {dim_line!r}", dim_line_no)
    try:
        rows, cols = int(dims[0]), int(dims[1])
    except ValueError:
        raise MalformedEntryError(f"non-integer dimensions {dim_line!r}", dim_line_no) from None
    if rows < 1 or cols < 1:
        raise MalformedEntryError(f"dimensions must be positive, got {rows} {cols}", dim_line_no)
    entries = body[1:]
    if len(entries) != rows * cols:
        raise EntryCountError(
            f"expected {rows * cols} entries for {rows}x{cols}, found {len(entries)}",
            entries[-1][0] if entries else dim_line_no,
        )
    flat = np.empty(rows * cols, dtype=np.complex128)
    for pos, (line_no, line) in enumerate(entries):
        parts = line.split()
        if len(parts) != 2:
            raise MalformedEntryError(
                f"expected 're im', got {len(parts)} token(s)", line_no
            )
        try:
            re, im = float(parts[0]), float(parts[1])
        except ValueError:
            raise MalformedEntryError(f"unparseable entry {line!r}", line_no) from None
        if not (np.isfinite(re) and np.isfinite(im)):
            raise NonFiniteEntryError(f"non-finite entry {line!r}", line_no)
        flat[pos] = complex(re, im)
    return np.ascontiguousarray(flat.reshape((rows, cols), order="F"))


def write_matrix(path, a: np.ndarray) -> None:
    """Write a dense complex matrix, 17 significant digits per component."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"can only write non-empty 2-D matrices, got shape {a.shape}")
    rows, cols = a.shape
    with open(path, "w", encoding="ascii") as fh:
        fh.write(_HEADER + "\n")
        fh.write(f"{rows} {cols}\n")
        for val in a.reshape(-1, order="F"):
            fh.write(f"{val.real:.17g} {val.imag:.17g}\n")
