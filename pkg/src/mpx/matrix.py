"""Dense complex matrix primitives.

Matrices are plain ``numpy.ndarray`` objects with dtype complex128 and two
dimensions.  Everything here is a pure function; nothing mutates its inputs.
Zero-sized matrices (0 x k, k x 0) are legal and behave as the degenerate
limits of the block operations.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "DimensionMismatchError",
    "as_matrix",
    "identity",
    "zeros",
    "conj_transpose",
    "matmul",
    "add",
    "sub",
    "scale",
    "frobenius_norm",
    "approx_eq",
    "rel_diff",
    "is_normal",
    "block_split",
    "block_assemble",
]

#: Default relative tolerance for structural comparisons.
DEFAULT_TOL = 1e-10


class DimensionMismatchError(ValueError):
    """Shapes of the operands do not conform; carries both shapes."""

    def __init__(self, message: str, *shapes: tuple[int, ...]):
        super().__init__(f"{message}: " + " vs ".join(str(s) for s in shapes))
        self.shapes = shapes


def as_matrix(data) -> np.ndarray:
    """Coerce to a 2-D complex128 array, rejecting NaN/Inf entries."""
    a = np.asarray(data, dtype=np.complex128)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    elif a.ndim == 1:
        a = a.reshape(1, -1)
    elif a.ndim != 2:
        raise DimensionMismatchError("expected a 2-D matrix", a.shape)
    if a.size and not np.all(np.isfinite(a.real) & np.isfinite(a.imag)):
        raise ValueError("matrix contains non-finite entries")
    return a


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.complex128)


def conj_transpose(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose A*."""
    return np.asarray(a).conj().T


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatchError("matmul inner dimensions", a.shape, b.shape)
    return a @ b


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape != b.shape:
        raise DimensionMismatchError("add requires equal shapes", a.shape, b.shape)
    return a + b


def sub(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape != b.shape:
        raise DimensionMismatchError("sub requires equal shapes", a.shape, b.shape)
    return a - b


def scale(c: complex, a: np.ndarray) -> np.ndarray:
    return complex(c) * a


def frobenius_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, "fro")) if a.size else 0.0


def approx_eq(a: np.ndarray, b: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """True iff ||a - b||_F <= tol * max(1, ||a||_F, ||b||_F)."""
    if a.shape != b.shape:
        raise DimensionMismatchError("approx_eq requires equal shapes", a.shape, b.shape)
    return rel_diff(a, b) <= tol


def rel_diff(a: np.ndarray, b: np.ndarray) -> float:
    """||a - b||_F / max(1, ||a||_F, ||b||_F), the approx_eq residual."""
    return frobenius_norm(a - b) / max(1.0, frobenius_norm(a), frobenius_norm(b))


def is_normal(a: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """True iff ||A A* - A* A||_F <= tol * max(1, ||A||_F^2)."""
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatchError("is_normal requires a square matrix", a.shape)
    ah = a.conj().T
    resid = frobenius_norm(a @ ah - ah @ a)
    return resid <= tol * max(1.0, frobenius_norm(a) ** 2)


def block_split(
    a: np.ndarray, row_cut: int, col_cut: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Split into (A11, A12, A21, A22) at the given cuts; empty blocks allowed."""
    m, n = a.shape
    if not (0 <= row_cut <= m and 0 <= col_cut <= n):
        raise DimensionMismatchError(
            f"cut ({row_cut}, {col_cut}) out of range", a.shape
        )
    return (
        a[:row_cut, :col_cut],
        a[:row_cut, col_cut:],
        a[row_cut:, :col_cut],
        a[row_cut:, col_cut:],
    )


def block_assemble(
    a11: np.ndarray, a12: np.ndarray, a21: np.ndarray, a22: np.ndarray
) -> np.ndarray:
    """Reassemble [[A11, A12], [A21, A22]]; inverse of block_split."""
    if a11.shape[0] != a12.shape[0] or a21.shape[0] != a22.shape[0]:
        raise DimensionMismatchError(
            "row blocks do not conform", a11.shape, a12.shape, a21.shape, a22.shape
        )
    if a11.shape[1] != a21.shape[1] or a12.shape[1] != a22.shape[1]:
        raise DimensionMismatchError(
            "column blocks do not conform", a11.shape, a12.shape, a21.shape, a22.shape
        )
    m = a11.shape[0] + a21.shape[0]
    n = a11.shape[1] + a12.shape[1]
    out = np.empty((m, n), dtype=np.complex128)
    r, c = a11.shape
    out[:r, :c] = a11
    out[:r, c:] = a12
    out[r:, :c] = a21
    out[r:, c:] = a22
    return out
