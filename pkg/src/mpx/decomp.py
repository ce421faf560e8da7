"""SVD, numerical rank, the oracle pseudo-inverse, and linear solves.

The SVD (and everything derived from it here) is the *oracle* side of every
verification in this package: candidate pseudo-inverses produced by the
closed-form product expressions are always judged against
:func:`pinv_oracle` and :func:`penrose_residuals`, never against themselves.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .matrix import DimensionMismatchError, frobenius_norm

__all__ = [
    "SvdConvergenceError",
    "SingularMatrixError",
    "NotHpdError",
    "SvdFactors",
    "svd",
    "pinv_oracle",
    "PenroseResiduals",
    "penrose_residuals",
    "inverse",
    "solve_hpd",
]

_EPS = float(np.finfo(np.float64).eps)


class SvdConvergenceError(RuntimeError):
    """The SVD iteration failed to converge (pathological input)."""


class SingularMatrixError(ValueError):
    """A matrix required to be nonsingular is singular to working precision."""


class NotHpdError(ValueError):
    """A matrix required to be Hermitian positive definite is not."""


@dataclass(frozen=True)
class SvdFactors:
    """Full singular value decomposition A = U diag(sigma) V*.

    ``u`` is m x m unitary, ``v`` is n x n unitary, ``sigma`` holds
    min(m, n) nonincreasing nonnegative values with entries at or below
    ``rank_tol`` flushed to exact zero.  ``rank`` counts the values
    strictly above ``rank_tol``.
    """

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray
    rank: int
    rank_tol: float

    @property
    def shape(self) -> tuple[int, int]:
        return self.u.shape[0], self.v.shape[0]

    def reconstruct(self) -> np.ndarray:
        """U diag(sigma) V*, the matrix the factors represent."""
        r = self.rank
        if r == 0:
            m, n = self.shape
            return np.zeros((m, n), dtype=np.complex128)
        return (self.u[:, :r] * self.sigma[:r]) @ self.v[:, :r].conj().T

    def pinv(self) -> np.ndarray:
        """V diag(1/sigma_i on the rank support) U*."""
        r = self.rank
        m, n = self.shape
        if r == 0:
            return np.zeros((n, m), dtype=np.complex128)
        return (self.v[:, :r] / self.sigma[:r]) @ self.u[:, :r].conj().T

    def range_projector(self) -> np.ndarray:
        """A A-dagger, the orthogonal projector onto range(A)."""
        r = self.rank
        return self.u[:, :r] @ self.u[:, :r].conj().T

    def rowspace_projector(self) -> np.ndarray:
        """A-dagger A, the orthogonal projector onto range(A*)."""
        r = self.rank
        return self.v[:, :r] @ self.v[:, :r].conj().T


def svd(a: np.ndarray, rank_tol_override: float | None = None) -> SvdFactors:
    """Full complex SVD with a rank cutoff.

    The default cutoff is max(m, n) * eps * sigma_max; ``rank_tol_override``
    replaces it with ``rank_tol_override * sigma_max`` (relative, like all
    tolerances here).  Singular values at or below the cutoff are flushed
    to exact zero so later pseudo-inversion never divides by noise.
    """
    a = np.asarray(a, dtype=np.complex128)
    m, n = a.shape
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise SvdConvergenceError(f"SVD failed to converge on {m}x{n} input") from exc
    sigma_max = float(s[0]) if s.size else 0.0
    if rank_tol_override is not None:
        if rank_tol_override < 0:
            raise ValueError("rank tolerance must be nonnegative")
        rank_tol = float(rank_tol_override) * sigma_max
    else:
        rank_tol = max(m, n) * _EPS * sigma_max
    rank = int(np.count_nonzero(s > rank_tol))
    sigma = s.copy()
    sigma[rank:] = 0.0
    return SvdFactors(u=u, sigma=sigma, v=vh.conj().T, rank=rank, rank_tol=rank_tol)


def pinv_oracle(a: np.ndarray, tol: float | None = None) -> np.ndarray:
    """Moore-Penrose inverse via the SVD; the reference oracle."""
    return svd(a, rank_tol_override=tol).pinv()


@dataclass(frozen=True)
class PenroseResiduals:
    """Relative Frobenius residuals of the four defining equations of A-dagger.

    r_a: A Z A = A, r_b: Z A Z = Z, r_c: (A Z)* = A Z, r_d: (Z A)* = Z A.
    """

    r_a: float
    r_b: float
    r_c: float
    r_d: float

    def max(self) -> float:
        return max(self.r_a, self.r_b, self.r_c, self.r_d)

    def all_below(self, tol: float) -> bool:
        return self.max() <= tol


def penrose_residuals(a: np.ndarray, z: np.ndarray) -> PenroseResiduals:
    """Residuals of the four Penrose equations for the candidate z."""
    if z.shape != (a.shape[1], a.shape[0]):
        raise DimensionMismatchError("candidate must be shaped n x m", a.shape, z.shape)
    az = a @ z
    za = z @ a
    return PenroseResiduals(
        r_a=frobenius_norm(az @ a - a) / max(1.0, frobenius_norm(a)),
        r_b=frobenius_norm(za @ z - z) / max(1.0, frobenius_norm(z)),
        r_c=frobenius_norm(az - az.conj().T) / max(1.0, frobenius_norm(az)),
        r_d=frobenius_norm(za - za.conj().T) / max(1.0, frobenius_norm(za)),
    )


def inverse(a: np.ndarray) -> np.ndarray:
    """Inverse of a square nonsingular matrix via partial-pivot elimination.

    Raises SingularMatrixError when an elimination pivot falls below
    max(m, n) * eps * ||a||_F, which is how the nonsingularity
    preconditions of the product formulas surface numerically.
    """
    a = np.asarray(a, dtype=np.complex128)
    m, n = a.shape
    if m != n:
        raise DimensionMismatchError("inverse requires a square matrix", a.shape)
    if n == 0:
        return a.copy()
    with warnings.catch_warnings():
        # singularity is detected by the pivot check below, not by scipy
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    pivots = np.abs(np.diag(lu))
    cutoff = n * _EPS * frobenius_norm(a)
    small = np.where(pivots <= cutoff)[0]
    if small.size:
        k = int(small[0])
        raise SingularMatrixError(
            f"matrix is singular to working precision "
            f"(pivot {pivots[k]:.3e} at index {k}, cutoff {cutoff:.3e})"
        )
    return scipy.linalg.lu_solve((lu, piv), np.eye(n, dtype=np.complex128), check_finite=False)


def solve_hpd(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a x = b for Hermitian positive definite a via Cholesky.

    The product formulas only ever call this with a = I + W* W or
    a = I + W W*, which are HPD by construction; a non-HPD input is a
    caller bug and raises NotHpdError.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatchError("solve_hpd requires a square matrix", a.shape)
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatchError("right-hand side does not conform", a.shape, b.shape)
    if a.shape[0] == 0:
        return b.copy()
    try:
        c, lower = scipy.linalg.cho_factor(a, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NotHpdError(f"matrix is not Hermitian positive definite: {exc}") from exc
    return scipy.linalg.cho_solve((c, lower), b, check_finite=False)
