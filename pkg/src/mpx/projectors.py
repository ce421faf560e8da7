"""Orthogonal projectors, correction factors, and block-structure validators.

Everything in this module is relative to one SVD of N, passed in as
``SvdFactors``.  With repeated singular values U and V are not unique, so
structure verdicts are only meaningful against the basis that produced
them; nothing here ever recomputes an SVD internally.

The two structural hypotheses checked throughout are:

* X-side: U* X U is block lower triangular at the rank split, i.e. the
  upper-right r x (m-r) block vanishes.
* Y-side: V* Y V is block upper triangular at the rank split, i.e. the
  lower-left (n-r) x r block vanishes.

Fourteen sufficient conditions (C1..C7 for X, C1'..C7' for Y) each force
the corresponding off-block to vanish; :func:`check_condition` tests them
numerically and :func:`implies_structure` is the test predicate tying a
condition verdict to the structure report.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decomp import SvdFactors, inverse
from .matrix import (
    DEFAULT_TOL,
    DimensionMismatchError,
    block_split,
    frobenius_norm,
)

__all__ = [
    "ProjectorPair",
    "projectors",
    "factor_r",
    "factor_l",
    "factor_r0",
    "factor_l0",
    "StructureReport",
    "structure_report_x",
    "structure_report_y",
    "CONDITION_IDS",
    "Witness",
    "ConditionVerdict",
    "condition_side",
    "normalize_condition_id",
    "check_condition",
    "implies_structure",
]

_TINY = np.finfo(np.float64).tiny


@dataclass(frozen=True)
class ProjectorPair:
    """E = I - N N-dagger (m x m) and F = I - N-dagger N (n x n)."""

    e_n: np.ndarray
    f_n: np.ndarray


def projectors(n_svd: SvdFactors) -> ProjectorPair:
    """Orthogonal projectors onto null(N*) and null(N), from the SVD basis."""
    m, n = n_svd.shape
    e_n = np.eye(m, dtype=np.complex128) - n_svd.range_projector()
    f_n = np.eye(n, dtype=np.complex128) - n_svd.rowspace_projector()
    return ProjectorPair(e_n=e_n, f_n=f_n)


def _require_square(a: np.ndarray, dim: int, what: str) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.shape != (dim, dim):
        raise DimensionMismatchError(f"{what} must be {dim}x{dim}", a.shape)
    return a


def factor_r(x: np.ndarray, n_svd: SvdFactors) -> np.ndarray:
    """Correction factor R = X E X^-1 (E - I), with E = I - N N-dagger.

    Vanishes exactly when X commutes with E; on X-side structured inputs
    U* R U has X2 X1^-1 in the lower-left block and zeros elsewhere.
    """
    m = n_svd.shape[0]
    x = _require_square(x, m, "x")
    e = np.eye(m, dtype=np.complex128) - n_svd.range_projector()
    xi = inverse(x)
    return (x @ e) @ (xi @ (e - np.eye(m, dtype=np.complex128)))


def factor_l(y: np.ndarray, n_svd: SvdFactors) -> np.ndarray:
    """Correction factor L = (F - I) Y^-1 F Y, with F = I - N-dagger N."""
    n = n_svd.shape[1]
    y = _require_square(y, n, "y")
    f = np.eye(n, dtype=np.complex128) - n_svd.rowspace_projector()
    yi = inverse(y)
    return ((f - np.eye(n, dtype=np.complex128)) @ yi) @ (f @ y)


def factor_r0(x: np.ndarray, n_svd: SvdFactors) -> np.ndarray:
    """Baseline correction R0 = E (I - X^-1); equals R when X E = E."""
    m = n_svd.shape[0]
    x = _require_square(x, m, "x")
    e = np.eye(m, dtype=np.complex128) - n_svd.range_projector()
    return e @ (np.eye(m, dtype=np.complex128) - inverse(x))


def factor_l0(y: np.ndarray, n_svd: SvdFactors) -> np.ndarray:
    """Baseline correction L0 = (I - Y^-1) F; equals L when F Y = F."""
    n = n_svd.shape[1]
    y = _require_square(y, n, "y")
    f = np.eye(n, dtype=np.complex128) - n_svd.rowspace_projector()
    return (np.eye(n, dtype=np.complex128) - inverse(y)) @ f


@dataclass(frozen=True)
class StructureReport:
    """Blocks of U*XU (side "X") or V*YV (side "Y") split at the rank.

    ``off_block_norm`` is the Frobenius norm of the block that the
    structural hypothesis requires to vanish: upper-right for the X side,
    lower-left for the Y side.  ``satisfied`` is relative to ``tol``:
    off_block_norm <= tol * max(1, ||input||_F).
    """

    side: str
    diag_top: np.ndarray
    upper_right: np.ndarray
    lower_left: np.ndarray
    diag_bottom: np.ndarray
    off_block_norm: float
    satisfied: bool
    tol: float

    @property
    def off_block(self) -> np.ndarray:
        return self.upper_right if self.side == "X" else self.lower_left


def _structure_report(
    mat: np.ndarray, n_svd: SvdFactors, basis: np.ndarray, side: str, tol: float
) -> StructureReport:
    dim = basis.shape[0]
    mat = _require_square(mat, dim, "x" if side == "X" else "y")
    r = n_svd.rank
    in_basis = basis.conj().T @ mat @ basis
    b11, b12, b21, b22 = block_split(in_basis, r, r)
    off = b12 if side == "X" else b21
    off_norm = frobenius_norm(off)
    return StructureReport(
        side=side,
        diag_top=b11,
        upper_right=b12,
        lower_left=b21,
        diag_bottom=b22,
        off_block_norm=off_norm,
        satisfied=off_norm <= tol * max(1.0, frobenius_norm(mat)),
        tol=tol,
    )


def structure_report_x(
    x: np.ndarray, n_svd: SvdFactors, tol: float = DEFAULT_TOL
) -> StructureReport:
    """Blocks of U*XU at the rank split; satisfied iff upper-right ~ 0."""
    return _structure_report(x, n_svd, n_svd.u, "X", tol)


def structure_report_y(
    y: np.ndarray, n_svd: SvdFactors, tol: float = DEFAULT_TOL
) -> StructureReport:
    """Blocks of V*YV at the rank split; satisfied iff lower-left ~ 0."""
    return _structure_report(y, n_svd, n_svd.v, "Y", tol)


# ---------------------------------------------------------------------------
# Condition checkers

CONDITION_IDS = (
    "C1", "C2", "C3", "C4", "C5", "C6", "C7",
    "C1'", "C2'", "C3'", "C4'", "C5'", "C6'", "C7'",
)


@dataclass(frozen=True)
class Witness:
    """Smallest (k, c, ell) satisfying an existential condition."""

    k: int
    c: complex | None = None
    ell: int | None = None


@dataclass(frozen=True)
class ConditionVerdict:
    condition_id: str
    holds: bool
    witness: Witness | None
    detail: float


def normalize_condition_id(cid: str) -> str:
    """Accept C1..C7 plus primed spellings C1', C1p, c1P, and the prime glyph."""
    s = cid.strip().upper().replace("′", "'")
    if s.endswith("P"):
        s = s[:-1] + "'"
    if s not in CONDITION_IDS:
        raise ValueError(f"unknown condition id: {cid!r}")
    return s


def condition_side(cid: str) -> str:
    """"X" for C1..C7, "Y" for the primed conditions."""
    return "Y" if normalize_condition_id(cid).endswith("'") else "X"


def _gram_left(n_svd: SvdFactors, power: int = 1) -> np.ndarray:
    """(N N*)^power from the factors: U_r sigma^(2 power) U_r*."""
    r = n_svd.rank
    ur = n_svd.u[:, :r]
    return (ur * n_svd.sigma[:r] ** (2 * power)) @ ur.conj().T


def _gram_right(n_svd: SvdFactors, power: int = 1) -> np.ndarray:
    """(N* N)^power from the factors: V_r sigma^(2 power) V_r*."""
    r = n_svd.rank
    vr = n_svd.v[:, :r]
    return (vr * n_svd.sigma[:r] ** (2 * power)) @ vr.conj().T


def _normality_residual(p: np.ndarray) -> float:
    ph = p.conj().T
    return frobenius_norm(p @ ph - ph @ p) / max(1.0, frobenius_norm(p) ** 2)


def _scalar_fit(cand: np.ndarray, target: np.ndarray, tol: float):
    """Best c with cand ~ c * target; returns (c, relative residual).

    c is the least-squares fit <target, cand> / ||target||^2.  When the
    target is (numerically) zero the condition degenerates to cand = 0 and
    any nonzero c is a witness; c = 1 is reported.
    """
    tnorm2 = float(np.vdot(target, target).real)
    cnorm = frobenius_norm(cand)
    if tnorm2 <= _TINY:
        return 1.0 + 0.0j, cnorm / max(1.0, cnorm)
    c = complex(np.vdot(target, cand) / tnorm2)
    resid = frobenius_norm(cand - c * target) / max(1.0, cnorm)
    return c, resid


def _search_scalar_multiple(base, target, k_max, tol):
    """Smallest k <= k_max with base^k ~ c * target for some c != 0."""
    best = np.inf
    cand = np.eye(base.shape[0], dtype=np.complex128)
    for k in range(1, k_max + 1):
        cand = base @ cand
        c, resid = _scalar_fit(cand, target, tol)
        best = min(best, resid)
        if resid <= tol and abs(c) > tol:
            return Witness(k=k, c=c), resid
    return None, best


def check_condition(
    condition_id: str,
    x_or_y: np.ndarray,
    n_svd: SvdFactors,
    k_max: int = 8,
    tol: float = DEFAULT_TOL,
) -> ConditionVerdict:
    """Numerically test one of the fourteen structural conditions.

    Existential conditions are searched over k (and ell) in 1..k_max and
    report the smallest witness found; the scalar c is recovered by
    least-squares fit and residual-checked, with |c| > tol enforcing the
    c != 0 requirement.  ``detail`` is the defining residual achieved (the
    best one seen, for failed searches).
    """
    cid = normalize_condition_id(condition_id)
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    side = condition_side(cid)
    m, n = n_svd.shape
    dim = m if side == "X" else n
    a = _require_square(x_or_y, dim, "x" if side == "X" else "y")
    r = n_svd.rank
    ident = np.eye(dim, dtype=np.complex128)
    if side == "X":
        gram = _gram_left(n_svd)
        ortho = ident - n_svd.range_projector()  # E_N
        ranged = n_svd.range_projector()  # N N-dagger
        base = gram @ a  # N N* X
        proj_then = a @ ortho  # X E_N
    else:
        gram = _gram_right(n_svd)
        ortho = ident - n_svd.rowspace_projector()  # F_N
        ranged = n_svd.rowspace_projector()  # N-dagger N
        base = a @ gram  # Y N* N
        proj_then = ortho @ a  # F_N Y
    scale = max(1.0, frobenius_norm(a))
    kind = cid.rstrip("'")

    if kind in ("C1", "C4"):
        p = base if kind == "C1" else proj_then
        resid = _normality_residual(p)
        return ConditionVerdict(cid, resid <= tol, None, resid)

    if kind == "C2":
        witness, resid = _search_scalar_multiple(base, ranged, k_max, tol)
        return ConditionVerdict(cid, witness is not None, witness, resid)

    if kind == "C3":
        best = np.inf
        cand = ident
        grams = [gram]
        for _ in range(1, k_max):
            grams.append(gram @ grams[-1])
        for k in range(1, k_max + 1):
            cand = base @ cand
            for ell in range(1, k_max + 1):
                c, resid = _scalar_fit(cand, grams[ell - 1], tol)
                best = min(best, resid)
                if resid <= tol and abs(c) > tol:
                    return ConditionVerdict(cid, True, Witness(k=k, c=c, ell=ell), resid)
        return ConditionVerdict(cid, False, None, best)

    if kind == "C5":
        witness, resid = _search_scalar_multiple(proj_then, ortho, k_max, tol)
        return ConditionVerdict(cid, witness is not None, witness, resid)

    if kind == "C6":
        val = ranged @ proj_then if side == "X" else proj_then @ ranged
        resid = frobenius_norm(val) / scale
        return ConditionVerdict(cid, resid <= tol, None, resid)

    # C7: (N N*)^k X E_N = 0 (or F_N Y (N* N)^k = 0), equivalent for every k
    # to the vanishing of the off block.  Residuals are scaled by
    # sigma_r^(2k) so a spread spectrum cannot shrink a genuinely nonzero
    # off block below tolerance at large k.
    if r == 0:
        return ConditionVerdict(cid, True, Witness(k=1), 0.0)
    sig_r = float(n_svd.sigma[r - 1])
    best = np.inf
    val = proj_then
    for k in range(1, k_max + 1):
        val = gram @ val if side == "X" else val @ gram
        denom = max(_TINY, sig_r ** (2 * k) * scale)
        resid = frobenius_norm(val) / denom
        best = min(best, resid)
        if resid <= tol:
            return ConditionVerdict(cid, True, Witness(k=k), resid)
    return ConditionVerdict(cid, False, None, best)


def implies_structure(verdict: ConditionVerdict, report: StructureReport) -> bool:
    """The lemma predicate: condition holds implies structure satisfied.

    Vacuously true when the condition fails.  Verdict and report must
    come from the same side of the same (matrix, SVD) pair.
    """
    if condition_side(verdict.condition_id) != report.side:
        raise ValueError(
            f"verdict for side {condition_side(verdict.condition_id)} paired "
            f"with report for side {report.side}"
        )
    return (not verdict.holds) or report.satisfied
