"""Seeded construction of test instances with known structure.

Every instance carries N *built from* a prescribed SVD (so the factors are
ground truth, not recomputed), plus X and Y assembled block-wise in the U
and V bases.  The flavor decides what gets planted:

* ``a1a2``          -- both structural hypotheses hold exactly.
* ``hermitian_fix`` -- X E and F Y are Hermitian (E, F the null projectors).
* ``projector_fix`` -- X E = E and F Y = F exactly.
* ``condition:<id>``-- plants the minimal structure making that one
                       sufficient condition (C1..C7, C1'..C7') true.
* ``violate_a1`` / ``violate_a2`` -- plants a large off block on one side,
                       leaving the other side valid.

Generation is deterministic per spec: the pseudo-random source is numpy's
PCG64 ``Generator`` seeded with ``spec.seed``, and all draws happen in a
fixed order, so the same spec yields bit-identical instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .decomp import SvdFactors
from .matrix import block_assemble, frobenius_norm
from .projectors import condition_side, normalize_condition_id

__all__ = [
    "BASE_FLAVORS",
    "InstanceSpec",
    "Note",
    "Instance",
    "haar_unitary",
    "generate",
]

BASE_FLAVORS = ("a1a2", "hermitian_fix", "projector_fix", "violate_a1", "violate_a2")

_EPS = float(np.finfo(np.float64).eps)
_MAX_COND = 1e4
_VIOLATION_FRACTION = 0.5  # planted off block norm relative to the rest of X


@dataclass(frozen=True)
class Note:
    """Typed warning attached to an instance the spec could not fully honor."""

    code: str
    message: str


@dataclass(frozen=True)
class InstanceSpec:
    m: int
    n: int
    r: int
    sigma_cond: float
    flavor: str
    seed: int

    def validate(self) -> None:
        if self.m < 1 or self.n < 1:
            raise ValueError(f"dimensions must be positive, got {self.m}x{self.n}")
        if not 0 <= self.r <= min(self.m, self.n):
            raise ValueError(f"rank {self.r} out of range for {self.m}x{self.n}")
        if self.sigma_cond < 1.0:
            raise ValueError("sigma_cond must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        flavor = self.flavor
        if flavor.startswith("condition:"):
            normalize_condition_id(flavor.split(":", 1)[1])
        elif flavor not in BASE_FLAVORS:
            raise ValueError(f"unknown flavor: {flavor!r}")

    @property
    def condition_id(self) -> str | None:
        if self.flavor.startswith("condition:"):
            return normalize_condition_id(self.flavor.split(":", 1)[1])
        return None


@dataclass(frozen=True)
class Instance:
    n_matrix: np.ndarray
    n_svd_true: SvdFactors
    x: np.ndarray
    y: np.ndarray
    spec: InstanceSpec
    planted_off_norm: float | None = None
    notes: tuple[Note, ...] = ()


def haar_unitary(dim: int, seed) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix.

    The R diagonal is phase-normalized, which is what makes the
    distribution Haar rather than merely unitary.  ``seed`` may be an int
    or an existing numpy Generator.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def _complex_gaussian(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (
        rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    ) / math.sqrt(2)


def _log_uniform(rng: np.random.Generator, lo: float, hi: float, size: int) -> np.ndarray:
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size))


def _rand_nonsingular(rng: np.random.Generator, k: int) -> np.ndarray:
    """Random nonsingular k x k with singular values in [0.5, 2]."""
    if k == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    w = haar_unitary(k, rng)
    z = haar_unitary(k, rng)
    s = _log_uniform(rng, 0.5, 2.0, k)
    return (w * s) @ z.conj().T


def _rand_hermitian_nonsingular(rng: np.random.Generator, k: int) -> np.ndarray:
    """Random Hermitian k x k with eigenvalue magnitudes in [0.5, 2]."""
    if k == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    q = haar_unitary(k, rng)
    lam = _log_uniform(rng, 0.5, 2.0, k) * rng.choice([-1.0, 1.0], k)
    return (q * lam) @ q.conj().T


def _rand_normal_nonsingular(rng: np.random.Generator, k: int) -> np.ndarray:
    """Random normal (commuting with its adjoint) k x k, nonsingular."""
    if k == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    q = haar_unitary(k, rng)
    lam = _log_uniform(rng, 0.5, 2.0, k) * np.exp(2j * np.pi * rng.uniform(0, 1, k))
    return (q * lam) @ q.conj().T


def _rand_scalar(rng: np.random.Generator) -> complex:
    return complex(_log_uniform(rng, 0.5, 2.0, 1)[0] * np.exp(2j * np.pi * rng.uniform()))


def _spectrum(spec: InstanceSpec, rng: np.random.Generator, notes: list[Note]) -> np.ndarray:
    """Nonzero singular values: sigma_1 = 1, sigma_r = 1/cond, log-uniform interior."""
    r = spec.r
    cond = spec.sigma_cond
    if r == 0:
        return np.zeros(0)
    if r == 1:
        if cond > 1.0:
            notes.append(
                Note("sigma-cond-unachievable", "rank < 2 cannot realize sigma_cond > 1")
            )
        return np.ones(1)
    interior = np.sort(_log_uniform(rng, 1.0 / cond, 1.0, r - 2))[::-1]
    return np.concatenate([[1.0], interior, [1.0 / cond]])


def _x_blocks(spec, rng, sigma, notes):
    """(X1, X3, X2, X4) in the U basis; X3 is the off block."""
    r = spec.r
    k = spec.m - r
    cid = spec.condition_id
    target = cid if cid is not None and condition_side(cid) == "X" else None
    x1 = _rand_nonsingular(rng, r)
    x2 = _complex_gaussian(rng, k, r)
    x4 = _rand_nonsingular(rng, k)
    x3 = np.zeros((r, k), dtype=np.complex128)
    flavor = spec.flavor
    if flavor == "hermitian_fix":
        x4 = _rand_hermitian_nonsingular(rng, k)
    elif flavor == "projector_fix":
        x4 = np.eye(k, dtype=np.complex128)
    elif flavor == "violate_a1":
        if x3.size == 0:
            notes.append(
                Note("violation-block-empty", "rank split leaves no off block to plant on X")
            )
        else:
            raw = _complex_gaussian(rng, r, k)
            base = math.hypot(
                frobenius_norm(x1), frobenius_norm(x2), frobenius_norm(x4)
            )
            x3 = raw * (_VIOLATION_FRACTION * max(base, 1.0) / frobenius_norm(raw))
    elif target is not None:
        if x3.size == 0:
            notes.append(
                Note("vacuous-structure", f"{target} is vacuous at this rank split")
            )
        s2 = sigma**2
        if target == "C1":
            x1 = _rand_normal_nonsingular(rng, r) / s2[:, None]
        elif target == "C2":
            x1 = np.diag(_rand_scalar(rng) / s2).astype(np.complex128)
        elif target == "C3":
            x1 = _rand_scalar(rng) * np.eye(r, dtype=np.complex128)
        elif target == "C4":
            x4 = _rand_normal_nonsingular(rng, k)
        elif target == "C5":
            x4 = _rand_scalar(rng) * np.eye(k, dtype=np.complex128)
        # C6, C7: x3 = 0 is already the planted structure
    return x1, x3, x2, x4


def _y_blocks(spec, rng, sigma, notes):
    """(Y1, Y3, Y_low, Y4) in the V basis; Y_low is the off block."""
    r = spec.r
    k = spec.n - r
    cid = spec.condition_id
    target = cid if cid is not None and condition_side(cid) == "Y" else None
    y1 = _rand_nonsingular(rng, r)
    y3 = _complex_gaussian(rng, r, k)
    y4 = _rand_nonsingular(rng, k)
    y_low = np.zeros((k, r), dtype=np.complex128)
    flavor = spec.flavor
    if flavor == "hermitian_fix":
        y4 = _rand_hermitian_nonsingular(rng, k)
    elif flavor == "projector_fix":
        y3 = np.zeros((r, k), dtype=np.complex128)
        y4 = np.eye(k, dtype=np.complex128)
    elif flavor == "violate_a2":
        if y_low.size == 0:
            notes.append(
                Note("violation-block-empty", "rank split leaves no off block to plant on Y")
            )
        else:
            raw = _complex_gaussian(rng, k, r)
            base = math.hypot(
                frobenius_norm(y1), frobenius_norm(y3), frobenius_norm(y4)
            )
            y_low = raw * (_VIOLATION_FRACTION * max(base, 1.0) / frobenius_norm(raw))
    elif target is not None:
        if y_low.size == 0:
            notes.append(
                Note("vacuous-structure", f"{target} is vacuous at this rank split")
            )
        s2 = sigma**2
        base_id = target.rstrip("'")
        if base_id == "C1":
            y1 = _rand_normal_nonsingular(rng, r) / s2[None, :]
        elif base_id == "C2":
            y1 = np.diag(_rand_scalar(rng) / s2).astype(np.complex128)
        elif base_id == "C3":
            y1 = _rand_scalar(rng) * np.eye(r, dtype=np.complex128)
        elif base_id == "C4":
            y4 = _rand_normal_nonsingular(rng, k)
        elif base_id == "C5":
            y4 = _rand_scalar(rng) * np.eye(k, dtype=np.complex128)
    return y1, y3, y_low, y4


def _assemble_side(basis, blocks):
    b11, b12, b21, b22 = blocks
    return basis @ block_assemble(b11, b12, b21, b22) @ basis.conj().T


def _draw_side(spec, rng, sigma, notes, basis, builder, name):
    """Draw blocks until the assembled side is acceptably conditioned.

    Redraws are deterministic (they just consume more of the stream).
    Flavors whose planted structure forces ill conditioning, e.g. a
    condition flavor tied to sigma^-2 at large sigma_cond, never converge,
    so the last attempt is kept and flagged with a typed note.
    """
    blocks = mat = None
    local: list[Note] = []
    for _ in range(25):
        local = []
        blocks = builder(spec, rng, sigma, local)
        mat = _assemble_side(basis, blocks)
        kappa = np.linalg.cond(mat) if mat.size else 1.0
        if kappa <= _MAX_COND:
            notes.extend(local)
            return blocks, mat
    local.append(
        Note(
            f"{name}-ill-conditioned",
            f"condition number {np.linalg.cond(mat):.3e} exceeds {_MAX_COND:.0e}",
        )
    )
    notes.extend(local)
    return blocks, mat


def generate(spec: InstanceSpec) -> Instance:
    """Build the instance for a spec; same spec, same bits.

    Specs the flavor cannot fully honor (vacuous rank splits, unreachable
    sigma_cond, conditioning pushed past 1e4 by the planted structure) are
    reported through typed notes on the returned instance rather than
    refused.
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    notes: list[Note] = []
    u = haar_unitary(spec.m, rng)
    v = haar_unitary(spec.n, rng)
    sigma = _spectrum(spec, rng, notes)
    padded = np.zeros(min(spec.m, spec.n))
    padded[: spec.r] = sigma
    rank_tol = max(spec.m, spec.n) * _EPS * (float(sigma[0]) if spec.r else 0.0)
    n_svd = SvdFactors(u=u, sigma=padded, v=v, rank=spec.r, rank_tol=rank_tol)
    n_matrix = n_svd.reconstruct()

    x_blocks, x = _draw_side(spec, rng, sigma, notes, u, _x_blocks, "x")
    y_blocks, y = _draw_side(spec, rng, sigma, notes, v, _y_blocks, "y")

    planted = None
    if spec.flavor == "violate_a1":
        planted = frobenius_norm(x_blocks[1])
    elif spec.flavor == "violate_a2":
        planted = frobenius_norm(y_blocks[2])

    return Instance(
        n_matrix=n_matrix,
        n_svd_true=n_svd,
        x=x,
        y=y,
        spec=spec,
        planted_off_norm=planted,
        notes=tuple(notes),
    )
