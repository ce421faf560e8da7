"""Shared construction helpers for the test suite."""

import numpy as np


def rand_complex(rng, rows, cols):
    """Unit-scale complex Gaussian matrix."""
    return (
        rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    ) / np.sqrt(2)


def rand_with_rank(rng, m, n, r):
    """Random m x n matrix with rank exactly r (almost surely)."""
    if r == 0:
        return np.zeros((m, n), dtype=np.complex128)
    return rand_complex(rng, m, r) @ rand_complex(rng, r, n)


def rand_nonsingular(rng, k, spread=2.0):
    """Well-conditioned random k x k matrix (singular values in [1/spread, spread])."""
    from mpx import haar_unitary

    if k == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    w = haar_unitary(k, rng)
    z = haar_unitary(k, rng)
    s = np.exp(rng.uniform(-np.log(spread), np.log(spread), k))
    return (w * s) @ z.conj().T
