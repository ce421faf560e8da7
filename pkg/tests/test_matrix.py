import numpy as np
import pytest

from helpers import rand_complex
from mpx import (
    DimensionMismatchError,
    add,
    approx_eq,
    as_matrix,
    block_assemble,
    block_split,
    conj_transpose,
    frobenius_norm,
    haar_unitary,
    identity,
    is_normal,
    matmul,
    scale,
    sub,
    zeros,
)


def test_as_matrix_rejects_non_finite():
    with pytest.raises(ValueError, match="non-finite"):
        as_matrix([[1.0, np.inf]])
    with pytest.raises(ValueError, match="non-finite"):
        as_matrix([[np.nan + 0j]])


def test_as_matrix_shapes():
    assert as_matrix(3.0).shape == (1, 1)
    assert as_matrix([1, 2, 3]).shape == (1, 3)
    assert as_matrix([[1, 2], [3, 4]]).dtype == np.complex128


def test_conj_transpose_entries():
    assert conj_transpose(as_matrix([[1 + 2j]]))[0, 0] == 1 - 2j
    eye = identity(2)
    assert np.array_equal(conj_transpose(eye), eye)
    a = as_matrix([[0, 1j], [2, 0]])
    expected = as_matrix([[0, 2], [-1j, 0]])
    assert np.array_equal(conj_transpose(a), expected)


def test_conj_transpose_involution_exact():
    rng = np.random.default_rng(1)
    a = rand_complex(rng, 5, 3)
    assert np.array_equal(conj_transpose(conj_transpose(a)), a)


def test_product_adjoint_identity():
    rng = np.random.default_rng(2)
    for _ in range(20):
        a = rand_complex(rng, 4, 6)
        b = rand_complex(rng, 6, 3)
        lhs = conj_transpose(matmul(a, b))
        rhs = matmul(conj_transpose(b), conj_transpose(a))
        assert frobenius_norm(lhs - rhs) <= 1e-13 * max(1.0, frobenius_norm(lhs))


def test_matmul_examples_and_errors():
    a = rand_complex(np.random.default_rng(3), 2, 2)
    assert np.allclose(matmul(identity(2), a), a)
    nil = as_matrix([[0, 1], [0, 0]])
    assert np.array_equal(matmul(nil, nil), zeros(2, 2))
    assert matmul(as_matrix([[1, 1j]]), as_matrix([[1], [1j]]))[0, 0] == 0
    with pytest.raises(DimensionMismatchError):
        matmul(zeros(2, 3), zeros(2, 3))


def test_add_sub_scale():
    a = rand_complex(np.random.default_rng(4), 3, 2)
    assert np.array_equal(add(a, zeros(3, 2)), a)
    assert np.array_equal(sub(a, a), zeros(3, 2))
    assert np.array_equal(scale(0, a), zeros(3, 2))
    with pytest.raises(DimensionMismatchError):
        add(a, zeros(2, 3))


def test_frobenius_norm_values():
    assert frobenius_norm(zeros(4, 2)) == 0.0
    assert frobenius_norm(identity(3)) == pytest.approx(np.sqrt(3.0))
    assert frobenius_norm(as_matrix([[3, 4]])) == pytest.approx(5.0)


def test_frobenius_norm_adjoint_invariance():
    rng = np.random.default_rng(5)
    for _ in range(20):
        a = rand_complex(rng, 7, 4)
        na, nah = frobenius_norm(a), frobenius_norm(conj_transpose(a))
        assert abs(na - nah) <= 1e-14 * na


def test_approx_eq():
    a = rand_complex(np.random.default_rng(6), 3, 3)
    assert approx_eq(a, a, 1e-15)
    assert not approx_eq(identity(2), 2 * identity(2), 1e-12)
    e = rand_complex(np.random.default_rng(7), 3, 3)
    e /= frobenius_norm(e)
    au = a / frobenius_norm(a)
    assert approx_eq(au, au + 1e-15 * e, 1e-12)
    with pytest.raises(DimensionMismatchError):
        approx_eq(a, zeros(2, 3), 1e-12)


@pytest.mark.parametrize("dim", [1, 2, 5, 16, 32])
def test_is_normal_families(dim):
    rng = np.random.default_rng(dim)
    g = rand_complex(rng, dim, dim)
    hermitian = g + conj_transpose(g)
    skew = g - conj_transpose(g)
    unitary = haar_unitary(dim, rng)
    assert is_normal(hermitian, 1e-12)
    assert is_normal(skew, 1e-12)
    assert is_normal(unitary, 1e-12)


def test_is_normal_rejects_jordan_block_and_nonsquare():
    assert not is_normal(as_matrix([[0, 1], [0, 0]]), 1e-12)
    with pytest.raises(DimensionMismatchError):
        is_normal(zeros(2, 3), 1e-12)


def test_block_split_examples():
    a11, a12, a21, a22 = block_split(identity(2), 1, 1)
    assert a11[0, 0] == 1 and a12[0, 0] == 0 and a21[0, 0] == 0 and a22[0, 0] == 1
    a = rand_complex(np.random.default_rng(8), 3, 4)
    whole, right, below, corner = block_split(a, 3, 4)
    assert np.array_equal(whole, a)
    assert right.shape == (3, 0) and below.shape == (0, 4) and corner.shape == (0, 0)
    with pytest.raises(DimensionMismatchError):
        block_split(a, 4, 0)


def test_block_roundtrip_bit_identical():
    rng = np.random.default_rng(9)
    for _ in range(10):
        m, n = rng.integers(1, 8, 2)
        a = rand_complex(rng, m, n)
        i, j = rng.integers(0, m + 1), rng.integers(0, n + 1)
        again = block_assemble(*block_split(a, i, j))
        assert np.array_equal(again, a)


def test_block_assemble_examples_and_errors():
    sig = np.diag([3.0, 2.0]).astype(complex)
    bordered = block_assemble(sig, zeros(2, 1), zeros(1, 2), zeros(1, 1))
    assert np.array_equal(bordered, as_matrix([[3, 0, 0], [0, 2, 0], [0, 0, 0]]))
    two = block_assemble(
        as_matrix([[1]]), as_matrix([[2]]), as_matrix([[3]]), as_matrix([[4]])
    )
    assert np.array_equal(two, as_matrix([[1, 2], [3, 4]]))
    with pytest.raises(DimensionMismatchError):
        block_assemble(zeros(1, 1), zeros(2, 1), zeros(1, 1), zeros(1, 1))
