import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from adnil import FpMatrix, FpScalar, ModulusError, StructuralError, Subspace
from adnil.exactlin import (
    inverse_matrix,
    kernel_basis,
    mat_power,
    matmul,
    nilpotency_index,
    nilpotency_index_array,
    rank,
    solve,
)


def naive_rank(rows, p):
    # plain Gaussian elimination on python ints
    m = [[int(x) % p for x in r] for r in rows]
    r = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        iv = pow(m[r][c], -1, p)
        m[r] = [x * iv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        r += 1
    return r


def test_scalar_arithmetic():
    a, b = FpScalar(3, 7), FpScalar(5, 7)
    assert (a * b).residue == 1
    assert (a / b * b) == a
    assert a.inverse().residue == 5
    with pytest.raises(ModulusError):
        a + FpScalar(1, 5)
    with pytest.raises(ZeroDivisionError):
        FpScalar(0, 7).inverse()


def test_non_prime_rejected():
    with pytest.raises(StructuralError):
        FpScalar(1, 6)


def test_kernel_examples():
    assert FpMatrix.zeros(3, 3, 5).kernel().dim == 3
    assert FpMatrix.identity(3, 5).kernel().dim == 0
    assert FpMatrix([[5]], 5).kernel().dim == 1


def test_jordan_block_nilpotency():
    J = np.diag([1, 1, 1], k=1)
    assert nilpotency_index(FpMatrix(J, 7), 10) == 4
    assert nilpotency_index(FpMatrix.identity(3, 7), 10) is None


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from([2, 3, 5, 7]),
    st.integers(1, 6),
    st.integers(1, 6),
    st.integers(0, 2**32 - 1),
)
def test_rank_and_kernel_against_naive(p, r, c, seed):
    a = np.random.default_rng(seed).integers(0, p, (r, c))
    rk = rank(a, p)
    assert rk == naive_rank(a.tolist(), p)
    K = kernel_basis(a, p)
    assert K.shape[0] == r - rk
    assert not matmul(K, a, p).any()


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5, 7, 11]), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_inverse_and_solve(p, n, seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, p, (n, n))
    if rank(a, p) == n:
        ai = inverse_matrix(a, p)
        assert (matmul(a, ai, p) == np.eye(n, dtype=np.int64)).all()
    x = rng.integers(0, p, n)
    v = matmul(x.reshape(1, -1), a, p)[0]
    y = solve(a, v, p)
    assert y is not None and (matmul(np.asarray(y).reshape(1, -1), a, p)[0] == v).all()


def test_large_modulus_matmul_is_exact():
    p = 2**31 - 1
    a = np.full((3, 3), p - 1, dtype=np.int64)
    # (p-1)^2 * 3 = 3 mod p
    assert (matmul(a, a, p) == 3).all()


def test_mat_power_and_index():
    a = np.diag([1, 1], k=1)
    assert not mat_power(a, 3, 5).any()
    assert nilpotency_index_array(a, 5, 10) == 3
    assert (mat_power(a, 0, 5) == np.eye(3)).all()


def test_subspace_operations():
    p = 5
    U = Subspace.from_vectors(np.array([[1, 0, 0], [0, 1, 0]]), 3, p)
    V = Subspace.from_vectors(np.array([[0, 1, 0], [0, 0, 1]]), 3, p)
    assert (U + V).dim == 3
    assert U.intersect(V).dim == 1
    assert U.contains(np.array([2, 3, 0]))
    assert not U.contains(np.array([0, 0, 1]))
    assert Subspace.from_vectors(np.array([[2, 4, 0], [1, 0, 0]]), 3, p) == U
