"""Associative algebras by structure constants (used for A^(+) and Ã)."""

from __future__ import annotations

import itertools

import numpy as np

from .errors import StructuralError
from .exactlin import Subspace, check_prime, matmul


class AssociativeAlgebra:
    """b_i b_j = sum_k table[i, j, k] b_k."""

    def __init__(self, p: int, table, names=None, check: bool = True):
        self.p = check_prime(p)
        t = np.asarray(table, dtype=np.int64) % self.p
        if t.ndim != 3 or not (t.shape[0] == t.shape[1] == t.shape[2]):
            raise StructuralError(f"structure constants must have shape (n, n, n), got {t.shape}")
        t.setflags(write=False)
        self.table = t
        self.dim = t.shape[0]
        self.names = tuple(names) if names is not None else tuple(f"b{i + 1}" for i in range(self.dim))
        if check:
            bad = self.associativity_witness()
            if bad is not None:
                raise StructuralError(f"table is not associative at basis triple {bad}")

    def associativity_witness(self):
        n, p, t = self.dim, self.p, self.table
        if n == 0:
            return None
        # (b_i b_j) b_k and b_i (b_j b_k) as (n, n, n, n)
        left = matmul(t.reshape(n * n, n), t.reshape(n, n * n), p).reshape(n, n, n, n)
        m2 = t.transpose(1, 0, 2).reshape(n, n * n)  # [m, (i, r)]
        right = matmul(t.reshape(n * n, n), m2, p).reshape(n, n, n, n).transpose(2, 0, 1, 3)
        bad = np.argwhere((left - right) % p)
        return tuple(int(x) for x in bad[0][:3]) if len(bad) else None

    def zero(self):
        return np.zeros(self.dim, dtype=np.int64)

    def basis(self, i):
        v = self.zero()
        v[i] = 1
        return v

    def product(self, a, b) -> np.ndarray:
        n = self.dim
        left = matmul(np.asarray(a, dtype=np.int64).reshape(1, n) % self.p, self.table.reshape(n, n * n), self.p)
        return matmul(np.asarray(b, dtype=np.int64).reshape(1, n) % self.p, left.reshape(n, n), self.p)[0]

    def right_mult_array(self, x) -> np.ndarray:
        """Matrix of y -> y x."""
        n = self.dim
        stack = self.table.transpose(1, 0, 2).reshape(n, n * n)
        return matmul(np.asarray(x, dtype=np.int64).reshape(1, n) % self.p, stack, self.p).reshape(n, n)

    def left_mult_array(self, x) -> np.ndarray:
        """Matrix of y -> x y."""
        n = self.dim
        return matmul(np.asarray(x, dtype=np.int64).reshape(1, n) % self.p, self.table.reshape(n, n * n), self.p).reshape(n, n)

    def inner_derivation_array(self, x) -> np.ndarray:
        """y -> yx - xy."""
        return (self.right_mult_array(x) - self.left_mult_array(x)) % self.p

    def subalgebra(self, vectors, names=None) -> AssociativeAlgebra:
        """Structure constants on the echelon basis of a closed subspace."""
        S = Subspace.from_vectors(vectors, self.dim, self.p)
        m = S.dim
        t = np.zeros((m, m, m), dtype=np.int64)
        for i, j in itertools.product(range(m), repeat=2):
            prod = self.product(S.basis[i], S.basis[j])
            if not S.contains(prod):
                raise StructuralError("subspace is not closed under the product")
            t[i, j] = S.coordinates(prod)
        return AssociativeAlgebra(self.p, t, names)


def matrix_algebra(n: int, p: int) -> AssociativeAlgebra:
    """M_n(F_p) on the basis e_ij in row-major order."""
    dim = n * n
    t = np.zeros((dim, dim, dim), dtype=np.int64)
    for i, j, k in itertools.product(range(n), repeat=3):
        # e_ij e_jk = e_ik
        t[i * n + j, j * n + k, i * n + k] = 1
    names = [f"e{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    return AssociativeAlgebra(p, t, names, check=False)


def matrix_to_vector(m) -> np.ndarray:
    return np.asarray(m, dtype=np.int64).reshape(-1)


def transpose_involution(n: int, p: int) -> np.ndarray:
    """Matrix of X -> X^T on the e_ij basis."""
    dim = n * n
    inv = np.zeros((dim, dim), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            inv[i * n + j, j * n + i] = 1
    return inv


def strictly_upper_assoc(n: int, p: int) -> AssociativeAlgebra:
    """Strictly upper triangular n x n matrices (nilpotent of index n)."""
    full = matrix_algebra(n, p)
    vecs = [full.basis(i * n + j) for i in range(n) for j in range(i + 1, n)]
    names = [f"e{i + 1}{j + 1}" for i in range(n) for j in range(i + 1, n)]
    return full.subalgebra(vecs, names)
