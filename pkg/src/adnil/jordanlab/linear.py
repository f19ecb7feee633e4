"""Linear Jordan algebras and the FGG quotient (L, a∘b = [a,[s,b]]) / ker ad(s)^2."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..errors import PreconditionError, StructuralError
from ..exactlin import Quotient, Subspace, check_prime, kernel_basis, mat_power, matmul


class LinearJordanAlgebra:
    """Bilinear product b_i∘b_j = T[i, j] (vectors), row convention."""

    def __init__(self, p: int, table, names=None):
        self.p = check_prime(p)
        T = np.asarray(table, dtype=np.int64) % p
        d = T.shape[0]
        if T.shape != (d, d, d):
            raise StructuralError("table must have shape (d, d, d)")
        self.T = T
        self.dim = d
        self._T2 = T.reshape(d * d, d)
        self.names = tuple(names) if names else tuple(f"b{i + 1}" for i in range(d))

    def product(self, x, y):
        x = np.asarray(x, dtype=np.int64) % self.p
        y = np.asarray(y, dtype=np.int64) % self.p
        X, Y = x.reshape(-1, self.dim), y.reshape(-1, self.dim)
        W = ((X[:, :, None] * Y[:, None, :]) % self.p).reshape(X.shape[0], -1)
        if self.dim == 0:
            return np.zeros(x.shape, dtype=np.int64)
        return matmul(W, self._T2, self.p).reshape(x.shape)

    def square(self, x):
        return self.product(x, x)


def _j2(J, x, y):
    x2 = J.square(x)
    return (J.product(J.product(x2, y), x) - J.product(x2, J.product(y, x))) % J.p


@dataclass
class LinearJordanReport:
    ok: bool
    j1_witness: tuple | None
    j2_witness: tuple | None  # basis pair (x, y)
    j2_linearized_witness: tuple | None  # basis tuple (x1, x2, x3, y)
    complete: bool  # full linearization determines J2 when p > 3

    def __bool__(self):
        return self.ok


def verify_linear_jordan(J: LinearJordanAlgebra) -> LinearJordanReport:
    """J1 on basis pairs; J2 on basis pairs and its full linearization on all
    basis multisets (x1<=x2<=x3, y)."""
    d, p = J.dim, J.p
    eye = np.eye(d, dtype=np.int64)
    j1 = None
    for i, j in itertools.combinations(range(d), 2):
        if not np.array_equal(J.T[i, j], J.T[j, i]):
            j1 = (J.names[i], J.names[j])
            break
    j2 = None
    for i, j in itertools.product(range(d), repeat=2):
        if _j2(J, eye[i], eye[j]).any():
            j2 = (J.names[i], J.names[j])
            break
    lin = None
    if d:
        tuples = [(xs, y) for xs in itertools.combinations_with_replacement(range(d), 3) for y in range(d)]
        subsets = [c for r in range(1, 4) for c in itertools.combinations(range(3), r)]
        xs_all, ys_all, signs = [], [], []
        for xs, y in tuples:
            for c in subsets:
                v = np.zeros(d, dtype=np.int64)
                for t in c:
                    v[xs[t]] += 1
                xs_all.append(v)
                ys_all.append(eye[y])
                signs.append(1 if (3 - len(c)) % 2 == 0 else -1)
        vals = _j2(J, np.array(xs_all) % p, np.array(ys_all))
        vals = (vals * np.array(signs)[:, None]) % p
        sums = vals.reshape(len(tuples), len(subsets), d).sum(axis=1) % p
        bad = np.nonzero(sums.any(axis=1))[0]
        if len(bad):
            xs, y = tuples[bad[0]]
            lin = tuple(J.names[i] for i in xs) + (J.names[y],)
    ok = j1 is None and j2 is None and lin is None
    return LinearJordanReport(ok, j1, j2, lin, p > 3)


@dataclass
class FGGResult:
    jordan: LinearJordanAlgebra
    K: Subspace
    quotient: Quotient
    report: LinearJordanReport


def fgg_quotient(L, s) -> FGGResult:
    """(L, a∘b = [a,[s,b]]) / K with K = {a : a ad(s)^2 = 0}; needs p >= 5 and ad(s)^3 = 0."""
    p, n = L.p, L.dim
    if p in (2, 3):
        raise PreconditionError(f"characteristic {p} is excluded (need p >= 5)")
    s = L.element(s) if not isinstance(s, np.ndarray) else s % p
    D = L.ad_array(s)
    if mat_power(D, 3, p).any():
        raise PreconditionError("ad(s)^3 != 0")
    D2 = matmul(D, D, p)
    K = Subspace.from_vectors(kernel_basis(D2, p), n, p)
    eye = np.eye(n, dtype=np.int64)
    circ = np.array([[L.bracket(eye[i], L.bracket(s, eye[j])) for j in range(n)] for i in range(n)], dtype=np.int64)
    circ = circ.reshape(n, n, n)
    for kvec in K.basis:
        for j in range(n):
            left = np.tensordot(kvec, circ[:, j, :], axes=1) % p
            right = np.tensordot(kvec, circ[j, :, :], axes=1) % p
            if not (K.contains(left) and K.contains(right)):
                raise PreconditionError("K is not an ideal of (L, ∘)", witness=(kvec, j))
    Q = Quotient(Subspace.full(n, p), K)
    r = Q.dim
    T = np.zeros((r, r, r), dtype=np.int64)
    for i in range(r):
        for j in range(r):
            v = L.bracket(Q.reps[i], L.bracket(s, Q.reps[j]))
            T[i, j] = Q.coords(v.reshape(1, -1))[0]
    names = [L.format(v) for v in Q.reps]
    J = LinearJordanAlgebra(p, T, names)
    return FGGResult(J, K, Q, verify_linear_jordan(J))
