"""Quadratic Jordan algebras (x -> x^2, Q) over F_p, models and axioms."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ..config import evaluation_budget
from ..errors import BudgetError, PreconditionError, StructuralError
from ..exactlin import Subspace, check_prime, kernel_basis, matmul, rref
from .generic import PolyVec, monomial_str, pv_circle, pv_square, pv_triple, pv_uq


class QuadraticJordanAlgebra:
    """Base class: subclasses provide square(x) and uq(y, x) = yQ(x)."""

    p: int
    dim: int
    names: tuple
    basis_masks: tuple | None = None  # set for algebras graded by Grassmann masks

    def square(self, x) -> np.ndarray:
        raise NotImplementedError

    def uq(self, y, x) -> np.ndarray:
        raise NotImplementedError

    # derived operations
    def _vec(self, x):
        return np.asarray(x, dtype=np.int64) % self.p

    def circle(self, x, y) -> np.ndarray:
        x, y = self._vec(x), self._vec(y)
        return (self.square((x + y) % self.p) - self.square(x) - self.square(y)) % self.p

    def Q_matrix(self, x) -> np.ndarray:
        eye = np.eye(self.dim, dtype=np.int64)
        x = self._vec(x)
        if self.dim == 0:
            return np.zeros((0, 0), dtype=np.int64)
        return np.array([self.uq(eye[k], x) for k in range(self.dim)], dtype=np.int64).reshape(self.dim, self.dim)

    def Q_bilinear_matrix(self, x, z) -> np.ndarray:
        x, z = self._vec(x), self._vec(z)
        return (self.Q_matrix((x + z) % self.p) - self.Q_matrix(x) - self.Q_matrix(z)) % self.p

    def triple(self, x, y, z) -> np.ndarray:
        """{x, y, z} = y(Q(x+z) - Q(x) - Q(z))."""
        x, y, z = self._vec(x), self._vec(y), self._vec(z)
        return (self.uq(y, (x + z) % self.p) - self.uq(y, x) - self.uq(y, z)) % self.p

    def zero(self):
        return np.zeros(self.dim, dtype=np.int64)

    def basis(self, i: int):
        v = self.zero()
        v[i] = 1
        return v

    def tabulate(self) -> TableQJA:
        d, p = self.dim, self.p
        eye = np.eye(d, dtype=np.int64)
        S = np.zeros((d, d, d), dtype=np.int64)
        Qt = np.zeros((d, d, d, d), dtype=np.int64)
        for i in range(d):
            S[i, i] = self.square(eye[i])
            Qt[i, i] = self.Q_matrix(eye[i])
            for j in range(i + 1, d):
                S[i, j] = self.circle(eye[i], eye[j])
                Qt[i, j] = self.Q_bilinear_matrix(eye[i], eye[j])
        return TableQJA(p, S, Qt, self.names, self.basis_masks)


def _apply_ops(y, M, p):
    """Row vector(s) y times operator(s) M, stacked along the leading axis."""
    if y.ndim == 1:
        return matmul(y.reshape(1, -1), M, p)[0]
    d = M.shape[-1]
    if p * p * max(d, 1) < 2**62:
        return np.einsum("ni,nij->nj", y % p, M % p) % p
    return (np.einsum("ni,nij->nj", y.astype(object), M.astype(object)) % p).astype(np.int64)


class TableQJA(QuadraticJordanAlgebra):
    """Q(x) = sum_i x_i^2 Q(b_i) + sum_{i<j} x_i x_j Q(b_i, b_j); same for x^2.

    S[i,i] = b_i^2, S[i,j] = b_i∘b_j (i<j); Qt[i,i] = Q(b_i), Qt[i,j] = Q(b_i,b_j).
    All operations also accept stacks of vectors (leading axis)."""

    def __init__(self, p: int, S, Qt, names=None, basis_masks=None):
        self.p = check_prime(p)
        S = np.asarray(S, dtype=np.int64) % p
        Qt = np.asarray(Qt, dtype=np.int64) % p
        d = S.shape[0]
        if S.shape != (d, d, d) or Qt.shape != (d, d, d, d):
            raise StructuralError("table shapes must be (d,d,d) and (d,d,d,d)")
        self.dim = d
        self._triu = np.triu(np.ones((d, d), dtype=bool))
        self.S = np.where(self._triu[:, :, None], S, 0)
        self.Qt = np.where(self._triu[:, :, None, None], Qt, 0)
        self._S2 = self.S.reshape(d * d, d)
        self._Q2 = self.Qt.reshape(d * d, d * d)
        self.names = tuple(names) if names else tuple(f"b{i + 1}" for i in range(d))
        self.basis_masks = basis_masks

    def _weights(self, x, y=None):
        """Stacked quadratic (y None) or polarized weights, flattened to (n, d*d)."""
        p, d = self.p, self.dim
        X = self._vec(x).reshape(-1, d)
        if y is None:
            W = (X[:, :, None] * X[:, None, :]) % p
            W = np.where(self._triu, W, 0)
        else:
            Y = self._vec(y).reshape(-1, d)
            O = (X[:, :, None] * Y[:, None, :]) % p
            W = np.where(self._triu, O + O.transpose(0, 2, 1), 0) % p
        return W.reshape(-1, d * d)

    def _shape(self, res, x, tail):
        x = np.asarray(x)
        return res.reshape(x.shape[:-1] + tail)

    def square(self, x):
        if self.dim == 0:
            return np.zeros(np.shape(x), dtype=np.int64)
        return self._shape(matmul(self._weights(x), self._S2, self.p), x, (self.dim,))

    def circle(self, x, y):
        if self.dim == 0:
            return np.zeros(np.shape(x), dtype=np.int64)
        return self._shape(matmul(self._weights(x, y), self._S2, self.p), x, (self.dim,))

    def Q_matrix(self, x):
        d = self.dim
        if d == 0:
            return np.zeros(np.shape(x)[:-1] + (0, 0), dtype=np.int64)
        return self._shape(matmul(self._weights(x), self._Q2, self.p), x, (d, d))

    def Q_bilinear_matrix(self, x, z):
        d = self.dim
        if d == 0:
            return np.zeros(np.shape(x)[:-1] + (0, 0), dtype=np.int64)
        return self._shape(matmul(self._weights(x, z), self._Q2, self.p), x, (d, d))

    def uq(self, y, x):
        if self.dim == 0:
            return np.zeros(np.shape(y), dtype=np.int64)
        return _apply_ops(self._vec(y), self.Q_matrix(x), self.p)

    def triple(self, x, y, z):
        if self.dim == 0:
            return np.zeros(np.shape(y), dtype=np.int64)
        return _apply_ops(self._vec(y), self.Q_bilinear_matrix(x, z), self.p)

    def tabulate(self):
        return self

    def corrupted(self, i: int = 0, j: int = 0, k: int = 0, l: int = 0) -> TableQJA:
        """Copy with the sign of one Q-table entry flipped (or 1 added if it is 0)."""
        Qt = self.Qt.copy()
        Qt[i, j, k, l] = (-Qt[i, j, k, l]) % self.p if Qt[i, j, k, l] else 1
        return TableQJA(self.p, self.S, Qt, self.names, self.basis_masks)


class FunctionQJA(QuadraticJordanAlgebra):
    def __init__(self, p, dim, square, uq, names=None, basis_masks=None):
        self.p = check_prime(p)
        self.dim = dim
        self._square = square
        self._uq = uq
        self.names = tuple(names) if names else tuple(f"b{i + 1}" for i in range(dim))
        self.basis_masks = basis_masks

    def square(self, x):
        x = self._vec(x)
        if x.ndim == 2:
            return np.array([self.square(r) for r in x], dtype=np.int64).reshape(x.shape)
        return np.asarray(self._square(x), dtype=np.int64) % self.p

    def uq(self, y, x):
        y, x = self._vec(y), self._vec(x)
        if y.ndim == 2:
            return np.array([self.uq(a, b) for a, b in zip(y, x)], dtype=np.int64).reshape(y.shape)
        return np.asarray(self._uq(y, x), dtype=np.int64) % self.p


def from_tables(p, squares, circles, Q_diag, Q_pol, names=None) -> TableQJA:
    """Tables keyed by basis index: squares[i], circles[(i,j)], Q_diag[i], Q_pol[(i,j)] for i<j."""
    d = len(squares)
    S = np.zeros((d, d, d), dtype=np.int64)
    Qt = np.zeros((d, d, d, d), dtype=np.int64)
    for i in range(d):
        S[i, i] = squares[i]
        Qt[i, i] = Q_diag[i]
    for (i, j), v in circles.items():
        S[min(i, j), max(i, j)] = v
    for (i, j), m in Q_pol.items():
        Qt[min(i, j), max(i, j)] = m
    return TableQJA(p, S, Qt, names)


# ---------------------------------------------------------------- models


def plus_algebra(A) -> TableQJA:
    """A^(+): x^2 = xx, yQ(x) = xyx."""
    return FunctionQJA(
        A.p, A.dim, lambda x: A.product(x, x), lambda y, x: A.product(A.product(x, y), x), A.names
    ).tabulate()


def hermitian_algebra(A, involution) -> TableQJA:
    """H(A, *) inside A^(+); `involution` is the matrix of * (row convention)."""
    p, n = A.p, A.dim
    inv = np.asarray(involution, dtype=np.int64) % p
    eye = np.eye(n, dtype=np.int64)
    if ((matmul(inv, inv, p) - eye) % p).any():
        raise PreconditionError("involution does not square to the identity")
    for i in range(n):
        for j in range(n):
            lhs = matmul(A.product(eye[i], eye[j]).reshape(1, -1), inv, p)[0]
            rhs = A.product(inv[j], inv[i])
            if not np.array_equal(lhs, rhs):
                raise PreconditionError("(ab)* != b*a*", witness=(i, j))
    H = Subspace.from_vectors(kernel_basis((inv - eye) % p, p), n, p)
    B = H.basis
    names = tuple(A.format(b) if hasattr(A, "format") else f"h{k + 1}" for k, b in enumerate(B))

    def coords(v):
        if not H.contains(v):
            raise StructuralError("H(A,*) is not closed")
        return H.coordinates(v)

    def lift(c):
        return matmul(np.asarray(c).reshape(1, -1), B, p)[0] if H.dim else np.zeros(n, dtype=np.int64)

    def square(c):
        x = lift(c)
        return coords(A.product(x, x))

    def uq(cy, cx):
        x, y = lift(cx), lift(cy)
        return coords(A.product(A.product(x, y), x))

    return FunctionQJA(p, H.dim, square, uq, names).tabulate()


def quadratic_form_algebra(p, q_diag, q_pol, one, names=None) -> TableQJA:
    """J(q, 1): v^2 = q(v,1)v - q(v)1, wQ(v) = q(v, w̄)v - q(v)w̄ with w̄ = q(w,1)1 - w.

    q(v) = sum q_diag[i] v_i^2 + sum_{i<j} q_pol[i][j] v_i v_j."""
    check_prime(p)
    qd = np.asarray(q_diag, dtype=np.int64) % p
    d = len(qd)
    qp = np.triu(np.asarray(q_pol, dtype=np.int64) % p, 1) if d else np.zeros((0, 0), dtype=np.int64)
    one = np.asarray(one, dtype=np.int64) % p

    def q(v):
        v = np.asarray(v, dtype=np.int64) % p
        return int((qd @ (v * v % p) + v @ qp @ v) % p) if d else 0

    def qb(v, w):
        return (q((v + w) % p) - q(v) - q(w)) % p

    if q(one) != 1:
        raise PreconditionError(f"q(1) = {q(one)} != 1")

    def bar(w):
        return (qb(w, one) * one - w) % p

    def square(v):
        return (qb(v, one) * v - q(v) * one) % p

    def uq(w, v):
        wb = bar(w)
        return (qb(v, wb) * v - q(v) * wb) % p

    J = FunctionQJA(p, d, square, uq, names).tabulate()
    J.form = (q, qb, one)
    return J


def construct_model(kind: str, *args, **kwargs) -> TableQJA:
    if kind == "plus":
        return plus_algebra(*args, **kwargs)
    if kind == "hermitian":
        return hermitian_algebra(*args, **kwargs)
    if kind == "quadratic_form":
        return quadratic_form_algebra(*args, **kwargs)
    raise StructuralError(f"unknown model kind {kind!r}")


def homotope(J: QuadraticJordanAlgebra, a) -> QuadraticJordanAlgebra:
    """J^(a): x^{*2} = aQ(x), yQ*(x) = yQ(a)Q(x)."""
    a = J._vec(a)
    H = FunctionQJA(J.p, J.dim, lambda x: J.uq(a, x), lambda y, x: J.uq(J.uq(y, a), x), J.names, J.basis_masks)
    return H.tabulate() if isinstance(J, TableQJA) else H


def zero_algebra(p: int, d: int) -> TableQJA:
    return TableQJA(p, np.zeros((d, d, d)), np.zeros((d, d, d, d)))


# ---------------------------------------------------------------- axioms


def _m1(J, x, y):
    return (J.triple(x, x, y) - J.circle(J.square(x), y)) % J.p


def _m2(J, x, y):
    return (J.circle(J.uq(y, x), x) - J.uq(J.circle(y, x), x)) % J.p


def _m3(J, x):
    x2 = J.square(x)
    return (J.uq(x2, x) - J.square(x2)) % J.p


def _m4(J, x, y):
    return (J.uq(J.uq(J.square(x), y), x) - J.square(J.uq(y, x))) % J.p


def _m5(J, x, z):
    return (J.uq(z, J.square(x)) - J.uq(J.uq(z, x), x)) % J.p


def _m6(J, x, y, z):
    return (J.uq(z, J.uq(y, x)) - J.uq(J.uq(J.uq(z, x), y), x)) % J.p


# name -> (evaluator, variables, degrees)
AXIOMS = {
    "M1": (_m1, "xy", (2, 1)),
    "M2": (_m2, "xy", (3, 1)),
    "M3": (_m3, "x", (4,)),
    "M4": (_m4, "xy", (4, 2)),
    "M5": (_m5, "xz", (4, 1)),
    "M6": (_m6, "xyz", (4, 2, 1)),
}


def _generic_axiom(J, name, X, Y, Z):
    if name == "M1":
        return pv_triple(J, X, X, Y) - pv_circle(J, pv_square(J, X), Y)
    if name == "M2":
        return pv_circle(J, pv_uq(J, Y, X), X) - pv_uq(J, pv_circle(J, Y, X), X)
    if name == "M3":
        X2 = pv_square(J, X)
        return pv_uq(J, X2, X) - pv_square(J, X2)
    if name == "M4":
        return pv_uq(J, pv_uq(J, pv_square(J, X), Y), X) - pv_square(J, pv_uq(J, Y, X))
    if name == "M5":
        return pv_uq(J, Z, pv_square(J, X)) - pv_uq(J, pv_uq(J, Z, X), X)
    if name == "M6":
        return pv_uq(J, Z, pv_uq(J, Y, X)) - pv_uq(J, pv_uq(J, pv_uq(J, Z, X), Y), X)
    raise StructuralError(name)


@dataclass
class AxiomFailure:
    axiom: str
    method: str  # "generic" (coefficient of a monomial) or "linearized" (basis tuple)
    witness: object
    value: np.ndarray

    def __str__(self):
        return f"{self.axiom} fails ({self.method}) at {self.witness}: {self.value.tolist()}"


@dataclass
class JordanReport:
    ok: bool
    failures: list = field(default_factory=list)
    checked: dict = field(default_factory=dict)  # axiom -> number of evaluations
    methods: tuple = ()

    def __bool__(self):
        return self.ok


def _subset_choices(degrees):
    """(per-variable subsets, sign) for the inclusion-exclusion of a full linearization."""
    per = [[c for r in range(1, k + 1) for c in itertools.combinations(range(k), r)] for k in degrees]
    out = []
    for choice in itertools.product(*per):
        sign = sum(k - len(c) for k, c in zip(degrees, choice)) % 2
        out.append((choice, -1 if sign else 1))
    return out


def _linearized_batch(J, fn, degrees, tuples):
    """Full linearization of fn at basis tuples; one value row per tuple.

    All subset sums of all tuples are evaluated as one stack."""
    p, d = J.p, J.dim
    choices = _subset_choices(degrees)
    nv = len(degrees)
    args = [[] for _ in range(nv)]
    signs = []
    for tup in tuples:
        for choice, sign in choices:
            for v in range(nv):
                vec = np.zeros(d, dtype=np.int64)
                for t in choice[v]:
                    vec[tup[v][t]] += 1
                args[v].append(vec)
            signs.append(sign)
    if not tuples:
        return np.zeros((0, d), dtype=np.int64)
    vals = fn(J, *[np.array(a) % p for a in args])
    vals = (vals * np.array(signs)[:, None]) % p
    return vals.reshape(len(tuples), len(choices), d).sum(axis=1) % p


def _subset_sum_linearization(J, fn, degrees, args_by_var):
    """Full linearization of fn at the given arguments (one list per variable)."""
    p = J.p
    total = np.zeros(J.dim, dtype=np.int64)
    for choice, sign in _subset_choices(degrees):
        vals = []
        for a, combo in zip(args_by_var, choice):
            s = np.zeros(J.dim, dtype=np.int64)
            for t in combo:
                s = s + a[t]
            vals.append(s % p)
        total = (total + sign * fn(J, *vals)) % p
    return total


def _tuples(J, degrees, graded: bool):
    """Index tuples per variable: multisets of basis indices; for mask-graded
    algebras only tuples whose masks are pairwise disjoint."""
    d = J.dim
    if not graded:
        per = [list(itertools.combinations_with_replacement(range(d), k)) for k in degrees]
        yield from itertools.product(*per)
        return
    masks = J.basis_masks

    def rec(v, used, acc):
        if v == len(degrees):
            yield tuple(acc)
            return

        def pick(start, k, used, chosen):
            if k == 0:
                yield used, tuple(chosen)
                return
            for i in range(start, d):
                if masks[i] & used:
                    continue
                yield from pick(i + 1, k - 1, used | masks[i], chosen + [i])

        for used2, chosen in pick(0, degrees[v], used, []):
            yield from rec(v + 1, used2, acc + [chosen])

    yield from rec(0, 0, [])


def verify_quadratic_jordan(J: QuadraticJordanAlgebra, axioms=None, method: str = "auto", budget=None,
                            stop_at_first: bool = True) -> JordanReport:
    """M1-M6 with all partial linearizations.

    "generic": expand each axiom at generic arguments sum t_i b_i and require
    every coefficient to vanish (equivalent to all partial linearizations).
    "linearized": full linearization on all basis multisets.  For algebras
    graded by Grassmann masks only tuples with pairwise disjoint masks can
    give nonzero values, and every coefficient of the generic expansion is
    such a value, so this check is complete there.
    "auto": generic + linearized for dim <= 6, linearized alone otherwise."""
    names = list(axioms or AXIOMS)
    graded = J.basis_masks is not None
    if method == "auto":
        methods = ("generic", "linearized") if (J.dim <= 6 and not graded) else ("linearized",)
    elif method == "both":
        methods = ("generic", "linearized")
    else:
        methods = (method,)
    budget = evaluation_budget() if budget is None else budget
    failures, checked = [], {}
    eye = np.eye(J.dim, dtype=np.int64)
    for name in names:
        fn, vars_, degrees = AXIOMS[name]
        count = 0
        if "generic" in methods:
            X = PolyVec.generic(J.dim, J.p, 0)
            Y = PolyVec.generic(J.dim, J.p, J.dim)
            Z = PolyVec.generic(J.dim, J.p, 2 * J.dim)
            val = _generic_axiom(J, name, X, Y, Z)
            count += 1
            if not val.is_zero():
                mono, vec = val.first_term()
                failures.append(AxiomFailure(name, "generic", monomial_str(mono, J.dim), vec))
                if stop_at_first:
                    checked[name] = count
                    continue
        if "linearized" in methods and J.dim:
            chunk = []
            gen = _tuples(J, degrees, graded)
            done = False
            while not done:
                chunk = list(itertools.islice(gen, 256))
                done = len(chunk) < 256
                count += len(chunk)
                if count > budget:
                    raise BudgetError(f"{name}: more than {budget} basis tuples")
                vals = _linearized_batch(J, fn, degrees, chunk)
                bad = np.nonzero(vals.any(axis=1))[0]
                for b in bad:
                    tup = chunk[b]
                    wit = tuple(tuple(J.names[i] for i in t) for t in tup)
                    failures.append(AxiomFailure(name, "linearized", dict(zip(vars_, wit)), vals[b]))
                    if stop_at_first:
                        break
                if len(bad) and stop_at_first:
                    break
        checked[name] = count
    return JordanReport(not failures, failures, checked, methods)


# ---------------------------------------------------------------- powers, azd


def jordan_power(J, x, n: int) -> np.ndarray:
    """x^1 = x, x^{2k} = (x^k)^2, x^{2k+1} = xQ(x^k)."""
    if n < 1:
        raise StructuralError("n must be >= 1")
    x = J._vec(x)
    if n == 1:
        return x
    k = n // 2
    xk = jordan_power(J, x, k)
    return J.square(xk) if n % 2 == 0 else J.uq(x, xk)


def power_associativity_witness(J, x, bound: int = 8):
    """First (kind, i, j) violating x^iQ(x^j) = x^{i+2j} or x^i∘x^j = 2x^{i+j}, or None."""
    p = J.p
    pw = {k: jordan_power(J, x, k) for k in range(1, bound + 1)}
    for i in range(1, bound + 1):
        for j in range(1, bound + 1):
            if i + 2 * j <= bound and not np.array_equal(J.uq(pw[i], pw[j]), pw[i + 2 * j]):
                return ("Q", i, j)
            if i + j <= bound and not np.array_equal(J.circle(pw[i], pw[j]), (2 * pw[i + j]) % p):
                return ("circle", i, j)
    return None


def azd_check(J, a) -> bool:
    """Q(a) = 0."""
    return not J.Q_matrix(a).any()


def generic_power(J, n: int) -> PolyVec:
    X = PolyVec.generic(J.dim, J.p)

    def pw(k):
        if k == 1:
            return X
        h = pw(k // 2)
        return pv_square(J, h) if k % 2 == 0 else pv_uq(J, X, h)

    return pw(n)


def power_identity_holds(J, n: int) -> bool:
    """x^n = 0 identically (all partial linearizations)."""
    return generic_power(J, n).is_zero()


@dataclass
class AzdPowers:
    n: int
    rows: list  # (i, x^i, azd?)
    stronger_hypothesis: bool


def azd_powers(J, x, n: int) -> AzdPowers:
    """Given x^n = 0 identically: x^{n+1}..x^{2n-1} are azd; if moreover
    x^n = ... = x^{2n-1} = 0 identically, x^{n-1} is azd too."""
    if n < 2:
        raise StructuralError("n must be >= 2")
    if not power_identity_holds(J, n):
        raise PreconditionError(f"x^{n} = 0 does not hold identically")
    rows = []
    for i in range(n + 1, 2 * n):
        xi = jordan_power(J, x, i)
        rows.append((i, xi, azd_check(J, xi)))
    stronger = all(power_identity_holds(J, i) for i in range(n, 2 * n))
    if stronger and n - 1 >= 1:
        xi = jordan_power(J, x, n - 1)
        rows.insert(0, (n - 1, xi, azd_check(J, xi)))
    return AzdPowers(n, rows, stronger)


def annihilator_of_Q(J, a) -> Subspace:
    """K'_a = {x : xQ(a) = 0}."""
    return Subspace.from_vectors(kernel_basis(J.Q_matrix(a), J.p), J.dim, J.p)


def azd_pushforward(J, a, b, K: Subspace | None = None) -> np.ndarray:
    """If b + K is azd in J^(a)/K with KQ(a) = 0, then bQ(a) is azd in J.

    K defaults to K'_a = {x : xQ(a) = 0}."""
    a, b = J._vec(a), J._vec(b)
    K = annihilator_of_Q(J, a) if K is None else K
    Qa = J.Q_matrix(a)
    if matmul(K.basis, Qa, J.p).any():
        raise PreconditionError("KQ(a) != 0")
    H = homotope(J, a)
    Qs = H.Q_matrix(b)
    for k in range(J.dim):
        if not K.contains(Qs[k]):
            raise PreconditionError("b + K is not an absolute zero divisor of J^(a)/K", witness=k)
    c = J.uq(b, a)
    if not azd_check(J, c):
        raise PreconditionError("bQ(a) is not an absolute zero divisor", witness=c)
    return c


def sym_identity(J, n: int, budget=None):
    """Sym_n, the full linearization of x -> x^n, on all basis n-multisets.

    Returns (holds, witness tuple or None, value)."""
    if n < 1:
        raise StructuralError("n must be >= 1")
    from math import comb

    count = comb(J.dim + n - 1, n)
    budget = evaluation_budget() if budget is None else budget
    if count > budget:
        raise BudgetError(f"Sym_{n} needs {count} tuples, budget {budget}")
    eye = np.eye(J.dim, dtype=np.int64)

    def fn(J_, v):
        return jordan_power(J_, v, n)

    for t in itertools.combinations_with_replacement(range(J.dim), n):
        val = _subset_sum_linearization(J, fn, (n,), [[eye[i] for i in t]])
        if val.any():
            return False, tuple(J.names[i] for i in t), val
    return True, None, None


def sym_bound_check(J):
    """Sym_{d(p-1)+1} = 0 for a d-dimensional algebra."""
    n = J.dim * (J.p - 1) + 1
    return (n,) + sym_identity(J, n)
