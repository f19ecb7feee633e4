"""Generic elements: vectors with polynomial coefficients.

x = sum_i t_i b_i with commuting indeterminates t_i.  An identity holds with
all its partial linearizations iff it holds for generic arguments, i.e. iff
every coefficient of the expansion vanishes."""

from __future__ import annotations

import numpy as np


class PolyVec:
    """Map monomial (sorted tuple of variable ids) -> coefficient vector."""

    __slots__ = ("terms", "dim", "p")

    def __init__(self, terms: dict, dim: int, p: int):
        self.terms = {m: v % p for m, v in terms.items() if (v % p).any()}
        self.dim = dim
        self.p = p

    @classmethod
    def generic(cls, dim: int, p: int, offset: int = 0) -> PolyVec:
        eye = np.eye(dim, dtype=np.int64)
        return cls({(offset + i,): eye[i] for i in range(dim)}, dim, p)

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return sorted(self.terms.items())

    def __add__(self, other: PolyVec) -> PolyVec:
        out = dict(self.terms)
        for m, v in other.terms.items():
            out[m] = out[m] + v if m in out else v
        return PolyVec(out, self.dim, self.p)

    def __neg__(self):
        return PolyVec({m: -v for m, v in self.terms.items()}, self.dim, self.p)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int) -> PolyVec:
        return PolyVec({m: c * v for m, v in self.terms.items()}, self.dim, self.p)

    def first_term(self):
        return self.items()[0] if self.terms else None


def _merge(a: tuple, b: tuple) -> tuple:
    return tuple(sorted(a + b))


def _accumulate(out: dict, mono, vec):
    if mono in out:
        out[mono] = out[mono] + vec
    else:
        out[mono] = vec


def pv_linear(P: PolyVec, M: np.ndarray) -> PolyVec:
    """Apply a linear operator (row convention)."""
    from ..exactlin import matmul

    items = P.items()
    if not items:
        return PolyVec({}, M.shape[1], P.p)
    rows = matmul(np.array([v for _, v in items]), M, P.p)
    return PolyVec({m: r for (m, _), r in zip(items, rows)}, M.shape[1], P.p)


def pv_square(J, P: PolyVec) -> PolyVec:
    items = P.items()
    out = {}
    for i, (m1, v1) in enumerate(items):
        _accumulate(out, _merge(m1, m1), J.square(v1))
        for m2, v2 in items[i + 1 :]:
            _accumulate(out, _merge(m1, m2), J.circle(v1, v2))
    return PolyVec(out, J.dim, J.p)


def pv_circle(J, P: PolyVec, R: PolyVec) -> PolyVec:
    out = {}
    for m1, v1 in P.items():
        for m2, v2 in R.items():
            _accumulate(out, _merge(m1, m2), J.circle(v1, v2))
    return PolyVec(out, J.dim, J.p)


def pv_Q_operators(J, X: PolyVec) -> list:
    """[(monomial, operator)] with Q(X) = sum monomial * operator."""
    items = X.items()
    ops = []
    for i, (m1, v1) in enumerate(items):
        ops.append((_merge(m1, m1), J.Q_matrix(v1)))
        for m2, v2 in items[i + 1 :]:
            ops.append((_merge(m1, m2), J.Q_bilinear_matrix(v1, v2)))
    return ops


def pv_uq(J, Y: PolyVec, X: PolyVec) -> PolyVec:
    """Y Q(X)."""
    from ..exactlin import matmul

    yitems = Y.items()
    out = {}
    if not yitems:
        return PolyVec({}, J.dim, J.p)
    ys = np.array([v for _, v in yitems])
    for mono, op in pv_Q_operators(J, X):
        if not op.any():
            continue
        rows = matmul(ys, op, J.p)
        for (my, _), r in zip(yitems, rows):
            _accumulate(out, _merge(my, mono), r)
    return PolyVec(out, J.dim, J.p)


def pv_triple(J, X: PolyVec, Y: PolyVec, Z: PolyVec) -> PolyVec:
    """{X, Y, Z} = Y(Q(X+Z) - Q(X) - Q(Z))."""
    from ..exactlin import matmul

    out = {}
    yitems = Y.items()
    if not yitems:
        return PolyVec({}, J.dim, J.p)
    ys = np.array([v for _, v in yitems])
    for mx, vx in X.items():
        for mz, vz in Z.items():
            op = J.Q_bilinear_matrix(vx, vz)
            rows = matmul(ys, op, J.p)
            for (my, _), r in zip(yitems, rows):
                _accumulate(out, _merge(_merge(mx, mz), my), r)
    return PolyVec(out, J.dim, J.p)


def monomial_str(mono: tuple, dim: int, letters="xyz") -> str:
    from collections import Counter

    parts = []
    for v, e in sorted(Counter(mono).items()):
        name = f"{letters[v // dim]}{v % dim + 1}" if v // dim < len(letters) else f"t{v}"
        parts.append(name if e == 1 else f"{name}^{e}")
    return " ".join(parts)
