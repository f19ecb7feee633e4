"""
Finite-dimensional Lie algebras over F_p given by structure constants.

Elements are int64 coordinate vectors.  ad(a) is the matrix of x -> [x, a]
so that x @ ad(a) == [x, a].  Brackets of several arguments are
left-normed: [a, b, c] = [[a, b], c].
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ParseError, StructuralError
from .exactlin import (
    FpMatrix,
    Subspace,
    check_prime,
    matmul,
    kernel_basis,
    nilpotency_index_array,
)


class LieAlgebra:
    """Structure constants c[i, j, k]: [b_i, b_j] = sum_k c[i, j, k] b_k."""

    def __init__(self, p: int, table, names=None, grading=None):
        self.p = check_prime(p)
        t = np.asarray(table, dtype=np.int64) % self.p
        if t.ndim != 3 or not (t.shape[0] == t.shape[1] == t.shape[2]):
            raise StructuralError(f"structure constants must have shape (n, n, n), got {t.shape}")
        t.setflags(write=False)
        self.table = t
        self.dim = t.shape[0]
        if names is None:
            names = [f"b{i + 1}" for i in range(self.dim)]
        names = tuple(names)
        if len(names) != self.dim or len(set(names)) != self.dim:
            raise StructuralError("need one distinct name per basis vector")
        self.names = names
        if grading is not None:
            grading = tuple(int(d) for d in grading)
            if len(grading) != self.dim or min(grading, default=1) < 1:
                raise StructuralError("grading needs one positive degree per basis vector")
        self.grading = grading

    @classmethod
    def from_brackets(cls, p: int, names, brackets: dict, grading=None) -> LieAlgebra:
        """Build from upper-triangular data {(i, j): vector} with i < j.

        [b_j, b_i] is derived and [b_i, b_i] = 0, so the result is
        anticommutative by construction."""
        p = check_prime(p)
        n = len(names)
        t = np.zeros((n, n, n), dtype=np.int64)
        for (i, j), vec in brackets.items():
            if not 0 <= i < j < n:
                raise StructuralError(f"bracket entries need i < j, got ({i}, {j})")
            v = np.asarray(vec, dtype=np.int64) % p
            t[i, j] = v
            t[j, i] = (-v) % p
        return cls(p, t, names, grading)

    @classmethod
    def abelian(cls, n: int, p: int, names=None) -> LieAlgebra:
        return cls(p, np.zeros((n, n, n), dtype=np.int64), names)

    def upper_entries(self):
        """Nonzero structure constants (i, j, k, value) with i < j."""
        out = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                for k in np.nonzero(self.table[i, j])[0]:
                    out.append((i, j, int(k), int(self.table[i, j, k])))
        return out

    # elements

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def basis(self, i) -> np.ndarray:
        if isinstance(i, str):
            i = self.index(i)
        v = self.zero()
        v[i] = 1
        return v

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise StructuralError(f"unknown basis name {name!r}") from None

    def element(self, spec) -> np.ndarray:
        """Vector from a dict {name: coeff}, a string like 'x - 2*z', or coordinates."""
        if isinstance(spec, str):
            return parse_lincomb(spec, self.names, self.p)
        if isinstance(spec, dict):
            v = self.zero()
            for name, c in spec.items():
                v[self.index(name)] += c
            return v % self.p
        v = np.asarray(spec, dtype=np.int64) % self.p
        if v.shape != (self.dim,):
            raise StructuralError(f"element needs {self.dim} coordinates")
        return v

    def format(self, v) -> str:
        return format_lincomb(v, self.names, self.p)

    # products

    def bracket(self, a, b) -> np.ndarray:
        n = self.dim
        if n == 0:
            return self.zero()
        left = matmul(np.asarray(a, dtype=np.int64).reshape(1, n) % self.p, self.table.reshape(n, n * n), self.p)
        return matmul(np.asarray(b, dtype=np.int64).reshape(1, n) % self.p, left.reshape(n, n), self.p)[0]

    def bracket_seq(self, *args) -> np.ndarray:
        """Left-normed [a1, a2, ..., ak]."""
        if not args:
            raise StructuralError("empty bracket")
        acc = np.asarray(args[0], dtype=np.int64) % self.p
        for b in args[1:]:
            acc = self.bracket(acc, b)
        return acc

    @cached_property
    def _ad_stack(self) -> np.ndarray:
        # rows indexed by j: ad(b_j)[i, k] = c[i, j, k]
        return np.ascontiguousarray(self.table.transpose(1, 0, 2))

    def ad_array(self, a) -> np.ndarray:
        n = self.dim
        if n == 0:
            return np.zeros((0, 0), dtype=np.int64)
        a = np.asarray(a, dtype=np.int64).reshape(1, n) % self.p
        return matmul(a, self._ad_stack.reshape(n, n * n), self.p).reshape(n, n)

    def ad(self, a) -> FpMatrix:
        return FpMatrix._wrap(self.ad_array(a), self.p)

    # generic-algebra names used by envelopes
    def product(self, a, b) -> np.ndarray:
        return self.bracket(a, b)

    def right_mult_array(self, x) -> np.ndarray:
        return self.ad_array(x)

    def left_mult_array(self, x) -> np.ndarray:
        return (-self.ad_array(x)) % self.p

    def inner_derivation_array(self, x) -> np.ndarray:
        return self.ad_array(x)

    def basis_ads(self) -> np.ndarray:
        """Stack of ad(b_j), shape (n, n, n)."""
        return self._ad_stack

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim}, p={self.p}, names={self.names})"


# ---------------------------------------------------------------- text helpers

_TERM = re.compile(r"\s*([+-])?\s*(\d+)?\s*\*?\s*([A-Za-z_][A-Za-z_0-9']*)?\s*")


def parse_lincomb(text: str, names, p: int) -> np.ndarray:
    """'x - 2*z + 3 y' -> coordinate vector.  '0' is the zero vector."""
    v = np.zeros(len(names), dtype=np.int64)
    s = text.strip()
    if s in ("", "0"):
        return v
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot read linear combination at {s[pos:]!r}", col=pos + 1)
        sign, coeff, name = m.groups()
        if sign is None and not first:
            raise ParseError(f"missing '+' or '-' before {s[pos:]!r}", col=pos + 1)
        if name is None:
            if coeff is None:
                raise ParseError(f"dangling sign in {s!r}", col=pos + 1)
            raise ParseError(f"scalar {coeff} without a basis name", col=pos + 1)
        if name not in names:
            raise ParseError(f"unknown basis name {name!r}", col=m.start(3) + 1)
        c = int(coeff) if coeff else 1
        if sign == "-":
            c = -c
        v[list(names).index(name)] += c
        pos = m.end()
        first = False
    return v % p


def format_lincomb(v, names, p: int) -> str:
    parts = []
    for i, c in enumerate(np.asarray(v) % p):
        c = int(c)
        if c == 0:
            continue
        parts.append(names[i] if c == 1 else f"{c}*{names[i]}")
    return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------- validation


@dataclass
class ValidationReport:
    ok: bool
    violations: list = field(default_factory=list)  # (kind, (i, j, k))
    count: int = 0

    def __bool__(self):
        return self.ok


def validate(L: LieAlgebra, max_witnesses: int = 20) -> ValidationReport:
    """Check anticommutativity, Jacobi and grading on basis triples.

    Witnesses are 0-based index triples in lexicographic order."""
    t, p, n = L.table, L.p, L.dim
    found = []
    count = 0

    def note(kind, idx):
        nonlocal count
        count += 1
        if len(found) < max_witnesses:
            found.append((kind, tuple(int(x) for x in idx)))

    sym = (t + t.transpose(1, 0, 2)) % p
    for i, j, k in np.argwhere(sym):
        if i <= j:
            note("anticommutativity", (i, j, k))
    if n:
        # [[b_i,b_j],b_k] as a (n, n, n, n) array
        flat = matmul(t.reshape(n * n, n), t.reshape(n, n * n), p).reshape(n, n, n, n)
        jac = (flat + flat.transpose(1, 2, 0, 3) + flat.transpose(2, 0, 1, 3)) % p
        bad = np.argwhere(jac.any(axis=3))
        for i, j, k in bad:
            note("jacobi", (i, j, k))
    if L.grading is not None:
        deg = np.array(L.grading)
        for i, j, k in np.argwhere(t):
            if deg[k] != deg[i] + deg[j]:
                note("grading", (i, j, k))
    found.sort(key=lambda w: ({"anticommutativity": 0, "jacobi": 1, "grading": 2}[w[0]], w[1]))
    return ValidationReport(ok=count == 0, violations=found, count=count)


# ---------------------------------------------------------------- operations


def bracket(L: LieAlgebra, a, b) -> np.ndarray:
    return L.bracket(a, b)


def ad_nilpotency(L: LieAlgebra, a, bound=None):
    """Least k with ad(a)^k = 0, or None if not reached by `bound`."""
    if bound is None:
        bound = L.dim + 1
    return nilpotency_index_array(L.ad_array(a), L.p, bound)


def bracket_space(L: LieAlgebra, U: Subspace, V: Subspace) -> Subspace:
    """span{[u, v] : u in U, v in V}."""
    n = L.dim
    if U.dim == 0 or V.dim == 0:
        return Subspace.zero(n, L.p)
    rows = []
    for v in V.basis:
        rows.append(matmul(U.basis, L.ad_array(v), L.p))
    return Subspace.from_vectors(np.vstack(rows), n, L.p)


def _projective_key(v: np.ndarray, p: int) -> bytes:
    nz = np.nonzero(v)[0]
    lead = int(v[nz[0]])
    return ((v * pow(lead, -1, p)) % p).tobytes()


def lie_set(L: LieAlgebra, gens, length_bound: int, names=None):
    """Commutators of the generators up to the given length.

    Returns (word, element) pairs.  Zero values are dropped and values are
    kept once up to a nonzero scalar multiple (first formation wins)."""
    p = L.p
    gens = [np.asarray(g, dtype=np.int64) % p for g in gens]
    if names is None:
        names = []
        for i, g in enumerate(gens):
            nz = np.nonzero(g)[0]
            if len(nz) == 1 and g[nz[0]] == 1:
                names.append(L.names[nz[0]])
            else:
                names.append(f"g{i + 1}")
    seen = set()
    by_len = {1: []}
    out = []
    for name, g in zip(names, gens):
        if not g.any():
            continue
        key = _projective_key(g, p)
        if key in seen:
            continue
        seen.add(key)
        by_len[1].append((name, g))
        out.append((name, g))
    for n in range(2, length_bound + 1):
        by_len[n] = []
        for a in range(1, n):
            for wu, u in by_len[a]:
                for wv, v in by_len[n - a]:
                    w = L.bracket(u, v)
                    if not w.any():
                        continue
                    key = _projective_key(w, p)
                    if key in seen:
                        continue
                    seen.add(key)
                    item = (f"[{wu},{wv}]", w)
                    by_len[n].append(item)
                    out.append(item)
    return out


@dataclass
class CentralSeries:
    terms: list  # L^1, L^2, ... as Subspaces
    nilpotency_degree: int | None  # least c with L^c = 0

    @property
    def dims(self):
        return [t.dim for t in self.terms]


def lower_central_series(L: LieAlgebra) -> CentralSeries:
    """L^1 = L, L^{k+1} = [L^k, L]; stops at 0 or when the chain stabilizes."""
    full = Subspace.full(L.dim, L.p)
    terms = [full]
    while terms[-1].dim > 0:
        nxt = bracket_space(L, terms[-1], full)
        terms.append(nxt)
        if nxt == terms[-2]:
            break
    degree = len(terms) if terms[-1].dim == 0 else None
    return CentralSeries(terms, degree)


def ideal_closure(L: LieAlgebra, S) -> Subspace:
    """Smallest ideal containing the elements of S."""
    n = L.dim
    vecs = np.asarray(S, dtype=np.int64).reshape(-1, n) if len(S) else np.zeros((0, n), dtype=np.int64)
    space = Subspace.from_vectors(vecs, n, L.p)
    full = Subspace.full(n, L.p)
    while True:
        bigger = space + bracket_space(L, space, full)
        if bigger == space:
            return space
        space = bigger


def is_ideal(L: LieAlgebra, I: Subspace) -> bool:
    return bracket_space(L, I, Subspace.full(L.dim, L.p)) <= I


def center(L: LieAlgebra) -> Subspace:
    n = L.dim
    if n == 0:
        return Subspace.zero(0, L.p)
    # z with [z, b_j] = 0 for all j
    m = L.table.reshape(n, n * n)
    return Subspace._from_rref(kernel_basis(m, L.p), n, L.p)
