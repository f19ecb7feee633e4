"""
Free Lie algebras truncated at a degree, with the Lyndon (Hall) basis.

A basis monomial is a Lyndon word over generator indices 0..m-1 together
with its standard bracketing: w = uv where v is the longest proper Lyndon
suffix.  Lie polynomials are expanded into the free associative algebra
(dict word -> coefficient); the Lyndon coordinates are then read off by
peeling the lexicographically smallest word, since P_w = w + larger words.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import StructuralError
from .liecore import LieAlgebra


def lyndon_words(m: int, n: int):
    """All Lyndon words of length 1..n over range(m), in lex order (Duval)."""
    if m <= 0 or n <= 0:
        return []
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        out.append(tuple(w))
        k = len(w)
        while len(w) < n:
            w.append(w[len(w) - k])
        while w and w[-1] == m - 1:
            w.pop()
    return out


def is_lyndon(w) -> bool:
    w = tuple(w)
    return len(w) > 0 and all(w < w[i:] for i in range(1, len(w)))


@lru_cache(maxsize=None)
def standard_bracketing(w: tuple):
    """Nested tuple tree of a Lyndon word; leaves are generator indices."""
    if len(w) == 1:
        return w[0]
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return (standard_bracketing(w[:i]), standard_bracketing(w[i:]))
    raise StructuralError(f"{w} is not a Lyndon word")


def expand(tree) -> dict:
    """Tree -> element of the free associative algebra over Z."""
    if not isinstance(tree, tuple):
        return {(tree,): 1}
    a, b = expand(tree[0]), expand(tree[1])
    out = defaultdict(int)
    for u, cu in a.items():
        for v, cv in b.items():
            out[u + v] += cu * cv
            out[v + u] -= cu * cv
    return {w: c for w, c in out.items() if c}


@lru_cache(maxsize=None)
def _expanded(w: tuple):
    return expand(standard_bracketing(w))


def lyndon_coordinates(poly: dict, p: int | None = None) -> dict:
    """Coordinates of a Lie polynomial in the Lyndon basis.

    `poly` is an associative expansion.  Raises if it is not a Lie element."""
    rest = defaultdict(int)
    for w, c in poly.items():
        rest[tuple(w)] += c
    coords = {}

    def clean():
        for w in [w for w, c in rest.items() if (c % p if p else c) == 0]:
            del rest[w]

    clean()
    while rest:
        w = min(rest)
        c = rest[w] % p if p else rest[w]
        if not is_lyndon(w):
            raise StructuralError(f"not a Lie element: leading word {w} is not Lyndon")
        coords[w] = c
        for u, cu in _expanded(w).items():
            rest[u] -= c * cu
        clean()
    return coords


def witt_count(m: int, d: int) -> int:
    """Dimension of the degree-d part of the free Lie algebra on m generators."""

    def mobius(e):
        res, q, x = 1, 2, e
        while q * q <= x:
            if x % q == 0:
                x //= q
                if x % q == 0:
                    return 0
                res = -res
            q += 1
        return -res if x > 1 else res

    return sum(mobius(e) * m ** (d // e) for e in range(1, d + 1) if d % e == 0) // d


@dataclass(frozen=True)
class HallMonomial:
    word: tuple
    tree: object

    @property
    def degree(self) -> int:
        return len(self.word)

    @property
    def multidegree(self) -> tuple:
        c = Counter(self.word)
        return tuple(sorted(c.items()))


@dataclass
class FreeLieBasis:
    generators: tuple
    degmax: int
    monomials: list

    @property
    def by_multidegree(self) -> dict:
        out = defaultdict(list)
        for mono in self.monomials:
            out[mono.multidegree].append(mono)
        return dict(out)

    def counts(self) -> dict:
        return dict(Counter(mono.degree for mono in self.monomials))

    def index(self) -> dict:
        return {mono.word: i for i, mono in enumerate(self.monomials)}

    def label(self, mono: HallMonomial) -> str:
        return tree_to_string(mono.tree, self.generators)

    def free_bracket(self, a: dict, b: dict, p: int | None = None) -> dict:
        """[a, b] for elements given as {Lyndon word: coeff}; degrees above
        degmax are dropped."""
        out = defaultdict(int)
        for u, cu in a.items():
            for v, cv in b.items():
                if len(u) + len(v) > self.degmax:
                    continue
                for w, c in expand((standard_bracketing(u), standard_bracketing(v))).items():
                    out[w] += cu * cv * c
        return lyndon_coordinates(out, p)


def hall_basis(m: int, degmax: int, names=None) -> FreeLieBasis:
    if names is None:
        names = tuple(f"x{i + 1}" for i in range(m))
    if len(names) != m:
        raise StructuralError("need one name per generator")
    words = sorted(lyndon_words(m, degmax), key=lambda w: (len(w), w))
    monos = [HallMonomial(w, standard_bracketing(w)) for w in words]
    return FreeLieBasis(tuple(names), degmax, monos)


def tree_to_string(tree, names) -> str:
    if not isinstance(tree, tuple):
        return names[tree]
    return f"[{tree_to_string(tree[0], names)},{tree_to_string(tree[1], names)}]"


def free_nilpotent(m: int, c: int, p: int, names=None) -> LieAlgebra:
    """Free nilpotent Lie algebra of rank m and class c, graded by degree."""
    hb = hall_basis(m, c, names)
    idx = hb.index()
    n = len(hb.monomials)
    brackets = {}
    for i, u in enumerate(hb.monomials):
        for j in range(i + 1, n):
            v = hb.monomials[j]
            coords = hb.free_bracket({u.word: 1}, {v.word: 1}, p)
            if coords:
                vec = np.zeros(n, dtype=np.int64)
                for w, cw in coords.items():
                    vec[idx[w]] = cw
                brackets[(i, j)] = vec
    labels = [hb.label(mono) for mono in hb.monomials]
    return LieAlgebra.from_brackets(p, labels, brackets, grading=[mono.degree for mono in hb.monomials])
