"""Small Lie algebras used as fixtures and by the CLI (`@name`)."""

from __future__ import annotations

import numpy as np

from .freelie import free_nilpotent
from .liecore import LieAlgebra


def _vec(n, entries):
    v = np.zeros(n, dtype=np.int64)
    for i, c in entries.items():
        v[i] += c
    return v


def heisenberg(p: int) -> LieAlgebra:
    """[x, y] = z."""
    return LieAlgebra.from_brackets(p, ["x", "y", "z"], {(0, 1): _vec(3, {2: 1})}, grading=[1, 1, 2])


def sl2(p: int) -> LieAlgebra:
    """Basis e, h, f with [h, e] = 2e, [h, f] = -2f, [e, f] = h."""
    return LieAlgebra.from_brackets(
        p,
        ["e", "h", "f"],
        {(0, 1): _vec(3, {0: -2}), (0, 2): _vec(3, {1: 1}), (1, 2): _vec(3, {2: -2})},
    )


def strictly_upper(n: int, p: int) -> LieAlgebra:
    """Strictly upper triangular n x n matrices, graded by distance to the diagonal."""
    pairs = [(i, j) for d in range(1, n) for i in range(n - d) for j in [i + d]]
    idx = {pr: t for t, pr in enumerate(pairs)}
    dim = len(pairs)
    brackets = {}
    for a, (i, j) in enumerate(pairs):
        for b in range(a + 1, dim):
            k, l = pairs[b]
            v = np.zeros(dim, dtype=np.int64)
            if j == k:
                v[idx[(i, l)]] += 1
            if l == i:
                v[idx[(k, j)]] -= 1
            if v.any():
                brackets[(a, b)] = v
    names = [f"e{i + 1}{j + 1}" for i, j in pairs]
    return LieAlgebra.from_brackets(p, names, brackets, grading=[j - i for i, j in pairs])


def filiform(n: int, p: int) -> LieAlgebra:
    """Standard filiform algebra: [e1, e_i] = e_{i+1} for 2 <= i < n."""
    brackets = {(0, i): _vec(n, {i + 1: 1}) for i in range(1, n - 1)}
    grading = [1] + list(range(1, n))
    return LieAlgebra.from_brackets(p, [f"e{i + 1}" for i in range(n)], brackets, grading=grading)


def abelian(n: int, p: int) -> LieAlgebra:
    return LieAlgebra.abelian(n, p, [f"a{i + 1}" for i in range(n)])


BUILTIN = {
    "heisenberg": heisenberg,
    "sl2": sl2,
    "n3": lambda p: strictly_upper(3, p),
    "n4": lambda p: strictly_upper(4, p),
    "n5": lambda p: strictly_upper(5, p),
    "filiform5": lambda p: filiform(5, p),
    "filiform6": lambda p: filiform(6, p),
    "free2c3": lambda p: free_nilpotent(2, 3, p),
    "free2c4": lambda p: free_nilpotent(2, 4, p),
    "free3c2": lambda p: free_nilpotent(3, 2, p),
}


def builtin(name: str, p: int) -> LieAlgebra:
    try:
        return BUILTIN[name](p)
    except KeyError:
        raise KeyError(f"unknown built-in algebra {name!r}; known: {', '.join(sorted(BUILTIN))}") from None
