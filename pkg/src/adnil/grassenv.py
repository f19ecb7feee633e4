"""
The algebra E on generators e_1..e_k with e_i^2 = 0 (commutative, no unit,
no signs) and envelopes A⊗E.

A Grassmann monomial e_pi is a bitmask (bit i-1 for e_i).  Envelope
elements are stored by their standard decomposition: mask -> base vector.
Flat coordinates list the masks in canonical order (by size, then by
sorted indices) and inside each block the base coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .config import DEFAULT_GRASSMANN_BUDGET, MAX_AMBIENT_DIM, MAX_GRASSMANN_BUDGET
from .errors import StructuralError
from .exactlin import FpMatrix, Subspace, matmul


def mask_indices(mask: int) -> tuple:
    out, i = [], 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def mask_key(mask: int):
    ind = mask_indices(mask)
    return (len(ind), ind)


@dataclass(frozen=True)
class GrassmannIndex:
    mask: int
    budget: int = DEFAULT_GRASSMANN_BUDGET

    def __post_init__(self):
        if not 1 <= self.budget <= MAX_GRASSMANN_BUDGET:
            raise StructuralError(f"Grassmann budget must be in 1..{MAX_GRASSMANN_BUDGET}")
        if self.mask <= 0:
            raise StructuralError("empty Grassmann products are not allowed")
        if self.mask >> self.budget:
            raise StructuralError(f"index beyond the budget {self.budget}")

    @classmethod
    def of(cls, indices, budget: int = DEFAULT_GRASSMANN_BUDGET) -> GrassmannIndex:
        mask = 0
        for i in indices:
            if not 1 <= i <= budget:
                raise StructuralError(f"generator index {i} outside 1..{budget}")
            mask |= 1 << (i - 1)
        return cls(mask, budget)

    @property
    def indices(self) -> tuple:
        return mask_indices(self.mask)

    def __len__(self):
        return len(self.indices)

    def __mul__(self, other: GrassmannIndex):
        return e_product(self, other)

    def __lt__(self, other: GrassmannIndex):
        return mask_key(self.mask) < mask_key(other.mask)

    def __str__(self):
        return "e" + "".join(str(i) if i < 10 else f"({i})" for i in self.indices)


def e_product(pi: GrassmannIndex, tau: GrassmannIndex):
    """e_pi e_tau: the union if disjoint, otherwise None (the product is 0)."""
    if pi.budget != tau.budget:
        raise StructuralError("Grassmann indices with different budgets")
    if pi.mask & tau.mask:
        return None
    return GrassmannIndex(pi.mask | tau.mask, pi.budget)


@lru_cache(maxsize=None)
def mask_order(k: int) -> tuple:
    return tuple(sorted(range(1, 1 << k), key=mask_key))


@lru_cache(maxsize=None)
def _emult(k: int, mask: int) -> np.ndarray:
    order = mask_order(k)
    pos = {m: i for i, m in enumerate(order)}
    e = np.zeros((len(order), len(order)), dtype=np.int64)
    for t in order:
        if not t & mask:
            e[pos[t], pos[t | mask]] = 1
    e.setflags(write=False)
    return e


class Envelope:
    """A⊗E for a base algebra with `product`, `right_mult_array`,
    `left_mult_array` and `inner_derivation_array`, and E on k generators."""

    def __init__(self, base, budget: int = DEFAULT_GRASSMANN_BUDGET):
        if not 1 <= budget <= MAX_GRASSMANN_BUDGET:
            raise StructuralError(f"Grassmann budget must be in 1..{MAX_GRASSMANN_BUDGET}")
        self.base = base
        self.p = base.p
        self.budget = budget
        self.n = base.dim
        if budget > 20 or self.n * ((1 << budget) - 1) > MAX_AMBIENT_DIM:
            raise StructuralError(
                f"envelope of a {self.n}-dimensional algebra with budget {budget} exceeds the dimension cap"
            )
        self.masks = mask_order(budget)
        self.pos = {m: i for i, m in enumerate(self.masks)}
        self.dim = self.n * len(self.masks)

    def __repr__(self):
        return f"Envelope(dim={self.dim}, base_dim={self.n}, budget={self.budget}, p={self.p})"

    # -- elements

    def _mask(self, key) -> int:
        if isinstance(key, GrassmannIndex):
            if key.budget != self.budget and key.mask >> self.budget:
                raise StructuralError("Grassmann index outside the envelope budget")
            return key.mask
        if isinstance(key, (int, np.integer)):
            m = int(key)
        else:
            m = GrassmannIndex.of(tuple(key), self.budget).mask
        if m <= 0 or m >> self.budget:
            raise StructuralError(f"mask {m} outside the budget {self.budget}")
        return m

    def element(self, components=None) -> EnvelopeElement:
        """components: {GrassmannIndex | tuple of indices | mask: base vector}."""
        acc = {}
        for key, vec in (components or {}).items():
            m = self._mask(key)
            v = np.asarray(vec, dtype=np.int64) % self.p
            if v.shape != (self.n,):
                raise StructuralError("component has the wrong dimension")
            acc[m] = (acc.get(m, 0) + v) % self.p
        return EnvelopeElement._make(self, acc)

    def zero(self) -> EnvelopeElement:
        return EnvelopeElement._make(self, {})

    def tensor(self, vec, indices) -> EnvelopeElement:
        """vec ⊗ e_pi."""
        return self.element({tuple(indices): vec})

    def from_flat(self, flat) -> EnvelopeElement:
        flat = np.asarray(flat, dtype=np.int64) % self.p
        if flat.shape != (self.dim,):
            raise StructuralError("flat vector has the wrong length")
        blocks = flat.reshape(len(self.masks), self.n)
        return EnvelopeElement._make(self, {m: blocks[i] for i, m in enumerate(self.masks)})

    def flat_index(self, mask: int, i: int) -> int:
        return self.pos[mask] * self.n + i

    def flat_mask(self, idx: int) -> int:
        return self.masks[idx // self.n]

    # -- operators

    def emult(self, mask: int) -> np.ndarray:
        """Matrix of e_tau -> e_tau e_pi on the mask blocks."""
        return _emult(self.budget, mask)

    def _lift(self, elem, op) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        for m, v in _components(self, elem):
            out = (out + np.kron(self.emult(m), op(v))) % self.p
        return out

    def right_mult_array(self, elem) -> np.ndarray:
        return self._lift(elem, self.base.right_mult_array)

    def left_mult_array(self, elem) -> np.ndarray:
        return self._lift(elem, self.base.left_mult_array)

    def ad_array(self, elem) -> np.ndarray:
        """Matrix of y -> [y, elem] (right multiplication for Lie bases)."""
        return self.right_mult_array(elem)

    def ad(self, elem) -> FpMatrix:
        return FpMatrix._wrap(self.ad_array(elem), self.p)

    def inner_derivation_array(self, elem) -> np.ndarray:
        return self._lift(elem, self.base.inner_derivation_array)

    def product(self, a, b) -> EnvelopeElement:
        acc = {}
        for ma, va in _components(self, a):
            for mb, vb in _components(self, b):
                if ma & mb:
                    continue
                m = ma | mb
                acc[m] = (acc.get(m, 0) + self.base.product(va, vb)) % self.p
        return EnvelopeElement._make(self, acc)

    bracket = product

    def bracket_seq(self, *args) -> EnvelopeElement:
        acc = args[0]
        for b in args[1:]:
            acc = self.product(acc, b)
        return acc

    def apply(self, elem, matrix) -> EnvelopeElement:
        """elem @ matrix for an operator on the flat space."""
        arr = matrix.arr if isinstance(matrix, FpMatrix) else matrix
        return self.from_flat(matmul(_flat(self, elem).reshape(1, -1), arr, self.p)[0])

    # -- subspaces

    def tensor_subspace(self, I: Subspace | None = None, masks=None) -> Subspace:
        """span{u ⊗ e_pi : u in I, pi in masks}; defaults to all of A⊗E."""
        if I is None:
            I = Subspace.full(self.n, self.p)
        masks = self.masks if masks is None else masks
        rows = []
        for m in masks:
            for u in I.basis:
                row = np.zeros(self.dim, dtype=np.int64)
                s = self.pos[m] * self.n
                row[s : s + self.n] = u
                rows.append(row)
        if not rows:
            return Subspace.zero(self.dim, self.p)
        return Subspace.from_vectors(np.array(rows), self.dim, self.p)

    def slice_subspace(self, i: int, I: Subspace | None = None) -> Subspace:
        """I⊗e_i + (I⊗E)e_i: the part of I⊗E on masks containing e_i."""
        bit = 1 << (i - 1)
        return self.tensor_subspace(I, [m for m in self.masks if m & bit])

    def single_mask_basis(self, I: Subspace | None = None) -> list:
        """Elements u⊗e_pi for u in the echelon basis of I (flat vectors)."""
        return list(self.tensor_subspace(I).basis)

    @cached_property
    def basis_ad_stack(self) -> np.ndarray:
        """ad of every flat basis vector, shape (dim, dim, dim)."""
        out = np.zeros((self.dim, self.dim, self.dim), dtype=np.int64)
        for idx in range(self.dim):
            v = np.zeros(self.dim, dtype=np.int64)
            v[idx] = 1
            out[idx] = self.ad_array(v)
        return out

    def lie_algebra(self):
        """The envelope as a LieAlgebra by structure constants (small cases)."""
        from .liecore import LieAlgebra

        if self.dim > 200:
            raise StructuralError("envelope too large to tabulate")
        t = np.ascontiguousarray(self.basis_ad_stack.transpose(1, 0, 2))
        names = [f"{self.base.names[i]}@{GrassmannIndex(m, self.budget)}" for m in self.masks for i in range(self.n)]
        return LieAlgebra(self.p, t, names)


def _flat(env: Envelope, elem) -> np.ndarray:
    if isinstance(elem, EnvelopeElement):
        return elem.flat()
    v = np.asarray(elem, dtype=np.int64) % env.p
    if v.shape != (env.dim,):
        raise StructuralError("expected an envelope element or flat vector")
    return v


def _components(env: Envelope, elem):
    if isinstance(elem, EnvelopeElement):
        return elem.items()
    v = _flat(env, elem).reshape(len(env.masks), env.n)
    return [(m, v[i]) for i, m in enumerate(env.masks) if v[i].any()]


class EnvelopeElement:
    """Element of A⊗E held as its standard decomposition."""

    __slots__ = ("env", "_comps")

    @classmethod
    def _make(cls, env: Envelope, acc: dict) -> EnvelopeElement:
        e = object.__new__(cls)
        comps = []
        for m in sorted(acc, key=mask_key):
            v = np.asarray(acc[m], dtype=np.int64) % env.p
            if v.any():
                v.setflags(write=False)
                comps.append((m, v))
        object.__setattr__(e, "env", env)
        object.__setattr__(e, "_comps", tuple(comps))
        return e

    def __setattr__(self, name, value):
        raise AttributeError("EnvelopeElement is immutable")

    def items(self):
        return list(self._comps)

    def standard_decomposition(self) -> list:
        return [(GrassmannIndex(m, self.env.budget), v) for m, v in self._comps]

    @property
    def masks(self) -> tuple:
        return tuple(m for m, _ in self._comps)

    def is_zero(self) -> bool:
        return not self._comps

    def flat(self) -> np.ndarray:
        out = np.zeros(self.env.dim, dtype=np.int64)
        n = self.env.n
        for m, v in self._comps:
            s = self.env.pos[m] * n
            out[s : s + n] = v
        return out

    def _combine(self, other, sign):
        if not isinstance(other, EnvelopeElement) or other.env is not self.env:
            raise StructuralError("elements of different envelopes")
        acc = {m: v.copy() for m, v in self._comps}
        for m, v in other._comps:
            acc[m] = (acc.get(m, 0) + sign * v) % self.env.p
        return EnvelopeElement._make(self.env, acc)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return EnvelopeElement._make(self.env, {m: -v for m, v in self._comps})

    def __mul__(self, c: int):
        return EnvelopeElement._make(self.env, {m: int(c) * v for m, v in self._comps})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, EnvelopeElement):
            return NotImplemented
        return (
            self.env is other.env
            and len(self._comps) == len(other._comps)
            and all(m1 == m2 and np.array_equal(v1, v2) for (m1, v1), (m2, v2) in zip(self._comps, other._comps))
        )

    def __hash__(self):
        return hash(tuple((m, v.tobytes()) for m, v in self._comps))

    def __repr__(self):
        return "EnvelopeElement(" + str(self) + ")"

    def __str__(self):
        if not self._comps:
            return "0"
        from .liecore import format_lincomb

        parts = []
        for m, v in self._comps:
            parts.append(f"({format_lincomb(v, self.env.base.names, self.env.p)})⊗{GrassmannIndex(m, self.env.budget)}")
        return " + ".join(parts)


def envelope_bracket(a: EnvelopeElement, b: EnvelopeElement) -> EnvelopeElement:
    return a.env.product(a, b)


def standard_decomposition(a: EnvelopeElement) -> list:
    return a.standard_decomposition()
