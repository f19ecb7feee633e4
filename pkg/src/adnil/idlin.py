"""
Polynomial maps, their linearizations, and identities of Lie algebras.

A PolynomialMap is a black box f(v_1, ..., v_m) homogeneous of degree d_i
in slot i.  Linearizing slot i replaces it by d_i slots:

    (Delta_i f)(.., v_1..v_d, ..) = sum over nonempty S of (-1)^(d-|S|) f(.., sum_S v, ..)

and the full linearization does this for every slot.  Identities are
checked on full linearizations over basis tuples, which is exact over F_p.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .config import evaluation_budget
from .errors import BudgetError, StructuralError
from .exactlin import Subspace, check_prime
from .freelie import expand, lyndon_coordinates, standard_bracketing


def natural_key(name: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name)]


# ---------------------------------------------------------------- Lie polynomials


def left_normed(*args):
    """Tree of [a1, a2, ..., ak] = [[a1, a2], ..., ak]."""
    if len(args) < 2:
        raise StructuralError("a bracket needs at least two arguments")
    tree = args[0]
    for a in args[1:]:
        tree = (tree, a)
    return tree


def tree_vars(tree) -> Counter:
    if isinstance(tree, tuple):
        return tree_vars(tree[0]) + tree_vars(tree[1])
    return Counter([tree])


def tree_str(tree) -> str:
    if not isinstance(tree, tuple):
        return tree
    # print left-normed spines compactly
    spine = []
    t = tree
    while isinstance(t, tuple):
        spine.append(t[1])
        t = t[0]
    spine.append(t)
    return "[" + ",".join(tree_str(s) for s in reversed(spine)) + "]"


def left_spine(tree):
    """[a1,...,ak] -> [a1,...,ak] as a list (a1 is the innermost left leaf)."""
    spine = []
    t = tree
    while isinstance(t, tuple):
        spine.append(t[1])
        t = t[0]
    spine.append(t)
    return list(reversed(spine))


@dataclass(frozen=True)
class LiePolynomial:
    terms: tuple  # ((coeff, tree), ...)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((int(c), t) for c, t in self.terms))

    @classmethod
    def monomial(cls, tree, coeff=1) -> LiePolynomial:
        return cls(((coeff, tree),))

    @property
    def variables(self) -> tuple:
        names = set()
        for _, t in self.terms:
            names |= set(tree_vars(t))
        return tuple(sorted(names, key=natural_key))

    @property
    def multidegrees(self) -> list:
        return [dict(tree_vars(t)) for _, t in self.terms]

    @property
    def degree(self) -> int:
        return max((sum(md.values()) for md in self.multidegrees), default=0)

    @property
    def is_multilinear(self) -> bool:
        vs = set(self.variables)
        return all(set(md) == vs and all(d == 1 for d in md.values()) for md in self.multidegrees)

    def __add__(self, other: LiePolynomial) -> LiePolynomial:
        return LiePolynomial(self.terms + other.terms)

    def scale(self, c: int) -> LiePolynomial:
        return LiePolynomial(tuple((c * a, t) for a, t in self.terms))

    def evaluate(self, L, assignment: dict) -> np.ndarray:
        def ev(t):
            if isinstance(t, tuple):
                return L.bracket(ev(t[0]), ev(t[1]))
            try:
                return np.asarray(assignment[t], dtype=np.int64)
            except KeyError:
                raise StructuralError(f"no value for variable {t!r}") from None

        out = np.zeros(L.dim, dtype=np.int64)
        for c, t in self.terms:
            out = (out + c * ev(t)) % L.p
        return out

    def hall_coordinates(self, p: int | None = None) -> dict:
        """Coordinates in the Lyndon basis on the sorted variables.

        Keys are tuples of variable names (the Lyndon word)."""
        names = self.variables
        pos = {v: i for i, v in enumerate(names)}

        def relabel(t):
            if isinstance(t, tuple):
                return (relabel(t[0]), relabel(t[1]))
            return pos[t]

        total = Counter()
        for c, t in self.terms:
            for w, cw in expand(relabel(t)).items():
                total[w] += c * cw
        coords = lyndon_coordinates(total, p)
        return {tuple(names[i] for i in w): c for w, c in coords.items()}

    def normalized(self, p: int | None = None) -> LiePolynomial:
        """Same polynomial rewritten on Lyndon basis monomials."""
        names = self.variables
        pos = {v: i for i, v in enumerate(names)}
        terms = []
        for w, c in sorted(self.hall_coordinates(p).items(), key=lambda kv: (len(kv[0]), [pos[x] for x in kv[0]])):
            tree = standard_bracketing(tuple(pos[x] for x in w))
            terms.append((c, _rename(tree, names)))
        return LiePolynomial(tuple(terms))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for c, t in self.terms:
            parts.append(tree_str(t) if c == 1 else f"{c}*{tree_str(t)}")
        return " + ".join(parts)


def _rename(tree, names):
    if isinstance(tree, tuple):
        return (_rename(tree[0], names), _rename(tree[1], names))
    return names[tree]


# ---------------------------------------------------------------- polynomial maps


@dataclass
class PolynomialMap:
    """Black-box map homogeneous of degree degrees[i] in slot i.

    dims[i] is the dimension of the space slot i takes vectors from;
    out_dim the dimension of the values."""

    evaluator: object
    degrees: tuple
    p: int
    dims: tuple
    out_dim: int
    check: bool = True

    def __post_init__(self):
        check_prime(self.p)
        self.degrees = tuple(int(d) for d in self.degrees)
        self.dims = tuple(self.dims)
        if len(self.dims) != len(self.degrees):
            raise StructuralError("one dimension per slot required")
        if any(d < 1 for d in self.degrees):
            raise StructuralError("slot degrees must be >= 1")
        if self.check:
            self.check_homogeneity()

    @property
    def arity(self) -> int:
        return len(self.degrees)

    def __call__(self, *vectors) -> np.ndarray:
        return np.asarray(self.evaluator(*vectors), dtype=np.int64) % self.p

    def check_homogeneity(self, samples: int = 3, seed: int = 0):
        rng = np.random.default_rng(seed)
        p = self.p
        for _ in range(samples):
            vs = [rng.integers(0, p, size=d) for d in self.dims]
            base = self(*vs)
            for i, d in enumerate(self.degrees):
                lam = int(rng.integers(1, p)) if p > 2 else 1
                scaled = list(vs)
                scaled[i] = (lam * vs[i]) % p
                if not np.array_equal(self(*scaled), (pow(lam, d, p) * base) % p):
                    raise StructuralError(f"map is not homogeneous of degree {d} in slot {i}")


@dataclass
class MultilinearMap:
    evaluator: object
    arity: int
    p: int
    dims: tuple
    out_dim: int

    def __call__(self, *vectors) -> np.ndarray:
        return np.asarray(self.evaluator(*vectors), dtype=np.int64) % self.p

    def check_linearity(self, samples: int = 3, seed: int = 0) -> bool:
        rng = np.random.default_rng(seed)
        p = self.p
        for _ in range(samples):
            vs = [rng.integers(0, p, size=d) for d in self.dims]
            for i in range(self.arity):
                u = rng.integers(0, p, size=self.dims[i])
                lam = int(rng.integers(0, p))
                mixed = list(vs)
                mixed[i] = (vs[i] + lam * u) % p
                other = list(vs)
                other[i] = u
                if not np.array_equal(self(*mixed), (self(*vs) + lam * self(*other)) % p):
                    return False
        return True

    def as_polynomial_map(self) -> PolynomialMap:
        return PolynomialMap(self.evaluator, (1,) * self.arity, self.p, self.dims, self.out_dim, check=False)


def _subset_sums(vectors, p):
    """(sign exponent d-|S|, sum) over nonempty subsets S."""
    d = len(vectors)
    for r in range(1, d + 1):
        for combo in itertools.combinations(range(d), r):
            s = np.zeros_like(np.asarray(vectors[0], dtype=np.int64))
            for t in combo:
                s = s + vectors[t]
            yield d - r, s % p


def linearize_slot(f: PolynomialMap, i: int) -> PolynomialMap:
    if not 0 <= i < f.arity:
        raise StructuralError(f"slot {i} out of range for arity {f.arity}")
    d = f.degrees[i]
    p = f.p

    def ev(*args):
        before, group, after = args[:i], args[i : i + d], args[i + d :]
        total = np.zeros(f.out_dim, dtype=np.int64)
        for k, s in _subset_sums(group, p):
            val = f(*before, s, *after)
            total = (total - val) % p if k % 2 else (total + val) % p
        return total

    degrees = f.degrees[:i] + (1,) * d + f.degrees[i + 1 :]
    dims = f.dims[:i] + (f.dims[i],) * d + f.dims[i + 1 :]
    return PolynomialMap(ev, degrees, p, dims, f.out_dim, check=False)


def full_linearization(f: PolynomialMap) -> MultilinearMap:
    g = f
    for i in reversed(range(f.arity)):
        if g.degrees[i] > 1:
            g = linearize_slot(g, i)
    return MultilinearMap(g.evaluator, g.arity, f.p, g.dims, f.out_dim)


# ---------------------------------------------------------------- identities


@dataclass
class IdentityResult:
    holds: bool
    witness: tuple | None = None  # basis indices, one per variable
    value: np.ndarray | None = None
    names: tuple = ()
    evaluations: int = 0

    def __bool__(self):
        return self.holds


def _budget_check(count: int, budget):
    budget = evaluation_budget() if budget is None else budget
    if count > budget:
        raise BudgetError(f"{count} evaluations exceed the budget {budget}")


def lie_polynomial_map(L, f: LiePolynomial) -> MultilinearMap:
    """A multilinear LiePolynomial as a map on L^(number of variables)."""
    names = f.variables

    def ev(*vs):
        return f.evaluate(L, dict(zip(names, vs)))

    return MultilinearMap(ev, len(names), L.p, (L.dim,) * len(names), L.dim)


def check_multilinear_identity(L, f: LiePolynomial, budget=None) -> IdentityResult:
    """Does f vanish on L?  Checks all basis tuples (first witness in
    lexicographic order)."""
    if not f.is_multilinear:
        raise StructuralError("identity is not multilinear; linearize it first")
    names = f.variables
    count = L.dim ** len(names)
    _budget_check(count, budget)
    basis = np.eye(L.dim, dtype=np.int64)
    n = 0
    for idx in itertools.product(range(L.dim), repeat=len(names)):
        n += 1
        val = f.evaluate(L, {v: basis[i] for v, i in zip(names, idx)})
        if val.any():
            return IdentityResult(False, idx, val, tuple(L.names[i] for i in idx), n)
    return IdentityResult(True, evaluations=n)


def check_map_vanishes(f: MultilinearMap, domains, budget=None, symmetric_groups=None) -> IdentityResult:
    """Does a multilinear map vanish on the product of the domains?

    symmetric_groups: optional list of slot index runs on which f is
    symmetric; only sorted index tuples are then tried inside each run."""
    if len(domains) != f.arity:
        raise StructuralError("one domain per slot required")
    bases = [d.basis for d in domains]
    if any(b.shape[0] == 0 for b in bases):
        return IdentityResult(True)
    count = int(np.prod([b.shape[0] for b in bases], dtype=object))
    _budget_check(count, budget)
    n = 0
    for idx in itertools.product(*[range(b.shape[0]) for b in bases]):
        if symmetric_groups and any(
            any(idx[g[t]] > idx[g[t + 1]] for t in range(len(g) - 1)) for g in symmetric_groups
        ):
            continue
        n += 1
        val = f(*[b[i] for b, i in zip(bases, idx)])
        if val.any():
            return IdentityResult(False, idx, val, evaluations=n)
    return IdentityResult(True, evaluations=n)


def restrict_identity(f: LiePolynomial) -> LiePolynomial:
    """Keep the terms of sum_s a_s [x0, x_s(1), ..., x_s(n-1)] with s(1) = 1 and
    drop that x1 (remaining variable names are kept)."""
    names = f.variables
    n = len(names)
    expected = tuple(f"x{i}" for i in range(n))
    if tuple(names) != expected:
        raise StructuralError(f"variables must be x0..x{n - 1}, got {names}")
    if n < 3:
        raise StructuralError("degree must be at least 3 for a nondegenerate restriction")
    coeffs = Counter()
    for c, t in f.terms:
        spine = left_spine(t)
        if any(isinstance(s, tuple) for s in spine) or spine[0] != "x0" or sorted(spine[1:], key=natural_key) != list(expected[1:]):
            raise StructuralError(f"term {tree_str(t)} is not of the form [x0, x_s(1), ..., x_s(n-1)]")
        coeffs[tuple(spine[1:])] += c
    if coeffs[expected[1:]] != 1:
        raise StructuralError("the coefficient of [x0, x1, ..., x_{n-1}] must be 1")
    terms = []
    for perm, c in sorted(coeffs.items(), key=lambda kv: [natural_key(x) for x in kv[0]]):
        if c == 0 or perm[0] != "x1":
            continue
        terms.append((c, left_normed("x0", *perm[1:])))
    return LiePolynomial(tuple(terms))


def value_span(f, domains, budget=None) -> Subspace:
    """Span of f over all tuples of basis vectors of the domains."""
    if len(domains) != f.arity:
        raise StructuralError("one domain per slot required")
    bases = [d.basis for d in domains]
    if any(b.shape[0] == 0 for b in bases):
        return Subspace.zero(f.out_dim, f.p)
    _budget_check(int(np.prod([b.shape[0] for b in bases], dtype=object)), budget)
    vals = [f(*[b[i] for b, i in zip(bases, idx)]) for idx in itertools.product(*[range(b.shape[0]) for b in bases])]
    return Subspace.from_vectors(np.array(vals), f.out_dim, f.p)


def all_vectors(space: Subspace):
    """Every vector of a subspace (p^dim of them)."""
    p = space.p
    for coeffs in itertools.product(range(p), repeat=space.dim):
        if space.dim == 0:
            yield np.zeros(space.ambient_dim, dtype=np.int64)
        else:
            yield (np.array(coeffs, dtype=np.int64) @ space.basis) % p


def full_value_span(f: PolynomialMap, domains, budget=None) -> Subspace:
    """Span of f over all vectors of the domains (brute force).

    Slots of degree 1 only need basis vectors."""
    if len(domains) != f.arity:
        raise StructuralError("one domain per slot required")
    choices = []
    for d, dom in zip(f.degrees, domains):
        if d == 1:
            choices.append(list(dom.basis))
        else:
            choices.append(list(all_vectors(dom)))
    if any(len(c) == 0 for c in choices):
        return Subspace.zero(f.out_dim, f.p)
    _budget_check(int(np.prod([len(c) for c in choices], dtype=object)), budget)
    vals = [f(*vs) for vs in itertools.product(*choices)]
    return Subspace.from_vectors(np.array(vals), f.out_dim, f.p)


# ---------------------------------------------------------------- self-checks


def direct_linearization(f: PolynomialMap, groups) -> np.ndarray:
    """Full linearization at once: groups[i] holds degrees[i] vectors for
    slot i; sum over nonempty subsets S_i of every group of
    (-1)^(sum d_i - |S_i|) f(sum S_1, ..., sum S_m)."""
    p = f.p
    per_slot = [list(_subset_sums(g, p)) for g in groups]
    total = np.zeros(f.out_dim, dtype=np.int64)
    for choice in itertools.product(*per_slot):
        sign = sum(k for k, _ in choice) % 2
        val = f(*[s for _, s in choice])
        total = (total - val) % p if sign else (total + val) % p
    return total


def random_polynomial_map(rng, p: int, degrees, dims, out_dim: int, terms: int = 4) -> PolynomialMap:
    """Random map homogeneous of the given degrees: a sum of products of
    random linear forms times random output vectors."""
    forms = []
    for _ in range(terms):
        lin = [[rng.integers(0, p, size=dims[i]) for _ in range(d)] for i, d in enumerate(degrees)]
        forms.append((lin, rng.integers(0, p, size=out_dim)))

    def ev(*vs):
        out = np.zeros(out_dim, dtype=np.int64)
        for lin, w in forms:
            c = 1
            for i, ls in enumerate(lin):
                for l in ls:
                    c = c * int(l @ vs[i] % p) % p
            out = (out + c * w) % p
        return out

    return PolynomialMap(ev, tuple(degrees), p, tuple(dims), out_dim, check=False)


def linearization_selfcheck(trials: int = 50, seed: int = 0, samples: int = 3):
    """Linearizations of random maps of total degree <= 3 against the
    direct formula, plus (Delta_i f)(v, ..., v) = d! f(v) and multilinearity
    of the full linearization.  Returns (ok, witness, trials)."""
    rng = np.random.default_rng(seed)
    shapes = [(1,), (2,), (3,), (1, 1), (2, 1), (1, 2), (1, 1, 1)]
    for t in range(trials):
        p = int(rng.choice([2, 3, 5, 7]))
        degrees = shapes[t % len(shapes)]
        dims = tuple(int(rng.integers(1, 4)) for _ in degrees)
        f = random_polynomial_map(rng, p, degrees, dims, int(rng.integers(1, 4)))
        F = full_linearization(f)
        if not F.check_linearity(seed=t):
            return False, ("not multilinear", t, degrees, p), t + 1
        for _ in range(samples):
            groups = [[rng.integers(0, p, size=dims[i]) for _ in range(d)] for i, d in enumerate(degrees)]
            if not np.array_equal(F(*[v for g in groups for v in g]), direct_linearization(f, groups)):
                return False, ("full", t, degrees, p), t + 1
            vs = [g[0] for g in groups]
            for i, d in enumerate(degrees):
                args = vs[:i] + [vs[i]] * d + vs[i + 1 :]
                want = (math.factorial(d) * f(*vs)) % p
                if not np.array_equal(linearize_slot(f, i)(*args), want):
                    return False, ("slot", t, i, degrees, p), t + 1
    return True, None, trials
