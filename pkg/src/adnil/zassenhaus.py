"""
Finite p-groups, the augmentation filtration and L_p(G).

Permutations are 0-based image tuples; composition gh means "g first, then
h", so commutators are [g, h] = g^-1 h^-1 g h.  The group algebra F_p[G]
has coordinates indexed by the enumerated elements.

    G_i = {g : 1 - g in w^i},  w = span{1 - g}
    L_p(G) = sum_i G_i / G_{i+1}, bracket from group commutators.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetError, ParseError, PreconditionError, StructuralError
from .exactlin import Subspace, check_prime, solve
from .formats import _Parser, parse_cycles
from .idlin import LiePolynomial, tree_str, tree_vars
from .liecore import LieAlgebra, ad_nilpotency, validate

DEFAULT_CAP = 4096


def compose(g, h) -> tuple:
    """g then h."""
    return tuple(h[x] for x in g)


def invert(g) -> tuple:
    out = [0] * len(g)
    for i, x in enumerate(g):
        out[x] = i
    return tuple(out)


def _check_perm(g, degree):
    if len(g) != degree or sorted(g) != list(range(degree)):
        raise StructuralError(f"{g!r} is not a permutation of {degree} points")


@dataclass
class FiniteGroup:
    elements: list  # identity first
    words: list  # generator-name tuples, shortlex
    mult: np.ndarray  # mult[a, b] = index of a*b
    inverse: np.ndarray
    gen_names: tuple = ()
    gens: tuple = ()  # element indices of the generators

    @property
    def order(self) -> int:
        return len(self.elements)

    def word(self, i: int) -> str:
        return "*".join(self.words[i]) or "1"

    def commutator(self, a: int, b: int) -> int:
        m, inv = self.mult, self.inverse
        return int(m[m[inv[a], inv[b]], m[a, b]])

    def power(self, a: int, k: int) -> int:
        out = 0
        for _ in range(k):
            out = int(self.mult[out, a])
        return out

    def generated(self, idxs) -> frozenset:
        """Subgroup generated by the given element indices."""
        seen = {0}
        todo = [0]
        idxs = list(idxs)
        while todo:
            x = todo.pop()
            for g in idxs:
                y = int(self.mult[x, g])
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return frozenset(seen)


def enumerate_group(gens, cap: int = DEFAULT_CAP, names=None) -> FiniteGroup:
    """Breadth-first closure of permutation generators.

    gens: list of image tuples (0-based) or cycle strings with a common
    degree given as (degree, [...]).  Elements come in shortlex order of
    their first formation word."""
    if cap < 1:
        raise StructuralError("cap must be at least 1")
    gens = list(gens)
    if names is None:
        names = [f"g{i + 1}" for i in range(len(gens))]
    degree = len(gens[0]) if gens else 0
    for g in gens:
        _check_perm(tuple(g), degree)
    gens = [tuple(int(x) for x in g) for g in gens]
    ident = tuple(range(degree))
    elements = [ident]
    words = [()]
    index = {ident: 0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for name, g in zip(names, gens):
            h = compose(elements[i], g)
            if h not in index:
                if len(elements) >= cap:
                    raise BudgetError(f"group has more than {cap} elements")
                index[h] = len(elements)
                elements.append(h)
                words.append(words[i] + (name,))
                queue.append(index[h])
    n = len(elements)
    mult = np.empty((n, n), dtype=np.int64)
    for a, ga in enumerate(elements):
        for b, gb in enumerate(elements):
            mult[a, b] = index[compose(ga, gb)]
    inverse = np.array([index[invert(g)] for g in elements], dtype=np.int64)
    G = FiniteGroup(elements, words, mult, inverse, tuple(names), tuple(index[g] for g in gens))
    return G


def group_from_cycles(degree: int, gens: dict, cap: int = DEFAULT_CAP) -> FiniteGroup:
    """{'r': '(1 2 3 4)', 's': '(1 3)'} -> FiniteGroup."""
    names = list(gens)
    return enumerate_group([parse_cycles(gens[k], degree) for k in names], cap, names)


@dataclass
class GroupCheck:
    ok: bool
    witness: object = None


def check_group(G: FiniteGroup, samples: int = 20000, seed: int = 0) -> GroupCheck:
    """Identity, inverses, associativity (exhaustive up to 256 elements)."""
    n = G.order
    m = G.mult
    if not (np.array_equal(m[0], np.arange(n)) and np.array_equal(m[:, 0], np.arange(n))):
        return GroupCheck(False, ("identity", 0))
    bad = np.nonzero(m[np.arange(n), G.inverse] != 0)[0]
    if len(bad):
        return GroupCheck(False, ("inverse", int(bad[0])))
    if n <= 256:
        lhs = m[m]  # (ab)c at [a, b, c]
        rhs = m[np.arange(n)[:, None, None], m[None, :, :]]  # a(bc)
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            return GroupCheck(False, ("associativity", tuple(int(x) for x in bad[0])))
    else:
        rng = np.random.default_rng(seed)
        for a, b, c in rng.integers(0, n, (samples, 3)):
            if m[m[a, b], c] != m[a, m[b, c]]:
                return GroupCheck(False, ("associativity", (int(a), int(b), int(c))))
    return GroupCheck(True)


def is_p_power(n: int, p: int) -> bool:
    while n > 1 and n % p == 0:
        n //= p
    return n == 1


# ---------------------------------------------------------------- group algebra


def left_mult_rows(G: FiniteGroup, g: int, V: np.ndarray) -> np.ndarray:
    """Rows g*v for the rows v of V (vectors of F_p[G])."""
    out = np.zeros_like(V)
    out[:, G.mult[g]] = V
    return out


def augmentation_ideal(G: FiniteGroup, p: int) -> Subspace:
    n = G.order
    rows = np.zeros((max(n - 1, 0), n), dtype=np.int64)
    for g in range(1, n):
        rows[g - 1, 0] = 1
        rows[g - 1, g] = p - 1
    return Subspace.from_vectors(rows, n, p)


def _left_ideal_closure(G: FiniteGroup, S: Subspace) -> Subspace:
    gens = [g for g in G.gens if g != 0]
    while True:
        if S.dim == 0 or not gens:
            return S
        T = Subspace.from_vectors(np.vstack([S.basis] + [left_mult_rows(G, g, S.basis) for g in gens]), S.ambient_dim, S.p)
        if T.dim == S.dim:
            return S
        S = T


def augmentation_product(G: FiniteGroup, X: Subspace) -> Subspace:
    """w·X = sum over generators s of F_p[G](1 - s)X."""
    p = X.p
    gens = [g for g in G.gens if g != 0]
    if X.dim == 0 or not gens:
        return Subspace.zero(G.order, p)
    rows = np.vstack([(X.basis - left_mult_rows(G, s, X.basis)) % p for s in gens])
    return _left_ideal_closure(G, Subspace.from_vectors(rows, G.order, p))


def one_minus(G: FiniteGroup, g: int, p: int) -> np.ndarray:
    v = np.zeros(G.order, dtype=np.int64)
    v[0] += 1
    v[g] = (v[g] - 1) % p
    return v


@dataclass
class Filtration:
    group: FiniteGroup
    p: int
    powers: list  # w^1, w^2, ..., up to stabilization
    terms: list  # G_1, G_2, ... as frozensets of element indices (same length)
    stable_index: int  # w^k = w^{k+1} for k >= stable_index
    reaches_identity: bool
    residually_p: bool  # the powers of w reach 0
    warnings: list = field(default_factory=list)

    def term(self, i: int) -> frozenset:
        """G_i for any i >= 1 (constant past the stabilization index)."""
        if i < 1:
            raise StructuralError("filtration indices start at 1")
        return self.terms[min(i, len(self.terms)) - 1]

    @property
    def orders(self) -> list:
        return [len(t) for t in self.terms]


def augmentation_filtration(G: FiniteGroup, p: int) -> Filtration:
    p = check_prime(p)
    warnings = []
    if not is_p_power(G.order, p):
        warnings.append(f"|G| = {G.order} is not a power of {p}; the filtration may not reach 1")
    w = augmentation_ideal(G, p)
    powers = [w]
    while True:
        nxt = augmentation_product(G, powers[-1])
        if nxt.dim == powers[-1].dim:
            break
        powers.append(nxt)
    vecs = [one_minus(G, g, p) for g in range(G.order)]
    terms = [frozenset(g for g in range(G.order) if W.contains(vecs[g])) for W in powers]
    stable = len(powers)
    return Filtration(
        G, p, powers, terms, stable, terms[-1] == frozenset({0}), powers[-1].dim == 0, warnings
    )


@dataclass
class FiltrationReport:
    ok: bool
    subgroups: bool
    normal: bool
    elementary_abelian: bool
    commutators: bool
    witnesses: list = field(default_factory=list)


def check_filtration(F: Filtration, max_witnesses: int = 10) -> FiltrationReport:
    """Subgroups, normality, elementary abelian factors and
    [G_i, G_j] <= G_{i+j}, all exhaustively."""
    G, p = F.group, F.p
    m = G.mult
    wit = []
    flags = dict(subgroups=True, normal=True, elementary_abelian=True, commutators=True)

    def bad(kind, data):
        flags[kind] = False
        if len(wit) < max_witnesses:
            wit.append((kind, data))

    n = len(F.terms)
    for i in range(1, n + 1):
        Gi = F.term(i)
        S = sorted(Gi)
        if 0 not in Gi or any(int(m[a, b]) not in Gi for a in S for b in S):
            bad("subgroups", i)
        nxt = F.term(i + 1)
        for g in S:
            for h in sorted(nxt):
                if int(m[m[G.inverse[g], h], g]) not in nxt:
                    bad("normal", (i + 1, G.word(h), G.word(g)))
                    break
            if G.power(g, p) not in nxt:
                bad("elementary_abelian", (i, "power", G.word(g)))
            for h in S:
                if G.commutator(g, h) not in nxt:
                    bad("elementary_abelian", (i, "commutator", G.word(g), G.word(h)))
                    break
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            target = F.term(i + j)
            for g in sorted(F.term(i)):
                for h in sorted(F.term(j)):
                    if G.commutator(g, h) not in target:
                        bad("commutators", (i, j, G.word(g), G.word(h)))
                        break
    return FiltrationReport(all(flags.values()), witnesses=wit, **flags)


# ---------------------------------------------------------------- L_p(G)


@dataclass
class LpAlgebra:
    lie: LieAlgebra
    grades: list  # dimension of G_i / G_{i+1}, i = 1, 2, ...
    reps: list  # per grade: element indices of the coset representatives
    filtration: Filtration
    _logs: list = field(repr=False, default_factory=list)

    def dlog(self, i: int, g: int) -> np.ndarray:
        """Coordinates of g G_{i+1} in grade i (g must lie in G_i)."""
        if i < 1 or i > len(self.grades):
            return np.zeros(0, dtype=np.int64)
        return self._logs[i - 1](g)

    def offset(self, i: int) -> int:
        return sum(self.grades[: i - 1])

    def grade_subspace(self, i: int) -> Subspace:
        n = self.lie.dim
        rows = np.eye(n, dtype=np.int64)[self.offset(i): self.offset(i) + self.grades[i - 1]]
        return Subspace.from_vectors(rows, n, self.lie.p)


def _grade_logs(F: Filtration, i: int):
    """Greedy BFS-order representatives of G_i / G_{i+1} and a log map.

    g -> (1 - g) + w^{i+1} is additive and injective on G_i / G_{i+1}, so
    logs are solved linearly in w^i / w^{i+1}."""
    G, p = F.group, F.p
    lower = F.powers[min(i, len(F.powers) - 1)]
    Gi = F.term(i)

    def image(g):
        return lower.reduce(one_minus(G, g, p))

    reps, cols = [], []
    span = Subspace.zero(G.order, p)
    for g in sorted(Gi):
        v = image(g)
        if v.any() and not span.contains(v):
            reps.append(g)
            cols.append(v)
            span = span + Subspace.from_vectors(v, G.order, p)
    A = np.array(cols, dtype=np.int64).reshape(len(cols), G.order)

    def log(g):
        if g not in Gi:
            raise StructuralError(f"{G.word(g)} is not in G_{i}")
        if not reps:
            return np.zeros(0, dtype=np.int64)
        c = solve(A, image(g), p)
        if c is None:
            raise StructuralError(f"no log for {G.word(g)} in grade {i}")
        return np.asarray(c, dtype=np.int64) % p

    return reps, log


def build_Lp(G: FiniteGroup, p: int, F: Filtration | None = None) -> LpAlgebra:
    F = augmentation_filtration(G, p) if F is None else F
    if not F.reaches_identity:
        raise PreconditionError("the filtration does not reach {1}", witness=F.orders)
    grades, reps, logs = [], [], []
    for i in range(1, len(F.terms)):
        r, log = _grade_logs(F, i)
        if p ** len(r) * len(F.term(i + 1)) != len(F.term(i)):
            raise StructuralError(f"G_{i}/G_{i + 1} is not elementary abelian of the expected order")
        grades.append(len(r))
        reps.append(r)
        logs.append(log)
    while grades and grades[-1] == 0:
        grades.pop()
        reps.pop()
        logs.pop()
    n = sum(grades)
    names, grading, where = [], [], []
    for i, r in enumerate(reps, 1):
        for k, g in enumerate(r):
            names.append(f"g{i}_{k + 1}")
            grading.append(i)
            where.append((i, g))
    offsets = [sum(grades[:i]) for i in range(len(grades))]
    table = np.zeros((n, n, n), dtype=np.int64)
    for a, (i, g) in enumerate(where):
        for b, (j, h) in enumerate(where):
            c = G.commutator(g, h)
            if i + j > len(grades):
                if c not in F.term(i + j):
                    raise StructuralError(f"[G_{i}, G_{j}] not in G_{i + j}")
                continue
            v = logs[i + j - 1](c)
            table[a, b, offsets[i + j - 1]: offsets[i + j - 1] + len(v)] = v
    L = LieAlgebra(p, table, names, grading if n else None)
    return LpAlgebra(L, grades, reps, F, logs)


@dataclass
class LpReport:
    ok: bool
    validation: object
    nilpotent_homogeneous: bool
    witness: object = None
    checked: int = 0


def verify_Lp(Lp: LpAlgebra, max_vectors: int = 50000) -> LpReport:
    """liecore.validate plus ad-nilpotency of every homogeneous element."""
    L = Lp.lie
    rep = validate(L)
    bound = L.dim + 1
    checked = 0
    for i, d in enumerate(Lp.grades, 1):
        if L.p ** d > max_vectors:
            raise BudgetError(f"grade {i} has {L.p ** d} elements")
        off = Lp.offset(i)
        for coeffs in itertools.product(range(L.p), repeat=d):
            v = np.zeros(L.dim, dtype=np.int64)
            v[off: off + d] = coeffs
            checked += 1
            if ad_nilpotency(L, v, bound) is None:
                return LpReport(False, rep, False, (i, tuple(coeffs)), checked)
    return LpReport(rep.ok, rep, True, None, checked)


# ---------------------------------------------------------------- commutator shadows


@dataclass(frozen=True)
class CommutatorFactor:
    tree: object  # left-normed or nested commutator of variables
    s: int = 0  # exponent p^s

    @property
    def length(self) -> int:
        return sum(tree_vars(self.tree).values())

    def __str__(self):
        base = tree_str(self.tree)
        return base if self.s == 0 else f"{base}^(p^{self.s})"


@dataclass(frozen=True)
class GroupWord:
    factors: tuple
    fresh: tuple = ()  # variables bracketed on the outside, innermost first

    def __str__(self):
        inner = " ".join(str(f) for f in self.factors)
        for x in self.fresh:
            inner = f"[{inner}, {x}]"
        return inner


def _exponent(ps: _Parser) -> int:
    if ps.peek()[0] != "^":
        return 0
    ps.take("^")
    close = None
    if ps.peek()[0] in "({":
        close = ")" if ps.take(ps.peek()[0])[0] == "(" else "}"
    t = ps.take("var")
    if t[1] != "p":
        raise ParseError("exponents must be powers of p", col=t[2])
    s = 1
    if ps.peek()[0] == "^":
        ps.take("^")
        s = ps.take("int")[1]
    if close:
        ps.take(close)
    return s


def parse_group_word(text: str) -> GroupWord:
    """'[[x1,x2],x3] [x2,x1,x3]^p' -> GroupWord.  Factors are separated by
    spaces or '*'; exponents are p, p^k, (p^k) or {p^k}."""
    ps = _Parser(text)
    factors = []
    while ps.peek()[0] != "end":
        col = ps.peek()[2]
        terms = ps.term()
        if len(terms) != 1 or terms[0][0] != 1:
            raise ParseError("group commutators cannot contain sums or scalars", col=col)
        factors.append(CommutatorFactor(terms[0][1], _exponent(ps)))
        if ps.peek()[0] == "*":
            ps.take("*")
    if not factors:
        raise ParseError("empty group word", col=1)
    return GroupWord(tuple(factors))


def with_fresh_variable(word: GroupWord, name: str | None = None) -> GroupWord:
    """[w, x0]: the commutator with a new variable, used to move the
    length off a multiple of p before the factors are reduced."""
    used = set()
    for f in word.factors:
        used |= set(tree_vars(f.tree))
    used |= set(word.fresh)
    if name is None:
        k = 0
        while f"x{k}" in used:
            k += 1
        name = f"x{k}"
    elif name in used:
        raise StructuralError(f"{name} already occurs in the word")
    return GroupWord(word.factors, word.fresh + (name,))


def group_commutator_shadow(word) -> LiePolynomial:
    """Sum of the Lie commutators with the same bracketing as the group
    commutators.  p-power factors are rejected."""
    if isinstance(word, str):
        word = parse_group_word(word)
    if word.fresh:
        raise StructuralError("reduce [w, x0] to a product of commutators first")
    powered = [str(f) for f in word.factors if f.s > 0]
    if powered:
        raise StructuralError(
            f"p-power factors {', '.join(powered)}: pass to [w, x0] (with_fresh_variable) and "
            "reduce to a product of commutators of equal length first"
        )
    lengths = {f.length for f in word.factors}
    if len(lengths) > 1:
        raise StructuralError(f"commutators of different lengths {sorted(lengths)}")
    return LiePolynomial(tuple((1, f.tree) for f in word.factors))
