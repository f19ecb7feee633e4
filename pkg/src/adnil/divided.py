"""Divided polynomials: Lie words closed under x0 ad_{x1}^[k](w)."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .config import evaluation_budget
from .errors import BudgetError, ContractError, PreconditionError, StructuralError
from .exactlin import Subspace, matmul
from .grassenv import Envelope, EnvelopeElement
from .idlin import PolynomialMap, full_linearization, natural_key


class DividedPolynomial:
    """Base node.  `multidegree` maps variable names to degrees."""

    multidegree: Counter

    def variables(self) -> tuple:
        return tuple(sorted(self.multidegree, key=natural_key))

    def degree(self) -> int:
        return sum(self.multidegree.values())


@dataclass(frozen=True, eq=True)
class Var(DividedPolynomial):
    name: str

    @property
    def multidegree(self):
        return Counter({self.name: 1})

    def __str__(self):
        return self.name


@dataclass(frozen=True, eq=True)
class Const(DividedPolynomial):
    value: EnvelopeElement

    @property
    def multidegree(self):
        return Counter()

    def __str__(self):
        return f"({self.value})"


@dataclass(frozen=True, eq=True)
class Bracket(DividedPolynomial):
    children: tuple

    def __post_init__(self):
        if len(self.children) < 2:
            raise StructuralError("a bracket needs at least two arguments")

    @property
    def multidegree(self):
        out = Counter()
        for c in self.children:
            out.update(c.multidegree)
        return out

    def __str__(self):
        return "[" + ",".join(str(c) for c in self.children) + "]"


@dataclass(frozen=True, eq=True)
class Subst(DividedPolynomial):
    """w with each named variable replaced by a divided polynomial."""

    inner: DividedPolynomial
    mapping: tuple  # ((name, poly), ...)

    @property
    def multidegree(self):
        sub = dict(self.mapping)
        out = Counter()
        for name, d in self.inner.multidegree.items():
            if name in sub:
                for v, e in sub[name].multidegree.items():
                    out[v] += d * e
            else:
                out[name] += d
        return out

    def __str__(self):
        return f"{self.inner}{{" + ", ".join(f"{n}:={v}" for n, v in self.mapping) + "}"


@dataclass(frozen=True, eq=True)
class DivAd(DividedPolynomial):
    """x0 ad_{x1}^[k](w): a0 U_k({ad w(a_1pi, a_2, ...)}_pi)."""

    x0: DividedPolynomial
    x1: str
    k: int
    inner: DividedPolynomial
    waived: bool = False

    def __post_init__(self):
        if self.k < 0:
            raise StructuralError("k must be >= 0")
        if self.inner.multidegree.get(self.x1, 0) != 1:
            raise StructuralError(f"{self.inner} must have degree 1 in {self.x1}")

    @property
    def multidegree(self):
        out = Counter(self.x0.multidegree)
        for v, e in self.inner.multidegree.items():
            out[v] += self.k * e
        return out

    def __str__(self):
        return f"{self.x0} ad_{self.x1}^[{self.k}]({self.inner})"


def bracket(*args) -> Bracket:
    return Bracket(tuple(Var(a) if isinstance(a, str) else a for a in args))


# ---------------------------------------------------------------- obligations


@dataclass
class ObligationRecord:
    commuting: bool
    support: bool
    witness: object = None

    @property
    def ok(self):
        return self.commuting and self.support


_OBLIGATIONS: dict = {}


def _key(node, ambient: Subspace, assignment: dict):
    others = tuple(
        sorted((n, v.flat().tobytes()) for n, v in assignment.items() if n != node.x1 and n in node.inner.multidegree)
    )
    return (node, ambient.basis.tobytes(), ambient.ambient_dim, others)


def check_obligations(node: DivAd, env: Envelope, assignment: dict, ambient: Subspace | None = None) -> ObligationRecord:
    """Commutation obligations for `node` with x2.. fixed by `assignment` and x1 ranging over `ambient`.

    (i)  [w(a, ...), w(b, ...)] = 0: bilinear in (a, b), so checked on a basis
         of the span of w(ambient, ...).
    (ii) w(v⊗e_pi, ...) only has masks containing pi, for single-mask basis
         vectors of the ambient; additivity in x1 on consecutive basis pairs.
    Results are cached per (node, ambient, other values)."""
    ambient = ambient if ambient is not None else env.tensor_subspace()
    key = _key(node, ambient, assignment)
    if key in _OBLIGATIONS:
        return _OBLIGATIONS[key]
    p = env.p
    rows = []
    support, witness = True, None
    basis = ambient.basis
    for r in basis:
        a = env.from_flat(r)
        val = _eval(node.inner, env, {**assignment, node.x1: a}, True, ambient)
        rows.append(val.flat())
        comps = a.items()
        if len(comps) == 1:
            pi = comps[0][0]
            if any(m & pi != pi for m in val.masks):
                support, witness = False, ("support", a)
    for r, s in zip(basis, basis[1:]):
        if not support:
            break
        lhs = _eval(node.inner, env, {**assignment, node.x1: env.from_flat((r + s) % p)}, True, ambient).flat()
        i = next(j for j in range(len(basis)) if basis[j] is r or np.array_equal(basis[j], r))
        if not np.array_equal(lhs, (rows[i] + rows[i + 1]) % p):
            support, witness = False, ("additivity", env.from_flat(r))
    commuting = True
    if rows:
        span = Subspace.from_vectors(np.array(rows), env.dim, p)
        ads = [env.ad_array(v) for v in span.basis]
        for i, j in itertools.combinations(range(len(ads)), 2):
            if (span.basis[i] @ ads[j] % p).any():
                commuting, witness = False, ("commuting", (env.from_flat(span.basis[i]), env.from_flat(span.basis[j])))
                break
    rec = ObligationRecord(commuting, support, witness)
    _OBLIGATIONS[key] = rec
    return rec


def clear_obligation_cache():
    _OBLIGATIONS.clear()


# ---------------------------------------------------------------- evaluation


def _eval(w, env: Envelope, assignment: dict, verify: bool, ambient):
    if isinstance(w, Var):
        if w.name not in assignment:
            raise StructuralError(f"no value for {w.name}")
        v = assignment[w.name]
        return v if isinstance(v, EnvelopeElement) else env.from_flat(v)
    if isinstance(w, Const):
        return w.value
    if isinstance(w, Bracket):
        vals = [_eval(c, env, assignment, verify, ambient) for c in w.children]
        acc = vals[0]
        for v in vals[1:]:
            acc = env.product(acc, v)
        return acc
    if isinstance(w, Subst):
        inner = dict(assignment)
        for name, poly in w.mapping:
            inner[name] = _eval(poly, env, assignment, verify, ambient)
        return _eval(w.inner, env, inner, verify, ambient)
    if isinstance(w, DivAd):
        return _eval_divad(w, env, assignment, verify, ambient)
    raise StructuralError(f"unknown node {w!r}")


def _eval_divad(w: DivAd, env, assignment, verify, ambient):
    from .divpow import OmegaFamily

    a0 = _eval(w.x0, env, assignment, verify, ambient)
    if w.k == 0:
        return a0
    if not w.waived:
        amb = ambient if ambient is not None else env.tensor_subspace()
        key = _key(w, amb, assignment)
        rec = _OBLIGATIONS.get(key)
        if rec is None:
            if not verify:
                raise ContractError(f"commutation obligations of {w} not verified")
            rec = check_obligations(w, env, assignment, amb)
        if not rec.ok:
            raise ContractError(f"commutation obligations of {w} fail: {rec.witness}")
    a1 = assignment.get(w.x1)
    if a1 is None:
        raise StructuralError(f"no value for {w.x1}")
    if not isinstance(a1, EnvelopeElement):
        a1 = env.from_flat(a1)
    parts = []
    for mask, v in a1.items():
        val = _eval(w.inner, env, {**assignment, w.x1: env.element({mask: v})}, verify, ambient)
        if not val.is_zero():
            parts.append(val)
    if not parts:
        return env.zero()
    fam = OmegaFamily.from_elements(env, parts)
    return env.apply(a0, fam.U_array(w.k))


def eval_divided_polynomial(w: DividedPolynomial, assignment: dict, env: Envelope | None = None,
                            verify: bool = True, ambient: Subspace | None = None) -> EnvelopeElement:
    """Evaluate w at envelope elements.

    commutation obligations of DivAd nodes are checked for the ambient (default: all
    of L̃) unless already cached or waived; with verify=False an unchecked
    obligation is a ContractError."""
    if env is None:
        env = next((v.env for v in assignment.values() if isinstance(v, EnvelopeElement)), None)
        if env is None:
            raise StructuralError("cannot infer the envelope")
    return _eval(w, env, assignment, verify, ambient)


# ---------------------------------------------------------------- regularity


@dataclass
class RegularityRow:
    i: int
    dim: int
    nonzero: bool
    witness: object = None
    evaluations: int = 0


def _plain(w) -> bool:
    if isinstance(w, Var):
        return True
    return isinstance(w, Bracket) and all(_plain(c) for c in w.children)


def _flat_eval(w, values: dict, stack: np.ndarray, p: int) -> np.ndarray:
    if isinstance(w, Var):
        return values[w.name]
    acc = _flat_eval(w.children[0], values, stack, p)
    for c in w.children[1:]:
        b = _flat_eval(c, values, stack, p)
        acc = matmul(acc.reshape(1, -1), np.tensordot(b, stack, 1) % p, p)[0]
    return acc


def divided_polynomial_map(w: DividedPolynomial, env: Envelope, verify=True) -> PolynomialMap:
    """w as a PolynomialMap on flat envelope vectors.  Plain Lie words
    (variables and brackets only) are bracketed directly on flat vectors."""
    names = w.variables()
    md = w.multidegree
    if _plain(w):
        stack = env.basis_ad_stack
        p = env.p

        def ev(*vs):
            return _flat_eval(w, {n: np.asarray(v, dtype=np.int64) % p for n, v in zip(names, vs)}, stack, p)

    else:

        def ev(*vs):
            return eval_divided_polynomial(w, dict(zip(names, vs)), env, verify).flat()

    return PolynomialMap(ev, tuple(md[n] for n in names), env.p, (env.dim,) * len(names), env.dim, check=False)


def regularity_probe(w: DividedPolynomial, L, i_max: int, budget=None, verify=True) -> list:
    """Rows (i, dim L^i, nonzero?) for i = 1..i_max.

    The full linearization of w is multilinear, and a value on basis vectors
    b_j⊗e_pi_j with pairwise disjoint masks is the image of the value on
    b_j⊗e_j under e_j -> e_pi_j (an injective relabelling).  Overlapping
    masks give 0.  So it suffices to evaluate on b_j1⊗e_1, ..., b_jd⊗e_d
    with an envelope of budget d."""
    from .liecore import lower_central_series

    d = w.degree()
    budget = evaluation_budget() if budget is None else budget
    series = lower_central_series(L).terms
    if d == 0:
        raise StructuralError("constant divided polynomial")
    env = Envelope(L, max(d, 1))
    f = full_linearization(divided_polynomial_map(w, env, verify))
    rows = []
    spent = 0
    for i in range(1, i_max + 1):
        Li = series[min(i, len(series)) - 1]
        count = Li.dim ** d
        if spent + count > budget:
            raise BudgetError(f"regularity probe needs {spent + count} evaluations, budget {budget}")
        found = None
        n = 0
        for combo in itertools.product(range(Li.dim), repeat=d):
            args = [env.tensor(Li.basis[j], [slot + 1]).flat() for slot, j in enumerate(combo)]
            n += 1
            val = f(*args)
            if val.any():
                found = (combo, env.from_flat(val))
                break
        spent += n
        rows.append(RegularityRow(i, Li.dim, found is not None, found, n))
    return rows


def linearized_value_spans(w: DividedPolynomial, env: Envelope, ambient: Subspace | None = None, budget=None):
    """(span of all values of w, span of the values of its full linearization
    on basis tuples), both over the ambient subspace of the envelope.

    The first span is brute force over every vector in slots of degree >= 2."""
    from .idlin import full_value_span, value_span

    ambient = Subspace.full(env.dim, env.p) if ambient is None else ambient
    f = divided_polynomial_map(w, env)
    F = full_linearization(f)
    return full_value_span(f, [ambient] * f.arity, budget), value_span(F, [ambient] * F.arity, budget)
