"""
Divided-power operators U_k(Ω) on envelopes and the sandwich calculus.

Ω is a finite family of pairwise commuting operators, each tagged with a
generator index (its anchor); members with the same anchor compose to zero.
U_k(Ω) is the sum over k-element subsets of the products of the members,
computed as an elementary symmetric function.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import comb

import numpy as np

from .errors import ContractError, PreconditionError, StructuralError
from .exactlin import FpMatrix, Subspace, kernel_basis, matmul, mat_power, nilpotency_index_array, solve
from .grassenv import Envelope, EnvelopeElement, mask_indices


def _eye(n):
    return np.eye(n, dtype=np.int64)


@dataclass(frozen=True)
class OmegaReport:
    ok: bool
    u1_violations: list = field(default_factory=list)  # (i, j) with same anchor and d_i d_j != 0
    u2_violations: list = field(default_factory=list)  # (i, j, "operator" | "elements")
    unanchored: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


class OmegaFamily:
    """A family of operators on a flat space with anchors.

    Build with `from_elements` (ad of envelope elements) or `from_matrices`."""

    def __init__(self, members, anchors, p: int, dim: int, elements=None, env=None, labels=None):
        self.members = tuple(np.asarray(m, dtype=np.int64) % p for m in members)
        self.anchors = tuple(anchors)
        if len(self.anchors) != len(self.members):
            raise StructuralError("one anchor per member required")
        for m in self.members:
            if m.shape != (dim, dim):
                raise StructuralError("members must be square operators on the same space")
        self.p = p
        self.dim = dim
        self.elements = tuple(elements) if elements is not None else None
        self.env = env
        self.labels = tuple(labels) if labels else tuple(f"d{i + 1}" for i in range(len(self.members)))

    def __len__(self):
        return len(self.members)

    @classmethod
    def from_matrices(cls, mats, anchors, p: int) -> OmegaFamily:
        mats = [m.arr if isinstance(m, FpMatrix) else np.asarray(m) for m in mats]
        dim = mats[0].shape[0] if mats else 0
        return cls(mats, anchors, p, dim)

    @classmethod
    def from_elements(cls, env: Envelope, elements, derivation: str = "ad") -> OmegaFamily:
        """Ω = {ad(x)} (or the inner derivations of an associative base).

        The anchor is the smallest generator index common to all masks of x."""
        mats, anchors = [], []
        for x in elements:
            if derivation == "ad":
                mats.append(env.ad_array(x))
            else:
                mats.append(env.inner_derivation_array(x))
            common = None
            for m in x.masks:
                common = m if common is None else common & m
            anchors.append(mask_indices(common)[0] if common else None)
        return cls(mats, anchors, env.p, env.dim, elements=list(elements), env=env)

    @cached_property
    def report(self) -> OmegaReport:
        return validate_omega(self)

    def _require_valid(self):
        if not self.report.ok:
            raise ContractError(f"Ω is not square-zero and commuting: {self.report}")

    @cached_property
    def _powers(self) -> list:
        """[U_0, U_1, ..., U_|Ω|] as arrays."""
        self._require_valid()
        n, p = self.dim, self.p
        es = [_eye(n)] + [np.zeros((n, n), dtype=np.int64) for _ in self.members]
        for t, d in enumerate(self.members, start=1):
            for j in range(t, 0, -1):
                es[j] = (es[j] + matmul(es[j - 1], d, p)) % p
        for e in es:
            e.setflags(write=False)
        return es

    def U_array(self, k: int) -> np.ndarray:
        if k < 0:
            raise StructuralError("k must be >= 0")
        pw = self._powers
        if k >= len(pw):
            return np.zeros((self.dim, self.dim), dtype=np.int64)
        return pw[k]


def validate_omega(omega: OmegaFamily) -> OmegaReport:
    p = omega.p
    u1, u2, unanchored = [], [], []
    ms = omega.members
    for i, a in enumerate(omega.anchors):
        if a is None:
            unanchored.append(i)
    for i in range(len(ms)):
        for j in range(i, len(ms)):
            if omega.anchors[i] is not None and omega.anchors[i] == omega.anchors[j]:
                if matmul(ms[i], ms[j], p).any() or matmul(ms[j], ms[i], p).any():
                    u1.append((i, j))
            if i < j:
                if ((matmul(ms[i], ms[j], p) - matmul(ms[j], ms[i], p)) % p).any():
                    u2.append((i, j, "operator"))
                elif omega.elements is not None and omega.env is not None:
                    if not omega.env.product(omega.elements[i], omega.elements[j]).is_zero():
                        u2.append((i, j, "elements"))
    return OmegaReport(not (u1 or u2 or unanchored), u1, u2, unanchored)


def U(omega: OmegaFamily, k: int) -> FpMatrix:
    """U_k(Ω).  Refuses families that fail validation."""
    return FpMatrix._wrap(omega.U_array(k), omega.p)


# ---------------------------------------------------------------- automorphisms


def components_commute(x: EnvelopeElement):
    """First pair of standard components with nonzero bracket, or None."""
    comps = x.items()
    env = x.env
    for (i, (m1, v1)), (j, (m2, v2)) in itertools.combinations(enumerate(comps), 2):
        if m1 & m2:
            continue
        if env.base.product(v1, v2).any():
            return (i, j)
    return None


def component_family(x: EnvelopeElement) -> OmegaFamily:
    """{ad(x_pi)} over the standard decomposition of x."""
    env = x.env
    parts = [env.element({m: v}) for m, v in x.items()]
    return OmegaFamily.from_elements(env, parts)


def divided_ad(x: EnvelopeElement, k: int) -> FpMatrix:
    """ad^[k](x) = U_k({ad(x_pi)}_pi)."""
    bad = components_commute(x)
    if bad is not None:
        raise PreconditionError("components of x do not commute", witness=bad)
    return U(component_family(x), k)


def envelope_automorphism(x: EnvelopeElement) -> FpMatrix:
    """A(x) = Id + sum_k ad^[k](x) for x with pairwise commuting components."""
    bad = components_commute(x)
    if bad is not None:
        raise PreconditionError("components of x do not commute", witness=bad)
    fam = component_family(x)
    total = np.zeros((x.env.dim, x.env.dim), dtype=np.int64)
    for k in range(len(fam) + 1):
        total = (total + fam.U_array(k)) % x.env.p
    return FpMatrix._wrap(total, x.env.p)


# ---------------------------------------------------------------- Kostrikin


@dataclass(frozen=True)
class KostrikinRow:
    index: int
    name: str
    value: np.ndarray  # b ad(a)^(n-1)
    ad_index: int | None
    ok: bool


def kostrikin_descent(L, a, n: int) -> list:
    """For each basis b: c = b ad(a)^(n-1) and the nilpotency index of ad(c).

    Requires ad(a)^n = 0 with 4 <= n < p; the claim is ad(c)^(n-1) = 0."""
    p = L.p
    if not 4 <= n < p:
        raise PreconditionError(f"need 4 <= n < p, got n={n}, p={p}")
    A = L.ad_array(a)
    if mat_power(A, n, p).any():
        raise PreconditionError(f"ad(a)^{n} != 0")
    An1 = mat_power(A, n - 1, p)
    rows = []
    for i in range(L.dim):
        c = An1[i].copy()
        idx = nilpotency_index_array(L.ad_array(c), p, n)
        rows.append(KostrikinRow(i, L.names[i], c, idx, idx is not None and idx <= n - 1))
    return rows


@dataclass
class LinearizedKostrikinReport:
    part1: bool
    part2: bool | None  # None when m < 4 or no a given
    witness: object = None
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.part1 and self.part2 is not False


def linearized_kostrikin(omega: OmegaFamily, m: int, a: EnvelopeElement | None = None, env: Envelope | None = None):
    """Check [xU_{m-1}, yU_{m-1}] = 0 for all x, y (m >= 2) and, for m >= 4,
    that Ω' = {ad(a_pi U_{m-1})}_pi has U_k(Ω') = 0 for k >= m - 1.

    Hypothesis (checked, PreconditionError otherwise): Ω valid and
    U_k(Ω) = 0 for m <= k <= |Ω|."""
    env = env or omega.env or (a.env if a is not None else None)
    if m < 2:
        raise StructuralError("m must be >= 2")
    if not omega.report.ok:
        raise PreconditionError("Ω is not square-zero and commuting", witness=omega.report)
    for k in range(m, len(omega) + 1):
        if omega.U_array(k).any():
            raise PreconditionError(f"U_{k}(Ω) != 0", witness=k)
    if len(omega) == 0:
        return LinearizedKostrikinReport(True, True if m >= 4 else None, notes=["empty family"])
    if env is None:
        raise StructuralError("an envelope is needed to bracket elements")
    p = env.p
    Um1 = omega.U_array(m - 1)
    image = Subspace.from_vectors(Um1, env.dim, p)
    part1 = True
    witness = None
    elems = [env.from_flat(r) for r in image.basis]
    for i, j in itertools.combinations(range(len(elems)), 2):
        if not env.product(elems[i], elems[j]).is_zero():
            part1, witness = False, (i, j)
            break
    part2 = None
    if m >= 4 and a is not None:
        parts = []
        for mask, v in a.items():
            piece = env.apply(env.element({mask: v}), Um1)
            if not piece.is_zero():
                parts.append(piece)
        fam = OmegaFamily.from_elements(env, parts)
        if not fam.report.ok:
            part2, witness = False, ("Ω' invalid", fam.report)
        else:
            part2 = all(not fam.U_array(k).any() for k in range(m - 1, len(fam) + 1))
    return LinearizedKostrikinReport(part1, part2, witness)


# ---------------------------------------------------------------- sandwiches


def _basis_ads(A) -> np.ndarray:
    if isinstance(A, Envelope):
        return A.basis_ad_stack
    return A.basis_ads()


def _ad(A, a) -> np.ndarray:
    if isinstance(a, EnvelopeElement):
        a = a.flat()
    return A.ad_array(a)


def sandwich_witness(A, a, within: Subspace | None = None):
    """None if a is a sandwich of A (or of the subalgebra `within`),
    else (kind, detail)."""
    p = A.p
    D = _ad(A, a)
    if within is None:
        rows = _eye(A.dim)
        bs = _basis_ads(A)
    else:
        rows = within.basis
        bs = [A.ad_array(b) for b in within.basis]
    D2 = matmul(D, D, p)
    if matmul(rows, D2, p).any():
        return ("ad(a)^2 != 0", None)
    for j, B in enumerate(bs):
        if matmul(rows, matmul(matmul(D, B, p), D, p), p).any():
            return ("ad(a) ad(b) ad(a) != 0", j)
    return None


def sandwich_check(A, a, within: Subspace | None = None) -> bool:
    """ad(a)^2 = 0 and ad(a) ad(b) ad(a) = 0 for every basis b."""
    return sandwich_witness(A, a, within) is None


@dataclass
class SandwichProof:
    element: EnvelopeElement
    u2_zero: bool
    sandwich: bool


def sandwich_from_U2(omega0, env: Envelope | None = None) -> SandwichProof:
    """a = sum Ω0 is a sandwich when U_2(ad Ω0) = 0 (both checked).

    omega0 is a list of envelope elements or an element-backed OmegaFamily."""
    if isinstance(omega0, OmegaFamily):
        if omega0.elements is None:
            raise StructuralError("family is not backed by envelope elements")
        fam, env, omega0 = omega0, omega0.env, list(omega0.elements)
    else:
        omega0 = list(omega0)
        env = env or (omega0[0].env if omega0 else None)
        if env is None:
            raise StructuralError("empty Ω0 needs an explicit envelope")
        fam = OmegaFamily.from_elements(env, omega0)
    if not fam.report.ok:
        raise PreconditionError("ad(Ω0) is not square-zero and commuting", witness=fam.report)
    U2 = fam.U_array(2)
    if U2.any():
        row = int(np.nonzero(U2.any(axis=1))[0][0])
        raise PreconditionError("U_2(ad Ω0) != 0", witness=env.from_flat(np.eye(env.dim, dtype=np.int64)[row]))
    a = env.zero()
    for x in omega0:
        a = a + x
    return SandwichProof(a, True, sandwich_check(env, a))


@dataclass
class CongruenceReport:
    holds: bool
    coefficients: dict
    equal_on_nose: bool
    witness: object = None


def _block_pair_sum(A, elems, blocks):
    p = A.p
    sums = []
    for blk in blocks:
        s = np.zeros(A.dim, dtype=np.int64)
        for i in blk:
            s = (s + elems[i]) % p
        sums.append(A.ad_array(s))
    total = np.zeros((A.dim, A.dim), dtype=np.int64)
    for k1, k2 in itertools.combinations(range(len(sums)), 2):
        total = (total + matmul(sums[k1], sums[k2], p)) % p
    return total


def two_decomposition_congruence(omega0, partition_a, partition_b, algebra=None) -> CongruenceReport:
    """Compare sum_{k1<k2} ad(b_k1) ad(b_k2) for two block decompositions of Ω0
    modulo span{ad[a_i, a_j]}.

    Blocks are lists of indices into Ω0; b_k is the sum of block k.  Elements
    are envelope elements or vectors of `algebra`."""
    A = algebra
    if A is None:
        if not omega0 or not isinstance(omega0[0], EnvelopeElement):
            raise StructuralError("pass algebra= for plain vectors")
        A = omega0[0].env
    p = A.p
    elems = [x.flat() if isinstance(x, EnvelopeElement) else np.asarray(x, dtype=np.int64) % p for x in omega0]
    n = len(elems)
    for part in (partition_a, partition_b):
        flat = sorted(i for blk in part for i in blk)
        if flat != list(range(n)):
            raise StructuralError("partitions must cover Ω0 exactly once")
    ads = [A.ad_array(e) for e in elems]
    for part in (partition_a, partition_b):
        for blk in part:
            for i, j in itertools.permutations(blk, 2):
                if matmul(ads[i], ads[j], p).any():
                    raise PreconditionError("ad(a_i) ad(a_j) != 0 inside a block", witness=(i, j))
    diff = (_block_pair_sum(A, elems, partition_a) - _block_pair_sum(A, elems, partition_b)) % p
    pairs = list(itertools.combinations(range(n), 2))
    if not diff.any():
        return CongruenceReport(True, {}, True)
    gens = np.array([A.ad_array(_bracket(A, elems[i], elems[j])).reshape(-1) for i, j in pairs])
    x = solve(gens, diff.reshape(-1), p) if len(pairs) else None
    if x is None:
        return CongruenceReport(False, {}, False)
    coeffs = {pr: int(c) for pr, c in zip(pairs, x) if c}
    return CongruenceReport(True, coeffs, False)


def _bracket(A, a, b):
    if isinstance(A, Envelope):
        return A.product(A.from_flat(a), A.from_flat(b)).flat()
    return A.bracket(a, b)


# ---------------------------------------------------------------- Jacobson / p-th powers


def _assoc_mul(f: dict, g: dict, p: int) -> dict:
    out = {}
    for u, a in f.items():
        for v, b in g.items():
            w = u + v
            out[w] = (out.get(w, 0) + a * b) % p
    return {w: c for w, c in out.items() if c}


def _assoc_add(f: dict, g: dict, p: int, sign: int = 1) -> dict:
    out = dict(f)
    for w, c in g.items():
        out[w] = (out.get(w, 0) + sign * c) % p
    return {w: c for w, c in out.items() if c}


def jacobson_sides(p: int):
    """Both sides of sum_{S_p} x_s1...x_sp = sum_{S_(p-1)} [x_p, x_s1, ..., x_s(p-1)]
    in the free associative algebra over F_p (words of variable indices 1..p)."""
    lhs = {}
    for perm in itertools.permutations(range(1, p + 1)):
        lhs[perm] = (lhs.get(perm, 0) + 1) % p
    lhs = {w: c for w, c in lhs.items() if c}
    rhs = {}
    for perm in itertools.permutations(range(1, p)):
        acc = {(p,): 1}
        for i in perm:
            x = {(i,): 1}
            acc = _assoc_add(_assoc_mul(acc, x, p), _assoc_mul(x, acc, p), p, -1)
        rhs = _assoc_add(rhs, acc, p)
    return lhs, rhs


def jacobson_identity_holds(p: int) -> bool:
    lhs, rhs = jacobson_sides(p)
    return lhs == rhs


@dataclass
class PPowerReport:
    sandwich: bool
    power_zero: bool
    identity: bool | None

    @property
    def ok(self):
        return self.sandwich and self.power_zero and self.identity is not False


def sandwich_ppower(a: EnvelopeElement, b: EnvelopeElement, within: Subspace | None = None) -> PPowerReport:
    """For a sandwich a: ad([a, b])^p = 0 in the operator algebra generated by ad(L̃).

    The symbolic Jacobson check is only run for p <= 5."""
    env = a.env
    if not sandwich_check(env, a, within):
        raise PreconditionError("a is not a sandwich", witness=sandwich_witness(env, a, within))
    c = env.product(a, b)
    M = mat_power(env.ad_array(c), env.p, env.p)
    return PPowerReport(True, not M.any(), jacobson_identity_holds(env.p) if env.p <= 5 else None)


def binomial_mod(n: int, k: int, p: int) -> int:
    return comb(n, k) % p


def automorphism_sum(omega: OmegaFamily) -> FpMatrix:
    """sum_i U_i(Ω), the map a -> sum_i aU_i(Ω)."""
    total = np.zeros((omega.dim, omega.dim), dtype=np.int64)
    for k in range(len(omega) + 1):
        total = (total + omega.U_array(k)) % omega.p
    return FpMatrix._wrap(total, omega.p)


# ---------------------------------------------------------------- identity suite


def random_omega(env: Envelope, size: int, rng, tries: int = 200) -> OmegaFamily:
    """A random valid element-backed family of up to `size` members
    ad(c ⊗ e_π) with random c and random nonempty masks.

    Half the time c is a multiple of an earlier vector, so that members
    with disjoint masks still commute and U_2 is often nonzero."""
    L, k = env.base, env.budget
    chosen, vecs = [], []
    for _ in range(tries):
        if len(chosen) >= size:
            break
        mask = int(rng.integers(1, 2**k))
        if vecs and rng.random() < 0.5:
            c = (int(rng.integers(1, env.p)) * vecs[int(rng.integers(len(vecs)))]) % env.p
        else:
            c = rng.integers(0, env.p, L.dim)
        if not c.any():
            continue
        x = env.element({mask: c})
        fam = OmegaFamily.from_elements(env, chosen + [x])
        if fam.report.ok:
            chosen.append(x)
            vecs.append(c)
    return OmegaFamily.from_elements(env, chosen)


@dataclass
class OmegaIdentityReport:
    product_rule: bool  # [a,b]U_m = sum_i [aU_i, bU_{m-i}]
    automorphism: bool  # sum_i U_i preserves brackets
    operator_rule: bool  # ad(aU_m) = sum_i (-1)^i U_i ad(a) U_{m-i}
    composition: bool  # U_i U_j = C(i+j, i) U_{i+j}
    witness: object = None

    @property
    def ok(self):
        return self.product_rule and self.automorphism and self.operator_rule and self.composition


def omega_identity_report(omega: OmegaFamily, samples: int = 3, seed: int = 0) -> OmegaIdentityReport:
    """The four divided-power identities for an element-backed family,
    on random envelope elements (exact equality of vectors and matrices)."""
    env = omega.env
    if env is None:
        raise StructuralError("the identity suite needs an element-backed family")
    if not omega.report.ok:
        raise PreconditionError("Ω is not square-zero and commuting", witness=omega.report)
    p, n = env.p, len(omega)
    rng = np.random.default_rng(seed)
    Us = [omega.U_array(k) for k in range(n + 2)]
    flags = dict(product_rule=True, automorphism=True, operator_rule=True, composition=True)
    witness = None

    def fail(kind, data):
        nonlocal witness
        flags[kind] = False
        witness = witness or (kind, data)

    for i in range(n + 2):
        for j in range(n + 2 - i):
            if not np.array_equal(matmul(Us[i], Us[j], p), (binomial_mod(i + j, i, p) * Us[i + j]) % p):
                fail("composition", (i, j))
    auto = automorphism_sum(omega).arr
    for t in range(samples):
        a = env.from_flat(rng.integers(0, p, env.dim))
        b = env.from_flat(rng.integers(0, p, env.dim))
        ab = env.product(a, b).flat()
        aU = [matmul(a.flat().reshape(1, -1), U_, p)[0] for U_ in Us]
        bU = [matmul(b.flat().reshape(1, -1), U_, p)[0] for U_ in Us]
        for m in range(n + 2):
            lhs = matmul(ab.reshape(1, -1), Us[m], p)[0]
            rhs = np.zeros(env.dim, dtype=np.int64)
            for i in range(m + 1):
                rhs = (rhs + env.product(env.from_flat(aU[i]), env.from_flat(bU[m - i])).flat()) % p
            if not np.array_equal(lhs, rhs):
                fail("product_rule", (t, m))
            R = env.ad_array(aU[m])
            S = np.zeros_like(R)
            Ra = env.ad_array(a.flat())
            for i in range(m + 1):
                S = (S + (-1) ** i * matmul(matmul(Us[i], Ra, p), Us[m - i], p)) % p
            if not np.array_equal(R, S):
                fail("operator_rule", (t, m))
        fa = matmul(a.flat().reshape(1, -1), auto, p)[0]
        fb = matmul(b.flat().reshape(1, -1), auto, p)[0]
        lhs = matmul(ab.reshape(1, -1), auto, p)[0]
        if not np.array_equal(lhs, env.product(env.from_flat(fa), env.from_flat(fb)).flat()):
            fail("automorphism", t)
    return OmegaIdentityReport(witness=witness, **flags)



# (algebra, p, Grassmann budget)
OMEGA_SUITE_CASES = (
    ("heisenberg", 3, 4),
    ("n4", 2, 4),
    ("n4", 5, 3),
    ("filiform5", 2, 4),
    ("filiform6", 7, 3),
    ("n5", 2, 3),
    ("free2c4", 3, 3),
)


@dataclass
class OmegaSuiteResult:
    trials: int
    passed: int
    nonzero_u2: dict  # p -> number of families with U_2 != 0
    failure: object = None  # (case, trial, OmegaIdentityReport)

    @property
    def ok(self):
        return self.passed == self.trials


def omega_suite(trials: int = 102, seed: int = 0, cases=OMEGA_SUITE_CASES, size: int = 4) -> OmegaSuiteResult:
    """The four divided-power identities on random families, cycling through `cases`."""
    from .catalog import builtin

    rng = np.random.default_rng(seed)
    envs = [Envelope(builtin(name, p), k) for name, p, k in cases]
    passed, nonzero = 0, {}
    for t in range(trials):
        env = envs[t % len(envs)]
        omega = random_omega(env, size, rng)
        r = omega_identity_report(omega, samples=2, seed=seed + t)
        if not r.ok:
            return OmegaSuiteResult(trials, passed, nonzero, (cases[t % len(cases)], t, r))
        passed += 1
        if len(omega) >= 2 and omega.U_array(2).any():
            nonzero[env.p] = nonzero.get(env.p, 0) + 1
    return OmegaSuiteResult(trials, passed, nonzero)

from .divided import (  # noqa: E402
    Bracket,
    Const,
    DivAd,
    DividedPolynomial,
    Subst,
    Var,
    check_obligations,
    eval_divided_polynomial,
    regularity_probe,
)
