"""The quadratic Jordan algebra J_a = L̃^m / K_a attached to an envelope element a.

x^2 = a sum ad(x_pi1) ad(x_pi2) + K_a and yQ(x) = y ad^[2](a) sum ad(x_pi1) ad(x_pi2) + K_a,
sums over 2-element sets of standard components (taken in sorted mask order)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ..divpow import OmegaFamily, component_family, components_commute, sandwich_witness
from ..errors import PreconditionError, StructuralError
from ..exactlin import Quotient, Subspace, kernel_basis, matmul
from ..grassenv import Envelope, EnvelopeElement
from ..liecore import lower_central_series
from .quadratic import FunctionQJA, JordanReport, verify_quadratic_jordan


@dataclass
class JaData:
    env: Envelope
    m: int
    ambient: Subspace  # L̃^m
    a: EnvelopeElement
    family: OmegaFamily  # {ad(a_pi)}
    D2: np.ndarray  # ad^[2](a)
    Kprime: Subspace
    K: Subspace
    quotient: Quotient

    @property
    def dim(self):
        return self.quotient.dim

    def element(self, v) -> EnvelopeElement:
        return v if isinstance(v, EnvelopeElement) else self.env.from_flat(v)

    def _pairs(self, u: EnvelopeElement, x: EnvelopeElement) -> EnvelopeElement:
        env = self.env
        comps = [env.element({mk: v}) for mk, v in x.items()]
        acc = env.zero()
        for c1, c2 in itertools.combinations(comps, 2):
            acc = acc + env.product(env.product(u, c1), c2)
        return acc

    def raw_square(self, x) -> EnvelopeElement:
        row = self.a.flat().reshape(1, -1)
        return self.env.from_flat(self.pair_rows(row, self.component_ads(x))[0])

    def raw_uq(self, y, x) -> EnvelopeElement:
        row = matmul(self.element(y).flat().reshape(1, -1), self.D2, self.env.p)
        return self.env.from_flat(self.pair_rows(row, self.component_ads(x))[0])

    def component_ads(self, x) -> dict:
        """mask -> ad of the base component, the data pair_rows needs."""
        x = self.element(x)
        return {mk: self.env.base.right_mult_array(v) for mk, v in x.items()}

    def _apply(self, Y: np.ndarray, mk: int, A: np.ndarray) -> np.ndarray:
        # Y @ kron(emult(mk), A) done blockwise
        env, p = self.env, self.env.p
        src, dst = np.nonzero(env.emult(mk))
        n = env.base.dim
        Yb = Y.reshape(Y.shape[0], -1, n)
        out = np.zeros_like(Yb)
        if len(src):
            moved = matmul(Yb[:, src, :].reshape(-1, n), A, p).reshape(Y.shape[0], len(src), n)
            out[:, dst, :] = moved
        return out.reshape(Y.shape)

    def pair_rows(self, Y: np.ndarray, ads: dict) -> np.ndarray:
        """Rows of Y times sum_{pi1<pi2} ad(x_pi1) ad(x_pi2), given the
        component data of x."""
        p = self.env.p
        out = np.zeros_like(Y)
        prefix = np.zeros_like(Y)
        for mk in ads:
            out = (out + self._apply(prefix, mk, ads[mk])) % p
            prefix = (prefix + self._apply(Y, mk, ads[mk])) % p
        return out

    def in_K(self, v) -> bool:
        v = v.flat() if isinstance(v, EnvelopeElement) else v
        return self.K.contains(v)


def ja_data(a: EnvelopeElement, m: int = 1) -> JaData:
    """Check the hypotheses (components of a commute, ad^[k](a) = 0 for k >= 3)
    and compute K'_a, K_a and the quotient."""
    env = a.env
    L = env.base
    series = lower_central_series(L).terms
    Lm = series[min(m, len(series)) - 1]
    V = env.tensor_subspace(Lm)
    if not V.contains(a.flat()):
        raise PreconditionError("a is not in L̃^m")
    bad = components_commute(a)
    if bad is not None:
        raise PreconditionError("components of a do not commute", witness=bad)
    fam = component_family(a)
    for k in range(3, len(fam) + 1):
        if fam.U_array(k).any():
            raise PreconditionError(f"ad^[{k}](a) != 0", witness=k)
    D2 = fam.U_array(2)
    p = env.p
    Kp = V & Subspace.from_vectors(kernel_basis(D2, p), env.dim, p)
    K = Subspace.zero(env.dim, p)
    for i in range(1, env.budget + 1):
        K = K + (env.slice_subspace(i, Lm) & Kp)
    return JaData(env, m, V, a, fam, D2, Kp, K, Quotient(V, K))


def ja_algebra(data: JaData) -> FunctionQJA:
    Q = data.quotient
    env = data.env

    def lift(c):
        return env.from_flat(Q.lift(c.reshape(1, -1))[0])

    def coords(e):
        return Q.coords(e.flat().reshape(1, -1))[0]

    def square(c):
        return coords(data.raw_square(lift(c)))

    def uq(cy, cx):
        return coords(data.raw_uq(lift(cy), lift(cx)))

    masks = tuple(env.flat_mask(int(np.nonzero(r)[0][0])) for r in Q.reps)
    names = tuple(str(env.from_flat(r)) for r in Q.reps)
    return FunctionQJA(env.p, Q.dim, square, uq, names, basis_masks=masks)


@dataclass
class JaReport:
    k_in_kprime: bool
    order_irrelevant: bool
    well_defined: bool
    jordan: JordanReport | None
    kprime_ideal: bool | None  # empirical; not asserted
    notes: list = field(default_factory=list)

    @property
    def ok(self):
        return self.k_in_kprime and self.order_irrelevant and self.well_defined and (
            self.jordan is None or self.jordan.ok
        )


def _ad_rows(env: Envelope, rows: np.ndarray) -> list:
    return [env.ad_array(r) for r in rows]


def _order_check(data: JaData) -> bool:
    """u ad(x1) ad(x2) = u ad(x2) ad(x1) mod K_a for u in Fa + L̃^m ad^[2](a).

    The difference is [u, [x1, x2]], so it suffices to test u over a basis of
    that span against a basis of [L̃^m, L̃^m]."""
    env, p = data.env, data.env.p
    V = data.ambient
    U = Subspace.from_vectors(np.vstack([data.a.flat(), matmul(V.basis, data.D2, p)]), env.dim, p)
    ads = _ad_rows(env, V.basis)
    W = Subspace.from_vectors(
        np.vstack([matmul(V.basis, A, p) for A in ads]) if ads else np.zeros((0, env.dim), dtype=np.int64),
        env.dim,
        p,
    )
    for w in W.basis:
        for r in matmul(U.basis, env.ad_array(w), p):
            if not data.K.contains(r):
                return False
    return True


def _all_in(S: Subspace, rows: np.ndarray) -> bool:
    return not rows.size or not np.any([S.reduce(r).any() for r in rows])


def _sum_ads(d1: dict, d2: dict, p: int) -> dict:
    out = dict(d1)
    for mk, A in d2.items():
        out[mk] = (out[mk] + A) % p if mk in out else A
    return out


def _well_defined_check(data: JaData, samples: int = 64, seed: int = 0) -> bool:
    """Shifting arguments by K_a does not change x^2 or yQ(x) modulo K_a.

    Every K_a basis vector against every J_a basis representative, plus
    random pairs."""
    env, p = data.env, data.env.p
    V, K = data.ambient, data.K
    reps = data.quotient.reps
    # rows whose images give x^2 and yQ(x) for y over the representatives
    Y = np.vstack([data.a.flat().reshape(1, -1), matmul(reps, data.D2, p)]) if len(reps) else data.a.flat().reshape(1, -1)
    KD = matmul(K.basis, data.D2, p)
    rep_ads = [data.component_ads(r) for r in reps]
    base = [data.pair_rows(Y, ads) for ads in rep_ads]
    for ads in rep_ads:
        if not _all_in(K, data.pair_rows(KD, ads)):
            return False
    for zv in K.basis:
        zads = data.component_ads(zv)
        for ads, b in zip(rep_ads, base):
            if not _all_in(K, (data.pair_rows(Y, _sum_ads(ads, zads, p)) - b) % p):
                return False
    if not V.dim or not K.dim:
        return True
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        x, y = (env.from_flat(rng.integers(0, p, V.dim) @ V.basis % p) for _ in range(2))
        z, z2 = (env.from_flat(rng.integers(0, p, K.dim) @ K.basis % p) for _ in range(2))
        if not data.in_K(data.raw_square(x + z) - data.raw_square(x)):
            return False
        if not data.in_K(data.raw_uq(y + z2, x + z) - data.raw_uq(y, x)):
            return False
    return True


def kprime_ideal_test(data: JaData) -> bool:
    """Is K'_a / K_a an ideal of J_a?  k^2, x∘k, kQ(x), xQ(k) in K'_a for
    k over a basis of K'_a and x over the J_a representatives."""
    env = data.env
    reps = [env.from_flat(r) for r in data.quotient.reps]
    for kv in data.Kprime.basis:
        k = env.from_flat(kv)
        if not data.Kprime.contains(data.raw_square(k).flat()):
            return False
        for x in reps:
            circ = data.raw_square(x + k) - data.raw_square(x) - data.raw_square(k)
            for v in (circ, data.raw_uq(k, x), data.raw_uq(x, k)):
                if not data.Kprime.contains(v.flat()):
                    return False
    return True


def ja_construct(data: JaData, verify: bool = True, samples: int = 64, budget=None):
    """(J_a, report).  The report covers K_a <= K'_a, order irrelevance of the
    two ad factors modulo K_a, well-definedness on K_a shifts, M1-M6 and the
    empirical ideal property of K'_a."""
    J = ja_algebra(data)
    rep = JaReport(
        data.K <= data.Kprime,
        _order_check(data),
        _well_defined_check(data, samples),
        verify_quadratic_jordan(J, budget=budget) if verify else None,
        kprime_ideal_test(data),
    )
    return J, rep


# ---------------------------------------------------------------- sandwiches


@dataclass
class AzdSandwich:
    element: EnvelopeElement  # b ad^[2](a)
    sandwich: bool
    u2_zero: bool
    witness: object = None


def is_azd_mod_K(data: JaData, b) -> bool:
    """Q(b + K_a) = 0 in J_a."""
    rows = matmul(data.ambient.basis, data.D2, data.env.p)
    return _all_in(data.K, data.pair_rows(rows, data.component_ads(b)))


def sandwich_from_azd(data: JaData, b) -> AzdSandwich:
    """For a nonzero azd b + K_a of J_a, b ad^[2](a) is a sandwich of L̃^m.

    Checked directly and through U_2({b_pi ad^[2](a)}) = 0 on L̃^m."""
    env, p = data.env, data.env.p
    b = data.element(b)
    if not data.ambient.contains(b.flat()):
        raise PreconditionError("b is not in L̃^m")
    if data.in_K(b):
        raise PreconditionError("b + K_a is zero")
    if not is_azd_mod_K(data, b):
        raise PreconditionError("b + K_a is not an absolute zero divisor of J_a")
    c = env.apply(b, data.D2)
    wit = sandwich_witness(env, c, data.ambient)
    parts = [env.apply(env.element({mk: v}), data.D2) for mk, v in b.items()]
    parts = [x for x in parts if not x.is_zero()]
    u2_zero = True
    if len(parts) >= 2:
        fam = OmegaFamily.from_elements(env, parts)
        if not fam.report.ok:
            u2_zero = False
            wit = wit or ("Ω invalid", fam.report)
        else:
            u2_zero = not matmul(data.ambient.basis, fam.U_array(2), p).any()
    return AzdSandwich(c, wit is None, u2_zero, wit)


# ---------------------------------------------------------------- operator identities


def divided_ad_chain_check(data: JaData, s_max: int = 3, samples: int = 12, seed: int = 0):
    """Part (1): y1 ad^[i1](a) ad(y2) ... ad^[is](a) = 0 when i1+...+is >= s+2.

    All basis y for s <= 2; for s = 3 the y2, y3 are sampled.  Returns the
    first failing (s, exponents, indices) or None."""
    env, p = data.env, data.env.p
    U = [data.family.U_array(k) for k in range(5)]
    B = data.ambient.basis
    ads = [env.ad_array(r) for r in B]
    rng = np.random.default_rng(seed)
    for s in range(1, s_max + 1):
        for exps in itertools.product(range(5), repeat=s):
            if sum(exps) < s + 2:
                continue
            if s <= 2:
                choices = itertools.product(range(len(B)), repeat=s - 1)
            else:
                choices = [tuple(int(c) for c in rng.integers(0, len(B), s - 1)) for _ in range(samples)]
            for idx in choices:
                rows = matmul(B, U[exps[0]], p) if len(B) else B
                for t, j in enumerate(idx):
                    rows = matmul(matmul(rows, ads[j], p), U[exps[t + 1]], p)
                if rows.any():
                    return (s, exps, idx)
    return None


def sandwich_image_product_check(env: Envelope, omega, ys=None):
    """ad(y1 U2) ad(y2 U2) = U2 ad(y1) ad(y2) U2 for Ω with U3 = U4 = 0.

    omega: commuting single-mask envelope elements.  Returns None or the
    failing pair; PreconditionError if a hypothesis fails."""
    p = env.p
    fam = OmegaFamily.from_elements(env, omega)
    if not fam.report.ok:
        raise PreconditionError("Ω is not square-zero and commuting", witness=fam.report)
    if fam.U_array(3).any() or fam.U_array(4).any():
        raise PreconditionError("ad^[3](Ω) or ad^[4](Ω) != 0")
    U2 = fam.U_array(2)
    ys = list(np.eye(env.dim, dtype=np.int64)) if ys is None else [y.flat() if isinstance(y, EnvelopeElement) else y for y in ys]
    img = [env.ad_array(matmul(y.reshape(1, -1), U2, p)[0]) for y in ys]
    adys = [env.ad_array(y) for y in ys]
    for i, j in itertools.product(range(len(ys)), repeat=2):
        lhs = matmul(img[i], img[j], p)
        rhs = matmul(matmul(matmul(U2, adys[i], p), adys[j], p), U2, p)
        if not np.array_equal(lhs, rhs):
            return (i, j)
    return None


def quadratic_exchange_check(env: Envelope, a_parts, x_parts):
    """[a ad^[2](x), a] + [x ad^[2](a), x] lies in L̃ ad(a)^2.

    Returns (holds, coefficients over the basis of L̃ ad(a)^2 or None)."""
    p = env.p
    fa = OmegaFamily.from_elements(env, a_parts)
    fx = OmegaFamily.from_elements(env, x_parts)
    for f, nm in ((fa, "a"), (fx, "x")):
        if not f.report.ok:
            raise PreconditionError(f"components of {nm} are not square-zero and commuting", witness=f.report)
    for k in range(3, len(fa) + 1):
        if fa.U_array(k).any():
            raise PreconditionError(f"ad^[{k}](a) != 0")
    a = sum(a_parts[1:], a_parts[0])
    x = sum(x_parts[1:], x_parts[0])
    lhs = env.product(env.apply(a, fx.U_array(2)), a) + env.product(env.apply(x, fa.U_array(2)), x)
    A = env.ad_array(a)
    img = Subspace.from_vectors(matmul(A, A, p), env.dim, p)
    if not img.contains(lhs.flat()):
        return False, None
    from ..exactlin import solve

    coeffs = solve(img.basis, lhs.flat(), p) if img.dim else np.zeros(0, dtype=np.int64)
    return True, coeffs
