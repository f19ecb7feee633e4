import itertools

import numpy as np
import pytest

from adnil import ContractError, Envelope, PreconditionError, StructuralError
from adnil.catalog import builtin
from adnil.divpow import (
    OmegaFamily,
    U,
    automorphism_sum,
    component_family,
    divided_ad,
    envelope_automorphism,
    jacobson_identity_holds,
    jacobson_sides,
    kostrikin_descent,
    linearized_kostrikin,
    omega_identity_report,
    omega_suite,
    random_omega,
    sandwich_check,
    sandwich_from_U2,
    sandwich_ppower,
    two_decomposition_congruence,
    validate_omega,
)
from adnil.exactlin import mat_power, matmul
from adnil.liecore import ad_nilpotency

X, Y, Z = np.eye(3, dtype=np.int64)


def test_validate_omega_examples(heis):
    from adnil import LieAlgebra

    A = Envelope(LieAlgebra.abelian(2, 5), 2)
    e = np.eye(2, dtype=np.int64)
    assert validate_omega(OmegaFamily.from_elements(A, [A.tensor(e[0], [1]), A.tensor(e[1], [2])])).ok
    E = Envelope(heis, 2)
    assert validate_omega(OmegaFamily.from_elements(E, [E.tensor(X, [1]), E.tensor(Y, [1])])).ok
    r = validate_omega(OmegaFamily.from_elements(E, [E.tensor(X, [1]), E.tensor(Y, [2])]))
    assert not r.ok and r.u2_violations


def test_U_basics():
    L = builtin("n4", 5)
    E = Envelope(L, 3)
    a = E.tensor(L.element("e12"), [1]) + E.tensor(L.element("e12"), [2]) + E.tensor(L.element("e12"), [3])
    om = component_family(a)
    assert U(om, 0) == U(om, 0).identity(E.dim, 5)
    assert (U(om, 1) @ U(om, 1)) == U(om, 2) * 2
    single = component_family(E.tensor(L.element("e12"), [1]))
    assert U(single, 2).is_zero()


def test_U_refuses_invalid_family(heis):
    E = Envelope(heis, 2)
    with pytest.raises(ContractError):
        U(OmegaFamily.from_elements(E, [E.tensor(X, [1]), E.tensor(Y, [2])]), 1)


def test_collapse_at_p2():
    # U_1 U_1 = 2 U_2 = 0 in characteristic 2 while U_2 itself is nonzero
    L = builtin("n4", 2)
    E = Envelope(L, 3)
    v = L.element("e12 + e23")
    om = component_family(E.tensor(v, [1]) + E.tensor(v, [2]))
    assert validate_omega(om).ok
    assert om.U_array(2).any()
    assert not matmul(om.U_array(1), om.U_array(1), 2).any()


def test_automorphism():
    L = builtin("filiform5", 5)
    E = Envelope(L, 2)
    assert envelope_automorphism(E.zero()) == envelope_automorphism(E.zero()).identity(E.dim, 5)
    x = E.tensor(L.element("e1"), [1])
    A = envelope_automorphism(x)
    assert A == A.identity(E.dim, 5) + E.ad(x)
    a = E.tensor(L.element("e1"), [1]) + E.tensor(L.element("e1"), [2])
    A = envelope_automorphism(a).arr
    rng = np.random.default_rng(0)
    for _ in range(5):
        u, v = (E.from_flat(rng.integers(0, 5, E.dim)) for _ in range(2))
        lhs = E.from_flat(E.bracket(u, v).flat() @ A % 5)
        rhs = E.bracket(E.from_flat(u.flat() @ A % 5), E.from_flat(v.flat() @ A % 5))
        assert lhs == rhs


def test_automorphism_rejects_noncommuting(heis):
    E = Envelope(heis, 2)
    with pytest.raises(PreconditionError):
        envelope_automorphism(E.tensor(X, [1]) + E.tensor(Y, [2]))


@pytest.mark.parametrize("seed", range(6))
def test_identities_on_random_families(seed):
    rng = np.random.default_rng(seed)
    for name, p, k in [("n4", 2, 3), ("filiform5", 3, 3), ("free2c3", 5, 3)]:
        om = random_omega(Envelope(builtin(name, p), k), 4, rng)
        assert validate_omega(om).ok
        assert omega_identity_report(om, seed=seed).ok


def test_omega_suite_small():
    r = omega_suite(trials=14, seed=3)
    assert r.ok, r.failure


def test_automorphism_sum_is_U_sum():
    L = builtin("n4", 3)
    E = Envelope(L, 2)
    om = component_family(E.tensor(L.element("e12"), [1]) + E.tensor(L.element("e12"), [2]))
    total = (np.eye(E.dim, dtype=np.int64) + om.U_array(1) + om.U_array(2)) % 3
    assert (automorphism_sum(om).arr == total).all()


def kostrikin_oracle(L, a, n):
    """ad(b ad(a)^(n-1))^(n-1) == 0 for all basis b, with plain python matrices."""
    p = L.p
    A = L.ad_array(a).tolist()

    def mul(M, N):
        return [[sum(M[i][k] * N[k][j] for k in range(len(N))) % p for j in range(len(N[0]))] for i in range(len(M))]

    P = [[int(i == j) for j in range(L.dim)] for i in range(L.dim)]
    for _ in range(n - 1):
        P = mul(P, A)
    out = []
    for i in range(L.dim):
        C = L.ad_array(np.array(P[i])).tolist()
        Q = [[int(r == c) for c in range(L.dim)] for r in range(L.dim)]
        for _ in range(n - 1):
            Q = mul(Q, C)
        out.append(all(v == 0 for row in Q for v in row))
    return out


@pytest.mark.parametrize(
    "name,p,spec",
    [
        ("n4", 7, "e12+e23+e34"),
        ("filiform5", 5, "e1"),
        ("free2c4", 5, "x1"),
        ("filiform6", 7, "e1+e2"),
        ("n5", 7, "e12+e23+e34+e45"),
    ],
)
def test_kostrikin_descent(name, p, spec):
    L = builtin(name, p)
    a = L.element(spec)
    n = max(4, ad_nilpotency(L, a))
    rows = kostrikin_descent(L, a, n)
    assert all(r.ok for r in rows)
    assert kostrikin_oracle(L, a, n) == [True] * L.dim


def test_kostrikin_zero_and_preconditions():
    L = builtin("filiform5", 5)
    rows = kostrikin_descent(L, L.zero(), 4)
    assert all(r.ad_index == 1 and not r.value.any() for r in rows)
    with pytest.raises(PreconditionError):
        kostrikin_descent(L, L.element("e1"), 5)  # n must be < p
    with pytest.raises(PreconditionError):
        kostrikin_descent(L, L.element("e1"), 3)  # n must be >= 4
    F6 = builtin("filiform6", 7)
    with pytest.raises(PreconditionError):
        kostrikin_descent(F6, F6.element("e1"), 4)  # ad(e1)^4 != 0 there


def spread(E, v):
    out = E.zero()
    for i in range(1, E.budget + 1):
        out = out + E.tensor(v, [i])
    return out


@pytest.mark.parametrize(
    "name,p,k,spec,m",
    [
        ("heisenberg", 5, 3, "x", 2),
        ("free3c2", 3, 3, "x1", 2),
        ("n4", 2, 3, "e12", 2),
        ("filiform5", 5, 3, "e1", 3),
        ("filiform5", 5, 4, "e1", 4),
    ],
)
def test_linearized_kostrikin(name, p, k, spec, m):
    L = builtin(name, p)
    E = Envelope(L, k)
    a = spread(E, L.element(spec))
    r = linearized_kostrikin(component_family(a), m, a=a, env=E)
    assert r.part1
    if m >= 4:
        assert r.part2 is True
    else:
        assert r.part2 is None


def test_linearized_kostrikin_vacuous():
    E = Envelope(builtin("heisenberg", 5), 2)
    empty = OmegaFamily.from_elements(E, [])
    assert linearized_kostrikin(empty, 2).ok


def test_sandwich_checks(heis):
    E = Envelope(heis, 2)
    assert sandwich_check(E, E.zero())
    assert sandwich_check(heis, Z)
    H2 = builtin("heisenberg", 2)
    # ad(x)^2 = 0 and ad(x) ad(b) ad(x) = 0: [u,x] is central
    D = H2.ad_array(X)
    assert not matmul(D, D, 2).any()
    assert all(not matmul(matmul(D, H2.ad_array(b), 2), D, 2).any() for b in np.eye(3, dtype=np.int64))
    assert sandwich_check(H2, X)
    S = builtin("sl2", 7)
    assert not sandwich_check(S, S.element("e"))


def test_sandwich_from_U2(heis):
    E = Envelope(heis, 2)
    r = sandwich_from_U2([E.tensor(Z, [1])], E)
    assert r.u2_zero and r.sandwich
    r = sandwich_from_U2([E.tensor(X, [1]), E.tensor(Y, [1])], E)
    assert r.u2_zero and r.sandwich
    S = builtin("sl2", 5)
    ES = Envelope(S, 3)
    with pytest.raises(PreconditionError):
        sandwich_from_U2([ES.tensor(S.element("e"), [1]), ES.tensor(S.element("e"), [2])], ES)


def test_two_decompositions():
    L = builtin("n4", 5)
    om = [L.element("e12"), L.element("e13"), L.element("e23")]
    same = two_decomposition_congruence(om, [[0], [1], [2]], [[0], [1], [2]], algebra=L)
    assert same.holds and same.equal_on_nose
    r = two_decomposition_congruence(om, [[0, 1], [2]], [[1, 2], [0]], algebra=L)
    # the difference is exactly ad([e12, e23]) = ad(e13)
    assert r.holds and not r.equal_on_nose and r.coefficients == {(0, 2): 1}
    with pytest.raises(StructuralError):
        two_decomposition_congruence(om, [[0, 1]], [[0], [1], [2]], algebra=L)


def free_assoc_commutator(p, first, rest):
    """[a, b1, ..., bk] = sum over S of (-1)^|S| (b_S reversed) a (b_rest), as words."""
    out = {}
    k = len(rest)
    for r in range(k + 1):
        for S in itertools.combinations(range(k), r):
            left = tuple(rest[i] for i in reversed(S))
            right = tuple(rest[i] for i in range(k) if i not in S)
            w = left + (first,) + right
            out[w] = (out.get(w, 0) + (-1) ** r) % p
    return {w: c for w, c in out.items() if c}


@pytest.mark.parametrize("p", [2, 3, 5])
def test_jacobson_against_expansion(p):
    lhs, rhs = jacobson_sides(p)
    assert lhs == {s: 1 for s in itertools.permutations(range(1, p + 1))}
    want = {}
    for s in itertools.permutations(range(1, p)):
        for w, c in free_assoc_commutator(p, p, list(s)).items():
            want[w] = (want.get(w, 0) + c) % p
    want = {w: c for w, c in want.items() if c}
    assert rhs == want
    assert jacobson_identity_holds(p)


def test_jacobson_p2_by_hand():
    lhs, rhs = jacobson_sides(2)
    # x1x2 + x2x1 and [x2, x1] = x2x1 - x1x2 agree mod 2
    assert lhs == {(1, 2): 1, (2, 1): 1} == rhs


def test_jacobson_term_count():
    lhs, rhs = jacobson_sides(5)
    assert len(lhs) == 120 and len(rhs) == 120


def test_sandwich_ppower(heis):
    E = Envelope(heis, 2)
    a = E.tensor(X, [1])
    r = sandwich_ppower(a, E.tensor(Y, [2]))
    assert r.ok
    M = mat_power(E.ad_array(E.bracket(a, E.tensor(Y, [2]))), 5, 5)
    assert not M.any()
    c = E.tensor(Z, [1])
    assert sandwich_ppower(c, E.tensor(X, [2])).ok


def test_divided_ad_matches_U():
    L = builtin("filiform5", 5)
    E = Envelope(L, 3)
    a = spread(E, L.element("e1"))
    om = component_family(a)
    for k in range(4):
        assert (divided_ad(a, k).arr == om.U_array(k)).all()
