import itertools

import numpy as np
import pytest

from adnil import BudgetError, LieAlgebra, StructuralError
from adnil.catalog import builtin
from adnil.exactlin import Subspace
from adnil.formats import parse_identity
from adnil.idlin import (
    LiePolynomial,
    PolynomialMap,
    check_multilinear_identity,
    full_linearization,
    full_value_span,
    left_normed,
    lie_polynomial_map,
    linearization_selfcheck,
    linearize_slot,
    random_polynomial_map,
    restrict_identity,
    value_span,
)


def truncated_mult(p, n):
    def mult(a, b):
        out = np.zeros(n, dtype=np.int64)
        for i in range(n):
            for j in range(n - i):
                out[i + j] += a[i] * b[j]
        return out % p

    return mult


def oracle_linearize(f, groups, p):
    """Inclusion-exclusion written out per slot, independent of the package."""

    def rec(slot, prefix):
        if slot == len(groups):
            return f(*prefix)
        vs = groups[slot]
        d = len(vs)
        total = 0
        for r in range(1, d + 1):
            for sub in itertools.combinations(range(d), r):
                s = sum(vs[i] for i in sub) % p
                total = total + (-1) ** (d - r) * rec(slot + 1, prefix + [s])
        return total % p

    return rec(0, [])


def test_square_polarizes():
    p, n = 5, 4
    mult = truncated_mult(p, n)
    f = PolynomialMap(lambda x: mult(x, x), (2,), p, (n,), n)
    D = linearize_slot(f, 0)
    rng = np.random.default_rng(1)
    for _ in range(10):
        u, v = rng.integers(0, p, n), rng.integers(0, p, n)
        assert (D(u, v) == (mult(u, v) + mult(v, u)) % p).all()


def test_linear_map_unchanged():
    f = PolynomialMap(lambda x: (3 * x) % 7, (1,), 7, (2,), 2)
    D = linearize_slot(f, 0)
    v = np.array([1, 4])
    assert (D(v) == f(v)).all()


def test_cube_in_truncated_polynomials():
    p, n = 5, 5
    mult = truncated_mult(p, n)
    f = PolynomialMap(lambda x: mult(mult(x, x), x), (3,), p, (n,), n)
    t = np.array([0, 1, 0, 0, 0])
    val = full_linearization(f)(t, t, t)
    assert val.tolist() == [0, 0, 0, 1, 0]  # 6 t^3 = t^3 over F_5
    assert (val == oracle_linearize(f, [[t, t, t]], p)).all()


def test_square_over_f3_diagonal():
    p, n = 3, 3
    mult = truncated_mult(p, n)
    f = PolynomialMap(lambda x: mult(x, x), (2,), p, (n,), n)
    F = full_linearization(f)
    v = np.array([1, 2, 0])
    assert (F(v, v) == 2 * f(v) % p).all()
    u = np.array([0, 1, 1])
    assert (F(u, v) == F(v, u)).all()


def test_mixed_degrees_three_slots():
    p, n = 7, 3
    mult = truncated_mult(p, n)
    f = PolynomialMap(lambda x1, x2: mult(x1, mult(x2, x2)), (1, 2), p, (n, n), n)
    F = full_linearization(f)
    assert F.arity == 3
    rng = np.random.default_rng(3)
    for _ in range(5):
        a, b, c = (rng.integers(0, p, n) for _ in range(3))
        assert (F(a, b, c) == oracle_linearize(f, [[a], [b, c]], p)).all()
        assert (F(a, b, b) == 2 * f(a, b) % p).all()


def test_bilinear_is_fixed():
    L = builtin("heisenberg", 5)
    f = lie_polynomial_map(L, parse_identity("[x1,x2]"))
    F = full_linearization(f.as_polynomial_map())
    rng = np.random.default_rng(0)
    for _ in range(5):
        a, b = rng.integers(0, 5, 3), rng.integers(0, 5, 3)
        assert (F(a, b) == f(a, b)).all()


@pytest.mark.parametrize("seed", range(20))
def test_random_maps_against_oracle(seed):
    rng = np.random.default_rng(seed)
    p = int(rng.choice([2, 3, 5, 7]))
    shapes = [(1,), (2,), (3,), (1, 1), (1, 2), (2, 1), (1, 1, 1)]
    degrees = shapes[int(rng.integers(len(shapes)))]
    dims = tuple(int(rng.integers(1, 4)) for _ in degrees)
    f = random_polynomial_map(rng, p, degrees, dims, 3)
    F = full_linearization(f)
    groups = [[rng.integers(0, p, dims[i]) for _ in range(d)] for i, d in enumerate(degrees)]
    flat = [v for g in groups for v in g]
    assert (F(*flat) == oracle_linearize(f, groups, p)).all()


def test_linearization_selfcheck():
    ok, witness, trials = linearization_selfcheck(trials=50, seed=7)
    assert ok, witness
    assert trials >= 50


def test_identity_checks(heis):
    assert check_multilinear_identity(LieAlgebra.abelian(3, 5), parse_identity("[x1,x2]")).holds
    assert check_multilinear_identity(heis, parse_identity("[[x1,x2],[x3,x4]]")).holds
    r = check_multilinear_identity(heis, parse_identity("[x1,x2]"))
    assert not r.holds and r.names == ("x", "y")
    assert heis.format(r.value) == "z"


def test_identity_budget(heis):
    with pytest.raises(BudgetError):
        check_multilinear_identity(heis, parse_identity("[x1,x2,x3,x4]"), budget=10)


def test_non_multilinear_rejected(heis):
    with pytest.raises(StructuralError):
        check_multilinear_identity(heis, parse_identity("[x1,x2,x2]"))


def term(*names):
    return left_normed(*names)


def test_restrict_identity_n3():
    f = LiePolynomial(((1, term("x0", "x1", "x2")), (3, term("x0", "x2", "x1"))))
    g = restrict_identity(f)
    assert g.terms == ((1, term("x0", "x2")),)


def test_restrict_identity_n4():
    perms = list(itertools.permutations([1, 2, 3]))
    terms = tuple((1 if s == (1, 2, 3) else k + 2, term("x0", *[f"x{i}" for i in s])) for k, s in enumerate(perms))
    g = restrict_identity(LiePolynomial(terms))
    # only s(1) = 1 survives: [x0,x1,x2,x3] and 3[x0,x1,x3,x2], with x1 dropped
    assert g.terms == ((1, term("x0", "x2", "x3")), (3, term("x0", "x3", "x2")))


def test_restrict_identity_degenerate():
    with pytest.raises(StructuralError):
        restrict_identity(LiePolynomial(((1, term("x0", "x1")),)))


def test_value_spans(heis):
    f = lie_polynomial_map(heis, parse_identity("[x1,x2]"))
    full = Subspace.full(3, 5)
    assert value_span(f, [full, full]) == Subspace.from_vectors(np.array([[0, 0, 1]]), 3, 5)
    assert value_span(f, [Subspace.zero(3, 5), full]).dim == 0
    X = Subspace.from_vectors(np.array([[1, 0, 0]]), 3, 5)
    assert value_span(f, [X, X]).dim == 0


def test_full_value_span_of_square():
    p, n = 2, 3
    mult = truncated_mult(p, n)
    f = PolynomialMap(lambda x: mult(x, x), (2,), p, (n,), n)
    # over F_2 the square is Frobenius-like: (a + bt + ct^2)^2 = a + b t^2
    assert full_value_span(f, [Subspace.full(n, p)]).dim == 2
    # its linearization 2xy vanishes
    assert value_span(full_linearization(f), [Subspace.full(n, p)] * 2).dim == 0
