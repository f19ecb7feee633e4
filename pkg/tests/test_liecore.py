import numpy as np
import pytest

from adnil import LieAlgebra, StructuralError
from adnil.catalog import builtin
from adnil.exactlin import Subspace
from adnil.freelie import free_nilpotent, hall_basis, witt_count
from adnil.liecore import (
    ad_nilpotency,
    center,
    ideal_closure,
    lie_set,
    lower_central_series,
    validate,
)


def test_validate_examples(heis):
    assert validate(LieAlgebra.abelian(2, 5)).ok
    assert validate(heis).ok
    # one Jacobi instance by hand: [x,[y,z]] + [y,[z,x]] + [z,[x,y]] = 0 + 0 + [z,z]
    x, y, z = np.eye(3, dtype=np.int64)
    total = heis.bracket(x, heis.bracket(y, z)) + heis.bracket(y, heis.bracket(z, x)) + heis.bracket(z, heis.bracket(x, y))
    assert not (total % 5).any()


def test_anticommutativity_witness():
    T = np.zeros((3, 3, 3), dtype=np.int64)
    T[0, 1, 2] = 1
    T[1, 0, 2] = 1  # should be -1
    r = validate(LieAlgebra(5, T, names=["x", "y", "z"]))
    assert not r.ok
    kinds = {k for k, _ in r.violations}
    assert "anticommutativity" in kinds
    assert ("anticommutativity", (0, 1, 2)) in r.violations


def test_brackets(heis):
    assert heis.format(heis.bracket(heis.element("x"), heis.element("y"))) == "z"
    assert not heis.bracket(heis.element("z"), heis.element("x")).any()
    a = heis.element("2*x + y - z")
    assert not heis.bracket(a, a).any()


def test_ad_nilpotency():
    H = builtin("heisenberg", 5)
    assert ad_nilpotency(H, H.element("x")) == 2
    assert ad_nilpotency(H, H.zero()) == 1
    S = builtin("sl2", 7)
    assert ad_nilpotency(S, S.element("h"), bound=20) is None
    assert ad_nilpotency(S, S.element("e")) == 3


def test_lie_set(heis):
    words = lie_set(heis, [heis.element("x"), heis.element("y")], 3)
    assert [w for w, _ in words] == ["x", "y", "[x,y]"]
    assert heis.format(words[2][1]) == "z"
    assert [w for w, _ in lie_set(heis, [heis.element("x")], 5)] == ["x"]
    A = LieAlgebra.abelian(3, 5)
    assert len(lie_set(A, list(np.eye(3, dtype=np.int64)), 4)) == 3


def test_lower_central_series(heis):
    s = lower_central_series(heis)
    assert s.dims == [3, 1, 0] and s.nilpotency_degree == 3
    assert lower_central_series(LieAlgebra.abelian(4, 3)).dims == [4, 0]
    s = lower_central_series(builtin("sl2", 7))
    assert s.nilpotency_degree is None and s.dims[:2] == [3, 3]


def test_ideal_closure(heis):
    assert ideal_closure(heis, [heis.element("z")]).dim == 1
    I = ideal_closure(heis, [heis.element("x")])
    assert I == Subspace.from_vectors(np.array([[1, 0, 0], [0, 0, 1]]), 3, 5)
    assert ideal_closure(heis, [heis.zero()]).dim == 0
    assert center(heis).dim == 1


def test_hall_basis_counts():
    B = hall_basis(2, 3)
    degs = [m.degree for m in B.monomials]
    assert degs.count(1) == 2 and degs.count(2) == 1 and degs.count(3) == 2
    assert witt_count(2, 3) == 2
    assert len(hall_basis(1, 5).monomials) == 1
    # Witt's formula against a few known values
    assert [witt_count(2, d) for d in range(1, 7)] == [2, 1, 2, 3, 6, 9]
    assert [witt_count(3, d) for d in range(1, 5)] == [3, 3, 8, 18]


@pytest.mark.parametrize("m,c,p,dim", [(2, 3, 3, 5), (2, 4, 5, 8), (3, 2, 3, 6)])
def test_free_nilpotent(m, c, p, dim):
    L = free_nilpotent(m, c, p)
    assert L.dim == dim
    assert validate(L).ok
    assert lower_central_series(L).nilpotency_degree == c + 1


@pytest.mark.parametrize("name", ["heisenberg", "sl2", "n3", "n4", "n5", "filiform5", "filiform6", "free2c3", "free2c4", "free3c2"])
@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_builtins_are_lie(name, p):
    assert validate(builtin(name, p)).ok


def test_grading_violation_reported():
    T = np.zeros((3, 3, 3), dtype=np.int64)
    T[0, 1, 2], T[1, 0, 2] = 1, -1
    L = LieAlgebra(5, T, names=["x", "y", "z"], grading=[1, 1, 3])
    r = validate(L)
    assert not r.ok and any(k == "grading" for k, _ in r.violations)


def test_bad_table_shape():
    with pytest.raises(StructuralError):
        LieAlgebra(5, np.zeros((2, 3, 2), dtype=np.int64))
