import numpy as np
import pytest

from adnil import Envelope, GrassmannIndex, LieAlgebra, StructuralError
from adnil.catalog import builtin
from adnil.grassenv import e_product, envelope_bracket, standard_decomposition
from adnil.liecore import validate

X, Y, Z = np.eye(3, dtype=np.int64)


def test_index_products():
    assert e_product(GrassmannIndex(0b1), GrassmannIndex(0b10)) == GrassmannIndex(0b11)
    assert e_product(GrassmannIndex(0b1), GrassmannIndex(0b1)) is None
    assert e_product(GrassmannIndex.of([1, 3]), GrassmannIndex.of([2])) == GrassmannIndex.of([1, 2, 3])


def test_envelope_brackets(heis):
    E = Envelope(heis, 3)
    assert envelope_bracket(E.tensor(X, [1]), E.tensor(Y, [2])) == E.tensor(Z, [1, 2])
    assert envelope_bracket(E.tensor(X, [1]), E.tensor(Y, [1])).is_zero()
    a = E.tensor(X, [1]) + E.tensor(2 * Y, [2, 3])
    assert envelope_bracket(a, a).is_zero()


def test_standard_decomposition(heis):
    E = Envelope(heis, 3)
    parts = standard_decomposition(E.tensor(X, [1]) + E.tensor(Y, [1, 2]))
    assert [(pi.mask, v.tolist()) for pi, v in parts] == [(0b1, [1, 0, 0]), (0b11, [0, 1, 0])]
    assert standard_decomposition(E.zero()) == []
    E2 = Envelope(builtin("heisenberg", 2), 2)
    assert standard_decomposition(E2.tensor(X, [1]) + E2.tensor(X, [1])) == []


def test_ad_lift_matches_brackets(rng):
    L = builtin("n4", 3)
    E = Envelope(L, 3)
    for _ in range(10):
        a = E.from_flat(rng.integers(0, 3, E.dim))
        b = E.from_flat(rng.integers(0, 3, E.dim))
        via_matrix = (b.flat() @ E.ad_array(a)) % 3
        assert (via_matrix == E.bracket(b, a).flat()).all()


@pytest.mark.parametrize("name,p,k", [("heisenberg", 5, 3), ("sl2", 3, 2), ("filiform5", 2, 3)])
def test_envelope_is_lie(name, p, k):
    # L ⊗ E+ is again a Lie algebra (E commutative, e_i^2 = 0)
    assert validate(Envelope(builtin(name, p), k).lie_algebra()).ok


def test_budget_limits(heis):
    with pytest.raises(StructuralError):
        Envelope(heis, 0)
    E = Envelope(heis, 2)
    with pytest.raises(StructuralError):
        E.tensor(X, [3])


def test_dimensions():
    E = Envelope(LieAlgebra.abelian(2, 5), 3)
    assert E.dim == 2 * 7
    assert E.slice_subspace(1).dim == 2 * 4  # masks containing 1
