import numpy as np
import pytest

from oracles import brute_dimension_subgroups

from adnil import BudgetError, ParseError, PreconditionError, StructuralError
from adnil.formats import parse_identity
from adnil.idlin import check_multilinear_identity
from adnil.sources import load_group
from adnil.zassenhaus import (
    augmentation_filtration,
    build_Lp,
    check_filtration,
    check_group,
    compose,
    enumerate_group,
    group_commutator_shadow,
    group_from_cycles,
    invert,
    parse_group_word,
    verify_Lp,
    with_fresh_variable,
)


def test_enumeration_examples():
    assert enumerate_group([(1, 0)]).order == 2
    assert group_from_cycles(4, {"r": "(1 2 3 4)", "s": "(1 3)"}).order == 8
    assert enumerate_group([], names=[]).order == 1
    with pytest.raises(BudgetError):
        enumerate_group([(1, 2, 3, 4, 5, 0), (1, 0, 2, 3, 4, 5)], cap=100)


def test_compose_convention():
    g, h = (1, 0, 2), (0, 2, 1)
    # g then h
    assert compose(g, h) == tuple(h[g[i]] for i in range(3))
    assert compose(g, invert(g)) == (0, 1, 2)


@pytest.mark.parametrize("name", ["c2", "c4", "d4", "q8", "c3", "heis27", "c6"])
def test_bundled_groups_are_groups(name):
    G, _ = load_group("@" + name)
    assert check_group(G).ok


def test_d4_against_brute_force():
    G, p = load_group("@d4")
    F = augmentation_filtration(G, p)
    want = brute_dimension_subgroups([G.elements[i] for i in G.gens], p)
    got = [{G.elements[i] for i in F.term(k)} for k in range(1, len(want) + 1)]
    assert got == want
    assert [len(s) for s in want] == [8, 2, 1]
    r2 = G.power(G.gens[0], 2)
    assert F.term(2) == {0, r2}


def test_c2_and_trivial():
    G, _ = load_group("@c2")
    F = augmentation_filtration(G, 2)
    assert F.orders[:2] == [2, 1]
    T = enumerate_group([], names=[])
    FT = augmentation_filtration(T, 2)
    assert FT.orders[0] == 1
    assert build_Lp(T, 2).grades == []


@pytest.mark.parametrize(
    "name,p,grades",
    [("c2", 2, [1]), ("c4", 2, [1, 1]), ("d4", 2, [2, 1]), ("q8", 2, [2, 1]), ("c3", 3, [1]), ("heis27", 3, [2, 1])],
)
def test_Lp_grades(name, p, grades):
    G, _ = load_group("@" + name)
    F = augmentation_filtration(G, p)
    assert F.reaches_identity and F.residually_p
    assert check_filtration(F).ok
    Lp = build_Lp(G, p, F)
    assert Lp.grades == grades
    assert verify_Lp(Lp).ok


def test_d4_bracket_is_r_squared_class():
    G, _ = load_group("@d4")
    Lp = build_Lp(G, 2)
    L = Lp.lie
    r, s = G.gens

    def vec(i, g):
        v = np.zeros(L.dim, dtype=np.int64)
        v[Lp.offset(i): Lp.offset(i) + Lp.grades[i - 1]] = Lp.dlog(i, g)
        return v

    c = L.bracket(vec(1, r), vec(1, s))
    assert c.any()
    assert (c == vec(2, G.commutator(r, s))).all()
    assert G.commutator(r, s) == G.power(r, 2)
    assert check_multilinear_identity(L, parse_identity("[[x1,x2],[x3,x4]]")).holds


def test_c4_abelian():
    G, _ = load_group("@c4")
    L = build_Lp(G, 2).lie
    assert not L.table.any()


def test_non_p_group_warns():
    G, _ = load_group("@c6")
    F = augmentation_filtration(G, 2)
    assert F.warnings and not F.reaches_identity
    assert F.orders[:2] == [6, 3]
    with pytest.raises(PreconditionError):
        build_Lp(G, 2, F)


def test_commutator_shadows():
    f = group_commutator_shadow(parse_group_word("[[x1,x2],x3]"))
    assert f.terms == ((1, (("x1", "x2"), "x3")),)
    f = group_commutator_shadow(parse_group_word("[x1,x2] [x3,x4]"))
    assert len(f.terms) == 2
    with pytest.raises(StructuralError):
        group_commutator_shadow(parse_group_word("[x1,x2]^p"))
    with pytest.raises(StructuralError):
        group_commutator_shadow(parse_group_word("[x1,x2] [x1,x2,x3]"))
    w = with_fresh_variable(parse_group_word("[x1,x2]"))
    assert len(w.factors) == 1
    with pytest.raises(ParseError):
        parse_group_word("")
