"""Acceptance suite: one test per criterion, exact arithmetic throughout.

A PASS/FAIL line per criterion is printed in the terminal summary (see
conftest.py).
"""

import io
import json
import subprocess
import sys
import time
from importlib import resources

import numpy as np
import pytest
from oracles import brute_dimension_subgroups

from adnil import Envelope
from adnil.catalog import builtin
from adnil.cli import run
from adnil.divided import bracket, linearized_value_spans
from adnil.divpow import (
    OMEGA_SUITE_CASES,
    component_family,
    divided_ad,
    jacobson_identity_holds,
    jacobson_sides,
    kostrikin_descent,
    linearized_kostrikin,
    omega_suite,
    sandwich_check,
)
from adnil.idlin import linearization_selfcheck
from adnil.jordanlab import (
    azd_check,
    azd_powers,
    azd_pushforward,
    fgg_quotient,
    ja_construct,
    ja_data,
    sandwich_from_azd,
    sym_bound_check,
    verify_quadratic_jordan,
)
from adnil.liecore import ad_nilpotency, lower_central_series, validate
from adnil.sources import data_names, load_group, load_jordan, load_lie, parse_envelope_element
from adnil.zassenhaus import augmentation_filtration, build_Lp, check_filtration, verify_Lp

DATA = resources.files("adnil").joinpath("data")


def criterion(n, text):
    return pytest.mark.criterion(n, text)


def spread(E, v):
    out = E.zero()
    for i in range(1, E.budget + 1):
        out = out + E.tensor(v, [i])
    return out


@criterion(1, "product rule, automorphism, operator rule and composition of U_k on >= 100 random families, < 10 s")
def test_c01_omega_identities():
    for name, p, k in OMEGA_SUITE_CASES:
        assert builtin(name, p).dim <= 16 and k <= 6
    t = time.perf_counter()
    r = omega_suite(trials=102, seed=0)
    elapsed = time.perf_counter() - t
    assert r.ok, r.failure
    assert r.trials >= 100
    # the p = 2 collapse U_1U_1 = 2U_2 = 0 was exercised with U_2 != 0
    assert r.nonzero_u2.get(2, 0) > 0
    assert elapsed < 10, elapsed


KOSTRIKIN = [
    ("filiform5", 5, "e1"),
    ("free2c4", 5, "x1"),
    ("free2c4", 7, "x1+x2"),
    ("filiform6", 7, "e1"),
    ("n5", 7, "e12+e23+e34+e45"),
    ("filiform6", 7, "e1+e2"),
]


@criterion(2, "Kostrikin descent on >= 5 algebras with 4 <= n < p, < 5 s")
def test_c02_kostrikin_descent():
    t = time.perf_counter()
    for name, p, spec in KOSTRIKIN:
        L = builtin(name, p)
        a = L.element(spec)
        n = ad_nilpotency(L, a)
        assert 4 <= n < p, (name, n)
        rows = kostrikin_descent(L, a, n)
        assert all(r.ad_index is not None and r.ad_index <= n - 1 for r in rows), name
    assert len(KOSTRIKIN) >= 5
    assert time.perf_counter() - t < 5


LINEARIZED = [
    ("heisenberg", 5, 3, "x", 2),
    ("free3c2", 3, 3, "x1", 2),
    ("n4", 2, 3, "e12", 2),
    ("filiform5", 5, 3, "e1", 3),
    ("free2c3", 3, 4, "x1", 3),
    ("filiform5", 5, 4, "e1", 4),
    ("free2c4", 5, 5, "x1", 4),
    ("filiform6", 7, 5, "e1", 5),
]


@criterion(3, "linearized Kostrikin parts 1 and 2 on verified instances")
def test_c03_linearized_kostrikin():
    m_counts = {}
    for name, p, k, spec, m in LINEARIZED:
        L = builtin(name, p)
        E = Envelope(L, k)
        a = spread(E, L.element(spec))
        omega = component_family(a)
        assert omega.U_array(m - 1).any(), name  # not vacuous
        r = linearized_kostrikin(omega, m, a=a, env=E)  # hypotheses are checked inside
        assert r.part1, (name, m, r.witness)
        if m >= 4:
            assert r.part2 is True, (name, m, r.witness)
        m_counts[m] = m_counts.get(m, 0) + 1
    assert m_counts[2] >= 3
    assert sum(c for m, c in m_counts.items() if m >= 4) >= 1


@criterion(4, "FGG quotient: sl2/F7 gives a 1-dim Jordan algebra; Heisenberg gives 0")
def test_c04_fgg():
    S = builtin("sl2", 7)
    r = fgg_quotient(S, S.element("e"))
    assert r.jordan.dim == 1 and r.K.dim == 2
    assert r.report.ok and r.report.complete
    f = np.array([1])
    assert r.jordan.product(f, f).any()
    H = builtin("heisenberg", 5)
    r = fgg_quotient(H, H.element("x"))
    assert r.jordan.dim == 0 and r.report.ok


@criterion(5, "M1-M6 with linearizations on M2(F_p)+, H(M2(F5)), J(q,1); corruption caught, < 60 s")
def test_c05_quadratic_axioms():
    t = time.perf_counter()
    models = [load_jordan("@m2", p) for p in (2, 3, 5)] + [load_jordan("@herm2", 5), load_jordan("@jq3", 3)]
    assert [J.p for J in models] == [2, 3, 5, 5, 3]
    assert models[-1].dim == 3
    for J in models:
        r = verify_quadratic_jordan(J)
        assert r.ok, [str(f) for f in r.failures]
    bad = verify_quadratic_jordan(load_jordan(str(DATA / "m2_corrupt.jord")))
    assert not bad.ok and bad.failures[0].witness is not None
    assert not verify_quadratic_jordan(models[2].corrupted()).ok
    assert time.perf_counter() - t < 60


@criterion(6, "J_a on a 6-dim graded nilpotent algebra is quadratic Jordan; azd gives a sandwich")
def test_c06_ja_instance():
    L = builtin("n4", 5)
    assert L.dim == 6 and L.grading is not None and validate(L).ok
    E = Envelope(L, 5)
    a = parse_envelope_element(E, "e12@1 + e34@2")
    assert len(a.masks) == 2
    assert divided_ad(a, 2).arr.any() and not divided_ad(a, 3).arr.any()
    data = ja_data(a)
    J, report = ja_construct(data)
    assert J.dim > 0
    assert report.ok and report.jordan is not None and report.jordan.ok
    s = sandwich_from_azd(data, parse_envelope_element(E, "e23@3"))
    assert not s.element.is_zero()
    assert s.sandwich and sandwich_check(E, s.element)


@criterion(7, "x^3 = 0 gives azd x^4, x^5; a homotope azd pushes forward to an azd")
def test_c07_azd():
    J = load_jordan(str(DATA / "nil3.jord"))
    for i in range(J.dim):
        x = np.eye(J.dim, dtype=np.int64)[i]
        r = azd_powers(J, x, 3)
        powers = {k: ok for k, _, ok in r.rows}
        assert powers[4] and powers[5]
    U = load_jordan("@upper4")
    a, b = U.names.index("e12"), U.names.index("e34")
    av = np.zeros(U.dim, dtype=np.int64)
    av[[a, b]] = 1
    c = azd_pushforward(U, av, np.eye(U.dim, dtype=np.int64)[U.names.index("e23")])
    assert c.any() and azd_check(U, c)


@criterion(8, "Sym_3 vanishes on every 2-dim quadratic Jordan fixture over F2")
def test_c08_sym_bound():
    names = [n for n in data_names(".jord") if n.startswith("sym2_")]
    assert len(names) >= 3
    for name in names:
        J = load_jordan("@" + name)
        assert J.dim == 2 and J.p == 2 and verify_quadratic_jordan(J).ok
        n, holds, witness, _ = sym_bound_check(J)
        assert n == 3 and holds, (name, witness)


@criterion(9, "Jacobson symmetrization identity for p = 2, 3, 5, < 2 s")
def test_c09_jacobson():
    t = time.perf_counter()
    for p in (2, 3, 5):
        assert jacobson_identity_holds(p)
    lhs, rhs = jacobson_sides(5)
    assert len(lhs) == 120 and len(rhs) == 120
    assert time.perf_counter() - t < 2


GROUPS = [("c2", 2), ("c4", 2), ("q8", 2), ("d4", 2), ("c3", 3), ("heis27", 3)]


@criterion(10, "Zassenhaus filtrations, L_p(G), and D4 against brute force, < 30 s")
def test_c10_zassenhaus():
    t = time.perf_counter()
    for name, p in GROUPS:
        G, _ = load_group("@" + name, p)
        F = augmentation_filtration(G, p)
        assert F.reaches_identity, name
        r = check_filtration(F)
        assert r.commutators and r.elementary_abelian and r.subgroups and r.normal, (name, r.witnesses)
        Lp = build_Lp(G, p, F)
        lr = verify_Lp(Lp)
        assert lr.validation.ok and lr.nilpotent_homogeneous, (name, lr.witness)
    G, _ = load_group("@d4", 2)
    F = augmentation_filtration(G, 2)
    want = brute_dimension_subgroups([G.elements[i] for i in G.gens], 2)
    got = [{G.elements[i] for i in F.term(k)} for k in range(1, len(want) + 1)]
    assert got == want
    brute_grades = [(len(want[i]) // len(want[i + 1])).bit_length() - 1 for i in range(len(want) - 1)]
    assert build_Lp(G, 2, F).grades == brute_grades == [2, 1]
    assert time.perf_counter() - t < 30


@criterion(11, "linearizations match direct expansion; value spans of w and its linearization agree")
def test_c11_linearization():
    ok, witness, trials = linearization_selfcheck(trials=50, seed=0)
    assert ok, witness
    assert trials >= 50
    L = load_lie(str(DATA / "aff2_f2.lie"))
    E = Envelope(L, 3)
    full, lin = linearized_value_spans(bracket("y", "x", "x"), E)
    assert full == lin
    assert full.dim > 0


def _cli(*argv):
    out = io.StringIO()
    return run(list(argv), out=out), out.getvalue()


CLI_PASSING = [
    ("divided", "--omega-suite", "--trials", "14"),
    ("kostrikin", "@filiform5", "--element", "e1"),
    ("kostrikin", "@filiform5", "--element", "e1", "--linearized", "--m", "4", "--budget", "4"),
    ("jordan", "fgg", str(DATA / "sl2_f7.lie"), "--s", "e"),
    ("jordan", "fgg", "@heisenberg", "--s", "x"),
    ("jordan", "verify", "@jq3"),
    ("jordan", "verify", "@herm2"),
    ("jordan", "ja", "@n4", "-p", "5", "--budget", "5", "--a", "e12@1+e34@2", "--b", "e23@3"),
    ("jordan", "azd", str(DATA / "nil3.jord"), "--n", "3"),
    ("jordan", "pushforward", "@upper4", "--a", "e12+e34", "--b", "e23"),
    ("jordan", "sym", "@sym2_f4"),
    ("identity", "jacobson", "-p", "5"),
    ("zassenhaus", str(DATA / "d4.grp"), "-p", "2"),
    ("zassenhaus", "@heis27", "-p", "3"),
    ("identity", "linearization", "--trials", "50"),
    ("divided", str(DATA / "aff2_f2.lie"), "--expr", "[y,x,x]", "--budget", "3"),
]


def _subprocess(*argv):
    return subprocess.run([sys.executable, "-m", "adnil", *argv], capture_output=True, text=True)


@criterion(12, "CLI reaches every check; structured output is stable; exit codes honored")
def test_c12_cli():
    for argv in CLI_PASSING:
        code, text = _cli(*argv, "--structured")
        doc = json.loads(text)
        assert code == 0 and doc["status"] == "pass", (argv, doc)
    for argv in [("zassenhaus", str(DATA / "d4.grp"), "-p", "2"), ("jordan", "verify", "@m2", "-p", "3")]:
        a, b = _subprocess(*argv, "--structured"), _subprocess(*argv, "--structured")
        assert a.stdout == b.stdout and a.returncode == b.returncode == 0
    bad = _subprocess("validate", str(DATA / "bad_jacobi.lie"), "--structured")
    assert bad.returncode == 1 and json.loads(bad.stdout)["witnesses"]
    bad = _subprocess("validate", str(DATA / "m2_corrupt.jord"), "--structured")
    assert bad.returncode == 1 and json.loads(bad.stdout)["status"] == "fail"
    assert _subprocess("validate", "no_such_file.lie").returncode == 2
    assert lower_central_series(load_lie(str(DATA / "heisenberg.lie"))).dims == [3, 1, 0]
