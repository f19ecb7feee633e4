"""Command-line front end.

Every verb builds a report dict; `--structured` prints it as sorted JSON,
otherwise a short text summary.  Exit status: 0 pass, 1 fail, 2 error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .errors import AdnilError
from .liecore import format_lincomb

EXIT = {"pass": 0, "fail": 1, "error": 2}


class Report:
    def __init__(self, command, inputs):
        self.data = {"command": command, "inputs": inputs, "status": "pass", "witnesses": []}
        self.lines = []

    def __setitem__(self, key, value):
        self.data[key] = value

    def say(self, line):
        self.lines.append(line)

    def fail(self, witness=None, line=None):
        self.data["status"] = "fail"
        if witness is not None:
            self.data["witnesses"].append(witness)
        if line:
            self.lines.append(line)

    def check(self, ok, label, witness=None):
        """Record one named check."""
        self.data.setdefault("checks", {})[label] = bool(ok)
        if ok:
            self.say(f"{label}: ok")
        else:
            self.fail(witness if witness is not None else {"check": label}, f"{label}: FAILED")


def jsonable(x):
    if isinstance(x, np.ndarray):
        return [int(v) for v in x.ravel()] if x.ndim <= 1 else [jsonable(r) for r in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    return str(x)


def _vec(v, names, p):
    return format_lincomb(np.asarray(v) % p, names, p)


def _lie(args):
    from .sources import load_lie

    return load_lie(args.source, args.p)


# ---------------------------------------------------------------- verbs


def cmd_validate(args, rep):
    from .sources import kind_of

    kind = kind_of(args.source)
    rep["kind"] = kind
    if kind == "lie":
        from .liecore import validate

        L = _lie(args)
        r = validate(L)
        rep["dims"] = [L.dim]
        rep["p"] = L.p
        for kind_, ijk in r.violations:
            rep.fail({"kind": kind_, "basis": [L.names[i] for i in ijk]})
        rep.say(f"Lie algebra over F_{L.p}, dim {L.dim}: " + ("valid" if r.ok else f"{len(r.violations)} violation(s)"))
        for kind_, ijk in r.violations:
            rep.say(f"  {kind_} at ({', '.join(L.names[i] for i in ijk)})")
    elif kind == "grp":
        from .sources import load_group
        from .zassenhaus import check_group, is_p_power

        G, p = load_group(args.source, args.p)
        r = check_group(G)
        rep["p"] = p
        rep["dims"] = [G.order]
        rep.check(r.ok, "group axioms", jsonable(r.witness))
        rep.say(f"order {G.order}" + (f", a {p}-group" if is_p_power(G.order, p) else f", not a {p}-group"))
    else:
        from .jordanlab import verify_quadratic_jordan
        from .sources import load_jordan

        J = load_jordan(args.source, args.p)
        r = verify_quadratic_jordan(J)
        rep["p"] = J.p
        rep["dims"] = [J.dim]
        rep["checked"] = r.checked
        for f in r.failures:
            rep.fail({"axiom": f.axiom, "method": f.method, "at": jsonable(f.witness), "value": jsonable(f.value)})
        rep.say(f"quadratic Jordan algebra over F_{J.p}, dim {J.dim}: " + ("axioms hold" if r.ok else "axiom failure"))
        for f in r.failures:
            rep.say(f"  {f}")


def cmd_lieset(args, rep):
    from .liecore import lie_set
    from .sources import parse_vector

    L = _lie(args)
    gens = [parse_vector(g, L.names, L.p) for g in args.gens.split(";")] if ";" in args.gens else [
        parse_vector(g, L.names, L.p) for g in args.gens.split(",")
    ]
    words = lie_set(L, gens, args.length)
    rep["elements"] = [{"word": w, "value": _vec(v, L.names, L.p)} for w, v in words]
    rep["dims"] = [len(words)]
    for w, v in words:
        rep.say(f"{w} = {_vec(v, L.names, L.p)}")


def cmd_series(args, rep):
    from .liecore import lower_central_series

    L = _lie(args)
    s = lower_central_series(L)
    rep["series"] = s.dims
    rep["nilpotency_degree"] = s.nilpotency_degree
    rep.say("lower central series dims: " + " ".join(map(str, s.dims)))
    rep.say(f"nilpotent of degree {s.nilpotency_degree}" if s.nilpotency_degree else "not nilpotent")


def _env_element(env, text, base_names, p):
    from .sources import parse_envelope_element, parse_vector

    if "@" in text:
        return parse_envelope_element(env, text)
    v = parse_vector(text, base_names, p)
    out = env.zero()
    for i in range(1, env.budget + 1):
        out = out + env.tensor(v, [i])
    return out


def cmd_kostrikin(args, rep):
    from .divpow import component_family, kostrikin_descent, linearized_kostrikin
    from .grassenv import Envelope
    from .liecore import ad_nilpotency
    from .sources import parse_vector

    L = _lie(args)
    if args.linearized:
        if args.m is None:
            raise AdnilError("--linearized needs --m")
        env = Envelope(L, args.budget or 3)
        a = _env_element(env, args.element, L.names, L.p)
        r = linearized_kostrikin(component_family(a), args.m, a=a, env=env)
        rep["m"] = args.m
        rep["dims"] = [env.dim]
        rep.check(r.part1, "[xU_{m-1}, yU_{m-1}] = 0", jsonable(r.witness))
        if r.part2 is not None:
            rep.check(r.part2, "U_k(ad(a_pi U_{m-1})) = 0 for k >= m-1", jsonable(r.witness))
        for n in r.notes:
            rep.say(f"  note: {n}")
        return
    a = parse_vector(args.element, L.names, L.p)
    n = args.n if args.n is not None else ad_nilpotency(L, a)
    rows = kostrikin_descent(L, a, n)
    rep["n"] = n
    rep["ad_indices"] = [r.ad_index for r in rows]
    rep.say(f"ad(a)^{n} = 0")
    for r in rows:
        rep.say(f"  {r.name} ad(a)^{n - 1} = {_vec(r.value, L.names, L.p)}, ad-index {r.ad_index}")
        if not r.ok:
            rep.fail({"basis": r.name, "ad_index": r.ad_index}, f"  index exceeds {n - 1}")


def _divided_word(args):
    from .divided import DivAd, Var, bracket
    from .formats import parse_identity

    f = parse_identity(args.expr)
    if len(f.terms) != 1 or f.terms[0][0] != 1:
        raise AdnilError("divided words take a single bracket monomial")

    def build(t):
        if isinstance(t, tuple):
            return bracket(build(t[0]), build(t[1]))
        return Var(t)

    w = build(f.terms[0][1])
    if args.divad:
        x0, x1, k = args.divad.split(",")
        w = DivAd(Var(x0.strip()), x1.strip(), int(k), w)
    return w


def cmd_divided(args, rep):
    if args.omega_suite:
        from .divpow import omega_suite

        r = omega_suite(trials=args.trials, seed=args.seed)
        rep["trials"] = r.trials
        rep["nonzero_u2"] = r.nonzero_u2
        rep.say(f"{r.passed}/{r.trials} families satisfy the four identities")
        if not r.ok:
            case, t, ir = r.failure
            rep.fail({"case": list(case), "trial": t, "report": str(ir)})
        return
    if not args.expr:
        raise AdnilError("divided needs --expr or --omega-suite")
    from .divided import linearized_value_spans, regularity_probe
    from .grassenv import Envelope

    L = _lie(args)
    w = _divided_word(args)
    rep["word"] = str(w)
    if args.imax:
        rows = regularity_probe(w, L, args.imax)
        rep["regularity"] = [{"i": r.i, "dim": r.dim, "nonzero": r.nonzero} for r in rows]
        for r in rows:
            rep.say(f"  L^{r.i} (dim {r.dim}): " + ("nonzero" if r.nonzero else "zero"))
        return
    env = Envelope(L, args.budget or 3)
    s_full, s_lin = linearized_value_spans(w, env)
    rep["dims"] = [s_full.dim, s_lin.dim]
    rep.say(f"value span of {w}: dim {s_full.dim}; of its full linearization: dim {s_lin.dim}")
    rep.check(s_full == s_lin, "spans agree")


def cmd_jordan(args, rep):
    from .jordanlab import verify_quadratic_jordan

    op = args.op
    if op == "verify":
        from .sources import load_jordan

        J = load_jordan(args.source, args.p)
        r = verify_quadratic_jordan(J)
        rep["dims"] = [J.dim]
        rep["checked"] = r.checked
        for f in r.failures:
            rep.fail({"axiom": f.axiom, "method": f.method, "at": jsonable(f.witness), "value": jsonable(f.value)})
            rep.say(f"  {f}")
        rep.say(f"dim {J.dim} over F_{J.p}: " + ("M1-M6 and linearizations hold" if r.ok else "axiom failure"))
    elif op == "fgg":
        from .jordanlab import fgg_quotient
        from .sources import parse_vector

        L = _lie(args)
        r = fgg_quotient(L, parse_vector(args.s, L.names, L.p))
        rep["dims"] = [L.dim, r.K.dim, r.jordan.dim]
        rep.say(f"K = ker ad(s)^2 has dim {r.K.dim}; quotient dim {r.jordan.dim}")
        rep.check(r.report.ok, "J1, J2 and linearized J2", jsonable([r.report.j1_witness, r.report.j2_witness, r.report.j2_linearized_witness]))
    elif op == "ja":
        from .grassenv import Envelope
        from .jordanlab import ja_construct, ja_data, sandwich_from_azd
        from .sources import parse_envelope_element

        L = _lie(args)
        env = Envelope(L, args.budget or 3)
        data = ja_data(parse_envelope_element(env, args.a))
        J, r = ja_construct(data)
        rep["dims"] = [data.ambient.dim, data.K.dim, J.dim]
        rep.say(f"K_a dim {data.K.dim}, J_a dim {J.dim}")
        rep.check(r.k_in_kprime, "K_a inside K'_a")
        rep.check(r.order_irrelevant, "square independent of component order")
        rep.check(r.well_defined, "operations well defined mod K_a")
        rep.check(r.jordan is not None and r.jordan.ok, "quadratic Jordan axioms", jsonable([str(f) for f in (r.jordan.failures if r.jordan else [])]))
        if args.b:
            s = sandwich_from_azd(data, parse_envelope_element(env, args.b))
            rep["sandwich"] = str(s.element)
            rep.say(f"b ad^[2](a) = {s.element}")
            rep.check(s.sandwich, "b ad^[2](a) is a sandwich", jsonable(s.witness))
    elif op == "azd":
        from .jordanlab import azd_powers
        from .sources import load_jordan

        J = load_jordan(args.source, args.p)
        rep["n"] = args.n
        rows = []
        for i in range(J.dim):
            x = np.eye(J.dim, dtype=np.int64)[i]
            r = azd_powers(J, x, args.n)
            for k, xk, ok in r.rows:
                rows.append({"x": J.names[i], "power": k, "azd": bool(ok)})
                if not ok:
                    rep.fail({"x": J.names[i], "power": k})
        rep["rows"] = rows
        rep.say(f"x^{args.n} = 0 identically; {len(rows)} powers checked over the basis")
        rep.check(all(r["azd"] for r in rows), "powers are absolute zero divisors")
    elif op == "pushforward":
        from .jordanlab import azd_pushforward
        from .sources import load_jordan, parse_vector

        J = load_jordan(args.source, args.p)
        a = parse_vector(args.a, J.names, J.p)
        b = parse_vector(args.b, J.names, J.p)
        c = azd_pushforward(J, a, b)
        rep["image"] = _vec(c, J.names, J.p)
        rep.say(f"bQ(a) = {rep.data['image']} is an absolute zero divisor")
    elif op == "sym":
        from .jordanlab import sym_bound_check, sym_identity
        from .sources import load_jordan

        J = load_jordan(args.source, args.p)
        if args.n:
            n, (holds, wit, val) = args.n, sym_identity(J, args.n)
        else:
            n, holds, wit, val = sym_bound_check(J)
        rep["n"] = n
        rep.check(holds, f"Sym_{n} vanishes", jsonable({"at": wit, "value": val}))
    else:
        raise AdnilError(f"unknown jordan operation {op!r}")


def cmd_zassenhaus(args, rep):
    from .sources import load_group
    from .zassenhaus import augmentation_filtration, build_Lp, check_filtration, verify_Lp

    G, p = load_group(args.source, args.p)
    F = augmentation_filtration(G, p)
    rep["p"] = p
    rep["series"] = F.orders
    for w in F.warnings:
        rep.say(f"warning: {w}")
    rep.say(f"|G| = {G.order}; |G_i| = " + " ".join(map(str, F.orders)))
    rep.check(F.reaches_identity, "filtration reaches {1}")
    fr = check_filtration(F)
    rep.check(fr.subgroups and fr.normal, "terms are normal subgroups", jsonable(fr.witnesses))
    rep.check(fr.commutators, "[G_i, G_j] in G_{i+j}", jsonable(fr.witnesses))
    rep.check(fr.elementary_abelian, "G_i/G_{i+1} elementary abelian", jsonable(fr.witnesses))
    Lp = build_Lp(G, p, F)
    rep["grades"] = Lp.grades
    rep["dims"] = [Lp.lie.dim]
    rep.say("grades: " + " ".join(map(str, Lp.grades)))
    lr = verify_Lp(Lp)
    rep.check(lr.validation.ok, "L_p(G) is a graded Lie algebra", jsonable(getattr(lr.validation, "violations", None)))
    rep.check(lr.nilpotent_homogeneous, "homogeneous elements are ad-nilpotent", jsonable(lr.witness))


def cmd_identity(args, rep):
    op = args.op
    if op == "check":
        from .formats import parse_identity
        from .idlin import check_multilinear_identity

        L = _lie(args)
        f = parse_identity(args.expr, normalize=False, p=L.p)
        if f.is_multilinear:
            r = check_multilinear_identity(L, f)
            wit = list(r.names) if not r.holds else None
        else:
            wit = _check_polynomial(L, f)
        rep["variables"] = list(f.variables)
        if wit is None:
            rep.say(f"{args.expr} vanishes on {args.source}")
        else:
            rep.fail(wit, f"{args.expr} does not vanish at ({', '.join(wit)})")
    elif op == "jacobson":
        from .divpow import jacobson_identity_holds, jacobson_sides

        lhs, rhs = jacobson_sides(args.p)
        rep["terms"] = [len(lhs), len(rhs)]
        rep.check(jacobson_identity_holds(args.p), f"symmetrization identity at p={args.p}")
    elif op == "linearization":
        from .idlin import linearization_selfcheck

        ok, wit, trials = linearization_selfcheck(trials=args.trials, seed=args.seed)
        rep["trials"] = trials
        rep.check(ok, "partial and full linearizations match direct expansion", jsonable(wit))
    elif op == "shadow":
        from .formats import format_identity
        from .zassenhaus import group_commutator_shadow, parse_group_word

        f = group_commutator_shadow(parse_group_word(args.expr))
        rep["shadow"] = format_identity(f)
        rep.say(rep.data["shadow"])
    else:
        raise AdnilError(f"unknown identity operation {op!r}")


def _check_polynomial(L, f):
    """Exhaustive check of a non-multilinear identity over all vectors of L."""
    import itertools

    from .config import evaluation_budget
    from .errors import BudgetError

    names = f.variables
    count = L.p ** (L.dim * len(names))
    if count > evaluation_budget():
        raise BudgetError(f"{count} evaluations exceed the budget; linearize the identity")
    vecs = [np.array(t, dtype=np.int64) for t in itertools.product(range(L.p), repeat=L.dim)]
    for combo in itertools.product(vecs, repeat=len(names)):
        if f.evaluate(L, dict(zip(names, combo))).any():
            return [_vec(v, L.names, L.p) for v in combo]
    return None


# ---------------------------------------------------------------- parser


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--structured", action="store_true", help="print a JSON report")
    common.add_argument("--timing", action="store_true", help="include wall-clock time")
    common.add_argument("-p", type=int, default=None, help="prime (for built-ins and groups)")
    common.add_argument("--budget", type=int, default=None, help="Grassmann budget (number of e_i), default 3")

    ap = argparse.ArgumentParser(prog="adnil", description="Exact F_p checks for ad-nilpotent Lie algebras, Jordan algebras and groups.")
    sub = ap.add_subparsers(dest="verb", metavar="VERB")
    src = dict(help="file (.lie/.grp/.jord) or @builtin")

    s = sub.add_parser("validate", parents=[common], help="validate an input file")
    s.add_argument("source", **src)

    s = sub.add_parser("lieset", parents=[common], help="list commutators of generators")
    s.add_argument("source", **src)
    s.add_argument("--gens", required=True, help="comma separated basis names, or ';' separated combinations")
    s.add_argument("--length", type=int, default=3)

    s = sub.add_parser("series", parents=[common], help="lower central series")
    s.add_argument("source", **src)

    s = sub.add_parser("kostrikin", parents=[common], help="Kostrikin descent (plain or linearized)")
    s.add_argument("source", **src)
    s.add_argument("--element", required=True)
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--linearized", action="store_true")
    s.add_argument("--m", type=int, default=None)

    s = sub.add_parser("divided", parents=[common], help="divided polynomials and the Omega identities")
    s.add_argument("source", nargs="?", **src)
    s.add_argument("--expr")
    s.add_argument("--divad", help="x0,x1,k: wrap the word as x0 ad_x1^[k](word)")
    s.add_argument("--imax", type=int, default=None, help="run the regularity probe up to L^imax")
    s.add_argument("--omega-suite", action="store_true")
    s.add_argument("--trials", type=int, default=102)
    s.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("jordan", parents=[common], help="Jordan algebra checks")
    s.add_argument("op", choices=["verify", "fgg", "ja", "azd", "pushforward", "sym"])
    s.add_argument("source", **src)
    s.add_argument("--s")
    s.add_argument("--a")
    s.add_argument("--b")
    s.add_argument("--n", type=int, default=None)

    s = sub.add_parser("zassenhaus", parents=[common], help="Zassenhaus filtration and L_p(G)")
    s.add_argument("source", **src)

    s = sub.add_parser("identity", parents=[common], help="polynomial identities")
    s.add_argument("op", choices=["check", "jacobson", "linearization", "shadow"])
    s.add_argument("source", nargs="?", **src)
    s.add_argument("--expr")
    s.add_argument("--trials", type=int, default=50)
    s.add_argument("--seed", type=int, default=0)
    return ap


VERBS = {
    "validate": cmd_validate,
    "lieset": cmd_lieset,
    "series": cmd_series,
    "kostrikin": cmd_kostrikin,
    "divided": cmd_divided,
    "jordan": cmd_jordan,
    "zassenhaus": cmd_zassenhaus,
    "identity": cmd_identity,
}

def _inputs(args):
    out = {k: v for k, v in vars(args).items() if k not in ("structured", "timing", "verb") and v is not None and v is not False}
    return jsonable(out)


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    if not args.verb:
        ap.print_usage(sys.stderr)
        return 2
    command = args.verb + (f" {args.op}" if getattr(args, "op", None) else "")
    rep = Report(command, _inputs(args))
    t0 = time.perf_counter()
    try:
        if args.verb == "identity" and args.op == "jacobson" and not args.p:
            raise AdnilError("identity jacobson needs -p")
        if getattr(args, "source", "x") is None and not (
            args.verb == "identity" and args.op != "check" or args.verb == "divided" and args.omega_suite
        ):
            raise AdnilError(f"{command} needs an input")
        VERBS[args.verb](args, rep)
    except (AdnilError, FileNotFoundError, KeyError) as e:
        rep["status"] = "error"
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        if isinstance(e, FileNotFoundError):
            msg = f"no such file or built-in: {e.args[0] if e.args else e}"
        rep["error"] = f"{type(e).__name__}: {msg}"
        rep.say(f"error: {msg}")
    rep["timing"] = round(time.perf_counter() - t0, 3) if args.timing else None
    if args.structured:
        out.write(json.dumps(jsonable(rep.data), sort_keys=True, indent=2) + "\n")
    else:
        out.write(f"{command}: {rep.data['status']}\n")
        for line in rep.lines:
            out.write(line + "\n")
    return EXIT[rep.data["status"]]


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
