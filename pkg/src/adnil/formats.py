"""
Line-oriented text formats and the identity-expression parser.

    .lie   field p=5 / dim 3 / basis x y z / [grade 1 1 2]
           bracket x y = z          or raw   c 1 2 3 1
    .grp   p 2 / degree 4 / gen r (1 2 3 4) / gen s (1 3)
    .jord  field p=5 / dim 3 / basis a b c
           s i j k v     coefficient v of b_k in b_i^2 (i = j) or b_i∘b_j (i < j)
           q i j r c v   entry (r, c) of Q(b_i) (i = j) or Q(b_i, b_j) (i < j)

Indices in files are 1-based.  '%' starts a comment.
"""

from __future__ import annotations

import re

import numpy as np

from .errors import ParseError, StructuralError
from .exactlin import check_prime, is_prime
from .idlin import LiePolynomial, tree_str
from .liecore import LieAlgebra, format_lincomb, parse_lincomb

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*$")


def _lines(text: str):
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("%", 1)[0].strip()
        if line:
            yield n, raw, line


def _int(tok: str, n: int, raw: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", n, raw.find(tok) + 1) from None


def _header(key, rest, n, raw, state):
    if key == "field":
        m = re.fullmatch(r"p\s*=\s*(\d+)", rest)
        if not m:
            raise ParseError("expected 'field p=<prime>'", n, 1)
        p = int(m.group(1))
        if not is_prime(p):
            raise ParseError(f"{p} is not prime", n, raw.find(m.group(1)) + 1)
        state["p"] = p
    elif key == "dim":
        state["dim"] = _int(rest, n, raw)
        if state["dim"] < 0:
            raise ParseError("negative dimension", n, 1)
    elif key == "basis":
        names = rest.split()
        for nm in names:
            if not _NAME.match(nm):
                raise ParseError(f"bad basis name {nm!r}", n, raw.find(nm) + 1)
        if len(set(names)) != len(names):
            raise ParseError("repeated basis name", n, 1)
        state["names"] = names
    else:
        return False
    return True


def _finish_header(state, n):
    if "p" not in state:
        raise ParseError("missing 'field p=<prime>' header", n)
    if "dim" not in state:
        state["dim"] = len(state.get("names", []))
    if "names" not in state:
        state["names"] = [f"b{i + 1}" for i in range(state["dim"])]
    if len(state["names"]) != state["dim"]:
        raise ParseError(f"dim {state['dim']} but {len(state['names'])} basis names", n)


# ---------------------------------------------------------------- .lie


def parse_lie_file(text: str) -> LieAlgebra:
    state: dict = {}
    body = []
    grading = None
    last = 0
    for n, raw, line in _lines(text):
        last = n
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key in ("bracket", "c"):
            body.append((n, raw, key, rest))
        elif key == "grade":
            grading = (n, raw, rest.split())
        elif not _header(key, rest, n, raw, state):
            raise ParseError(f"unknown directive {key!r}", n, 1)
    _finish_header(state, last)
    p, d, names = state["p"], state["dim"], state["names"]
    brackets: dict = {}
    for n, raw, key, rest in body:
        if key == "bracket":
            m = re.fullmatch(r"(\S+)\s+(\S+)\s*=\s*(.*)", rest)
            if not m:
                raise ParseError("expected 'bracket <u> <v> = <combination>'", n, 1)
            u, v, rhs = m.groups()
            for nm in (u, v):
                if nm not in names:
                    raise ParseError(f"unknown basis name {nm!r}", n, raw.find(nm) + 1)
            i, j = names.index(u), names.index(v)
            if i >= j:
                raise ParseError(f"bracket {u} {v}: entries need {u} before {v} in the basis", n, raw.find(u) + 1)
            try:
                vec = parse_lincomb(rhs, names, p)
            except ParseError as e:
                raise ParseError(str(e), n, raw.find(rhs) + (e.col or 1)) from None
            brackets[(i, j)] = (brackets.get((i, j), 0) + vec) % p
        else:
            toks = rest.split()
            if len(toks) != 4:
                raise ParseError("expected 'c i j k v'", n, 1)
            i, j, k, val = (_int(t, n, raw) for t in toks)
            if not (1 <= i <= d and 1 <= j <= d and 1 <= k <= d):
                raise ParseError("index out of range", n, 1)
            if i >= j:
                raise ParseError(f"raw entry needs i < j, got {i} {j}", n, 1)
            vec = np.zeros(d, dtype=np.int64)
            vec[k - 1] = val
            brackets[(i - 1, j - 1)] = (brackets.get((i - 1, j - 1), 0) + vec) % p
    grades = None
    if grading is not None:
        n, raw, toks = grading
        grades = [_int(t, n, raw) for t in toks]
        if len(grades) != d:
            raise ParseError(f"grade needs {d} degrees", n, 1)
    try:
        return LieAlgebra.from_brackets(p, names, brackets, grades)
    except StructuralError as e:
        raise ParseError(str(e)) from None


def serialize_lie(L: LieAlgebra) -> str:
    out = [f"field p={L.p}", f"dim {L.dim}", "basis " + " ".join(L.names)]
    if L.grading is not None:
        out.append("grade " + " ".join(str(g) for g in L.grading))
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            v = L.table[i, j]
            if v.any():
                out.append(f"bracket {L.names[i]} {L.names[j]} = {format_lincomb(v, L.names, L.p)}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- .grp


def parse_cycles(text: str, degree: int) -> tuple:
    """'(1 2 3)(4 5)' -> 0-based image tuple on `degree` points."""
    s = text.strip()
    img = list(range(degree))
    seen = set()
    if s in ("", "()"):
        return tuple(img)
    pos = 0
    for m in re.finditer(r"\s*\(([^()]*)\)\s*", s):
        if m.start() != pos:
            raise ParseError(f"cannot read cycle notation at {s[pos:]!r}", col=pos + 1)
        pos = m.end()
        try:
            pts = [int(t) for t in m.group(1).replace(",", " ").split()]
        except ValueError:
            raise ParseError(f"non-integer point in {m.group(0).strip()!r}", col=m.start() + 1) from None
        for x in pts:
            if not 1 <= x <= degree:
                raise StructuralError(f"point {x} outside 1..{degree}")
            if x in seen:
                raise StructuralError(f"point {x} repeated; not a permutation")
            seen.add(x)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a - 1] = b - 1
    if pos != len(s):
        raise ParseError(f"cannot read cycle notation at {s[pos:]!r}", col=pos + 1)
    return tuple(img)


def format_cycles(perm) -> str:
    seen = set()
    parts = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = perm[start]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = perm[x]
        parts.append("(" + " ".join(str(c + 1) for c in cyc) + ")")
    return "".join(parts) or "()"


def parse_grp_file(text: str):
    """-> (p or None, degree, [(name, image tuple)])."""
    p = None
    degree = None
    gens = []
    for n, raw, line in _lines(text):
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "p":
            p = _int(rest, n, raw)
            if not is_prime(p):
                raise ParseError(f"{p} is not prime", n, raw.find(rest) + 1)
        elif key == "degree":
            degree = _int(rest, n, raw)
        elif key == "gen":
            m = re.fullmatch(r"(\S+)\s+(.*)", rest)
            if not m or not _NAME.match(m.group(1)):
                raise ParseError("expected 'gen <name> (<cycles>)'", n, 1)
            if degree is None:
                raise ParseError("'degree' must come before generators", n, 1)
            try:
                perm = parse_cycles(m.group(2), degree)
            except ParseError as e:
                raise ParseError(str(e), n, raw.find(m.group(2)) + (e.col or 1)) from None
            except StructuralError as e:
                raise ParseError(str(e), n, raw.find(m.group(2)) + 1) from None
            gens.append((m.group(1), perm))
        else:
            raise ParseError(f"unknown directive {key!r}", n, 1)
    if degree is None:
        raise ParseError("missing 'degree'")
    return p, degree, gens


def serialize_grp(p, degree: int, gens) -> str:
    out = []
    if p is not None:
        out.append(f"p {p}")
    out.append(f"degree {degree}")
    out += [f"gen {name} {format_cycles(perm)}" for name, perm in gens]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- .jord


def parse_jord_file(text: str):
    from .jordanlab.quadratic import TableQJA

    state: dict = {}
    body = []
    last = 0
    for n, raw, line in _lines(text):
        last = n
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key in ("s", "q"):
            body.append((n, raw, key, rest.split()))
        elif not _header(key, rest, n, raw, state):
            raise ParseError(f"unknown directive {key!r}", n, 1)
    _finish_header(state, last)
    p, d = state["p"], state["dim"]
    S = np.zeros((d, d, d), dtype=np.int64)
    Qt = np.zeros((d, d, d, d), dtype=np.int64)
    for n, raw, key, toks in body:
        want = 4 if key == "s" else 5
        if len(toks) != want:
            raise ParseError(f"'{key}' lines take {want} integers", n, 1)
        vals = [_int(t, n, raw) for t in toks]
        idx = vals[:-1]
        if any(not 1 <= x <= d for x in idx):
            raise ParseError("index out of range", n, 1)
        if idx[0] > idx[1]:
            raise ParseError(f"table entries need i <= j, got {idx[0]} {idx[1]}", n, 1)
        at = tuple(x - 1 for x in idx)
        if key == "s":
            S[at] += vals[-1]
        else:
            Qt[at] += vals[-1]
    return TableQJA(p, S % p, Qt % p, state["names"])


def serialize_jord(J) -> str:
    T = J if hasattr(J, "S") else J.tabulate()
    d = T.dim
    out = [f"field p={T.p}", f"dim {d}", "basis " + " ".join(T.names)]
    for idx in zip(*np.nonzero(T.S)):
        out.append("s " + " ".join(str(int(x) + 1) for x in idx) + f" {int(T.S[idx])}")
    for idx in zip(*np.nonzero(T.Qt)):
        out.append("q " + " ".join(str(int(x) + 1) for x in idx) + f" {int(T.Qt[idx])}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- identities

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str):
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        num, name, sym = m.groups()
        col = m.start(m.lastindex) + 1
        if num is not None:
            toks.append(("int", int(num), col))
        elif name is not None:
            toks.append(("var", name, col))
        elif sym in "[],+-*^(){}":
            toks.append((sym, sym, col))
        else:
            raise ParseError(f"unknown token {sym!r}", col=col)
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k=0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else ("end", None, None)

    def take(self, kind):
        t = self.peek()
        if t[0] != kind:
            what = "end of input" if t[0] == "end" else repr(t[1])
            raise ParseError(f"expected {kind!r}, found {what}", col=t[2])
        self.i += 1
        return t

    def expr(self):
        """-> list of (coeff, tree)."""
        terms = []
        sign = 1
        if self.peek()[0] == "-":
            self.take("-")
            sign = -1
        while True:
            terms += [(sign * c, t) for c, t in self.scaled()]
            if self.peek()[0] == "+":
                self.take("+")
                sign = 1
            elif self.peek()[0] == "-":
                self.take("-")
                sign = -1
            else:
                return terms

    def scaled(self):
        if self.peek()[0] == "int":
            c = self.take("int")[1]
            self.take("*")
            return [(c * a, t) for a, t in self.term()]
        return self.term()

    def term(self):
        t = self.peek()
        if t[0] == "var":
            self.take("var")
            return [(1, t[1])]
        if t[0] == "[":
            start = self.take("[")
            args = [self.expr()]
            while self.peek()[0] == ",":
                self.take(",")
                args.append(self.expr())
            if self.peek()[0] != "]":
                t2 = self.peek()
                raise ParseError("unbalanced brackets" if t2[0] == "end" else f"unexpected {t2[1]!r}", col=t2[2] or start[2])
            self.take("]")
            if len(args) < 2:
                raise ParseError("a bracket needs at least two arguments", col=start[2])
            acc = args[0]
            for nxt in args[1:]:
                acc = [(a * b, (s, t2)) for a, s in acc for b, t2 in nxt]
            return acc
        what = "end of input" if t[0] == "end" else repr(t[1])
        raise ParseError(f"expected a variable or '[', found {what}", col=t[2])


def parse_identity(text: str, normalize: bool = False, p: int | None = None) -> LiePolynomial:
    """'[x1,x2,x3] + 2*[x1,x3,x2]' -> LiePolynomial.  Multi-argument brackets
    are left-normed; brackets of sums are expanded.  normalize rewrites the
    result in Lyndon (Hall) coordinates."""
    ps = _Parser(text)
    if ps.peek()[0] == "end":
        raise ParseError("empty expression", col=1)
    terms = ps.expr()
    if ps.peek()[0] != "end":
        t = ps.peek()
        raise ParseError("unbalanced brackets" if t[0] == "]" else f"unexpected {t[1]!r}", col=t[2])
    f = LiePolynomial(tuple(terms))
    return f.normalized(p) if normalize else f


def format_identity(f: LiePolynomial) -> str:
    return str(f)


__all__ = [
    "parse_lie_file",
    "serialize_lie",
    "parse_cycles",
    "format_cycles",
    "parse_grp_file",
    "serialize_grp",
    "parse_jord_file",
    "serialize_jord",
    "parse_identity",
    "format_identity",
    "tree_str",
    "check_prime",
]
