"""Resolve `@name` built-ins and file paths to algebras and groups."""

from __future__ import annotations

import re
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ParseError, StructuralError
from .formats import parse_grp_file, parse_jord_file, parse_lie_file
from .liecore import LieAlgebra, parse_lincomb

DEFAULT_P = 5


def data_text(name: str) -> str:
    return resources.files("adnil").joinpath("data", name).read_text(encoding="utf-8")


def data_names(ext: str) -> list:
    return sorted(p.name[: -len(ext)] for p in resources.files("adnil").joinpath("data").iterdir() if p.name.endswith(ext))


def _read(spec: str, ext: str):
    if spec.startswith("@"):
        name = spec[1:]
        if name + ext in [n + ext for n in data_names(ext)]:
            return data_text(name + ext)
        return None
    path = Path(spec)
    if not path.exists():
        raise FileNotFoundError(spec)
    return path.read_text(encoding="utf-8")


def kind_of(spec: str) -> str:
    """'lie', 'grp' or 'jord' from the extension or the built-in name."""
    if spec.startswith("@"):
        name = spec[1:]
        for ext in ("grp", "jord", "lie"):
            if name in data_names("." + ext):
                return ext
        if name in JORDAN_MODELS:
            return "jord"
        return "lie"
    suffix = Path(spec).suffix.lstrip(".")
    if suffix not in ("lie", "grp", "jord"):
        raise StructuralError(f"cannot tell the input kind of {spec!r} (use .lie, .grp or .jord)")
    return suffix


def load_lie(spec: str, p: int | None = None) -> LieAlgebra:
    text = _read(spec, ".lie")
    if text is None:
        from .catalog import builtin

        return builtin(spec[1:], p or DEFAULT_P)
    L = parse_lie_file(text)
    if p is not None and p != L.p:
        raise StructuralError(f"{spec} is defined over F_{L.p}, not F_{p}")
    return L


def load_group(spec: str, p: int | None = None):
    """-> (FiniteGroup, p)."""
    from .zassenhaus import enumerate_group

    text = _read(spec, ".grp")
    if text is None:
        raise FileNotFoundError(f"no built-in group {spec}; known: {', '.join('@' + n for n in data_names('.grp'))}")
    fp, degree, gens = parse_grp_file(text)
    if p is None:
        p = fp
    if p is None:
        raise StructuralError("no prime given (use -p or a 'p' line)")
    if not gens:
        return enumerate_group([], names=[]), p
    return enumerate_group([g for _, g in gens], names=[n for n, _ in gens]), p


def _m2(p):
    from .assoc import matrix_algebra
    from .jordanlab import plus_algebra

    return plus_algebra(matrix_algebra(2, p))


def _herm2(p):
    from .assoc import matrix_algebra, transpose_involution
    from .jordanlab import hermitian_algebra

    return hermitian_algebra(matrix_algebra(2, p), transpose_involution(2, p))


def _jq3(p):
    from .jordanlab import quadratic_form_algebra

    # q(v) = v0^2 + v1 v2, base point e0
    return quadratic_form_algebra(p, [1, 0, 0], [[0, 0, 0], [0, 0, 1], [0, 0, 0]], [1, 0, 0], names=["one", "u", "v"])


def _upper4(p):
    from .assoc import strictly_upper_assoc
    from .jordanlab import plus_algebra

    return plus_algebra(strictly_upper_assoc(4, p))


JORDAN_MODELS = {
    "m2": (_m2, 5),
    "upper4": (_upper4, 5),
    "herm2": (_herm2, 5),
    "jq3": (_jq3, 3),
}


def load_jordan(spec: str, p: int | None = None):
    if spec.startswith("@") and spec[1:] in JORDAN_MODELS:
        fn, default = JORDAN_MODELS[spec[1:]]
        return fn(p or default)
    text = _read(spec, ".jord")
    if text is None:
        known = sorted(["@" + n for n in JORDAN_MODELS] + ["@" + n for n in data_names(".jord")])
        raise FileNotFoundError(f"no built-in Jordan algebra {spec}; known: {', '.join(known)}")
    J = parse_jord_file(text)
    if p is not None and p != J.p:
        raise StructuralError(f"{spec} is defined over F_{J.p}, not F_{p}")
    return J


_ENV_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+)\s*\*\s*)?(\([^()]*\)|[A-Za-z_][A-Za-z0-9_\[\],']*)\s*@\s*([\d,\s]+?)\s*(?=[+-]|$)")


def parse_envelope_element(env, text: str):
    """'e12@1 + e34@2 - 2*(x+y)@1,3' -> EnvelopeElement."""
    L = env.base
    s = text.strip()
    out = env.zero()
    pos = 0
    if not s:
        raise ParseError("empty envelope element", col=1)
    while pos < len(s):
        m = _ENV_TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot read envelope term at {s[pos:]!r} (expected <vector>@<i,j,...>)", col=pos + 1)
        sign, coeff, vec, idx = m.groups()
        if pos > 0 and sign is None:
            raise ParseError("missing '+' or '-'", col=pos + 1)
        v = parse_lincomb(vec[1:-1] if vec.startswith("(") else vec, L.names, L.p)
        c = int(coeff) if coeff else 1
        if sign == "-":
            c = -c
        indices = [int(t) for t in re.split(r"[,\s]+", idx.strip()) if t]
        out = out + env.tensor((c * v) % L.p, indices)
        pos = m.end()
    return out


def parse_vector(text: str, names, p: int) -> np.ndarray:
    """Coordinates '1,0,2' or a combination of basis names."""
    s = text.strip()
    if re.fullmatch(r"-?\d+(\s*,\s*-?\d+)*", s):
        v = np.array([int(t) for t in s.split(",")], dtype=np.int64)
        if len(v) != len(names):
            raise ParseError(f"expected {len(names)} coordinates, got {len(v)}")
        return v % p
    return parse_lincomb(s, names, p)
