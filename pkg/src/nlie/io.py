"""JSON algebra documents.

    {"arity": 3, "dim": 4, "scalar_mode": "rational",
     "brackets": [{"args": [2, 3, 4], "value": {"1": "1"}}]}

Indices are 1-based, args strictly increasing, scalars are strings (plain
integers are accepted on input).  ``scalar_mode`` is "rational" (default) or
"poly:<var>"; a poly-mode document can carry a deformation series
sum_i t^i mu_i.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .algebra import StructureConstants
from .deformation import DeformationSeries
from .exact import UniPoly, format_rational, parse_scalar


class ParseError(ValueError):
    """Malformed document; ``where`` is a JSON path or line:column."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where
        self.message = message


def _load(source):
    if isinstance(source, dict):
        return source
    if hasattr(source, "read"):
        source = source.read()
    try:
        return json.loads(source)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from None


def _int_field(doc, name, lo):
    if name not in doc:
        raise ParseError(name, "missing field")
    v = doc[name]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(name, f"expected an integer, got {v!r}")
    if v < lo:
        raise ParseError(name, f"must be at least {lo}")
    return v


def parse_algebra(source) -> StructureConstants:
    """Document (str, file object or dict) -> StructureConstants."""
    doc = _load(source)
    if not isinstance(doc, dict):
        raise ParseError("$", "expected an object")
    n = _int_field(doc, "arity", 2)
    m = _int_field(doc, "dim", 1)
    mode = doc.get("scalar_mode", doc.get("scalar-mode", "rational"))
    if not isinstance(mode, str) or not (mode == "rational" or mode.startswith("poly:")):
        raise ParseError("scalar_mode", f"unknown mode {mode!r}")
    if mode.startswith("poly:") and not mode[5:].isidentifier():
        raise ParseError("scalar_mode", f"bad variable name {mode[5:]!r}")
    zero = UniPoly((), mode[5:]) if mode.startswith("poly:") else Fraction(0)
    brackets = doc.get("brackets", [])
    if not isinstance(brackets, list):
        raise ParseError("brackets", "expected a list")
    table = {}
    for b, item in enumerate(brackets):
        where = f"brackets[{b}]"
        if not isinstance(item, dict) or "args" not in item or "value" not in item:
            raise ParseError(where, "expected an object with 'args' and 'value'")
        args = item["args"]
        if not isinstance(args, list) or len(args) != n:
            raise ParseError(f"{where}.args", f"expected a list of {n} indices")
        for a, x in enumerate(args):
            if isinstance(x, bool) or not isinstance(x, int) or not 1 <= x <= m:
                raise ParseError(f"{where}.args[{a}]", f"index {x!r} out of range 1..{m}")
        if any(args[i] >= args[i + 1] for i in range(n - 1)):
            raise ParseError(f"{where}.args", f"{args} is not strictly increasing")
        key = tuple(x - 1 for x in args)
        if key in table:
            raise ParseError(f"{where}.args", f"duplicate bracket {args}")
        val = item["value"]
        if not isinstance(val, dict):
            raise ParseError(f"{where}.value", "expected an object")
        vec = [zero] * m
        for k, s in val.items():
            vw = f"{where}.value[{k!r}]"
            try:
                idx = int(k)
            except ValueError:
                raise ParseError(vw, "key is not an index") from None
            if not 1 <= idx <= m:
                raise ParseError(vw, f"index {idx} out of range 1..{m}")
            if isinstance(s, bool) or not isinstance(s, (str, int)):
                raise ParseError(vw, f"scalar must be a string, got {s!r}")
            try:
                c = parse_scalar(str(s), mode)
            except (ValueError, SyntaxError, ZeroDivisionError, TypeError) as exc:
                raise ParseError(vw, f"cannot parse scalar {s!r} ({exc})") from None
            vec[idx - 1] = c
        table[key] = tuple(vec)
    return StructureConstants(n, m, table, zero=zero)


def format_scalar(c) -> str:
    if isinstance(c, Fraction):
        return format_rational(c)
    if isinstance(c, int):
        return str(c)
    if isinstance(c, UniPoly):
        return str(c)
    raise TypeError(f"cannot serialize scalar {c!r}")


def scalar_mode_of(A: StructureConstants) -> str:
    if isinstance(A._zero, UniPoly):
        return f"poly:{A._zero.var}"
    for c in A.scalars():
        if isinstance(c, UniPoly) and not c.is_constant():
            return f"poly:{c.var}"
    return "rational"


def algebra_document(A: StructureConstants, scalar_mode=None) -> dict:
    mode = scalar_mode or scalar_mode_of(A)
    brackets = []
    for key in sorted(A.table):
        vec = A.table[key]
        value = {str(i + 1): format_scalar(c) for i, c in enumerate(vec) if c != 0}
        brackets.append({"args": [k + 1 for k in key], "value": value})
    doc = {"arity": A.n, "dim": A.m}
    if mode != "rational":
        doc["scalar_mode"] = mode
    doc["brackets"] = brackets
    return doc


def serialize_algebra(A: StructureConstants, scalar_mode=None) -> str:
    """Deterministic JSON text: fixed field order, one bracket per line."""
    doc = algebra_document(A, scalar_mode)
    head = [f"  {json.dumps(k)}: {json.dumps(v)}" for k, v in doc.items() if k != "brackets"]
    rows = [f"    {json.dumps(b)}" for b in doc["brackets"]]
    body = "[\n" + ",\n".join(rows) + "\n  ]" if rows else "[]"
    return "{\n" + ",\n".join(head + [f'  "brackets": {body}']) + "\n}\n"


def series_from_algebra(A: StructureConstants) -> DeformationSeries:
    """Poly-mode table sum_i t^i mu_i -> DeformationSeries (mu_0 = base)."""
    def coeff(c, i):
        if isinstance(c, UniPoly):
            return c.coeffs[i] if i < len(c.coeffs) else Fraction(0)
        return c if i == 0 else Fraction(0)

    order = max((c.degree() if isinstance(c, UniPoly) else 0 for c in A.scalars()), default=0)
    terms = []
    for i in range(order + 1):
        table = {k: tuple(coeff(c, i) for c in v) for k, v in A.table.items()}
        terms.append(StructureConstants(A.n, A.m, table))
    return DeformationSeries(terms[0], terms[1:])


def series_to_algebra(D: DeformationSeries, var="t") -> StructureConstants:
    table = {}
    for i, mu in enumerate(D.terms):
        for k, v in mu.table.items():
            acc = table.setdefault(k, [UniPoly((), var)] * D.base.m)
            for s, c in enumerate(v):
                if c:
                    acc[s] = acc[s] + UniPoly([0] * i + [c], var)
    return StructureConstants(D.base.n, D.base.m, {k: tuple(v) for k, v in table.items()},
                              zero=UniPoly((), var))
