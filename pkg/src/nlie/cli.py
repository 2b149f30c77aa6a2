"""Command-line front end.

Exit codes: 0 verdict ok, 1 mathematical failure, 2 input/parse error,
3 internal error.  ``--format structured`` prints deterministic JSON.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .algebra import check_nambu, derived_algebra, center
from .exact import format_rational, parse_rational, parse_scalar
from .io import ParseError, algebra_document, parse_algebra, series_from_algebra, series_to_algebra

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_INTERNAL = 0, 1, 2, 3


class InputError(Exception):
    pass


class Report:
    def __init__(self, command, verdict, payload):
        self.command = command
        self.verdict = verdict
        self.payload = payload
        self.format = "table"

    @property
    def status(self):
        return EXIT_OK if self.verdict == "ok" else EXIT_FAIL

    def structured(self):
        return json.dumps({"command": self.command, "verdict": self.verdict,
                           "payload": _jsonable(self.payload)}, sort_keys=True, indent=2)

    def table(self):
        lines = [f"{self.command}: {self.verdict}"]
        for k, v in _jsonable(self.payload).items():
            if isinstance(v, (dict, list)):
                v = json.dumps(v, sort_keys=True)
            lines.append(f"  {k:<24} {v}")
        return "\n".join(lines)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return str(x)


# ------------------------------------------------------------------ helpers

def _read(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    return parse_algebra(text)


def _params(items):
    out = {}
    for it in items or []:
        if "=" not in it:
            raise InputError(f"--param expects name=value, got {it!r}")
        k, v = it.split("=", 1)
        try:
            out[k.strip()] = parse_scalar(v.strip())
        except (ValueError, SyntaxError, ZeroDivisionError):
            raise InputError(f"--param {k}: cannot parse {v!r}") from None
    return out


def _omega(text, n, m):
    """'1,2,3=1; 2,3,4=-1/2' -> ScalarForm (1-based indices)."""
    from .cohomology import ScalarForm
    vals = {}
    for part in filter(None, (p.strip() for p in (text or "").split(";"))):
        try:
            lhs, rhs = part.split("=")
            key = tuple(int(i) - 1 for i in lhs.split(","))
            vals[key] = parse_rational(rhs.strip())
        except ValueError:
            raise InputError(f"--omega: cannot parse {part!r}") from None
        if len(key) != n or min(key) < 0 or max(key) >= m:
            raise InputError(f"--omega: bad indices in {part!r}")
    try:
        return ScalarForm(n, m, vals)
    except ValueError as exc:
        raise InputError(f"--omega: {exc}") from None


def _family(args, m):
    from .variety import LaurentFamily
    try:
        if args.diag:
            entries = [e.strip() for e in args.diag.split(",")]
            if len(entries) != m:
                raise InputError(f"--diag needs {m} entries")
            return LaurentFamily.diagonal(entries, args.var)
        if args.family:
            rows = json.loads(args.family)
            return LaurentFamily([[str(x) for x in row] for row in rows], args.var)
    except (ValueError, SyntaxError, ZeroDivisionError) as exc:
        raise InputError(f"family: {exc}") from None
    raise InputError("degenerate needs --diag or --family")


def _residual_list(res, limit=50):
    return [r.one_based() for r in res[:limit]]


# ----------------------------------------------------------------- commands

def cmd_validate(args):
    A = _read(args.file)
    res = check_nambu(A)
    return Report("validate", "ok" if not res else "fail",
                  {"arity": A.n, "dim": A.m, "residual_count": len(res),
                   "residuals": _residual_list(res)})


def _need_valid(cmd, A):
    res = check_nambu(A)
    if res:
        return Report(cmd, "fail", {"error": "not an n-Lie algebra: the Nambu identity fails",
                                    "residual_count": len(res)})
    return None


def cmd_invariants(args):
    from .variety import fingerprint, orbit_dimensions
    A = _read(args.file)
    bad = _need_valid("invariants", A)
    if bad:
        return bad
    fp = fingerprint(A).as_dict()
    fp.update(orbit_dimensions(A))
    fp["dim_derived"] = len(derived_algebra(A))
    fp["dim_center"] = len(center(A))
    return Report("invariants", "ok", fp)


def cmd_cohomology(args):
    from .cohomology import cohomology_dims
    A = _read(args.file)
    bad = _need_valid("cohomology", A)
    if bad:
        return bad
    if args.p not in (1, 2, 3):
        raise InputError("--p must be 1, 2 or 3")
    return Report("cohomology", "ok", cohomology_dims(A, args.p).as_dict())


def _series(args):
    return series_from_algebra(_read(args.file))


def cmd_deform_check(args):
    from .deformation import deformation_residual, is_infinitesimal_cocycle
    D = _series(args)
    k = D.order if args.order is None else args.order
    D = D.truncate(k)
    res = deformation_residual(D)
    failing = [s for s in range(k + 1) if not res[s].is_zero()]
    payload = {"order": k, "failing_orders": failing,
               "infinitesimal_cocycle": is_infinitesimal_cocycle(D) if k >= 1 else None}
    return Report("deform-check", "ok" if not failing else "fail", payload)


def cmd_obstruct(args):
    from .deformation import solve_next_order
    D = _series(args)
    m = D.order + 1 if args.order is None else args.order
    if m < 1 or m > D.order + 1:
        raise InputError(f"--order must lie in 1..{D.order + 1}")
    try:
        r = solve_next_order(D, m)
    except ValueError as exc:
        return Report("obstruct", "fail", {"order": m, "error": str(exc)})
    payload = {"order": m, "obstruction_zero": r.obstruction.is_zero(), "solvable": r.solvable}
    if r.solvable:
        from .deformation import DeformationSeries
        ext = DeformationSeries(D.base, D.terms[1:m] + [r.term])
        payload["extended_series"] = algebra_document(series_to_algebra(ext))
    return Report("obstruct", "ok" if r.solvable else "fail", payload)


def cmd_trivialize(args):
    from .deformation import trivialize_if_possible
    D = _series(args)
    try:
        r = trivialize_if_possible(D, args.order)
    except ValueError as exc:
        return Report("trivialize", "fail", {"error": str(exc)})
    payload = r.as_dict()
    if r.trivialized:
        payload["automorphism"] = [[[format_rational(x) for x in row] for row in r.automorphism.map(i)]
                                   for i in range(1, r.order + 1)]
    return Report("trivialize", "ok" if r.trivialized else "fail", payload)


def cmd_extend(args):
    from .extensions import CentralExtensionSpec, central_extend
    from .cohomology import scalar_cocycle
    A = _read(args.file)
    bad = _need_valid("extend", A)
    if bad:
        return bad
    w = _omega(args.omega, A.n, A.m)
    spec = CentralExtensionSpec(A, w)
    E = central_extend(spec)
    cocycle = scalar_cocycle(w, A)
    valid = not check_nambu(E)
    payload = {"cocycle": cocycle, "extension_valid": valid, "extension": algebra_document(E)}
    return Report("extend", "ok" if valid and cocycle else "fail", payload)


def cmd_degenerate(args):
    from .variety import NoLimit, degenerate
    A = _read(args.file)
    F = _family(args, A.m)
    out = degenerate(F, A)
    if isinstance(out, NoLimit):
        return Report("degenerate", "fail", {"limit": None, **out.as_dict()})
    res = check_nambu(out)
    return Report("degenerate", "ok" if not res else "fail",
                  {"limit": algebra_document(out), "limit_valid": not res,
                   "abelian": out.is_abelian()})


def cmd_classify(args):
    from .variety import identify
    A = _read(args.file)
    bad = _need_valid("classify", A)
    if bad:
        return bad
    matches = identify(A)
    return Report("classify", "ok" if matches else "fail",
                  {"matches": [m.as_dict() for m in matches]})


def cmd_catalog(args):
    from .variety import catalog, catalog_entry
    n, m = args.arity, args.dim
    if n is None or m is None:
        raise InputError("catalog needs --arity and --dim")
    if not args.entry:
        entries = catalog(n, m)
        return Report("catalog", "ok", {"arity": n, "dim": m,
                                        "entries": [{"id": e.id, "params": e.param_names}
                                                    for e in entries]})
    try:
        e = catalog_entry(args.entry, n, m)
    except KeyError:
        raise InputError(f"no catalog entry {args.entry!r} for arity {n}, dim {m}") from None
    params = _params(args.param)
    if e.is_parametric and not params:
        params = e.default_params()
    try:
        A = e.instantiate(params)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    res = check_nambu(A)
    return Report("catalog", "ok" if not res else "fail",
                  {"id": e.id, "params": dict(sorted(params.items())),
                   "valid": not res, "algebra": algebra_document(A)})


def cmd_poisson_check(args):
    from .poisson import check_poisson_axioms, monomials
    rep = check_poisson_axioms(monomials(args.degree), leibniz_degree=args.leibniz_degree)
    return Report("poisson-check", "ok" if rep.ok else "fail", rep.as_dict())


def cmd_virasoro_check(args):
    from .poisson import virasoro_check
    if args.window < 0:
        raise InputError("--window must be non-negative")
    rep = virasoro_check(args.window)
    payload = rep.as_dict()
    payload["summary"] = ("all residuals divisible by z^2+4" if rep.all_divisible
                          else "some residuals not divisible by z^2+4")
    return Report("virasoro-check", "ok" if rep.all_divisible else "fail", payload)


def cmd_larsson_check(args):
    from .poisson import larsson_brackets
    if args.window < 0:
        raise InputError("--window must be non-negative")
    rep = larsson_brackets(args.window)
    return Report("larsson-check", "ok" if rep.ok else "fail", rep.as_dict())


COMMANDS = {
    "validate": (cmd_validate, "check the Nambu identity", ("file",)),
    "invariants": (cmd_invariants, "dimension invariants and orbit data", ("file",)),
    "cohomology": (cmd_cohomology, "dim Z^p, B^p, H^p", ("file", "p")),
    "deform-check": (cmd_deform_check, "deformation equation of a poly:t series", ("file", "order")),
    "obstruct": (cmd_obstruct, "obstruction to extending a series", ("file", "order")),
    "trivialize": (cmd_trivialize, "absorb coboundary terms of a series", ("file", "order")),
    "extend": (cmd_extend, "one-dimensional central extension", ("file", "omega")),
    "degenerate": (cmd_degenerate, "limit t -> 0 along a family of basis changes", ("file", "family")),
    "classify": (cmd_classify, "identify a catalog family", ("file",)),
    "catalog": (cmd_catalog, "list or instantiate catalog entries", ("catalog",)),
    "poisson-check": (cmd_poisson_check, "Jacobian bracket Poisson axioms", ("poisson",)),
    "virasoro-check": (cmd_virasoro_check, "ternary Virasoro-Witt Nambu residuals", ("window",)),
    "larsson-check": (cmd_larsson_check, "operator model brackets and substitution", ("window",)),
}


def build_parser():
    p = argparse.ArgumentParser(prog="nlie", description="n-Lie algebra toolkit")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_, opts) in COMMANDS.items():
        s = sub.add_parser(name, help=help_)
        s.add_argument("--format", choices=("structured", "table"), default="table")
        if "file" in opts:
            s.add_argument("file", help="algebra document (JSON)")
        if "p" in opts:
            s.add_argument("--p", type=int, default=2)
        if "order" in opts:
            s.add_argument("--order", type=int, default=None)
        if "omega" in opts:
            s.add_argument("--omega", required=True, help="e.g. '1,2,3=1; 2,3,4=-1/2'")
        if "family" in opts:
            s.add_argument("--diag", help="diagonal entries, e.g. 't,1,1,1'")
            s.add_argument("--family", help="JSON matrix of strings, columns are images")
            s.add_argument("--var", default="t")
        if "catalog" in opts:
            s.add_argument("--arity", type=int)
            s.add_argument("--dim", type=int)
            s.add_argument("--entry")
            s.add_argument("--param", action="append", default=[], help="name=value")
        if "poisson" in opts:
            s.add_argument("--degree", type=int, default=3)
            s.add_argument("--leibniz-degree", type=int, default=2)
        if "window" in opts:
            s.add_argument("--window", type=int, default=3)
    return p


def run(argv):
    """Parse argv and run; returns (Report or None, exit status, error text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return None, EXIT_PARSE if exc.code else EXIT_OK, ""
    fn = COMMANDS[args.command][0]
    try:
        rep = fn(args)
    except (ParseError, InputError) as exc:
        return None, EXIT_PARSE, f"error: {exc}"
    except Exception as exc:  # noqa: BLE001
        return None, EXIT_INTERNAL, f"internal error: {type(exc).__name__}: {exc}"
    rep.format = args.format
    return rep, rep.status, ""


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    rep, status, err = run(argv)
    if rep is not None:
        print(rep.structured() if rep.format == "structured" else rep.table())
    elif err:
        print(err, file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
