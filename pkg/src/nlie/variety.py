"""The algebraic variety of n-Lie laws: defining relations, the GL(m)
action, orbit dimensions, degenerations along Laurent families, the
catalog of low-dimensional algebras, fingerprints and identification."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from importlib import resources
from itertools import combinations, product

import numpy as np

from . import linalg
from .algebra import (StructureConstants, act_basis_change, canonical, center, check_nambu, derived_algebra,
                      intersect_spaces, nambu_relations, span_bracket)
from .cohomology import cohomology_dims
from .exact import RationalFunction, UniPoly, evaluate_expression, rational_roots_of_power

__all__ = ["variety_residuals", "act_basis_change", "orbit_dimensions", "LaurentFamily",
           "degenerate", "catalog", "CatalogEntry", "fingerprint", "Fingerprint", "identify",
           "similar_up_to_scalar", "weighted_scaling_equivalent", "random_basis_change"]


def variety_residuals(A: StructureConstants):
    """All defining polynomials of the variety evaluated at A (zeros included)."""
    return nambu_relations(A, include_zero=True)


def orbit_dimensions(A: StructureConstants):
    """(dim Z^2, dim B^2, dim Der, dim of the GL(m) orbit = m^2 - dim Der)."""
    z2 = cohomology_dims(A, 2)
    der = cohomology_dims(A, 1).dim_Z
    return {"dim_Z2": z2.dim_Z, "dim_B2": z2.dim_B, "dim_Der": der,
            "orbit_dim": A.m * A.m - der}


def random_basis_change(m, rng: random.Random, spread=1):
    """A random integer matrix with determinant +-1: a product of a signed
    permutation and elementary shears."""
    perm = list(range(m))
    rng.shuffle(perm)
    M = [[(rng.choice((1, -1)) if perm[i] == j else 0) for j in range(m)] for i in range(m)]
    for _ in range(2 * m if m > 1 else 0):
        i, j = rng.sample(range(m), 2)
        c = rng.randint(-spread, spread)
        for k in range(m):
            M[i][k] += c * M[j][k]
    return np.array([[Fraction(x) for x in row] for row in M], dtype=object)


# ------------------------------------------------------------ degenerations

class LaurentFamily:
    """Invertible m x m matrix f_t with entries rational functions of t."""

    def __init__(self, entries, var="t"):
        rows = []
        for row in entries:
            r = []
            for x in row:
                if isinstance(x, str):
                    x = evaluate_expression(x, {var: UniPoly.x(var)})
                if isinstance(x, (int, Fraction)):
                    x = RationalFunction(UniPoly((x,), var))
                elif isinstance(x, UniPoly):
                    x = RationalFunction(x)
                r.append(x)
            rows.append(r)
        self.var = var
        self.matrix = rows
        if linalg.generic_det(rows) == 0:
            raise ValueError("family is not invertible for generic t")

    @classmethod
    def diagonal(cls, entries, var="t"):
        m = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(m)] for i in range(m)], var)

    @property
    def m(self):
        return len(self.matrix)


@dataclass
class NoLimit:
    """The limit t -> 0 does not exist; ``poles`` lists (key, output index,
    pole order) for the offending structure constants (0-based)."""
    poles: list

    def as_dict(self):
        return {"poles": [{"args": [i + 1 for i in k], "index": s + 1, "order": o}
                          for k, s, o in self.poles]}


def degenerate(F: LaurentFamily, A: StructureConstants):
    """lim_{t->0} f_t^{-1}[f_t x_1, .., f_t x_n]: a StructureConstants, or
    NoLimit reporting the pole orders."""
    if F.m != A.m:
        raise ValueError("family has the wrong size")
    f = F.matrix
    finv = linalg.generic_inverse(F.matrix)
    m, n = A.m, A.n
    cols = [[(i, f[i][j]) for i in range(m) if not f[i][j].is_zero()] for j in range(m)]
    zero = RationalFunction(UniPoly((), F.var))
    T = {}
    for key in combinations(range(m), n):
        # [f e_k1, .., f e_kn] expanded over the nonzero column entries
        acc = [zero] * m
        for choice in product(*(cols[k] for k in key)):
            ckey, sgn = canonical(tuple(i for i, _ in choice))
            if not sgn or ckey not in A.table:
                continue
            coef = choice[0][1]
            for _, x in choice[1:]:
                coef = coef * x
            if sgn < 0:
                coef = -coef
            for w, c in enumerate(A.value(ckey)):
                if c != 0:
                    acc[w] = acc[w] + coef * c
        T[key] = [sum((finv[s][w] * acc[w] for w in range(m) if not acc[w].is_zero()), zero)
                  for s in range(m)]
    poles = []
    table = {}
    for key in combinations(range(A.m), A.n):
        vec = []
        for s, x in enumerate(T[key]):
            if x.den(0) == 0:
                poles.append((key, s, x.pole_order_at_zero()))
                vec.append(None)
            else:
                vec.append(x(0))
        table[key] = vec
    if poles:
        return NoLimit(poles)
    return StructureConstants(A.n, A.m, {k: tuple(v) for k, v in table.items()})


# ---------------------------------------------------------------- catalog

@lru_cache(maxsize=1)
def _catalog_data():
    text = resources.files("nlie").joinpath("data/catalog.json").read_text()
    return json.loads(text)


def _ev_int(expr, env):
    v = evaluate_expression(str(expr), env)
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v)
    raise ValueError(f"{expr!r} is not an integer")


def _expand_args(pattern, omit, env):
    out = []
    for item in pattern.split(","):
        item = item.strip()
        if ".." in item:
            lo, hi = item.split("..")
            out.extend(range(_ev_int(lo, env), _ev_int(hi, env) + 1))
        else:
            out.append(_ev_int(item, env))
    if omit is not None:
        o = _ev_int(omit, env)
        out = [x for x in out if x != o]
    return out


def _loop(spec, env):
    if not spec:
        yield dict(env)
        return
    (var, (lo, hi)), = spec.items()
    for i in range(_ev_int(lo, env), _ev_int(hi, env) + 1):
        e = dict(env)
        e[var] = i
        yield e


def _fmt(template, env):
    return template.format(**{k: v for k, v in env.items() if isinstance(v, int)})


@dataclass(frozen=True)
class ParamSpec:
    name: str
    nonzero: bool = False
    exclude: tuple = ()


class CatalogEntry:
    """One family of the classification, with n (and r) fixed."""

    def __init__(self, raw, n, m, r=None):
        self.raw = raw
        self.theorem = raw["theorem"]
        self.case = raw["case"]
        self.n, self.m, self.r = n, m, r
        self.env = {"n": n, "m": m}
        if r is not None:
            self.env["r"] = r
        params = []
        for p in raw.get("params", []):
            for e in _loop(p.get("for"), self.env):
                params.append(ParamSpec(_fmt(p["name"], e), p.get("nonzero", False),
                                        tuple(Fraction(evaluate_expression(x)) for x in p.get("exclude", []))))
        self.params = params
        self.constraints = list(raw.get("constraints", []))

    @property
    def id(self):
        base = f"{self.theorem}:{self.case}"
        return base + (f"[r={self.r}]" if self.r is not None else "")

    @property
    def param_names(self):
        return [p.name for p in self.params]

    @property
    def is_parametric(self):
        return bool(self.params)

    def admissible(self, values):
        for p in self.params:
            v = values[p.name]
            if p.nonzero and v == 0:
                return False
            if v in p.exclude:
                return False
        env = dict(self.env)
        env.update(values)
        return all(evaluate_expression(c, env) for c in self.constraints)

    def random_params(self, rng: random.Random):
        pool = [Fraction(a, b) for a in range(-4, 5) for b in (1, 2, 3)]
        for _ in range(1000):
            vals = {p.name: rng.choice(pool) for p in self.params}
            if self.admissible(vals):
                return vals
        raise RuntimeError("could not draw admissible parameters")

    def default_params(self):
        vals = {p.name: Fraction(1) for p in self.params}
        if self.admissible(vals):
            return vals
        return self.random_params(random.Random(0))

    def instantiate(self, params=None) -> StructureConstants:
        params = dict(params or {})
        if self.params:
            missing = [p for p in self.param_names if p not in params]
            if missing:
                raise ValueError(f"missing parameters {missing}")
            params = {k: Fraction(v) if not isinstance(v, Fraction) else v for k, v in params.items()}
            if not self.admissible(params):
                raise ValueError(f"inadmissible parameters for {self.id}: {params}")
        brackets = {}
        for b in self.raw["brackets"]:
            for e in _loop(b.get("for"), self.env):
                args = tuple(_expand_args(b["args"], b.get("omit"), e))
                if len(args) != self.n:
                    raise ValueError(f"{self.id}: pattern gives {len(args)} arguments")
                val = {}
                for k, expr in b["value"].items():
                    env = dict(e)
                    env.update(params)
                    val[_ev_int(k, e)] = evaluate_expression(_fmt(expr, e), env)
                acc = brackets.setdefault(args, {})
                for k, v in val.items():
                    acc[k] = acc.get(k, 0) + v
        return StructureConstants.from_brackets(self.n, self.m, brackets)

    def __repr__(self):
        return f"CatalogEntry({self.id}, n={self.n}, m={self.m}, params={self.param_names})"


def _dims_of(raw, n):
    d = raw["dim"]
    if ".." in d:
        lo, hi = d.split("..")
        return list(range(_ev_int(lo, {"n": n}), _ev_int(hi, {"n": n}) + 1))
    return [_ev_int(d, {"n": n})]


def catalog(n: int, m: int):
    """Catalog entries of arity n and dimension m (empty when m > n+2)."""
    if n < 2:
        raise ValueError("arity must be at least 2")
    out = []
    for raw in _catalog_data()["entries"]:
        if m not in _dims_of(raw, n):
            continue
        disc = raw.get("discrete")
        if disc:
            (var, (lo, hi)), = disc.items()
            for r in range(_ev_int(lo, {"n": n}), _ev_int(hi, {"n": n}) + 1):
                out.append(CatalogEntry(raw, n, m, r))
        else:
            out.append(CatalogEntry(raw, n, m))
    return out


def catalog_entry(entry_id, n, m):
    for e in catalog(n, m):
        if e.id == entry_id:
            return e
    raise KeyError(entry_id)


# ----------------------------------------------------------- fingerprints

@dataclass(frozen=True)
class Fingerprint:
    dim_N1: int
    dim_Z: int
    dim_Der: int
    dim_Z2: int
    dim_B2: int
    dim_H2: int

    def as_dict(self):
        return dict(self.__dict__)


def fingerprint(A: StructureConstants) -> Fingerprint:
    c2 = cohomology_dims(A, 2)
    der = cohomology_dims(A, 1).dim_Z
    return Fingerprint(len(derived_algebra(A)), len(center(A)), der, c2.dim_Z, c2.dim_B, c2.dim_H)


# ------------------------------------------------------ matrix similarity

def _uni(coeffs):
    return UniPoly(coeffs, "x")


def invariant_factors(M):
    """Invariant factors of xI - M over Q[x] (monic UniPolys, trivial ones
    dropped), via gcds of k x k minors."""
    M = np.asarray(M, dtype=object)
    k = M.shape[0]
    X = [[(_uni((0, 1)) if i == j else _uni(())) - _uni((M[i, j],)) for j in range(k)] for i in range(k)]
    from .exact import determinant
    divisors = [_uni((1,))]
    for size in range(1, k + 1):
        g = _uni(())
        for rows in combinations(range(k), size):
            for cols in combinations(range(k), size):
                d = determinant([[X[r][c] for c in cols] for r in rows])
                g = d.monic() if g.is_zero() else g.gcd(d)
                if g == 1:
                    break
            if g == 1:
                break
        divisors.append(g.monic())
    factors = [divisors[i] // divisors[i - 1] for i in range(1, k + 1)]
    return [f for f in factors if f.degree() > 0]


def similar(M1, M2):
    M1 = np.asarray(M1, dtype=object)
    M2 = np.asarray(M2, dtype=object)
    if M1.shape != M2.shape:
        return False
    return invariant_factors(M1) == invariant_factors(M2)


def similar_up_to_scalar(C1, C2):
    """A nonzero rational alpha with C2 similar to alpha*C1, or None.  The
    characteristic coefficients scale as c_j(alpha C) = alpha^j c_j(C), which
    pins alpha down to finitely many candidates."""
    C1 = linalg.to_fraction_array(C1)
    C2 = linalg.to_fraction_array(C2)
    if C1.shape != C2.shape:
        return None
    k = C1.shape[0]
    p1 = linalg.charpoly(C1)[::-1]        # p[j] = coefficient of x^{k-j}
    p2 = linalg.charpoly(C2)[::-1]
    cands = None
    for j in range(1, k + 1):
        if p1[j] != 0:
            if p2[j] == 0:
                return None
            cands = rational_roots_of_power(p2[j] / p1[j], j)
            break
        if p2[j] != 0:
            return None
    if cands is None:
        cands = [Fraction(1)]
    for a in cands:
        if a == 0:
            continue
        if all(p2[j] == a ** j * p1[j] for j in range(k + 1)) and similar(a * C1, C2):
            return a
    return None


def weighted_scaling_equivalent(p1, p2):
    """A nonzero r with (s, t, u) = (r^3 s', r^2 t', r u'), or None."""
    s, t, u = (Fraction(x) for x in p1)
    s2, t2, u2 = (Fraction(x) for x in p2)
    cands = None
    for val, val2, w in ((u, u2, 1), (t, t2, 2), (s, s2, 3)):
        if val2 != 0:
            cands = rational_roots_of_power(val / val2, w)
            break
        if val != 0:
            return None
    if cands is None:
        return Fraction(1)
    for r in cands:
        if r != 0 and (s, t, u) == (r ** 3 * s2, r ** 2 * t2, r * u2):
            return r
    return None


def catalog_isomorphic(entry: CatalogEntry, p1, p2):
    """Isomorphism criterion inside a parametric family (3d and 4g)."""
    if entry.case == "3d" and entry.theorem == "le-n+1":
        # compare the operator L(e_1..e_{n-1}) on N^1 = <e_n, e_{n+1}>, i.e.
        # M = [[c, a], [d, b]]; similarity of C itself is not an invariant
        M1 = [[p1["c"], p1["a"]], [p1["d"], p1["b"]]]
        M2 = [[p2["c"], p2["a"]], [p2["d"], p2["b"]]]
        return similar_up_to_scalar(M1, M2) is not None
    if entry.case == "4g":
        return weighted_scaling_equivalent((p1["s"], p1["t"], p1["u"]), (p2["s"], p2["t"], p2["u"])) is not None
    raise ValueError(f"no criterion recorded for {entry.id}")


# ---------------------------------------------------------- identification

def _restrict(ops, U):
    """Matrices of operators (given on K^m, columns = images) restricted to
    the invariant subspace with row basis U, in coordinates of U."""
    U = np.asarray(U, dtype=object)
    out = []
    for M in ops:
        imgs = M.dot(U.T)                 # columns = images of basis vectors of U
        coords = []
        for j in range(U.shape[0]):
            x = linalg.solve(U.T, imgs[:, j])
            if x is None:
                raise ValueError("subspace is not invariant")
            coords.append(x)
        out.append(np.array(coords, dtype=object).T)
    return out


def _adjoint_ops(A):
    """Operators L(e_I) on K^m (columns = images) for all blocks."""
    T = A.tensor
    return [T[I].T.copy() for I in combinations(range(A.m), A.n - 1)]


def _span(mats):
    flat = [list(np.asarray(M, dtype=object).flat) for M in mats]
    if not flat:
        return []
    B = linalg.row_basis(np.array(flat, dtype=object))
    k = int(round(len(flat[0]) ** 0.5))
    return [np.array(list(r), dtype=object).reshape(k, k) for r in B]


class Invariants:
    """Isomorphism invariants of an n-Lie algebra, computed lazily."""

    def __init__(self, A: StructureConstants):
        self.A = A

    @cached_property
    def N1(self):
        return derived_algebra(self.A)

    @cached_property
    def Z(self):
        return center(self.A)

    @cached_property
    def basic(self):
        A = self.A
        N1, Z = self.N1, self.Z
        m = A.m
        full = linalg.identity(m)
        NN1 = intersect_spaces(N1, Z, m) if len(N1) and len(Z) else []
        derived2 = span_bracket(A, [N1] * A.n) if len(N1) else []
        lower2 = span_bracket(A, [N1] + [full] * (A.n - 1)) if len(N1) else []
        return (len(N1), len(Z), len(NN1), len(derived2), len(lower2))

    @cached_property
    def ops_on_N1(self):
        if not len(self.N1):
            return []
        return _span(_restrict(_adjoint_ops(self.A), self.N1))

    @cached_property
    def operator_data(self):
        S = self.ops_on_N1
        comm = []
        for a in S:
            for b in S:
                comm.append(a.dot(b) - b.dot(a))
        dimc = len(_span(comm)) if comm else 0
        return (len(S), dimc)

    @cached_property
    def cohomology(self):
        return fingerprint(self.A)

    def spectral_generator(self):
        S = self.ops_on_N1
        return S[0] if len(S) == 1 else None


def _same(a: Invariants, b: Invariants):
    if (a.A.n, a.A.m) != (b.A.n, b.A.m):
        return False
    if a.basic != b.basic or a.operator_data != b.operator_data:
        return False
    g1, g2 = a.spectral_generator(), b.spectral_generator()
    if g1 is not None:
        if similar_up_to_scalar(g1, g2) is None:
            return False
    return a.cohomology == b.cohomology


# parameter recovery: each returns a list of candidate parameter dicts

def _charpoly_top(M):
    return linalg.charpoly(M)[::-1]


def _recover(entry: CatalogEntry, inv: Invariants):
    if not entry.is_parametric:
        return [{}]
    case, th = entry.case, entry.theorem
    if th == "le-n+1" and case in ("3e", "3f"):
        return [{p: Fraction(1) for p in entry.param_names}]
    if th == "le-n+1" and case == "3d":
        M = inv.spectral_generator()
        if M is None or M.shape != (2, 2):
            return []
        tr = M[0, 0] + M[1, 1]
        det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
        if M[0, 1] == 0 and M[1, 0] == 0 and M[0, 0] == M[1, 1]:
            # scalar operator: a = d = 0, b = c = lambda in the recovered table
            lam = M[0, 0]
            return [{"a": Fraction(0), "b": lam, "c": lam, "d": Fraction(0)}]
        # operator on N^1 in basis (e_n, e_{n+1}) is [[c, a], [d, b]]; use its companion form
        return [{"a": -det, "b": tr, "c": Fraction(0), "d": Fraction(1)}]
    if case == "3e":
        M = inv.spectral_generator()
        if M is None or M.shape != (2, 2):
            return []
        tr = M[0, 0] + M[1, 1]
        det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
        if tr == 0:
            return []
        alpha = -det / (tr * tr)
        return [{"alpha": alpha}] if alpha != 0 else []
    if case == "3f":
        S = inv.ops_on_N1
        if len(S) != 2:
            return []
        # does the pencil contain a non-scalar element with a repeated eigenvalue?
        rep = False
        for M in S:
            if M[0, 1] == 0 and M[1, 0] == 0 and M[0, 0] == M[1, 1]:
                continue
            tr = M[0, 0] + M[1, 1]
            det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
            rep = tr * tr - 4 * det == 0
            break
        return [{"alpha": Fraction(-1, 4)}] if rep else [{"alpha": Fraction(2)}]
    if case == "4b":
        return _recover_4b(inv)
    if case == "4e":
        return _recover_4e(inv)
    if case == "4g":
        M = inv.spectral_generator()
        if M is None or M.shape != (3, 3):
            return []
        p = _charpoly_top(M)           # x^3 + p1 x^2 + p2 x + p3 = x^3 - u x^2 - t x - s
        u, t, s = -p[1], -p[2], -p[3]
        return [{"s": s, "t": t, "u": u}] if s != 0 else []
    return [entry.default_params()]


def _recover_4b(inv: Invariants):
    """alpha = -det(D') / lambda^2, with D' the action on N^1 / [N^1, N, .., N]
    of an operator whose eigenvalue on the complement line is lambda."""
    A = inv.A
    S = inv.ops_on_N1
    if len(S) < 1 or len(inv.N1) != 3:
        return []
    out = []
    for M in S:
        ev = linalg.charpoly(M)
        # M has the form diag(lambda, D') in a suitable basis; try rational eigenvalues
        poly = UniPoly(ev, "x")
        for lam in _rational_roots(poly):
            if lam == 0:
                continue
            q = poly // UniPoly((-lam, 1), "x")
            if q.degree() != 2:
                continue
            det_rest = q.coeffs[0]
            alpha = -det_rest / (lam * lam)
            if alpha != 0:
                out.append({"alpha": alpha})
    seen = []
    for o in out:
        if o not in seen:
            seen.append(o)
    return seen


def _recover_4e(inv: Invariants):
    M = inv.spectral_generator()
    if M is None or M.shape != (3, 3):
        return []
    cp = UniPoly(linalg.charpoly(M), "x")
    out = []
    # charpoly of the generator (up to scale) is (x - l1)(x^2 - e1 x + e2) with roots related by
    # beta; scan rational roots l1 and solve for beta from the quadratic factor
    for l1 in _rational_roots(cp):
        if l1 == 0:
            continue
        q = cp // UniPoly((-l1, 1), "x")
        if q.degree() != 2:
            continue
        # generator ~ l1 * D with D: e1 -> e1, e2 -> e3, e3 -> beta e2 + (1+beta) e3
        e1, e2 = -q.coeffs[1], q.coeffs[0]
        beta = e1 / l1 - 1
        if beta not in (0, 1) and e2 == -beta * l1 * l1:
            out.append({"beta": beta})
    return out


def _rational_roots(p: UniPoly):
    """Rational roots of a rational polynomial (rational root theorem)."""
    if p.is_zero() or p.degree() < 1:
        return []
    from math import lcm
    den = 1
    for c in p.coeffs:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    roots = set()
    v = 0
    while ints[v] == 0:
        v += 1
        roots.add(Fraction(0))
    ints = ints[v:]
    a0, an = abs(ints[0]), abs(ints[-1])

    def divisors(k):
        return [d for d in range(1, k + 1) if k % d == 0] if k else [1]
    for pnum in divisors(a0):
        for qden in divisors(an):
            for sg in (1, -1):
                r = Fraction(sg * pnum, qden)
                if UniPoly(ints, "x")(r) == 0:
                    roots.add(r)
    return sorted(roots)


@dataclass
class Match:
    entry: CatalogEntry
    params: dict = field(default_factory=dict)

    @property
    def id(self):
        return self.entry.id

    def as_dict(self):
        return {"id": self.entry.id, "theorem": self.entry.theorem, "case": self.entry.case,
                "r": self.entry.r, "params": {k: str(v) for k, v in self.params.items()}}


def identify(A: StructureConstants):
    """All catalog families consistent with A: for each family the
    parameters are recovered from basis-free data, the instance is built and
    its invariants are compared with those of A."""
    if check_nambu(A):
        raise ValueError("not an n-Lie algebra: the Nambu identity fails")
    inv = Invariants(A)
    out = []
    for entry in catalog(A.n, A.m):
        for params in _recover(entry, inv):
            try:
                inst = entry.instantiate(params)
            except ValueError:
                continue
            if check_nambu(inst):
                continue
            if _same(inv, Invariants(inst)):
                out.append(Match(entry, params))
                break
    return out
