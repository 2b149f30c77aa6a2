"""Polynomial and operator models of ternary brackets.

* the Jacobian bracket on polynomials in three variables, the Poisson
  (Leibniz rule) axioms and Hamiltonian evolution;
* the ternary Virasoro-Witt family with parameter z;
* the ternary commutator of an associative product and the operator model
  E_m = e^{imx}, L_m = e^{imx}(D + lam m), D = -i d/dx.
"""
from __future__ import annotations

import itertools
import operator
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import linalg
from .exact import MultiPoly, UniPoly, determinant

VARS = ("x1", "x2", "x3")


# ------------------------------------------------------------ Jacobian bracket

def monomials(max_degree: int, names=VARS) -> list:
    """All monic monomials of total degree <= max_degree, graded order."""
    k = len(names)
    out = []
    for d in range(max_degree + 1):
        for e in sorted((e for e in itertools.product(range(d + 1), repeat=k) if sum(e) == d),
                        reverse=True):
            out.append(MultiPoly({e: 1}, names))
    return out


def jacobian_bracket(*fs) -> MultiPoly:
    """det(d f_i / d x_j); needs as many functions as variables."""
    if not fs:
        raise ValueError("no arguments")
    k = fs[0].nvars
    if len(fs) != k or any(f.nvars != k for f in fs):
        raise ValueError(f"the Jacobian bracket needs {k} polynomials in {k} variables")
    out = determinant([f.gradient() for f in fs])
    if not isinstance(out, MultiPoly):
        out = MultiPoly.const(out, fs[0].names)
    return out


def hamiltonian_derivative(f, *H) -> MultiPoly:
    """df/dt = {H_1, .., H_{n-1}, f}."""
    return jacobian_bracket(*H, f)


def is_integral_of_motion(f, *H) -> bool:
    return hamiltonian_derivative(f, *H).is_zero()


def integrals_of_motion(H, max_degree: int) -> list:
    """Basis of the polynomial integrals of motion of degree <= max_degree."""
    names = H[0].names
    basis = monomials(max_degree, names)
    images = [hamiltonian_derivative(b, *H) for b in basis]
    keys = sorted({e for p in images for e in p.terms})
    if not keys:
        return basis
    M = np.array([[p.terms.get(e, 0) for p in images] for e in keys], dtype=object)
    out = []
    for v in linalg.nullspace(M):
        t = {}
        for c, b in zip(v, basis):
            if c:
                (e,) = b.terms
                t[e] = c
        out.append(MultiPoly(t, names))
    return out


@dataclass
class PoissonReport:
    skew: list = field(default_factory=list)      # (indices, permutation)
    nambu: list = field(default_factory=list)     # (pair, triple[, residual])
    leibniz: list = field(default_factory=list)   # (f, g, f2, f3) indices
    checked: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not (self.skew or self.nambu or self.leibniz)

    def as_dict(self):
        return {"skew": [list(map(list, s)) for s in self.skew],
                "nambu": [[list(a), list(b)] for a, b, *_ in self.nambu],
                "leibniz": [list(x) for x in self.leibniz],
                "checked": dict(self.checked)}


def _skew_failures(sample, bracket, limit):
    out = []
    cache = {}

    def br(idx):
        if idx not in cache:
            cache[idx] = bracket(*(sample[i] for i in idx))
        return cache[idx]

    n = len(sample)
    for idx in itertools.combinations(range(n), 3):
        base = br(idx)
        for perm in itertools.permutations(range(3)):
            sign = linalg_sign(perm)
            pidx = tuple(idx[p] for p in perm)
            if br(pidx) != (base if sign > 0 else -base):
                out.append((idx, perm))
                break
        if len(out) >= limit:
            return out
    for i in range(n):
        for j in range(n):
            for slot in ((i, i, j), (i, j, i), (j, i, i)):
                if not br(slot).is_zero():
                    out.append(((i, j), slot))
                    break
            if len(out) >= limit:
                return out
    return out


def linalg_sign(perm) -> int:
    s = 1
    p = list(perm)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def _nambu_symbolic(sample, bracket, limit):
    out = []
    n = len(sample)
    triples = list(itertools.combinations(range(n), 3))
    inner = {t: bracket(*(sample[i] for i in t)) for t in triples}
    for a, b in itertools.combinations(range(n), 2):
        f1, f2 = sample[a], sample[b]
        act = [bracket(f1, f2, g) for g in sample]
        for t in triples:
            g = [sample[i] for i in t]
            lhs = bracket(f1, f2, inner[t])
            rhs = (bracket(act[t[0]], g[1], g[2]) + bracket(g[0], act[t[1]], g[2])
                   + bracket(g[0], g[1], act[t[2]]))
            r = lhs - rhs
            if not r.is_zero():
                out.append(((a, b), t, r))
                if len(out) >= limit:
                    return out
    return out


def _monomial_values(points, exps):
    """V[p, e] = prod points[p]**exps[e]."""
    P = np.asarray(points, dtype=np.int64)
    E = np.asarray(exps, dtype=np.int64)
    V = np.ones((len(P), len(E)), dtype=np.int64)
    for a in range(P.shape[1]):
        V *= P[:, a:a + 1] ** E[None, :, a]
    return V


def _grad_values(polys, points):
    """G[j, p, a] = d_a polys[j] at points[p]; integer coefficients only."""
    grads = [[q.partial(a) for a in range(3)] for q in polys]
    exps = sorted({e for gs in grads for q in gs for e in q.terms}) or [(0, 0, 0)]
    col = {e: i for i, e in enumerate(exps)}
    C = np.zeros((len(polys), 3, len(exps)), dtype=np.int64)
    for j, gs in enumerate(grads):
        for a, q in enumerate(gs):
            for e, c in q.terms.items():
                if not isinstance(c, int):
                    raise ValueError("grid check needs integer coefficients")
                C[j, a, col[e]] = c
    V = _monomial_values(points, exps)
    return np.einsum("jae,pe->jpa", C, V)


def _nambu_grid(sample, limit):
    """Nambu identity for the Jacobian bracket by exact evaluation of both
    sides at a tensor grid.  A polynomial of total degree <= D vanishing on
    S^3 with |S| = D + 1 is zero, so the test is exact.  Inner brackets and
    the [f1, f2, g] are formed as polynomials; only the outer determinants
    are evaluated pointwise."""
    if len(sample) < 3:
        return []
    d = max(q.degree() for q in sample)
    D = max(5 * d - 6, 0)
    S = list(range(-(D // 2), D + 1 - D // 2))
    points = list(itertools.product(S, repeat=3))
    n = len(sample)
    triples = list(itertools.combinations(range(n), 3))
    t0, t1, t2 = (np.array([t[i] for t in triples]) for i in range(3))

    G = _grad_values(sample, points)                          # (n, P, 3)
    inner = [jacobian_bracket(*(sample[i] for i in t)) for t in triples]
    GJ = _grad_values(inner, points)                          # (T, P, 3)
    C12 = np.cross(G[t1], G[t2])
    C20 = np.cross(G[t2], G[t0])
    C01 = np.cross(G[t0], G[t1])
    bound = 2 ** 62
    for arr in (G, GJ, C12):
        if np.abs(arr).max(initial=0) >= 2 ** 30:
            raise OverflowError("grid values too large for int64")

    out = []
    for a, b in itertools.combinations(range(n), 2):
        f1, f2 = sample[a], sample[b]
        V = np.cross(G[a], G[b])                              # (P, 3)
        lhs = np.einsum("pa,tpa->tp", V, GJ)
        act = [jacobian_bracket(f1, f2, g) for g in sample]
        GW = _grad_values(act, points)
        if np.abs(V).max(initial=0) * np.abs(GJ).max(initial=0) * 3 >= bound or \
                np.abs(GW).max(initial=0) * np.abs(C12).max(initial=0) * 9 >= bound:
            raise OverflowError("grid values too large for int64")
        rhs = (np.einsum("tpa,tpa->tp", GW[t0], C12) + np.einsum("tpa,tpa->tp", GW[t1], C20)
               + np.einsum("tpa,tpa->tp", GW[t2], C01))
        bad = np.nonzero((lhs != rhs).any(axis=1))[0]
        for t in bad:
            out.append(((a, b), triples[t]))
            if len(out) >= limit:
                return out
    return out


def _leibniz_failures(sample, bracket, limit):
    out = []
    n = len(sample)
    cache = {}

    def br(f, *idx):
        key = (f,) + idx
        if key not in cache:
            first = f if isinstance(f, MultiPoly) else sample[f]
            cache[key] = bracket(first, *(sample[i] for i in idx))
        return cache[key]

    for i, j in itertools.product(range(n), repeat=2):
        fg = sample[i] * sample[j]
        for k, l in itertools.product(range(n), repeat=2):
            lhs = bracket(fg, sample[k], sample[l])
            rhs = sample[i] * br(j, k, l) + br(i, k, l) * sample[j]
            if lhs != rhs:
                out.append((i, j, k, l))
                if len(out) >= limit:
                    return out
    return out


def check_poisson_axioms(sample, leibniz_degree: int = 2, bracket=None,
                         method: str = "auto", limit: int = 50) -> PoissonReport:
    """Skew-symmetry and the Nambu identity on the sample (5-tuples taken up
    to skew symmetry), and the Leibniz rule
    {f g, f2, f3} = f {g, f2, f3} + {f, f2, f3} g for all f, g, f2, f3 in the
    sample of degree <= leibniz_degree.  ``bracket`` defaults to the
    Jacobian; ``method`` 'grid' (Jacobian only) or 'symbolic'."""
    sample = list(sample)
    rep = PoissonReport()
    jac = bracket is None
    bracket = bracket or jacobian_bracket
    if not sample:
        return rep
    rep.skew = _skew_failures(sample, bracket, limit)
    use_grid = method == "grid" or (method == "auto" and jac and sample[0].nvars == 3
                                    and all(all(isinstance(c, int) for c in q.terms.values())
                                            for q in sample))
    if use_grid and not jac:
        raise ValueError("the grid method applies to the Jacobian bracket only")
    rep.nambu = _nambu_grid(sample, limit) if use_grid else _nambu_symbolic(sample, bracket, limit)
    low = [q for q in sample if q.degree() <= leibniz_degree]
    rep.leibniz = _leibniz_failures(low, bracket, limit)
    from math import comb
    rep.checked = {"triples": comb(len(sample), 3), "nambu_tuples": comb(len(sample), 2) * comb(len(sample), 3),
                   "leibniz_tuples": len(low) ** 4, "method": "grid" if use_grid else "symbolic"}
    return rep


# ------------------------------------------------------- ternary Virasoro-Witt

@dataclass(frozen=True, order=True)
class GradedGenerator:
    kind: str
    index: int

    def __str__(self):
        return f"{self.kind}{self.index}"


class GradedElement:
    """Finite sum of generators with polynomial coefficients in one variable."""

    __slots__ = ("terms", "var")

    def __init__(self, terms=None, var="z"):
        self.var = var
        self.terms = {}
        for g, c in (terms or {}).items():
            c = c if isinstance(c, UniPoly) else UniPoly.const(c, var)
            if not c.is_zero():
                self.terms[g] = c

    @classmethod
    def gen(cls, kind, index, var="z"):
        return cls({GradedGenerator(kind, index): UniPoly.const(1, var)}, var)

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        t = dict(self.terms)
        for g, c in other.terms.items():
            v = t.get(g)
            v = c if v is None else v + c
            if v.is_zero():
                t.pop(g, None)
            else:
                t[g] = v
        out = GradedElement(var=self.var)
        out.terms = t
        return out

    def __neg__(self):
        out = GradedElement(var=self.var)
        out.terms = {g: -c for g, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return GradedElement({g: v * c for g, v in self.terms.items()}, self.var)

    def __eq__(self, other):
        if isinstance(other, GradedElement):
            return self.terms == other.terms
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c}){g}" for g, c in sorted(self.terms.items()))


def _sort_kinds(gens, order):
    """Stable sort by kind rank; returns (sorted, sign)."""
    idx = sorted(range(len(gens)), key=lambda i: (order[gens[i].kind], i))
    sign = linalg_sign(idx)
    return [gens[i] for i in idx], sign


@lru_cache(maxsize=None)
def _vw_generators(g1, g2, g3, var):
    """[g1, g2, g3] on generators: tuple of (generator, UniPoly)."""
    (a, b, c), sign = _sort_kinds([g1, g2, g3], {"Q": 0, "R": 1})
    kinds = a.kind + b.kind + c.kind
    k, m, n = a.index, b.index, c.index
    N = k + m + n
    z = UniPoly.x(var)
    if kinds == "QQQ":
        out = {GradedGenerator("R", N): UniPoly.const((k - m) * (m - n) * (k - n), var)}
    elif kinds == "QQR":
        out = {GradedGenerator("Q", N): UniPoly.const(k - m, var),
               GradedGenerator("R", N): z * ((k - m) * n)}
    elif kinds == "QRR":
        out = {GradedGenerator("R", N): UniPoly.const(n - m, var)}
    else:
        out = {}
    return tuple((g, v * sign) for g, v in out.items() if not v.is_zero())


def virasoro_witt_bracket(a: GradedElement, b: GradedElement, c: GradedElement) -> GradedElement:
    """Trilinear skew extension of
    [Q_k,Q_m,Q_n] = (k-m)(m-n)(k-n) R_{k+m+n},
    [Q_k,Q_m,R_n] = (k-m)(Q_{k+m+n} + z n R_{k+m+n}),
    [Q_k,R_m,R_n] = (n-m) R_{k+m+n},  [R_k,R_m,R_n] = 0."""
    var = a.var
    acc = {}
    for (g1, c1), (g2, c2), (g3, c3) in itertools.product(a.terms.items(), b.terms.items(),
                                                          c.terms.items()):
        coef = c1 * c2 * c3
        for g, v in _vw_generators(g1, g2, g3, var):
            w = acc.get(g)
            w = v * coef if w is None else w + v * coef
            acc[g] = w
    return GradedElement(acc, var)


def nambu_residual(bracket, x1, x2, y1, y2, y3):
    """[x1,x2,[y1,y2,y3]] - sum_i [.., [x1,x2,y_i], ..]."""
    lhs = bracket(x1, x2, bracket(y1, y2, y3))
    rhs = (bracket(bracket(x1, x2, y1), y2, y3) + bracket(y1, bracket(x1, x2, y2), y3)
           + bracket(y1, y2, bracket(x1, x2, y3)))
    return lhs - rhs


def virasoro_witt_generators(window: int, var="z"):
    return [GradedElement.gen(k, i, var) for k in ("Q", "R") for i in range(-window, window + 1)]


def virasoro_witt_residuals(window: int = 3, var="z"):
    """All nonzero Nambu residuals on generator tuples with indices in
    [-W, W]: list of ((pair), (triple), GradedElement).  Tuples are taken
    up to the skew symmetry of the bracket."""
    if window < 0:
        raise ValueError("window must be >= 0")
    gens = virasoro_witt_generators(window, var)
    br = virasoro_witt_bracket
    triples = list(itertools.combinations(range(len(gens)), 3))
    inner = {t: br(*(gens[k] for k in t)) for t in triples}
    out = []
    for i, j in itertools.combinations(range(len(gens)), 2):
        x1, x2 = gens[i], gens[j]
        act = [br(x1, x2, g) for g in gens]
        for t in triples:
            y = [gens[k] for k in t]
            r = br(x1, x2, inner[t]) - (br(act[t[0]], y[1], y[2]) + br(y[0], act[t[1]], y[2])
                                        + br(y[0], y[1], act[t[2]]))
            if not r.is_zero():
                out.append(((i, j), t, r))
    return gens, out


def virasoro_witt_nambu_residual(window: int = 3, var="z") -> list:
    """Distinct nonzero residual coefficients (UniPoly in z), normalized to
    be monic, in a deterministic order."""
    _, res = virasoro_witt_residuals(window, var)
    seen = {}
    for _, _, r in res:
        for c in r.terms.values():
            mc = c.monic()
            seen[mc.coeffs] = mc
    return [seen[k] for k in sorted(seen, key=lambda k: (len(k), k))]


@dataclass
class VirasoroReport:
    window: int
    residual_count: int
    polynomials: list
    not_divisible: list
    nonzero_at_zero: int

    @property
    def all_divisible(self):
        return not self.not_divisible

    def as_dict(self):
        return {"window": self.window, "residual_count": self.residual_count,
                "polynomials": [str(p) for p in self.polynomials],
                "not_divisible": [str(p) for p in self.not_divisible],
                "nonzero_at_zero": self.nonzero_at_zero,
                "all_divisible_by_z^2+4": self.all_divisible}


def virasoro_check(window: int = 3) -> VirasoroReport:
    _, res = virasoro_witt_residuals(window)
    target = UniPoly((4, 0, 1), "z")
    polys = virasoro_witt_nambu_residual(window)
    bad = [p for p in polys if not (p % target).is_zero()]
    at0 = sum(1 for _, _, r in res if any(c(0) != 0 for c in r.terms.values()))
    return VirasoroReport(window, len(res), polys, bad, at0)


# ------------------------------------------------------------ ternary commutator

def ternary_commutator(x, y, z, mul=operator.mul):
    """x(yz) - x(zy) + y(zx) - y(xz) + z(xy) - z(yx)."""
    return (mul(x, mul(y, z)) - mul(x, mul(z, y)) + mul(y, mul(z, x))
            - mul(y, mul(x, z)) + mul(z, mul(x, y)) - mul(z, mul(y, x)))


# ------------------------------------------------------ differential operators

OPVARS = ("D", "lam")


def _opoly(c):
    return c if isinstance(c, MultiPoly) else MultiPoly.const(c, OPVARS)


class DiffOpSymbol:
    """sum_m e^{imx} p_m(D, lam) with D = -i d/dx."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for m, p in (terms or {}).items():
            p = _opoly(p)
            if not p.is_zero():
                self.terms[int(m)] = p

    D = MultiPoly.var(0, OPVARS)
    lam = MultiPoly.var(1, OPVARS)

    @classmethod
    def E(cls, m):
        return cls({m: 1})

    @classmethod
    def L(cls, m):
        return cls({m: cls.D + cls.lam * m})

    @classmethod
    def S(cls, m):
        return cls({m: (cls.D + cls.lam * m) ** 2})

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        t = dict(self.terms)
        for m, p in other.terms.items():
            t[m] = t[m] + p if m in t else p
        return DiffOpSymbol(t)

    def __neg__(self):
        return DiffOpSymbol({m: -p for m, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, DiffOpSymbol):
            return diffop_multiply(self, other)
        return DiffOpSymbol({m: p * other for m, p in self.terms.items()})

    __rmul__ = lambda self, c: DiffOpSymbol({m: p * c for m, p in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, DiffOpSymbol) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"e^{{i{m}x}}({p})" for m, p in sorted(self.terms.items()))


def diffop_multiply(a: DiffOpSymbol, b: DiffOpSymbol) -> DiffOpSymbol:
    """e^{imx}p(D) . e^{inx}q(D) = e^{i(m+n)x} p(D+n) q(D), from
    D e^{inx} = e^{inx}(D + n)."""
    acc = {}
    for m, p in a.terms.items():
        for n, q in b.terms.items():
            v = p.shift(0, n) * q
            acc[m + n] = acc[m + n] + v if m + n in acc else v
    return DiffOpSymbol(acc)


def commutator(a, b, mul=operator.mul):
    return mul(a, b) - mul(b, a)


def split_LE(op: DiffOpSymbol, N: int):
    """Write op = alpha L_N + beta E_N with alpha, beta in Q[lam]; None if op
    is not of that shape."""
    if not op.terms:
        return MultiPoly.const(0, OPVARS), MultiPoly.const(0, OPVARS)
    if set(op.terms) != {N}:
        return None
    p = op.terms[N]
    if any(e[0] > 1 for e in p.terms):
        return None
    alpha = MultiPoly({e: c for e, c in p.terms.items() if e[0] == 1}, OPVARS)
    alpha = MultiPoly({(0, e[1]): c for e, c in alpha.terms.items()}, OPVARS)
    const = MultiPoly({e: c for e, c in p.terms.items() if e[0] == 0}, OPVARS)
    beta = const - alpha * DiffOpSymbol.lam * N
    return alpha, beta


def _lam_poly(f):
    """Callable coefficient of lam -> MultiPoly."""
    return _opoly(f)


def displayed_ternary(kinds: str, k, m, n):
    """Expected (alpha, beta) for [X_k, Y_m, Z_n] with kinds in L/E sorted
    L first: the four lambda-bracket formulas."""
    lam = DiffOpSymbol.lam
    zero = _opoly(0)
    if kinds == "LLL":
        return zero, (lam - lam * lam) * ((k - m) * (m - n) * (n - k))
    if kinds == "LLE":
        return _opoly(m - k), (1 - 2 * lam) * ((m - k) * n)
    if kinds == "LEE":
        return zero, _opoly(m - n)
    return zero, zero


class RootLocal:
    """Element num / u^k of Q[lam, q]/(q^4 - u) localized at u = lam - lam^2;
    q stands for the fourth root of lam(1 - lam).  The quotient ring is a
    domain (q^4 - u is irreducible), so equality is cross multiplication."""

    NAMES = ("lam", "q")
    __slots__ = ("num", "k")

    def __init__(self, num, k=0):
        num = num if isinstance(num, MultiPoly) else MultiPoly.const(num, self.NAMES)
        self.num = num.reduce_power(1, 4, self.u())
        self.k = k

    @classmethod
    def u(cls):
        lam = MultiPoly.var(0, cls.NAMES)
        return lam - lam * lam

    @classmethod
    def lam(cls):
        return cls(MultiPoly.var(0, cls.NAMES))

    @classmethod
    def q(cls):
        return cls(MultiPoly.var(1, cls.NAMES))

    @classmethod
    def q_inv(cls):
        return cls(MultiPoly.var(1, cls.NAMES) ** 3, 1)

    def _c(self, o):
        return o if isinstance(o, RootLocal) else RootLocal(o)

    def __add__(self, o):
        o = self._c(o)
        k = max(self.k, o.k)
        u = self.u()
        return RootLocal(self.num * u ** (k - self.k) + o.num * u ** (k - o.k), k)

    __radd__ = __add__

    def __neg__(self):
        return RootLocal(-self.num, self.k)

    def __sub__(self, o):
        return self + (-self._c(o))

    def __rsub__(self, o):
        return self._c(o) - self

    def __mul__(self, o):
        o = self._c(o)
        return RootLocal(self.num * o.num, self.k + o.k)

    __rmul__ = __mul__

    def __eq__(self, o):
        o = self._c(o)
        u = self.u()
        return (self.num * u ** o.k - o.num * u ** self.k).reduce_power(1, 4, u).is_zero()

    def __repr__(self):
        return f"({self.num})/u^{self.k}" if self.k else f"({self.num})"


def _to_root(p: MultiPoly) -> RootLocal:
    """MultiPoly in (D, lam) with no D -> RootLocal."""
    t = {}
    for e, c in p.terms.items():
        if e[0]:
            raise ValueError("D-dependent coefficient")
        t[(e[1], 0)] = c
    return RootLocal(MultiPoly(t, RootLocal.NAMES))


def _horner(poly: UniPoly, x: RootLocal) -> RootLocal:
    acc = RootLocal(0)
    for c in reversed(poly.coeffs):
        acc = acc * x + c
    return acc


@dataclass
class LarssonReport:
    window: int
    binary_mismatches: list = field(default_factory=list)
    displayed_binary_failures: list = field(default_factory=list)
    ternary_mismatches: list = field(default_factory=list)
    substitution_mismatches: list = field(default_factory=list)
    z_sign: int = 0
    checked: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not (self.binary_mismatches or self.ternary_mismatches or self.substitution_mismatches)

    def as_dict(self):
        return {"window": self.window, "ok": self.ok,
                "binary_mismatches": [list(x) for x in self.binary_mismatches],
                "displayed_binary_failures": {k: sum(1 for x in self.displayed_binary_failures if x[0] == k)
                                              for k in ("EE", "LE")},
                "ternary_mismatches": [list(x) for x in self.ternary_mismatches],
                "substitution_mismatches": [list(x) for x in self.substitution_mismatches],
                "z_sign": self.z_sign, "checked": dict(self.checked)}


def _op(kind, m):
    return DiffOpSymbol.L(m) if kind == "L" else DiffOpSymbol.E(m)


def larsson_brackets(window: int = 3) -> LarssonReport:
    """Operator-model brackets of L_m, E_m for |m| <= window.

    Binary: [L_m,L_n] = (n-m)L_{m+n}, [L_m,E_n] = n E_{m+n}, [E_m,E_n] = 0
    (the displayed [E_m,E_n] = n E_{m+n}, [L_m,E_n] = 0 are tested too and
    their failures listed separately).  Ternary: the six-term commutator is
    compared with the four lambda formulas.  Substitution: with
    L = -q Q, E = q^{-1} R, q^4 = lam(1 - lam), the lambda brackets become
    the Virasoro-Witt brackets for z = z_sign (1 - 2 lam)/q^2; both signs
    are tried and the working one recorded."""
    rep = LarssonReport(window)
    idx = range(-window, window + 1)
    for m, n in itertools.product(idx, repeat=2):
        LL = commutator(DiffOpSymbol.L(m), DiffOpSymbol.L(n))
        LE = commutator(DiffOpSymbol.L(m), DiffOpSymbol.E(n))
        EE = commutator(DiffOpSymbol.E(m), DiffOpSymbol.E(n))
        if LL != DiffOpSymbol.L(m + n) * (n - m):
            rep.binary_mismatches.append(("LL", m, n))
        if LE != DiffOpSymbol.E(m + n) * n:
            rep.binary_mismatches.append(("LE", m, n))
        if not EE.is_zero():
            rep.binary_mismatches.append(("EE", m, n))
        if EE != DiffOpSymbol.E(m + n) * n:
            rep.displayed_binary_failures.append(("EE", m, n))
        if not LE.is_zero():
            rep.displayed_binary_failures.append(("LE", m, n))

    gens = [(kd, i) for kd in ("L", "E") for i in idx]
    lam_brackets = {}
    for (a, b, c) in itertools.combinations(gens, 3):
        op = ternary_commutator(_op(*a), _op(*b), _op(*c))
        N = a[1] + b[1] + c[1]
        got = split_LE(op, N)
        kinds = a[0] + b[0] + c[0]
        exp = displayed_ternary(kinds, a[1], b[1], c[1])
        if got is None or got[0] != exp[0] or got[1] != exp[1]:
            rep.ternary_mismatches.append((kinds, a[1], b[1], c[1]))
        lam_brackets[(a, b, c)] = got
    rep.checked = {"binary": len(idx) ** 2, "ternary": len(lam_brackets)}

    # substitution into the Virasoro-Witt brackets
    q, qi = RootLocal.q(), RootLocal.q_inv()
    lam = RootLocal.lam()
    to_vw = {"L": "Q", "E": "R"}
    factor = {"L": -qi, "E": q}            # Q = -q^{-1} L, R = q E
    for sign in (-1, 1):
        zval = (1 - 2 * lam) * q * q * qi * qi * qi * qi * sign
        bad = []
        for (a, b, c), got in lam_brackets.items():
            if got is None:
                bad.append((a, b, c))
                continue
            alpha, beta = (_to_root(x) for x in got)
            f = factor[a[0]] * factor[b[0]] * factor[c[0]]
            cq = f * alpha * (-q)          # L_N = -q Q_N
            cr = f * beta * qi             # E_N = q^{-1} R_N
            vw = virasoro_witt_bracket(*(GradedElement.gen(to_vw[g[0]], g[1]) for g in (a, b, c)))
            N = a[1] + b[1] + c[1]
            eq = _horner(vw.terms.get(GradedGenerator("Q", N), UniPoly((), "z")), zval)
            er = _horner(vw.terms.get(GradedGenerator("R", N), UniPoly((), "z")), zval)
            if not (cq == eq and cr == er):
                bad.append((a, b, c))
        if not bad:
            rep.z_sign = sign
            rep.substitution_mismatches = []
            break
        rep.substitution_mismatches = [(x[0][0] + x[1][0] + x[2][0], x[0][1], x[1][1], x[2][1])
                                       for x in bad]
    return rep
