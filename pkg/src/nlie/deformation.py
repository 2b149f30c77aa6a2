"""One-parameter formal deformations (truncated), formal automorphisms,
obstructions, twisted series, and deformations over a finite-dimensional
commutative base algebra."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from . import linalg
from .algebra import Cochain, StructureConstants, check_nambu, circle
from .cohomology import H2, coboundary_matrix, delta_general


class DeformationSeries:
    """[x]_t = sum_{i<=k} t^i mu_i(x) with mu_0 the bracket of the base."""

    def __init__(self, base: StructureConstants, terms=()):
        self.base = base
        terms = list(terms)
        for t in terms:
            if (t.n, t.m) != (base.n, base.m):
                raise ValueError("deformation term has the wrong shape")
        self.terms = [base] + terms

    @property
    def order(self):
        return len(self.terms) - 1

    def term(self, i):
        if i < len(self.terms):
            return self.terms[i]
        return StructureConstants.zero(self.base.n, self.base.m)

    def truncate(self, k):
        return DeformationSeries(self.base, self.terms[1:k + 1])

    def __eq__(self, other):
        if not isinstance(other, DeformationSeries):
            return NotImplemented
        k = max(self.order, other.order)
        return all(self.term(i) == other.term(i) for i in range(k + 1))

    def __repr__(self):
        return f"DeformationSeries(order={self.order}, m={self.base.m}, n={self.base.n})"


def deformation_residual(D: DeformationSeries):
    """R_s = sum_{i+j=s} mu_i o mu_j for s = 0..2k."""
    k = D.order
    out = []
    for s in range(2 * k + 1):
        acc = Cochain.zero(D.base.n, D.base.m, 3)
        for i in range(max(0, s - k), min(s, k) + 1):
            acc = acc + circle(D.terms[i], D.terms[s - i])
        out.append(acc)
    return out


def is_infinitesimal_cocycle(D: DeformationSeries) -> bool:
    if D.order < 1:
        raise ValueError("order must be at least 1")
    return delta_general(Cochain.from_skew(D.terms[1]), D.base).is_zero()


def obstruction(D: DeformationSeries, m: int) -> Cochain:
    """sum_{i=1}^{m-1} mu_i o mu_{m-i}.  The order-m equation reads
    delta^2 mu_m = -obstruction (with the circle-product sign convention)."""
    if m < 1:
        raise ValueError("order must be positive")
    if D.order < m - 1:
        raise ValueError("series is too short for this order")
    low = D.truncate(m - 1)
    res = deformation_residual(low)
    for s in range(m):
        if not res[s].is_zero():
            raise ValueError(f"deformation equation fails at order {s}")
    acc = Cochain.zero(D.base.n, D.base.m, 3)
    for i in range(1, m):
        acc = acc + circle(D.term(i), D.term(m - i))
    return acc


@dataclass
class ExtensionResult:
    solvable: bool
    term: StructureConstants | None = None
    obstruction: Cochain | None = None


def solve_next_order(D: DeformationSeries, m: int) -> ExtensionResult:
    """Look for mu_m with delta^2 mu_m = -obstruction(D, m)."""
    obs = obstruction(D, m)
    A = D.base
    if obs.is_zero():
        return ExtensionResult(True, StructureConstants.zero(A.n, A.m), obs)
    M = coboundary_matrix(A, 2)
    rhs = [-x for x in obs.data.reshape(-1)]
    x = linalg.solve(M, rhs)
    if x is None:
        return ExtensionResult(False, None, obs)
    return ExtensionResult(True, StructureConstants.from_vector(A.n, A.m, x), obs)


# ------------------------------------------------------ formal automorphisms

class FormalAutomorphism:
    """phi_t = sum_{i<=k} t^i phi_i with phi_0 = identity; matrices have
    columns equal to images of basis vectors."""

    def __init__(self, maps, m=None):
        maps = [np.asarray(M, dtype=object) for M in maps]
        if m is None:
            m = maps[0].shape[0]
        if not maps or not np.array_equal(maps[0], linalg.identity(m)):
            maps = [linalg.identity(m)] + maps
        for M in maps:
            if M.shape != (m, m):
                raise ValueError("map has the wrong size")
        self.maps = maps
        self.m = m

    @classmethod
    def identity(cls, m, order=0):
        return cls([linalg.identity(m)] + [linalg.identity(m) * 0 for _ in range(order)])

    @property
    def order(self):
        return len(self.maps) - 1

    def map(self, i):
        if i < len(self.maps):
            return self.maps[i]
        return linalg.identity(self.m) * 0

    def compose(self, other: FormalAutomorphism, order=None):
        """self o other."""
        k = order if order is not None else max(self.order, other.order)
        return FormalAutomorphism([sum((self.map(i).dot(other.map(s - i)) for i in range(s + 1)),
                                       linalg.identity(self.m) * 0) for s in range(k + 1)])

    def inverse(self, order=None):
        k = self.order if order is None else order
        inv = [linalg.identity(self.m)]
        for s in range(1, k + 1):
            acc = linalg.identity(self.m) * 0
            for i in range(1, s + 1):
                acc = acc - self.map(i).dot(inv[s - i])
            inv.append(acc)
        return FormalAutomorphism(inv)

    def __eq__(self, other):
        k = max(self.order, other.order)
        return all(np.array_equal(self.map(i), other.map(i)) for i in range(k + 1))


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _transport_args(T, maps, n):
    for ax, M in enumerate(maps):
        T = np.moveaxis(np.tensordot(T, M, axes=(ax, 0)), -1, ax)
    return T


def apply_automorphism(D: DeformationSeries, Phi: FormalAutomorphism) -> DeformationSeries:
    """D' with phi_t([x]_t) = [phi_t x]'_t, solved order by order:
    mu'_s = sum_{i+j=s} phi_i mu_j - sum_{j<s} sum_{i_1+..+i_n = s-j} mu'_j(phi_{i_1} x_1, ..)."""
    A = D.base
    n, m = A.n, A.m
    k = D.order
    new = [A.tensor]
    for s in range(1, k + 1):
        acc = np.tensordot(D.term(s).tensor, linalg.identity(m), axes=(n, 1))
        for i in range(1, s + 1):
            acc = acc + np.tensordot(D.term(s - i).tensor, Phi.map(i), axes=(n, 1))
        for j in range(s):
            for comp in _compositions(s - j, n):
                acc = acc - _transport_args(new[j], [Phi.map(i) for i in comp], n)
        new.append(acc)
    return DeformationSeries(A, [StructureConstants.from_tensor(n, m, T) for T in new[1:]])


@dataclass
class TrivializationResult:
    trivialized: bool
    automorphism: FormalAutomorphism
    series: DeformationSeries
    order: int = 0
    h2_class: tuple = ()

    def as_dict(self):
        return {"trivialized": self.trivialized, "order": self.order,
                "h2_class": [str(c) for c in self.h2_class]}


def trivialize_if_possible(D: DeformationSeries, max_order=None) -> TrivializationResult:
    """Absorb coboundary leading terms order by order; stop at the first
    leading term that is not a coboundary and report its H^2 class."""
    A = D.base
    k = D.order if max_order is None else min(max_order, D.order)
    D = D.truncate(k)
    res = deformation_residual(D)
    if not all(r.is_zero() for r in res[:k + 1]):
        raise ValueError("deformation equation fails below the requested order")
    total = FormalAutomorphism.identity(A.m, k)
    d1 = coboundary_matrix(A, 1)
    h2 = None
    for s in range(1, k + 1):
        lead = D.term(s)
        if lead.is_abelian():
            continue
        x = linalg.solve(d1, lead.to_vector())
        if x is None:
            h2 = h2 or H2(A)
            return TrivializationResult(False, total, D, s, h2.coordinates(lead))
        phi = np.array(x, dtype=object).reshape(A.m, A.m).T
        step = FormalAutomorphism([linalg.identity(A.m)] + [linalg.identity(A.m) * 0] * (s - 1) + [phi])
        D = apply_automorphism(D, step)
        total = step.compose(total, order=k)
        if not D.term(s).is_abelian():
            raise ArithmeticError("absorption left a nonzero term")
    return TrivializationResult(True, total, D, k)


# ----------------------------------------------------------- twisted series

class TwistedSeries:
    """Truncated series sum_p c_p t^p.  Coefficients are scalars (kind
    'scalar') or vectors of N (kind 'vector').  The twists sigma and tau
    give t.a = sigma(a) t and a.t = tau(a) t."""

    def __init__(self, coeffs, sigma, tau=None, order=None, kind=None):
        sigma = np.asarray(sigma, dtype=object)
        self.sigma = sigma
        self.tau = linalg.identity(sigma.shape[0]) if tau is None else np.asarray(tau, dtype=object)
        coeffs = list(coeffs)
        if kind is None:
            kind = "vector" if coeffs and np.ndim(coeffs[0]) == 1 else "scalar"
        self.kind = kind
        self.order = len(coeffs) - 1 if order is None else order
        dim = sigma.shape[0]
        zero = Fraction(0) if kind == "scalar" else np.array([Fraction(0)] * dim, dtype=object)
        c = [np.asarray(x, dtype=object) if kind == "vector" else Fraction(x) for x in coeffs[:self.order + 1]]
        c += [zero] * (self.order + 1 - len(c))
        self.coeffs = c

    def __eq__(self, other):
        return (self.kind == other.kind and self.order == other.order and
                all(np.array_equal(np.asarray(a), np.asarray(b)) for a, b in zip(self.coeffs, other.coeffs)))


def _mpow(M, k):
    out = linalg.identity(M.shape[0])
    for _ in range(k):
        out = out.dot(M)
    return out


def twisted_multiply(S1: TwistedSeries, S2: TwistedSeries) -> TwistedSeries:
    """Left rule: (sum l_q t^q)(sum a_p t^p) = sum l_q sigma^q(a_p) t^{p+q};
    right rule: (sum a_p t^p)(sum l_q t^q) = sum l_q tau^q(a_p) t^{p+q}."""
    if S1.order != S2.order:
        raise ValueError("truncation orders differ")
    if not (np.array_equal(S1.sigma, S2.sigma) and np.array_equal(S1.tau, S2.tau)):
        raise ValueError("twists differ")
    k = S1.order
    if S1.kind == "scalar" and S2.kind == "scalar":
        c = [sum((S1.coeffs[q] * S2.coeffs[s - q] for q in range(s + 1)), Fraction(0)) for s in range(k + 1)]
        return TwistedSeries(c, S1.sigma, S1.tau, k, "scalar")
    if S1.kind == "scalar" and S2.kind == "vector":
        lam, vec, tw = S1.coeffs, S2.coeffs, S1.sigma
    elif S1.kind == "vector" and S2.kind == "scalar":
        lam, vec, tw = S2.coeffs, S1.coeffs, S1.tau
    else:
        raise ValueError("cannot multiply two vector series")
    out = []
    for s in range(k + 1):
        acc = np.array([Fraction(0)] * S1.sigma.shape[0], dtype=object)
        for q in range(s + 1):
            if lam[q] != 0:
                acc = acc + lam[q] * _mpow(tw, q).dot(vec[s - q])
        out.append(acc)
    return TwistedSeries(out, S1.sigma, S1.tau, k, "vector")


def bimodule_associative(sigma, tau) -> bool:
    """(l t^i . a t^j) . u t^k == l t^i . (a t^j . u t^k) for all inputs
    exactly when sigma and tau commute."""
    sigma = np.asarray(sigma, dtype=object)
    tau = np.asarray(tau, dtype=object)
    return np.array_equal(sigma.dot(tau), tau.dot(sigma))


# --------------------------------------------------- global deformations

class CommutativeBase:
    """Finite-dimensional commutative associative unital algebra B with an
    augmentation eps: B -> K.  mult[a, b, c] is the coefficient of b_c in
    b_a b_b."""

    def __init__(self, mult, unit, augmentation, names=None):
        mult = np.asarray(mult, dtype=object)
        d = mult.shape[0]
        if mult.shape != (d, d, d):
            raise ValueError("multiplication table must be d x d x d")
        self.d = d
        self.mult = linalg.to_fraction_array(mult)
        self.unit_vec = linalg.to_fraction_array(unit)
        self.eps = linalg.to_fraction_array(augmentation)
        self.names = names or [f"b{i}" for i in range(d)]
        problems = self.axiom_failures()
        if problems:
            raise ValueError("invalid base algebra: " + "; ".join(problems))

    def product_vec(self, x, y):
        return np.einsum("a,b,abc->c", np.asarray(x, dtype=object), np.asarray(y, dtype=object), self.mult)

    def axiom_failures(self):
        d, M = self.d, self.mult
        out = []
        if not np.array_equal(M, M.transpose(1, 0, 2)):
            out.append("not commutative")
        left = np.einsum("abx,xcy->abcy", M, M)
        right = np.einsum("bcx,axy->abcy", M, M)
        if not np.array_equal(left, right):
            out.append("not associative")
        if not np.array_equal(np.einsum("a,abc->bc", self.unit_vec, M), linalg.identity(d)):
            out.append("unit fails")
        if self.eps.dot(self.unit_vec) != 1:
            out.append("augmentation of the unit is not 1")
        if not np.array_equal(np.einsum("abc,c->ab", M, self.eps), np.outer(self.eps, self.eps)):
            out.append("augmentation is not multiplicative")
        return out

    def element(self, coords):
        return BaseElement(self, coords)

    def one(self):
        return BaseElement(self, self.unit_vec)

    def zero(self):
        return BaseElement(self, [0] * self.d)

    def basis(self, i):
        return BaseElement(self, [int(j == i) for j in range(self.d)])

    def augment(self, x):
        return self.eps.dot(x.coords)

    def __eq__(self, other):
        return (isinstance(other, CommutativeBase) and np.array_equal(self.mult, other.mult)
                and np.array_equal(self.unit_vec, other.unit_vec) and np.array_equal(self.eps, other.eps))

    __hash__ = object.__hash__


def truncated_polynomial_base(k, var="t"):
    """K[t]/(t^{k+1}) with basis 1, t, .., t^k and eps(t) = 0."""
    d = k + 1
    M = np.zeros((d, d, d), dtype=object)
    for a in range(d):
        for b in range(d):
            if a + b < d:
                M[a, b, a + b] = 1
    e0 = [1] + [0] * k
    names = ["1"] + [var if i == 1 else f"{var}^{i}" for i in range(1, d)]
    return CommutativeBase(M, e0, e0, names)


def dual_numbers(var="s"):
    return truncated_polynomial_base(1, var)


def ground_field():
    return truncated_polynomial_base(0)


class BaseElement:
    __slots__ = ("base", "coords")

    def __init__(self, base, coords):
        self.base = base
        self.coords = linalg.to_fraction_array(coords)

    def _lift(self, other):
        if isinstance(other, BaseElement):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return BaseElement(self.base, other * self.base.unit_vec)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return BaseElement(self.base, self.coords + o.coords)

    __radd__ = __add__

    def __neg__(self):
        return BaseElement(self.base, -self.coords)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return BaseElement(self.base, self.coords - o.coords)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return BaseElement(self.base, self.coords * other)
        if isinstance(other, BaseElement):
            return BaseElement(self.base, self.base.product_vec(self.coords, other.coords))
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return np.array_equal(self.coords, o.coords)

    def __hash__(self):
        return hash(tuple(self.coords))

    def __repr__(self):
        terms = [f"{c}*{n}" for c, n in zip(self.coords, self.base.names) if c != 0]
        return " + ".join(terms) or "0"


class GlobalDeformation:
    """Bracket on B (x) N given by structure constants with values in B:
    [1(x)e_I]_B = sum_k C^k_I (x) e_k."""

    def __init__(self, base: CommutativeBase, algebra: StructureConstants, constants: StructureConstants):
        if (constants.n, constants.m) != (algebra.n, algebra.m):
            raise ValueError("shape mismatch")
        self.base = base
        self.algebra = algebra
        self.constants = constants

    @classmethod
    def from_generator_form(cls, base, algebra, terms=()):
        """[x]_B = 1 (x) [x] + sum_i alpha_i (x) psi_i(x); ``terms`` is a list
        of (alpha as BaseElement or coordinate list, psi StructureConstants)."""
        one = base.one()
        table = {}
        terms = [(a if isinstance(a, BaseElement) else base.element(a), psi) for a, psi in terms]
        for key in algebra.keys():
            vec = [one * x for x in algebra.value(key)]
            for alpha, psi in terms:
                vec = [v + alpha * x for v, x in zip(vec, psi.value(key))]
            table[key] = tuple(vec)
        return cls(base, algebra, StructureConstants(algebra.n, algebra.m, table, zero=base.zero()))

    @classmethod
    def from_series(cls, D: DeformationSeries):
        base = truncated_polynomial_base(D.order)
        return cls.from_generator_form(base, D.base, [(base.basis(i), D.terms[i]) for i in range(1, D.order + 1)])

    def specialize(self):
        """(eps (x) id) applied to the constants."""
        return self.constants.map_scalars(lambda x: self.base.augment(x) if isinstance(x, BaseElement) else x,
                                          zero=Fraction(0))


@dataclass
class AxiomFailure:
    axiom: int
    where: tuple
    detail: object = None


def check_global_deformation(G: GlobalDeformation):
    """Axiom 2 (Nambu identity over B) and axiom 3 (eps recovers the
    original bracket).  Axiom 1 holds by construction."""
    out = []
    for r in check_nambu(G.constants):
        out.append(AxiomFailure(2, (r.inner, r.outer, r.index), r.value))
    spec = G.specialize()
    for key in set(spec.table) | set(G.algebra.table):
        if spec.value(key) != G.algebra.value(key):
            out.append(AxiomFailure(3, key, (spec.value(key), G.algebra.value(key))))
    return out


def push_out(G: GlobalDeformation, Phi, target: CommutativeBase) -> GlobalDeformation:
    """Apply a unital, augmentation-compatible algebra morphism Phi: B -> B'
    (matrix d' x d) to the constants."""
    Phi = linalg.to_fraction_array(Phi)
    B = G.base
    if Phi.shape != (target.d, B.d):
        raise ValueError("morphism has the wrong shape")
    if not np.array_equal(Phi.dot(B.unit_vec), target.unit_vec):
        raise ValueError("morphism is not unital")
    if not np.array_equal(target.eps.dot(Phi), B.eps):
        raise ValueError("morphism does not respect the augmentations")
    for a in range(B.d):
        for b in range(B.d):
            lhs = Phi.dot(B.mult[a, b])
            rhs = target.product_vec(Phi[:, a], Phi[:, b])
            if not np.array_equal(lhs, rhs):
                raise ValueError("morphism is not multiplicative")
    new = G.constants.map_scalars(lambda x: BaseElement(target, Phi.dot(x.coords)), zero=target.zero())
    return GlobalDeformation(target, G.algebra, new)
