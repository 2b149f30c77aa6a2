"""Deformation cohomology of an n-Lie algebra with adjoint coefficients.

Degree convention: a degree-p cochain takes p-1 fundamental blocks
a_1..a_{p-1} (elements of wedge^{n-1} N) and one vector z.  So linear maps
have degree 1, the bracket and deformation terms degree 2, obstructions
degree 3.  For psi with q blocks the coboundary is

  (d psi)(a_1..a_{q+1}, z) =
      sum_{i<j} (-1)^i psi(.., a_i^, .., [a_i, a_j], .., z)
    + sum_i     (-1)^i psi(.., a_i^, .., L(a_i) z)
    + sum_i (-1)^{i+1} L(a_i) psi(.., a_i^, .., z)
    + (-1)^q sum_k [x^1, .., psi(a_1..a_q, x^k), .., x^{n-1}, z]

with a_{q+1} = x^1 ^ .. ^ x^{n-1}.  All terms are linear in the bracket, so
rational tables are scaled to integers and the sums are einsum contractions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb

import numpy as np

from . import linalg
from .algebra import Cochain, StructureConstants, canonical, check_nambu, fundamental_basis
from .exact import common_denominator
from .leibniz import action_tensor, derivation_wedge_action, leibniz_table

_LETTERS = "ABCDEFGHIJ"
_SAFE = 1 << 62


def _integerize(arr):
    """(ints, scale) with ints == scale * arr, or (arr, 1) for non-rational
    entries."""
    arr = np.asarray(arr, dtype=object)
    if not all(isinstance(x, (int, Fraction, np.integer)) for x in arr.flat):
        return arr, 1
    d = common_denominator(arr.flat)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = int(x * d)
    return out, d


class _Context:
    """Integer-scaled action tensors of one algebra."""

    def __init__(self, A: StructureConstants):
        self.A = A
        self.n, self.m = A.n, A.m
        self.blocks = fundamental_basis(A.n, A.m)
        self.F = len(self.blocks)
        L, s = action_tensor(A, numeric=True)
        self.scale = s
        self.rational = A.is_rational
        self.W = derivation_wedge_action(A.n, A.m)
        self.L = L
        self.Lb = np.einsum("ayw,bywc->abc", L, self.W if L.dtype != object else self.W.astype(object))
        self.maxT = max((abs(int(x)) for x in L.flat), default=0) if self.rational else None

    def arrays(self, dtype):
        if dtype == object:
            return self.L.astype(object), self.Lb.astype(object), self.W.astype(object)
        return self.L.astype(np.int64), self.Lb.astype(np.int64), self.W


def _delta_raw(ctx: _Context, P, q):
    """Unscaled coboundary of a batch P with shape (X,) + (F,)*q + (m, m);
    returns scale * (d P)."""
    big = P.dtype == object
    L, Lb, W = ctx.arrays(object if big else np.int64)
    blocks = _LETTERS[:q + 1]
    X = P.shape[0]
    F, m = ctx.F, ctx.m
    out = np.zeros((X,) + (F,) * (q + 1) + (m, m), dtype=object if big else np.int64)
    if big:
        out.fill(0)
    target = "X" + blocks + "zo"
    opt = not big
    for i in range(1, q + 2):
        rest = blocks[:i - 1] + blocks[i:]
        sgn = -1 if i % 2 else 1
        for j in range(i + 1, q + 2):
            pb = "".join("c" if b == blocks[j - 1] else b for b in rest)
            t = np.einsum(f"{blocks[i - 1]}{blocks[j - 1]}c,X{pb}zo->{target}", Lb, P, optimize=opt)
            out = out + sgn * t
        t = np.einsum(f"{blocks[i - 1]}zw,X{rest}wo->{target}", L, P, optimize=opt)
        out = out + sgn * t
        t = np.einsum(f"{blocks[i - 1]}ko,X{rest}zk->{target}", L, P, optimize=opt)
        out = out - sgn * t
    sgn = -1 if q % 2 else 1
    t = np.einsum(f"X{blocks[:q]}yw,{blocks[q]}ywc,czo->{target}", P, W, L, optimize=opt)
    return out + sgn * t


def _delta_batch(ctx: _Context, P, q):
    """Coboundary of a batch of rational cochains given as arrays; returns
    (ints, scale) with ints == scale * d(P)."""
    Pi, sp = _integerize(P)
    if ctx.rational and sp != 0:
        maxP = max((abs(int(x)) for x in Pi.flat), default=0)
        terms = (ctx.F + 1) * ctx.m * (q + 2) ** 2 + ctx.m ** 2 * ctx.F
        if maxP * max(ctx.maxT, 1) * terms < _SAFE:
            Pi = Pi.astype(np.int64)
        return _delta_raw(ctx, Pi, q), ctx.scale * sp
    # generic scalars (polynomials): plain object arithmetic
    L, Lb, W = action_tensor(ctx.A), leibniz_table(ctx.A), ctx.W
    tmp = _Context.__new__(_Context)
    tmp.__dict__.update(ctx.__dict__)
    tmp.L, tmp.Lb, tmp.scale = L, Lb, 1
    return _delta_raw(tmp, np.asarray(P, dtype=object), q), 1


def _rescale(arr, scale):
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = Fraction(int(x), scale) if isinstance(x, (int, np.integer)) else x / scale if scale != 1 else x
    return out


_CTX = {}


def context(A):
    key = id(A)
    hit = _CTX.get(key)
    if hit is not None and hit.A is A:
        return hit
    ctx = _Context(A)
    if len(_CTX) > 256:
        _CTX.clear()
    _CTX[key] = ctx
    return ctx


def delta_general(psi: Cochain, A: StructureConstants) -> Cochain:
    """Coboundary of a cochain of any degree p >= 1 (degree p -> p+1)."""
    if psi.n != A.n or psi.m != A.m:
        raise ValueError("cochain does not match the algebra")
    ctx = context(A)
    q = psi.degree - 1
    raw, scale = _delta_batch(ctx, psi.data[None], q)
    return Cochain(A.n, A.m, psi.degree + 1, _rescale(raw[0], scale))


def delta1(phi, A: StructureConstants) -> Cochain:
    """delta^1 phi (x_1..x_n) = -phi([x_1..x_n]) + sum_i [x_1, .., phi(x_i), .., x_n].
    ``phi`` is a matrix (columns are images) or a degree-1 Cochain."""
    if not isinstance(phi, Cochain):
        phi = Cochain.from_linear(A.n, phi)
    return delta_general(phi, A)


def delta1_skew(phi, A) -> StructureConstants:
    return delta1(phi, A).to_skew()


def delta2(psi, A: StructureConstants) -> Cochain:
    """Six-term coboundary of a skew n-ary cochain, evaluated directly on
    basis blocks a_1 = e_I, a_2 = e_J and z:

      -psi([a_1, a_2], z) - psi(a_2, [a_1, z]) + psi(a_1, [a_2, z])
      + [a_1, psi(a_2, z)] - [a_2, psi(a_1, z)]
      - sum_i [y_1, .., psi(a_1, y_i), .., y_{n-1}, z]
    """
    if isinstance(psi, Cochain):
        psi = psi.to_skew()
    n, m = A.n, A.m
    T, P = A.tensor, psi.tensor
    blocks = fundamental_basis(n, m)
    F = len(blocks)
    data = np.empty((F, F, m, m), dtype=object)

    def br(args_prefix, v):
        # [args_prefix, v] for vector v in the last slot
        return np.asarray(v, dtype=object).dot(T[args_prefix])

    def ps(args_prefix, v):
        return np.asarray(v, dtype=object).dot(P[args_prefix])

    for a, I in enumerate(blocks):
        for b, J in enumerate(blocks):
            for z in range(m):
                acc = np.array([Fraction(0)] * m, dtype=object)
                # [a_1, a_2] = sum_i (y_1, .., [x, y_i], .., y_{n-1})
                for i in range(n - 1):
                    v = T[I + (J[i],)]
                    for w in range(m):
                        if v[w] != 0:
                            key, s = canonical(J[:i] + (w,) + J[i + 1:])
                            if s:
                                acc = acc - s * v[w] * P[key + (z,)]
                acc = acc - ps(J, T[I + (z,)])
                acc = acc + ps(I, T[J + (z,)])
                acc = acc + br(I, P[J + (z,)])
                acc = acc - br(J, P[I + (z,)])
                for i in range(n - 1):
                    v = P[I + (J[i],)]
                    for w in range(m):
                        if v[w] != 0:
                            args = J[:i] + (w,) + J[i + 1:] + (z,)
                            key, s = canonical(args)
                            if s:
                                acc = acc - s * v[w] * np.array(T[key], dtype=object)
                data[a, b, z] = acc
    return Cochain(n, m, 3, data)


def delta_squared_is_zero(A, degree):
    """Exact check that d o d vanishes as a full matrix from the given degree."""
    D1 = coboundary_matrix(A, degree, scaled=True)
    D2 = coboundary_matrix(A, degree + 1, scaled=True)
    if D1.dtype != object and D2.dtype != object:
        bound = int(np.abs(D1).max(initial=0)) * int(np.abs(D2).max(initial=0)) * D1.shape[0]
        if bound < _SAFE:
            return not np.any(D2.dot(D1))
    return not np.any(D2.astype(object).dot(D1.astype(object)) != 0)


# ------------------------------------------------------------ matrices

def _skew_positions(n, m):
    """Grid positions (block, z) holding the coordinates of skew degree-2
    cochains, in canonical key order."""
    pos = {B: i for i, B in enumerate(fundamental_basis(n, m))}
    return [(pos[J[:-1]], J[-1]) for J in combinations(range(m), n)]


def skew_basis_grid(n, m):
    """Degree-2 grid arrays of the skew basis cochains e_J -> e_k, shape
    (C(m,n)*m, F, m, m)."""
    blocks = fundamental_basis(n, m)
    Js = list(combinations(range(m), n))
    F = len(blocks)
    out = np.zeros((len(Js) * m, F, m, m), dtype=np.int64)
    index = {J: i for i, J in enumerate(Js)}
    for a, B in enumerate(blocks):
        for z in range(m):
            key, s = canonical(B + (z,))
            if s:
                for k in range(m):
                    out[index[key] * m + k, a, z, k] = s
    return out


def _basis_batch(n, m, p):
    F = len(fundamental_basis(n, m))
    if p == 2:
        return skew_basis_grid(n, m)
    size = F ** (p - 1) * m * m
    return np.eye(size, dtype=np.int64).reshape((size,) + (F,) * (p - 1) + (m, m))


def cochain_space_dim(n, m, p):
    F = comb(m, n - 1)
    if p == 1:
        return m * m
    if p == 2:
        return m * comb(m, n)
    return F ** (p - 1) * m * m


def _target_coordinates(raw, n, m, p_out):
    """Flatten images into coordinates of C^{p_out}: skew coordinates for
    degree 2, the full grid otherwise.  Rows = images."""
    X = raw.shape[0]
    size = cochain_space_dim(n, m, p_out)
    if p_out == 2:
        sp = _skew_positions(n, m)
        if not sp:
            return np.zeros((X, 0), dtype=raw.dtype)
        return np.stack([raw[:, a, z, :] for a, z in sp], axis=1).reshape(X, size)
    return raw.reshape(X, size)


def coboundary_matrix(A, p, scaled=False):
    """Exact matrix of delta^p: C^p -> C^{p+1} (columns = basis cochains).
    With scaled=True returns an integer matrix equal to scale * delta."""
    if p not in (1, 2, 3):
        raise ValueError("supported degrees are 1, 2, 3")
    ctx = context(A)
    if not ctx.rational:
        raise ValueError("matrices are assembled for rational algebras only")
    n, m = A.n, A.m
    batch = _basis_batch(n, m, p) if p > 1 else np.eye(m * m, dtype=np.int64).reshape(m * m, m, m)
    raw = _delta_raw(ctx, batch, p - 1)
    M = _target_coordinates(raw, n, m, p + 1).T
    if scaled:
        return M
    return _rescale(M, ctx.scale)


@dataclass
class CohomologySummary:
    p: int
    dim_Z: int
    dim_B: int
    dim_H: int
    dim_C: int
    Z_basis: object = field(default=None, repr=False)
    B_basis: object = field(default=None, repr=False)

    def as_dict(self):
        return {"p": self.p, "dim_C": self.dim_C, "dim_Z": self.dim_Z,
                "dim_B": self.dim_B, "dim_H": self.dim_H}


def cohomology_dims(A: StructureConstants, p: int, bases=False) -> CohomologySummary:
    if p not in (1, 2, 3):
        raise ValueError("supported degrees are 1, 2, 3")
    if check_nambu(A):
        raise ValueError("not an n-Lie algebra: the Nambu identity fails")
    n, m = A.n, A.m
    D = coboundary_matrix(A, p, scaled=True)
    dimC = cochain_space_dim(n, m, p)
    rZ = linalg.rank(D) if D.size else 0
    dimZ = dimC - rZ
    if p == 1:
        dimB, Bm = 0, None
    else:
        Bm = coboundary_matrix(A, p - 1, scaled=True)
        dimB = linalg.rank(Bm) if Bm.size else 0
    out = CohomologySummary(p, dimZ, dimB, dimZ - dimB, dimC)
    if bases:
        out.Z_basis = linalg.nullspace(D) if D.size else linalg.identity(dimC)
        out.B_basis = linalg.row_basis(Bm.T) if Bm is not None and dimB else np.zeros((0, dimC), dtype=object)
        if out.B_basis.shape[0] and np.any(D.dot(out.B_basis.T) != 0):
            raise ArithmeticError("coboundaries are not cocycles")
    return out


def derivations(A):
    """Basis of Der(N) = ker delta^1, as m x m matrices (columns = images)."""
    D = coboundary_matrix(A, 1, scaled=True)
    K = linalg.nullspace(D)
    m = A.m
    # coordinate (z, o) of a degree-1 cochain is the coefficient of e_o in phi(e_z)
    return [np.array(v, dtype=object).reshape(m, m).T for v in K]


class H2:
    """Exact quotient coordinates on H^2 = Z^2 / B^2.  Coordinates of a
    cocycle are taken on a fixed complement of B^2 in Z^2."""

    def __init__(self, A):
        self.A = A
        s = cohomology_dims(A, 2, bases=True)
        self.summary = s
        B = s.B_basis
        Z = s.Z_basis
        stack = np.concatenate([B, Z]) if len(B) else Z
        piv_rows = linalg.rref_pivots(stack.T)     # independent rows of stack, B first
        self.complement = [Z[i - len(B)] for i in piv_rows if i >= len(B)]
        rows = list(B) + self.complement
        self.basis = np.empty((len(rows), s.dim_C), dtype=object)
        for i, r in enumerate(rows):
            self.basis[i] = r
        self.nB = len(B)

    @property
    def dim(self):
        return len(self.complement)

    def coordinates(self, mu) -> tuple:
        """Class of a degree-2 cocycle (StructureConstants or coordinate vector)."""
        v = mu.to_vector() if isinstance(mu, StructureConstants) else list(mu)
        if not self.basis.shape[0]:
            if any(x != 0 for x in v):
                raise ValueError("not a cocycle")
            return ()
        x = linalg.solve(self.basis.T, v)
        if x is None:
            raise ValueError("not a 2-cocycle")
        return tuple(x[self.nB:])

    def is_coboundary(self, mu):
        return all(c == 0 for c in self.coordinates(mu))

    def representative(self, coords):
        v = sum((c * np.asarray(z, dtype=object) for c, z in zip(coords, self.complement)),
                np.array([Fraction(0)] * self.summary.dim_C, dtype=object))
        return StructureConstants.from_vector(self.A.n, self.A.m, v)


def is_cocycle2(mu, A):
    return delta_general(Cochain.from_skew(mu), A).is_zero()


# ------------------------------------------------------ scalar cohomology

class ScalarForm:
    """Skew n-linear scalar form on K^m, stored on increasing 0-based tuples."""

    def __init__(self, n, m, values=None):
        self.n, self.m = n, m
        self.values = {}
        for k, v in dict(values or {}).items():
            key, s = canonical(tuple(k))
            if s == 0 or len(key) != n or key[-1] >= m:
                raise ValueError(f"bad form index {k}")
            v = s * Fraction(v)
            if v != 0:
                self.values[key] = self.values.get(key, Fraction(0)) + v

    def value(self, key):
        return self.values.get(tuple(key), Fraction(0))

    def tensor(self):
        from itertools import permutations
        from .algebra import perm_sign
        T = np.full((self.m,) * self.n, Fraction(0), dtype=object)
        for k, v in self.values.items():
            for p in permutations(range(self.n)):
                T[tuple(k[i] for i in p)] = perm_sign(p) * v
        return T

    def __sub__(self, other):
        keys = set(self.values) | set(other.values)
        return ScalarForm(self.n, self.m, {k: self.value(k) - other.value(k) for k in keys})

    def __add__(self, other):
        keys = set(self.values) | set(other.values)
        return ScalarForm(self.n, self.m, {k: self.value(k) + other.value(k) for k in keys})

    def is_zero(self):
        return not self.values


def scalar_delta(omega, A: StructureConstants):
    """Trivial-coefficient coboundary of a skew scalar n-form:

      (d w)(a_1, a_2, z) = -w([a_1, a_2], z) - w(a_2, L(a_1) z) + w(a_1, L(a_2) z)

    returned as an array of shape (F, F, m)."""
    n, m = A.n, A.m
    if not isinstance(omega, ScalarForm):
        omega = ScalarForm(n, m, omega)
    if (omega.n, omega.m) != (n, m):
        raise ValueError("form does not match the algebra")
    blocks = fundamental_basis(n, m)
    O = omega.tensor()
    Om = np.array([[O[B + (z,)] for z in range(m)] for B in blocks], dtype=object).reshape(len(blocks), m)
    L = action_tensor(A)
    Lb = leibniz_table(A)
    W1 = -np.einsum("abc,cz->abz", Lb, Om)
    W2 = -np.einsum("azw,bw->abz", L, Om)
    W3 = np.einsum("bzw,aw->abz", L, Om)
    return W1 + W2 + W3


def scalar_cocycle(omega, A) -> bool:
    return not np.any(scalar_delta(omega, A) != 0)


def scalar_coboundary(f, A: StructureConstants) -> ScalarForm:
    """d f = -f o [..] for a linear form f on N."""
    f = np.asarray(f, dtype=object)
    return ScalarForm(A.n, A.m, {k: -f.dot(np.array(A.value(k), dtype=object)) for k in A.keys()})


# ------------------------------------------------- comparison map to Leibniz

def leibniz_coboundary(psi, Lb, k):
    """Coboundary on C^k(L, L) for a left Leibniz algebra with table Lb,
    psi of shape (F,)*k + (F,):

      d psi(a_1..a_{k+1}) = sum_{i<j} (-1)^i psi(.., a_i^, .., [a_i, a_j], ..)
                          + sum_{i<=k} (-1)^{i+1} [a_i, psi(.., a_i^, ..)]
                          + (-1)^{k+1} [psi(a_1..a_k), a_{k+1}]
    """
    psi = np.asarray(psi, dtype=object)
    Lb = np.asarray(Lb, dtype=object)
    idx = _LETTERS[:k + 1]
    target = idx + "o"
    out = 0
    for i in range(1, k + 2):
        rest = idx[:i - 1] + idx[i:]
        sgn = -1 if i % 2 else 1
        for j in range(i + 1, k + 2):
            pb = "".join("c" if b == idx[j - 1] else b for b in rest)
            out = out + sgn * np.einsum(f"{idx[i - 1]}{idx[j - 1]}c,{pb}o->{target}", Lb, psi)
        if i <= k:
            out = out - sgn * np.einsum(f"{idx[i - 1]}co,{rest}c->{target}", Lb, psi)
    sgn = 1 if (k + 1) % 2 == 0 else -1
    out = out + sgn * np.einsum(f"{idx[:k]}c,c{idx[k]}o->{target}", psi, Lb)
    return out


def delta_map_Delta(phi: Cochain, A):
    """Delta(phi)(a_1..a_p) = sum_i (x^1, .., phi(a_1..a_{p-1}, x^i), .., x^{n-1})
    with a_p = x^1 ^ .. ^ x^{n-1}; shape (F,)*p + (F,)."""
    W = derivation_wedge_action(A.n, A.m).astype(object)
    p = phi.degree
    idx = _LETTERS[:p]
    return np.einsum(f"{idx[:p - 1]}yw,{idx[p - 1]}ywc->{idx}c", phi.data, W)


def check_delta_commutation(A, samples):
    """Residuals of d(Delta phi) - Delta(delta phi) for each sample cochain."""
    Lb = leibniz_table(A)
    out = []
    for idx, phi in enumerate(samples):
        lhs = leibniz_coboundary(delta_map_Delta(phi, A), Lb, phi.degree)
        rhs = delta_map_Delta(delta_general(phi, A), A)
        R = lhs - rhs
        if np.any(R != 0):
            out.append((idx, R))
    return out
