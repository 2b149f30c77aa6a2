"""n-Lie algebras by structure constants, the Nambu identity, the circle
product, derived algebra and center, representations, and n-ary
associativity checks.

Indices are 0-based in the Python API.  ``StructureConstants.from_brackets``
takes 1-based indices so tables can be transcribed as written (e_1, e_2, ...).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations, product
from math import factorial

import numpy as np

from . import linalg
from .exact import as_rational, common_denominator


def perm_sign(seq) -> int:
    """Sign of the permutation sorting ``seq`` (0 if an entry repeats)."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def canonical(indices):
    """(sorted tuple, sign); sign 0 when an index repeats."""
    s = perm_sign(indices)
    return tuple(sorted(indices)), s


def _zero_like(x):
    return x * 0 if not isinstance(x, (int, Fraction)) else Fraction(0)


def _check_scalar(x):
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, float):
        raise TypeError("floating point scalars are not allowed")
    if isinstance(x, str):
        return as_rational(x)
    return x


class StructureConstants:
    """A fully skew n-ary bracket on K^m, stored on strictly increasing
    index tuples.  Scalars may be Fractions, UniPolys or any ring elements
    supporting + - * and ``== 0``."""

    __slots__ = ("n", "m", "_table", "__dict__")

    def __init__(self, n: int, m: int, table=None, *, zero=Fraction(0)):
        if n < 2:
            raise ValueError("arity must be at least 2")
        if m < 1:
            raise ValueError("dimension must be positive")
        self.n, self.m = n, m
        t = {}
        for key, vec in (table or {}).items():
            key = tuple(int(k) for k in key)
            if len(key) != n:
                raise ValueError(f"index {key} has wrong length")
            if any(k < 0 or k >= m for k in key):
                raise ValueError(f"index {key} out of range")
            if list(key) != sorted(set(key)) or len(set(key)) != n:
                raise ValueError(f"index {key} is not strictly increasing")
            vec = tuple(_check_scalar(v) for v in vec)
            if len(vec) != m:
                raise ValueError(f"value for {key} has wrong length")
            if any(v != 0 for v in vec):
                t[key] = vec
        self._table = t
        self._zero = zero

    # construction
    @classmethod
    def from_brackets(cls, n, m, brackets, zero=Fraction(0)):
        """``brackets`` maps 1-based index tuples (any order) to
        {1-based output index: scalar}."""
        acc = {}
        for args, val in brackets.items():
            key, s = canonical([a - 1 for a in args])
            if s == 0:
                raise ValueError(f"repeated index in {args}")
            vec = acc.setdefault(key, [zero] * m)
            for k, c in val.items():
                vec[k - 1] = vec[k - 1] + s * _check_scalar(c)
        return cls(n, m, acc, zero=zero)

    @classmethod
    def from_tensor(cls, n, m, T, zero=Fraction(0)):
        T = np.asarray(T, dtype=object)
        table = {I: tuple(T[I]) for I in combinations(range(m), n)}
        return cls(n, m, table, zero=zero)

    @classmethod
    def zero(cls, n, m):
        return cls(n, m, {})

    abelian = zero

    # access
    @property
    def table(self):
        return dict(self._table)

    def keys(self):
        return combinations(range(self.m), self.n)

    def value(self, key):
        """Value on a canonical key (zero vector if absent)."""
        v = self._table.get(tuple(key))
        return v if v is not None else (self._zero,) * self.m

    def coefficient(self, indices):
        key, s = canonical(indices)
        if s == 0:
            return (self._zero,) * self.m
        v = self.value(key)
        return v if s == 1 else tuple(-x for x in v)

    def scalars(self):
        for v in self._table.values():
            yield from v

    @cached_property
    def tensor(self):
        """Full skew array of shape (m,)*n + (m,)."""
        n, m = self.n, self.m
        T = np.empty((m,) * n + (m,), dtype=object)
        T.fill(self._zero)
        for key, vec in self._table.items():
            neg = tuple(-x for x in vec)
            for p in permutations(range(n)):
                idx = tuple(key[i] for i in p)
                T[idx] = vec if perm_sign(p) == 1 else neg
        return T

    @cached_property
    def is_rational(self):
        return isinstance(self._zero, (int, Fraction)) and \
            all(isinstance(x, (int, Fraction)) for x in self.scalars())

    def bracket(self, *vectors):
        """Multilinear evaluation on coordinate vectors."""
        if len(vectors) != self.n:
            raise ValueError(f"expected {self.n} arguments")
        out = self.tensor
        for v in vectors:
            v = np.asarray(v, dtype=object)
            if v.shape != (self.m,):
                raise ValueError("argument has wrong dimension")
            out = np.tensordot(v, out, axes=(0, 0))
        return tuple(out)

    def is_abelian(self):
        return not self._table

    def map_scalars(self, fn, zero=None):
        return StructureConstants(self.n, self.m,
                                  {k: tuple(fn(x) for x in v) for k, v in self._table.items()},
                                  zero=self._zero if zero is None else zero)

    def __eq__(self, other):
        if not isinstance(other, StructureConstants):
            return NotImplemented
        if (self.n, self.m) != (other.n, other.m):
            return False
        keys = set(self._table) | set(other._table)
        return all(all(a == b for a, b in zip(self.value(k), other.value(k))) for k in keys)

    def __hash__(self):
        return hash((self.n, self.m, len(self._table)))

    def __add__(self, other):
        self._same_shape(other)
        keys = set(self._table) | set(other._table)
        return StructureConstants(self.n, self.m, {
            k: tuple(a + b for a, b in zip(self.value(k), other.value(k))) for k in keys})

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __rmul__(self, c):
        return StructureConstants(self.n, self.m,
                                  {k: tuple(c * x for x in v) for k, v in self._table.items()})

    def _same_shape(self, other):
        if (self.n, self.m) != (other.n, other.m):
            raise ValueError("shape mismatch")

    def to_vector(self):
        """Flat coordinates on (canonical key, output) pairs."""
        return [x for k in self.keys() for x in self.value(k)]

    @classmethod
    def from_vector(cls, n, m, vec):
        vec = list(vec)
        keys = list(combinations(range(m), n))
        if len(vec) != len(keys) * m:
            raise ValueError("vector has wrong length")
        return cls(n, m, {k: tuple(vec[i * m:(i + 1) * m]) for i, k in enumerate(keys)})

    def __repr__(self):
        items = ", ".join(f"{tuple(i + 1 for i in k)}: {[str(x) for x in v]}"
                          for k, v in sorted(self._table.items()))
        return f"StructureConstants(n={self.n}, m={self.m}, {{{items}}})"


# ------------------------------------------------------------ numeric paths

_INT64_SAFE = 1 << 24


def numeric_tensor(A: StructureConstants):
    """(array, scale) with array == scale * A.tensor.  Rational tables are
    scaled to integers (int64 when entries are small); other scalar types
    come back unchanged with scale 1.  Cached on the table."""
    cached = A.__dict__.get("_numeric")
    if cached is not None:
        return cached
    T = A.tensor
    if not A.is_rational:
        return T, 1
    d = common_denominator(A.scalars())
    ints = np.vectorize(lambda x: int(x * d), otypes=[object])(T) if T.size else T
    if all(abs(x) < _INT64_SAFE for x in A.scalars() for x in [x * d]):
        ints = ints.astype(np.int64)
        ints.flags.writeable = False
    A.__dict__["_numeric"] = (ints, d)
    return ints, d


def _unscale(x, scale):
    if isinstance(x, (np.integer, int)):
        return Fraction(int(x), scale) if scale != 1 else Fraction(int(x))
    return x / scale if scale != 1 else x


@dataclass(frozen=True)
class NambuResidual:
    inner: tuple   # the n-1 outer arguments I
    outer: tuple   # the increasing n-tuple J fed to the inner bracket
    index: int     # output basis index s
    value: object

    def one_based(self):
        return {"inner": [i + 1 for i in self.inner], "outer": [j + 1 for j in self.outer],
                "index": self.index + 1, "value": self.value}


def nambu_relations(A: StructureConstants, include_zero=False):
    """Polynomial relations of the variety, evaluated at A:

        sum_k C^k_J C^s_{I,k} - sum_r sum_k C^k_{I,j_r} C^s_{j_1..k..j_n}

    for increasing I (n-1 indices), increasing J (n indices) and every s."""
    n, m = A.n, A.m
    T, scale = numeric_tensor(A)
    Js = list(combinations(range(m), n))
    if not Js:
        return []
    V = np.stack([T[J] for J in Js])                       # (NJ, k)
    G = []
    for r in range(n):
        g = np.empty((len(Js), m, m), dtype=T.dtype)
        for a, J in enumerate(Js):
            idx = J[:r] + (slice(None),) + J[r + 1:]
            g[a] = T[idx]                                   # [k, s]
        G.append(g)
    out = []
    for I in combinations(range(m), n - 1):
        MI = T[I]                                           # [k, s]
        res = V.dot(MI)
        for r in range(n):
            W = MI[[J[r] for J in Js]]                      # [J, k] = C^k_{I, j_r}
            res = res - np.einsum("Jk,Jks->Js", W, G[r])
        for a, J in enumerate(Js):
            for s in range(m):
                v = res[a, s]
                if include_zero or v != 0:
                    out.append(NambuResidual(I, J, s, _unscale(v, scale * scale)))
    return out


def check_nambu(A: StructureConstants):
    """Nonzero residuals of the Nambu identity on basis tuples; empty iff A
    is an n-Lie algebra."""
    return nambu_relations(A)


def is_nambu(A):
    return not check_nambu(A)


# ----------------------------------------------------------------- cochains

def fundamental_basis(n, m):
    """Basis of the (n-1)-th exterior power: increasing (n-1)-tuples."""
    return list(combinations(range(m), n - 1))


class Cochain:
    """Multilinear map with values in K^m.  Degree p >= 1 takes p-1
    fundamental-basis blocks followed by one vector; ``data`` has shape
    (F,)*(p-1) + (m, m) with the last two axes (input z, output)."""

    __slots__ = ("n", "m", "degree", "data")

    def __init__(self, n, m, degree, data):
        self.n, self.m, self.degree = n, m, degree
        F = len(fundamental_basis(n, m))
        data = np.asarray(data, dtype=object)
        if data.shape != (F,) * (degree - 1) + (m, m):
            raise ValueError(f"cochain data has shape {data.shape}")
        self.data = data

    @classmethod
    def zero(cls, n, m, degree):
        F = len(fundamental_basis(n, m))
        d = np.empty((F,) * (degree - 1) + (m, m), dtype=object)
        d.fill(Fraction(0))
        return cls(n, m, degree, d)

    @classmethod
    def from_skew(cls, A: StructureConstants):
        """Degree-2 cochain x_1..x_n -> A(x_1..x_n)."""
        n, m = A.n, A.m
        blocks = fundamental_basis(n, m)
        T = A.tensor
        d = np.empty((len(blocks), m, m), dtype=object)
        for a, I in enumerate(blocks):
            d[a] = T[I]
        return cls(n, m, 2, d)

    @classmethod
    def from_linear(cls, n, M):
        """Degree-1 cochain from a matrix with M[i, j] = coefficient of e_i
        in phi(e_j)."""
        M = np.asarray(M, dtype=object)
        return cls(n, M.shape[0], 1, M.T.copy())

    def to_linear(self):
        if self.degree != 1:
            raise ValueError("not a degree-1 cochain")
        return self.data.T.copy()

    def to_skew(self):
        """The skew n-ary map of a degree-2 cochain (must be skew)."""
        if self.degree != 2:
            raise ValueError("not a degree-2 cochain")
        n, m = self.n, self.m
        pos = {I: a for a, I in enumerate(fundamental_basis(n, m))}
        table = {}
        for J in combinations(range(m), n):
            table[J] = tuple(self.data[pos[J[:-1]], J[-1]])
        S = StructureConstants(n, m, table)
        if Cochain.from_skew(S) != self:
            raise ValueError("cochain is not skew-symmetric")
        return S

    def is_zero(self):
        return all(x == 0 for x in self.data.flat)

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return (self.degree == other.degree and self.data.shape == other.data.shape
                and all(a == b for a, b in zip(self.data.flat, other.data.flat)))

    def __add__(self, other):
        return Cochain(self.n, self.m, self.degree, self.data + other.data)

    def __sub__(self, other):
        return Cochain(self.n, self.m, self.degree, self.data - other.data)

    def __neg__(self):
        return Cochain(self.n, self.m, self.degree, -self.data)

    def __rmul__(self, c):
        return Cochain(self.n, self.m, self.degree, self.data * c)

    def flat(self):
        return list(self.data.flat)

    def evaluate(self, *vectors):
        """Evaluate on (p-1)(n-1)+1 vectors, grouped into wedge blocks."""
        n, m, p = self.n, self.m, self.degree
        if len(vectors) != (p - 1) * (n - 1) + 1:
            raise ValueError("wrong number of arguments")
        out = self.data
        for b in range(p - 1):
            w = wedge_coordinates(vectors[b * (n - 1):(b + 1) * (n - 1)], m)
            out = np.tensordot(w, out, axes=(0, 0))
        return tuple(np.asarray(vectors[-1], dtype=object).dot(out))

    def __repr__(self):
        return f"Cochain(degree={self.degree}, n={self.n}, m={self.m})"


def wedge_coordinates(vectors, m):
    """Coordinates of v_1 ^ ... ^ v_k on the increasing-tuple basis."""
    k = len(vectors)
    V = [list(v) for v in vectors]
    out = []
    for I in combinations(range(m), k):
        sub = [[V[r][i] for i in I] for r in range(k)]
        out.append(linalg.generic_det(sub) if k > 1 else sub[0][0])
    return np.array(out, dtype=object)


def circle(mu: StructureConstants, nu: StructureConstants) -> Cochain:
    """mu o nu (x_1..x_{2n-1}) = mu(x_1..x_{n-1}, nu(x_n..x_{2n-1}))
       - sum_{i>=n} mu(x_n, .., nu(x_1..x_{n-1}, x_i), .., x_{2n-1}),
    as a degree-3 cochain."""
    mu._same_shape(nu)
    n, m = mu.n, mu.m
    Tm, sm = numeric_tensor(mu)
    Tn, sn = numeric_tensor(nu)
    blocks = fundamental_basis(n, m)
    Js = list(combinations(range(m), n))
    on_J = {}
    for a, I in enumerate(blocks):
        MI = Tm[I]                         # mu(I, k)[s]
        NI = Tn[I]                         # nu(I, y)[k]
        for J in Js:
            v = Tn[J]
            acc = v.dot(MI)
            for r in range(n):
                w = NI[J[r]]
                idx = J[:r] + (slice(None),) + J[r + 1:]
                acc = acc - w.dot(Tm[idx])
            on_J[a, J] = acc
    F = len(blocks)
    data = np.empty((F, F, m, m), dtype=object)
    data.fill(Fraction(0))
    scale = sm * sn
    zero = np.array([Fraction(0)] * m, dtype=object)
    for a in range(F):
        for b, Jp in enumerate(blocks):
            for z in range(m):
                key, s = canonical(Jp + (z,))
                if s == 0:
                    data[a, b, z] = zero
                else:
                    data[a, b, z] = [s * _unscale(x, scale) for x in on_J[a, key]]
    return Cochain(n, m, 3, data)


# ------------------------------------------------ generalized Jacobi identity

def generalized_jacobi_residuals(A: StructureConstants):
    """Nonzero values of sum over S_{2n-1} of sgn * [[x_s1..x_sn], x_s(n+1)..]
    on increasing basis (2n-1)-tuples (the sum is alternating, so these
    suffice).  Grouping by the inner n-set gives the factor n!(n-1)!."""
    n, m = A.n, A.m
    T = A.tensor
    factor = factorial(n) * factorial(n - 1)
    out = []
    for X in combinations(range(m), 2 * n - 1):
        acc = np.array([Fraction(0)] * m, dtype=object)
        for S in combinations(range(2 * n - 1), n):
            rest = tuple(i for i in range(2 * n - 1) if i not in S)
            sg = perm_sign(S + rest)
            inner = T[tuple(X[i] for i in S)]
            outer = T[(slice(None),) + tuple(X[i] for i in rest)]
            acc = acc + sg * inner.dot(outer)
        for s in range(m):
            if acc[s] != 0:
                out.append((X, s, factor * acc[s]))
    return out


# --------------------------------------------------- derived algebra, center

def derived_algebra(A):
    """Row basis of N^1 = [N, .., N]."""
    rows = [list(A.value(k)) for k in A.keys() if k in A._table]
    if not rows:
        return np.zeros((0, A.m), dtype=object)
    return linalg.row_basis(np.array(rows, dtype=object))


def center(A):
    """Basis of Z(N) = {z : [z, x_1..x_{n-1}] = 0}."""
    n, m = A.n, A.m
    T = A.tensor
    rows = []
    for I in fundamental_basis(n, m):
        # coefficient matrix of z -> [z, e_I]
        M = T[(slice(None),) + I]       # [i, k]
        for k in range(m):
            rows.append(list(M[:, k]))
    if not rows:
        return linalg.identity(m)
    return linalg.nullspace(np.array(rows, dtype=object))


def derived_and_center(A):
    return derived_algebra(A), center(A)


def span_bracket(A, spaces):
    """Row basis of [V_1, .., V_n] for subspaces given by row bases.  Only
    spans matter, so the table and the bases are scaled to integers."""
    T, _ = numeric_tensor(A)
    T = T.astype(object)
    out = T
    for S in spaces:
        S = np.asarray(S, dtype=object).reshape(-1, A.m)
        if len(S) == 0:
            return np.zeros((0, A.m), dtype=object)
        d = common_denominator(S.flat)
        Si = np.array([[int(x * d) for x in row] for row in S], dtype=object)
        # contract the leading argument axis, append the new axis at the end
        out = np.moveaxis(np.tensordot(out, Si, axes=(0, 1)), -1, out.ndim - 2)
    vecs = out.reshape(-1, A.m)
    vecs = vecs[[any(x != 0 for x in row) for row in vecs]]
    if not len(vecs):
        return np.zeros((0, A.m), dtype=object)
    return linalg.row_basis(vecs)


def intersect_spaces(U, V, m):
    """Row basis of the intersection of two row spaces."""
    U = np.asarray(U, dtype=object).reshape(-1, m)
    V = np.asarray(V, dtype=object).reshape(-1, m)
    if len(U) == 0 or len(V) == 0:
        return np.zeros((0, m), dtype=object)
    M = np.concatenate([U, -V]).T           # U^T a = V^T b
    K = linalg.nullspace(M)
    if len(K) == 0:
        return np.zeros((0, m), dtype=object)
    vecs = K[:, :len(U)].dot(U)
    return linalg.row_basis(vecs)


# ------------------------------------------------------------ basis changes

def act_basis_change(f, A: StructureConstants):
    """Transport A along an invertible f (columns are images of e_j):
    [x_1..x_n]' = f^{-1}[f x_1, .., f x_n]."""
    f = np.asarray(f, dtype=object)
    m = A.m
    if f.shape != (m, m):
        raise ValueError("basis change has wrong size")
    if all(isinstance(x, (int, Fraction)) for x in f.flat) and A.is_rational:
        finv = linalg.inverse(f)
    else:
        finv = np.array(linalg.generic_inverse(f.tolist()), dtype=object)
    T = A.tensor
    for ax in range(A.n):
        # contract argument axis with f: T[.., w, ..] f[w, i]
        T = np.moveaxis(np.tensordot(T, f, axes=(ax, 0)), -1, ax)
    T = np.tensordot(T, finv, axes=(A.n, 1))
    return StructureConstants.from_tensor(A.n, m, T)


def is_morphism(f, A: StructureConstants, B: StructureConstants):
    """f[x_1..x_n]_A == [f x_1, .., f x_n]_B on basis tuples (n arguments)."""
    f = np.asarray(f, dtype=object)
    TB = B.tensor
    for key in A.keys():
        lhs = f.dot(np.array(A.value(key), dtype=object))
        out = TB
        for i in key:
            out = np.tensordot(f[:, i], out, axes=(0, 0))
        if any(a != b for a, b in zip(lhs, out)):
            return False
    return True


# ---------------------------------------------------------- representations

class Representation:
    """rho: fundamental-basis block -> d x d matrix, extended linearly."""

    def __init__(self, n, m, d, matrices):
        self.n, self.m, self.d = n, m, d
        blocks = fundamental_basis(n, m)
        self.matrices = {}
        for I in blocks:
            M = np.asarray(matrices.get(I, np.zeros((d, d), dtype=object)), dtype=object)
            if M.shape != (d, d):
                raise ValueError("representation matrix has wrong size")
            self.matrices[I] = M

    def of_tuple(self, args):
        key, s = canonical(args)
        if s == 0:
            z = np.empty((self.d, self.d), dtype=object)
            z.fill(Fraction(0))
            return z
        return s * self.matrices[key]


def adjoint_representation(A):
    T = A.tensor
    return Representation(A.n, A.m, A.m,
                          {I: T[I].T.copy() for I in fundamental_basis(A.n, A.m)})


def check_representation(rho: Representation, A: StructureConstants):
    """Residuals of rho(x)rho(y) - rho(y)rho(x) - sum_i rho(y_1..[x, y_i]..y_{n-1})
    on basis blocks x, y.  Returns a list of (x, y, residual matrix).

    This is the form the adjoint map satisfies by the Nambu identity; the
    variant with x and y exchanged on the right differs by a sign."""
    T = A.tensor
    blocks = fundamental_basis(A.n, A.m)
    out = []
    for x in blocks:
        for y in blocks:
            R = rho.matrices[x].dot(rho.matrices[y]) - rho.matrices[y].dot(rho.matrices[x])
            for i in range(len(y)):
                v = T[x + (y[i],)]
                for w in range(A.m):
                    if v[w] != 0:
                        R = R - v[w] * rho.of_tuple(y[:i] + (w,) + y[i + 1:])
            if any(e != 0 for e in R.flat):
                out.append((x, y, R))
    return out


def representations_equivalent(rho1, rho2, f):
    f = np.asarray(f, dtype=object)
    if linalg.det(f) == 0:
        raise ValueError("intertwiner is singular")
    return all(np.array_equal(f.dot(rho1.matrices[I]), rho2.matrices[I].dot(f))
               for I in rho1.matrices)


# ------------------------------------------------------ n-ary associativity

class NAryTable:
    """Arbitrary n-ary multiplication on K^m (no symmetry), array of shape
    (m,)*n + (m,)."""

    def __init__(self, n, m, data=None):
        self.n, self.m = n, m
        arr = np.empty((m,) * n + (m,), dtype=object)
        arr.fill(Fraction(0))
        if isinstance(data, dict):
            for args, val in data.items():
                arr[tuple(args)] = [Fraction(x) for x in val]
        elif data is not None:
            arr[...] = np.asarray(data, dtype=object)
        self.data = arr

    @classmethod
    def from_products(cls, n, m, products):
        """1-based {(i, j, k): {l: c}}."""
        t = cls(n, m)
        for args, val in products.items():
            for k, c in val.items():
                t.data[tuple(a - 1 for a in args) + (k - 1,)] += Fraction(c)
        return t

    def apply(self, vectors):
        out = self.data
        for v in vectors:
            out = np.tensordot(np.asarray(v, dtype=object), out, axes=(0, 0))
        return out


def _placement(T: NAryTable, i):
    """Tensor of m(x_1..x_i, m(x_{i+1}..x_{i+n}), ..x_{2n-1}) over all basis
    (2n-1)-tuples, shape (m,)*(2n-1) + (m,)."""
    n = T.n
    M = T.data
    P = np.tensordot(M, M, axes=([n], [i]))     # inner args, outer args without slot i, out
    return np.moveaxis(P, list(range(n)), list(range(i, i + n)))


def check_associativity_type(T: NAryTable, mode: str):
    """Residuals of total / weak / partial associativity on basis
    (2n-1)-tuples.  Returns a list of (args, residual vector)."""
    n = T.n
    if mode not in ("total", "weak", "partial"):
        raise ValueError(f"unknown associativity mode {mode!r}")
    P = [_placement(T, i) for i in range(n)]
    if mode == "total":
        res = [P[i] - P[0] for i in range(1, n)]
    elif mode == "weak":
        res = [P[n - 1] - P[0]]
    else:
        res = [sum(P[1:], P[0])]
    out = []
    for args in product(range(T.m), repeat=2 * n - 1):
        for R in res:
            r = R[args]
            if any(x != 0 for x in r):
                out.append((args, r))
                break
    return out


def skew_symmetrize_to_lie(T: NAryTable):
    """[x_1..x_n] = sum_sigma sgn(sigma) m(x_sigma); requires partial
    associativity."""
    if check_associativity_type(T, "partial"):
        raise ValueError("table is not partially associative")
    n, m = T.n, T.m
    table = {}
    for I in combinations(range(m), n):
        acc = np.array([Fraction(0)] * m, dtype=object)
        for p in permutations(range(n)):
            acc = acc + perm_sign(p) * T.data[tuple(I[i] for i in p)]
        table[I] = tuple(acc)
    return StructureConstants(n, m, table)
