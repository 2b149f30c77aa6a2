"""The fundamental set L(N) = wedge^{n-1} N, the adjoint action
L(x)z = [x_1..x_{n-1}, z], and the induced Leibniz algebra
[x, y] = sum_i (y_1, .., L(x)y_i, .., y_{n-1})."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

from .algebra import (StructureConstants, _unscale, canonical, check_nambu, fundamental_basis as _fb,
                      numeric_tensor)
from .exact import common_denominator


def fundamental_basis(A_or_n, m=None):
    """Increasing (n-1)-tuples, the wedge basis of L(N)."""
    if isinstance(A_or_n, StructureConstants):
        return _fb(A_or_n.n, A_or_n.m)
    return _fb(A_or_n, m)


@lru_cache(maxsize=64)
def derivation_wedge_action(n, m):
    """W[b, y, w, c]: coefficient of wedge basis c in E_{yw}(e_{B[b]}),
    where E_{yw} sends e_y to e_w and acts as a derivation on wedges."""
    blocks = _fb(n, m)
    pos = {B: i for i, B in enumerate(blocks)}
    F = len(blocks)
    W = np.zeros((F, m, m, F), dtype=np.int64)
    for b, B in enumerate(blocks):
        for r, y in enumerate(B):
            for w in range(m):
                key, s = canonical(B[:r] + (w,) + B[r + 1:])
                if s:
                    W[b, y, w, pos[key]] += s
    W.setflags(write=False)
    return W


def action_tensor(A: StructureConstants, numeric=False):
    """Lact[a, z, k] = [e_{B[a]}, e_z]_k.  With numeric=True returns the
    scaled integer version and its scale."""
    T, scale = numeric_tensor(A) if numeric else (A.tensor, 1)
    blocks = _fb(A.n, A.m)
    L = np.stack([T[B] for B in blocks]) if blocks else np.zeros((0, A.m, A.m), dtype=T.dtype)
    return (L, scale) if numeric else L


def adjoint_action(A: StructureConstants, x, z):
    """L(x)z for x given by coordinates on the fundamental basis."""
    L = action_tensor(A)
    x = np.asarray(x, dtype=object)
    z = np.asarray(z, dtype=object)
    return tuple(np.tensordot(x, np.tensordot(z, L, axes=(0, 1)), axes=(0, 0)))


def adjoint_matrix(A, block):
    """Matrix of L(e_block) with M[k, z] = [e_block, e_z]_k."""
    key, s = canonical(block)
    T = A.tensor
    if s == 0:
        return np.full((A.m, A.m), Fraction(0), dtype=object)
    return s * T[key].T


def leibniz_table(A: StructureConstants, numeric=False):
    """Lb[a, b, c]: coefficient of e_c in [e_a, e_b] = L(e_a).e_b.  No
    validity check (used to test the morphism property on arbitrary
    tables)."""
    L, scale = action_tensor(A, numeric=True)
    W = derivation_wedge_action(A.n, A.m)
    if L.dtype == object:
        Lb = np.einsum("ayw,bywc->abc", L, W.astype(object))
    else:
        Lb = np.einsum("ayw,bywc->abc", L, W)
    if numeric:
        return Lb, scale
    if L.dtype != object or scale != 1:
        Lb = np.vectorize(lambda x: _unscale(x, scale), otypes=[object])(Lb) if Lb.size else Lb.astype(object)
    return Lb


def _scaled(Lb):
    """Integer copy of a rational table (int64 when products cannot overflow)."""
    if not all(isinstance(x, (int, Fraction)) for x in Lb.flat):
        return Lb, 1
    d = common_denominator(Lb.flat)
    ints = np.vectorize(lambda x: int(x * d), otypes=[object])(Lb) if Lb.size else Lb
    big = max((abs(x) for x in ints.flat), default=0)
    if big * big * max(Lb.shape[0], 1) * 3 < 1 << 62:
        return ints.astype(np.int64), d
    return ints, d


class InducedLeibnizAlgebra:
    """Bracket on L(N) in the wedge basis."""

    def __init__(self, A: StructureConstants, table):
        self.base = A
        self.blocks = _fb(A.n, A.m)
        self.table = table

    @property
    def dim(self):
        return len(self.blocks)

    def bracket(self, x, y):
        x = np.asarray(x, dtype=object)
        y = np.asarray(y, dtype=object)
        return tuple(np.tensordot(y, np.tensordot(x, self.table, axes=(0, 0)), axes=(0, 0)))

    def leibniz_residuals(self):
        """[x,[y,z]] - [[x,y],z] - [y,[x,z]] on basis triples (left Leibniz)."""
        Lb, scale = _scaled(self.table)
        F = self.dim
        lhs = np.einsum("bcd,ade->abce", Lb, Lb)       # [a,[b,c]]
        t1 = np.einsum("abd,dce->abce", Lb, Lb)        # [[a,b],c]
        t2 = np.einsum("acd,bde->abce", Lb, Lb)        # [b,[a,c]]
        R = lhs - t1 - t2
        sq = scale * scale
        return [(int(i), int(j), int(k), tuple(_unscale(v, sq) for v in R[i, j, k]))
                for i, j, k in zip(*np.nonzero(np.any(R != 0, axis=3)))]


def induced_leibniz_bracket(A: StructureConstants) -> InducedLeibnizAlgebra:
    if check_nambu(A):
        raise ValueError("not an n-Lie algebra: the Nambu identity fails")
    return InducedLeibnizAlgebra(A, leibniz_table(A))


def verify_L_morphism(A: StructureConstants):
    """Residuals of L([x, y]) - [L(x), L(y)] on fundamental basis pairs.
    Works on any skew table; empty for n-Lie algebras."""
    L = action_tensor(A)                  # [a, z, k]: (L(x_a))^T
    Lb = leibniz_table(A)
    F = L.shape[0]
    out = []
    for a in range(F):
        for b in range(F):
            lhs = np.tensordot(Lb[a, b], L, axes=(0, 0))                 # [z, k]
            # [L(a), L(b)] as z -> L(a)L(b)z - L(b)L(a)z, row-vector form
            rhs = L[b].dot(L[a]) - L[a].dot(L[b])
            R = lhs - rhs
            if any(v != 0 for v in R.flat):
                out.append((a, b, R))
    return out
