"""Exact linear algebra.

Two routes: a plain Gaussian elimination that works over any field whose
elements support + - * / and ``== 0`` (Fractions, RationalFunctions), and
python-flint for large matrices over Q.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np
import flint


def _is_rational_entry(x):
    return isinstance(x, (int, Fraction, np.integer)) and not isinstance(x, bool)


# ------------------------------------------------------------ generic field

def rref(rows):
    """Reduced row echelon form over a generic field.  Returns (R, pivots)."""
    R = [list(r) for r in rows]
    if not R:
        return R, []
    ncols = len(R[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(R)) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c] if not isinstance(R[r][c], int) else Fraction(1, R[r][c])
        R[r] = [x * inv for x in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == len(R):
            break
    return R, pivots


def generic_rank(rows):
    return len(rref(rows)[1])


def generic_nullspace(rows, ncols=None):
    """Basis of {x : rows @ x = 0} as a list of vectors."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    R, piv = rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(piv):
            v[pc] = -R[i][f]
        basis.append(v)
    return basis


def generic_solve(rows, rhs):
    """One solution x of rows @ x = rhs, or None."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    ncols = len(rows[0]) if rows else 0
    R, piv = rref(aug)
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for i, pc in enumerate(piv):
        x[pc] = R[i][ncols]
    return x


def generic_inverse(mat):
    k = len(mat)
    aug = [list(mat[i]) + [int(i == j) for j in range(k)] for i in range(k)]
    R, piv = rref(aug)
    if piv[:k] != list(range(k)) or len(piv) < k or piv[k - 1] >= k:
        raise ValueError("matrix is singular")
    return [row[k:] for row in R]


def generic_det(mat):
    k = len(mat)
    A = [list(r) for r in mat]
    det = 1
    for c in range(k):
        p = next((i for i in range(c, k) if A[i][c] != 0), None)
        if p is None:
            return 0 * det
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det = det * A[c][c]
        inv = 1 / A[c][c] if not isinstance(A[c][c], int) else Fraction(1, A[c][c])
        for i in range(c + 1, k):
            if A[i][c] != 0:
                f = A[i][c] * inv
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return det


# ------------------------------------------------------------------ over Q

def _to_fmpq_mat(M):
    M = np.asarray(M)
    if M.dtype.kind not in "iu":
        M = M.astype(object)
    if M.ndim != 2:
        raise ValueError("expected a matrix")
    r, c = M.shape
    if r == 0 or c == 0:
        return None, (r, c)
    if M.dtype.kind in "iu":
        return flint.fmpz_mat(M.tolist()), (r, c)
    if all(isinstance(x, (int, np.integer)) for x in M.flat):
        return flint.fmpz_mat([[int(x) for x in row] for row in M]), (r, c)
    flat = []
    for x in M.flat:
        if isinstance(x, Fraction):
            flat.append(flint.fmpq(x.numerator, x.denominator))
        elif _is_rational_entry(x):
            flat.append(flint.fmpq(int(x)))
        else:
            raise TypeError(f"non-rational entry {x!r}")
    return flint.fmpq_mat(r, c, flat), (r, c)


def _from_fmpq(x):
    if isinstance(x, flint.fmpz):
        return Fraction(int(x))
    return Fraction(int(x.p), int(x.q))


def _int_matrix(M):
    """Clear denominators row by row; rank and kernel are unchanged."""
    M = np.asarray(M)
    if M.dtype.kind in "iu":
        return M
    M = M.astype(object)
    out = np.empty(M.shape, dtype=object)
    for i in range(M.shape[0]):
        d = 1
        for x in M[i]:
            if isinstance(x, Fraction) and x.denominator != 1:
                d = d * x.denominator // np.gcd(d, x.denominator)
        out[i] = [int(x * d) for x in M[i]]
    return out


def rank(M) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    F, _ = _to_fmpq_mat(_int_matrix(M))
    return F.rank()


def nullspace(M):
    """Basis of the right kernel, as a (k, ncols) object array of Fractions."""
    M = np.asarray(M)
    nc = M.shape[1]
    if M.shape[0] == 0:
        return np.array([[Fraction(int(i == j)) for i in range(nc)] for j in range(nc)],
                        dtype=object).reshape(nc, nc)
    F, _ = _to_fmpq_mat(_int_matrix(M))
    X, k = F.nullspace()
    out = np.empty((k, nc), dtype=object)
    for j in range(k):
        for i in range(nc):
            out[j, i] = Fraction(int(X[i, j]))
    return out


def row_basis(M):
    """Independent rows spanning the row space (as rref rows)."""
    M = np.asarray(M, dtype=object)
    if M.size == 0:
        return np.zeros((0, M.shape[1] if M.ndim == 2 else 0), dtype=object)
    F, _ = _to_fmpq_mat(_int_matrix(M))
    R, r = flint.fmpq_mat(F).rref()
    out = np.empty((r, M.shape[1]), dtype=object)
    for i in range(r):
        for j in range(M.shape[1]):
            out[i, j] = _from_fmpq(R[i, j])
    return out


def rref_pivots(M):
    M = np.asarray(M, dtype=object)
    if M.size == 0:
        return []
    F, _ = _to_fmpq_mat(_int_matrix(M))
    R, r = flint.fmpq_mat(F).rref()
    piv = []
    row = 0
    for j in range(M.shape[1]):
        if row < r and R[row, j] != 0:
            piv.append(j)
            row += 1
    return piv


def solve(M, b):
    """One rational solution of M x = b, or None if inconsistent."""
    M = np.asarray(M, dtype=object)
    b = np.asarray(b, dtype=object).reshape(-1, 1)
    aug = np.concatenate([M, b], axis=1)
    F, _ = _to_fmpq_mat(aug)
    R, r = flint.fmpq_mat(F).rref()
    nc = M.shape[1]
    x = [Fraction(0)] * nc
    row = 0
    for j in range(nc + 1):
        if row < r and R[row, j] != 0:
            if j == nc:
                return None
            x[j] = _from_fmpq(R[row, nc])
            row += 1
    return np.array(x, dtype=object)


def inverse(M):
    M = np.asarray(M, dtype=object)
    F, (r, c) = _to_fmpq_mat(M)
    if r != c:
        raise ValueError("not square")
    F = flint.fmpq_mat(F)
    if F.det() == 0:
        raise ValueError("matrix is singular")
    G = F.inv()
    return np.array([[_from_fmpq(G[i, j]) for j in range(c)] for i in range(r)], dtype=object)


def det(M):
    M = np.asarray(M, dtype=object)
    if M.shape[0] == 0:
        return Fraction(1)
    F, _ = _to_fmpq_mat(M)
    return _from_fmpq(flint.fmpq_mat(F).det())


def charpoly(M):
    """Characteristic polynomial det(xI - M) as a coefficient list, lowest first."""
    M = np.asarray(M, dtype=object)
    if M.shape[0] == 0:
        return [Fraction(1)]
    F, _ = _to_fmpq_mat(M)
    p = flint.fmpq_mat(F).charpoly()
    return [_from_fmpq(c) for c in p.coeffs()]


def matmul(A, B):
    return np.asarray(A, dtype=object).dot(np.asarray(B, dtype=object))


def identity(k):
    M = np.empty((k, k), dtype=object)
    for i in range(k):
        for j in range(k):
            M[i, j] = Fraction(int(i == j))
    return M


def to_fraction_array(a):
    a = np.asarray(a, dtype=object)
    out = np.empty(a.shape, dtype=object)
    for idx, x in np.ndenumerate(a):
        out[idx] = Fraction(x) if not isinstance(x, Fraction) else x
    return out


def is_rational_array(a):
    return all(_is_rational_entry(x) for x in np.asarray(a, dtype=object).flat)
