"""One-dimensional central extensions [x]_c = [x] + w(x) c."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .algebra import StructureConstants, check_nambu
from .cohomology import ScalarForm, scalar_cocycle


@dataclass
class CentralExtensionSpec:
    algebra: StructureConstants
    omega: ScalarForm

    def __post_init__(self):
        if not isinstance(self.omega, ScalarForm):
            self.omega = ScalarForm(self.algebra.n, self.algebra.m, self.omega)


def central_extend(spec: CentralExtensionSpec) -> StructureConstants:
    """Extension of dimension m+1; the last basis vector is the central c."""
    A, w = spec.algebra, spec.omega
    table = {}
    for key in set(A.table) | set(w.values):
        table[key] = tuple(A.value(key)) + (w.value(key),)
    return StructureConstants(A.n, A.m + 1, table)


def extension_valid_iff_cocycle(spec: CentralExtensionSpec):
    """(check_nambu of the extension is empty, w is a scalar cocycle),
    computed independently of each other."""
    return (not check_nambu(central_extend(spec)), scalar_cocycle(spec.omega, spec.algebra))


def coboundary_witness(omega1, omega2, A: StructureConstants):
    """A linear form f with w_1 - w_2 = f o [..], or None.  Then
    x -> x + f(x) c is an isomorphism from the w_2 extension onto the w_1
    extension."""
    w1 = omega1 if isinstance(omega1, ScalarForm) else ScalarForm(A.n, A.m, omega1)
    w2 = omega2 if isinstance(omega2, ScalarForm) else ScalarForm(A.n, A.m, omega2)
    keys = list(A.keys())
    rows = np.array([list(A.value(k)) for k in keys], dtype=object).reshape(len(keys), A.m)
    rhs = [w1.value(k) - w2.value(k) for k in keys]
    x = linalg.solve(rows, rhs)
    return None if x is None else list(x)


def extensions_equivalent(omega1, omega2, A: StructureConstants) -> bool:
    """True iff w_2 - w_1 is a scalar coboundary."""
    return coboundary_witness(omega1, omega2, A) is not None


def extension_isomorphism(f, m):
    """Matrix of x -> x + f(x) c on K^{m+1} (columns are images)."""
    g = linalg.identity(m + 1)
    for j in range(m):
        g[m, j] = Fraction(f[j])
    return g
