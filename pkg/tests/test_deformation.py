import random
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from nlie.algebra import Cochain, StructureConstants, circle, fundamental_basis
from nlie.cohomology import H2, cohomology_dims, delta1_skew, delta2, delta_general, is_cocycle2
from nlie.deformation import (BaseElement, CommutativeBase, DeformationSeries, FormalAutomorphism,
                              GlobalDeformation, TwistedSeries, apply_automorphism,
                              bimodule_associative, check_global_deformation, deformation_residual,
                              dual_numbers, ground_field, is_infinitesimal_cocycle, obstruction,
                              push_out, solve_next_order, trivialize_if_possible,
                              truncated_polynomial_base, twisted_multiply)
from nlie import linalg
from conftest import heisenberg, instances, rand_matrix, rand_q, rand_skew, simple3


def random_cocycle(rng, A, h2=None):
    """Coboundary plus a random H^2 class."""
    h2 = h2 or H2(A)
    coords = [rand_q(rng) for _ in range(h2.dim)]
    return h2.representative(coords) + delta1_skew(rand_matrix(rng, A.m, A.m), A)


def non_cocycle(rng, A):
    while True:
        psi = rand_skew(rng, A.n, A.m)
        if not is_cocycle2(psi, A):
            return psi


def trivial_series(A, k):
    return DeformationSeries(A, [StructureConstants.zero(A.n, A.m)] * k)


# ------------------------------------------------------------ residuals

def test_residual_examples(rng):
    A = heisenberg()
    assert deformation_residual(DeformationSeries(A))[0].is_zero()
    D = DeformationSeries(A, [delta1_skew(rand_matrix(rng, 4, 4), A)])
    assert deformation_residual(D)[1].is_zero()
    assert not deformation_residual(DeformationSeries(A, [non_cocycle(rng, A)]))[1].is_zero()


def test_first_residual_is_coboundary(rng):
    for _, _, A in instances(3, 4, draws=1):
        mu1 = rand_skew(rng, 3, 4)
        R = deformation_residual(DeformationSeries(A, [mu1]))
        assert R[1] == delta2(mu1, A)
        assert R[2] == circle(mu1, mu1)


def test_infinitesimal_cocycle(rng):
    A = heisenberg()
    assert is_infinitesimal_cocycle(DeformationSeries(A, [A]))
    assert is_infinitesimal_cocycle(DeformationSeries(A, [delta1_skew(rand_matrix(rng, 4, 4), A)]))
    assert not is_infinitesimal_cocycle(DeformationSeries(A, [non_cocycle(rng, A)]))
    with pytest.raises(ValueError):
        is_infinitesimal_cocycle(DeformationSeries(A))


def test_obstruction(rng):
    A = heisenberg()
    mu1 = random_cocycle(rng, A)
    D = DeformationSeries(A, [mu1])
    assert obstruction(D, 1).is_zero()
    ob = obstruction(D, 2)
    assert ob == circle(mu1, mu1)
    assert delta_general(ob, A).is_zero()
    with pytest.raises(ValueError):
        obstruction(DeformationSeries(A, [non_cocycle(rng, A)]), 2)


def test_solve_next_order(rng):
    for _, _, A in instances(3, 4, draws=1)[1:]:
        mu1 = random_cocycle(rng, A)
        D = DeformationSeries(A, [mu1])
        res = solve_next_order(D, 2)
        if res.solvable:
            D2 = DeformationSeries(A, [mu1, res.term])
            assert all(r.is_zero() for r in deformation_residual(D2)[:3])
        else:
            assert not res.obstruction.is_zero()


# --------------------------------------------------- formal automorphisms

def test_identity_automorphism(rng):
    A = heisenberg()
    D = DeformationSeries(A, [random_cocycle(rng, A), rand_skew(rng, 3, 4)])
    assert apply_automorphism(D, FormalAutomorphism.identity(4, 2)) == D


def test_first_order_sign(rng):
    """Transporting the trivial series along phi_t = 1 + t phi gives mu'_1 = -delta^1 phi."""
    for _, _, A in instances(3, 4, draws=1):
        phi = rand_matrix(rng, 4, 4)
        D = apply_automorphism(trivial_series(A, 1), FormalAutomorphism([phi], m=4))
        assert D.term(1) == -1 * delta1_skew(phi, A)


def test_automorphism_inverse(rng):
    A = simple3()
    Phi = FormalAutomorphism([rand_matrix(rng, 3, 3), rand_matrix(rng, 3, 3)], m=3)
    inv = Phi.inverse()
    assert Phi.compose(inv) == FormalAutomorphism.identity(3, 2)
    D = DeformationSeries(A, [rand_skew(rng, 3, 3), rand_skew(rng, 3, 3)])
    assert apply_automorphism(apply_automorphism(D, Phi), inv) == D


def test_equivalence_preserves_equation(rng):
    A = heisenberg()
    mu1 = random_cocycle(rng, A)
    res = solve_next_order(DeformationSeries(A, [mu1]), 2)
    terms = [mu1, res.term] if res.solvable else [mu1]
    D = DeformationSeries(A, terms)
    k = D.order
    Phi = FormalAutomorphism([rand_matrix(rng, 4, 4) for _ in range(k)], m=4)
    D2 = apply_automorphism(D, Phi)
    assert all(r.is_zero() for r in deformation_residual(D2)[:k + 1])


def test_h2_class_invariant(rng):
    A = heisenberg()
    h2 = H2(A)
    mu1 = random_cocycle(rng, A, h2)
    c = h2.coordinates(mu1)
    for _ in range(5):
        Phi = FormalAutomorphism([rand_matrix(rng, 4, 4)], m=4)
        assert h2.coordinates(apply_automorphism(DeformationSeries(A, [mu1]), Phi).term(1)) == c


# ---------------------------------------------------------- trivialization

def test_trivialize_constructed(rng):
    A = heisenberg()
    Phi = FormalAutomorphism([rand_matrix(rng, 4, 4), rand_matrix(rng, 4, 4)], m=4)
    D = apply_automorphism(trivial_series(A, 2), Phi)
    res = trivialize_if_possible(D)
    assert res.trivialized
    assert all(res.series.term(i).is_abelian() for i in (1, 2))
    assert apply_automorphism(D, res.automorphism) == trivial_series(A, 2)


def test_trivialize_when_h2_vanishes(rng):
    rigid = [A for e, _, A in instances(3, 4) + instances(3, 3) if cohomology_dims(A, 2).dim_H == 0]
    assert rigid
    for A in rigid:
        for _ in range(5):
            D = DeformationSeries(A, [random_cocycle(rng, A)])
            assert trivialize_if_possible(D).trivialized


def test_trivialize_reports_class(rng):
    A = heisenberg()
    h2 = H2(A)
    coords = tuple(Fraction(int(i == 0)) for i in range(h2.dim))
    D = DeformationSeries(A, [h2.representative(coords) + delta1_skew(rand_matrix(rng, 4, 4), A)])
    res = trivialize_if_possible(D)
    assert not res.trivialized and res.order == 1 and res.h2_class == coords
    with pytest.raises(ValueError):
        trivialize_if_possible(DeformationSeries(A, [non_cocycle(rng, A)]))


# ---------------------------------------------------- global deformations

def test_base_algebras():
    assert ground_field().d == 1
    B = truncated_polynomial_base(3)
    t = B.basis(1)
    assert t * t * t == B.basis(3) and (t * t * t * t).coords.tolist() == [0] * 4
    with pytest.raises(ValueError):
        CommutativeBase(np.zeros((2, 2, 2), dtype=object), [1, 0], [1, 0])


def test_global_over_ground_field():
    for _, _, A in instances(3, 4):
        G = GlobalDeformation.from_generator_form(ground_field(), A)
        assert check_global_deformation(G) == []
        assert G.specialize() == A


def test_global_dual_numbers(rng):
    A = heisenberg()
    B = dual_numbers()
    for psi in (random_cocycle(rng, A), non_cocycle(rng, A)):
        G = GlobalDeformation.from_generator_form(B, A, [(B.basis(1), psi)])
        fails = check_global_deformation(G)
        assert (not fails) == is_cocycle2(psi, A)
        assert all(f.axiom == 2 for f in fails)


def test_global_axiom3_located():
    A = heisenberg()
    bad = GlobalDeformation(ground_field(), A, StructureConstants.zero(3, 4).map_scalars(
        lambda x: ground_field().element([x]), zero=ground_field().zero()))
    assert any(f.axiom == 3 for f in check_global_deformation(bad))


@pytest.mark.parametrize("seed", range(4))
def test_global_matches_residuals(seed):
    """Over K[t]/(t^{k+1}) the Nambu residual's t^s coefficient is R_s."""
    rng = random.Random(seed)
    A = instances(3, 4, draws=1, seed=seed)[seed + 2][2]
    k = 2
    D = DeformationSeries(A, [rand_skew(rng, 3, 4, density=0.3) for _ in range(k)])
    R = deformation_residual(D)
    G = GlobalDeformation.from_series(D)
    got = {(f.where): f.detail.coords for f in check_global_deformation(G) if f.axiom == 2}
    blocks = fundamental_basis(3, 4)
    pos = {B: i for i, B in enumerate(blocks)}
    for I in blocks:
        for J in combinations(range(4), 3):
            for o in range(4):
                expect = [R[s].data[pos[I], pos[J[:-1]], J[-1], o] for s in range(k + 1)]
                have = got.get((I, J, o))
                have = [Fraction(0)] * (k + 1) if have is None else list(have)
                assert have == expect


def test_push_out(rng):
    A = heisenberg()
    B = dual_numbers()
    psi = random_cocycle(rng, A)
    G = GlobalDeformation.from_generator_form(B, A, [(B.basis(1), psi)])
    same = push_out(G, linalg.identity(2), B)
    assert same.constants == G.constants
    collapsed = push_out(G, [[1, 0]], ground_field())
    assert collapsed.specialize() == A and check_global_deformation(collapsed) == []
    c = Fraction(5, 2)
    scaled = push_out(G, [[1, 0], [0, c]], B)
    expect = GlobalDeformation.from_generator_form(B, A, [(B.basis(1), c * psi)])
    assert scaled.constants == expect.constants
    with pytest.raises(ValueError):
        push_out(G, [[2, 0], [0, 1]], B)          # not unital
    with pytest.raises(ValueError):
        push_out(G, [[1, 1], [0, 1]], B)          # moves the augmentation ideal


# ---------------------------------------------------------- twisted series

def test_twisted_identity_is_commutative(rng):
    I3 = linalg.identity(3)
    lam = TwistedSeries([rand_q(rng) for _ in range(4)], I3)
    vec = TwistedSeries([[rand_q(rng) for _ in range(3)] for _ in range(4)], I3)
    assert twisted_multiply(lam, vec) == twisted_multiply(vec, lam)
    a, b = [rand_q(rng) for _ in range(4)], [rand_q(rng) for _ in range(4)]
    prod = twisted_multiply(TwistedSeries(a, I3), TwistedSeries(b, I3))
    assert prod.coeffs == [sum(a[i] * b[s - i] for i in range(s + 1)) for s in range(4)]


def test_twisted_rule():
    sigma = linalg.identity(3)
    sigma[0, 0] = Fraction(2)
    t = TwistedSeries([0, 1], sigma)
    e1 = TwistedSeries([[1, 0, 0], [0, 0, 0]], sigma)
    left = twisted_multiply(t, e1)
    right = twisted_multiply(e1, t)
    assert list(left.coeffs[1]) == [2, 0, 0]
    diff = [x - y for x, y in zip(left.coeffs[1], right.coeffs[1])]
    assert diff == [1, 0, 0]
    with pytest.raises(ValueError):
        twisted_multiply(t, TwistedSeries([0, 1, 0], sigma))


def _monomial(c, i, k, sigma, tau, vector=False):
    coeffs = [np.zeros(3, dtype=object) + Fraction(0) if vector else Fraction(0) for _ in range(k + 1)]
    coeffs[i] = np.asarray(c, dtype=object) if vector else c
    return TwistedSeries(coeffs, sigma, tau, k, "vector" if vector else "scalar")


@pytest.mark.parametrize("commuting", [True, False])
def test_bimodule_associativity(rng, commuting):
    k = 4
    sigma = rand_matrix(rng, 3, 3)
    tau = sigma.dot(sigma) + linalg.identity(3) if commuting else rand_matrix(rng, 3, 3)
    assert bimodule_associative(sigma, tau) == commuting
    mismatches = 0
    for _ in range(50):
        i, j, l = (rng.randint(0, 1) for _ in range(3))
        L = _monomial(rand_q(rng), i, k, sigma, tau)
        V = _monomial([rand_q(rng) for _ in range(3)], j, k, sigma, tau, vector=True)
        M = _monomial(rand_q(rng), l, k, sigma, tau)
        a = twisted_multiply(twisted_multiply(L, V), M)
        b = twisted_multiply(L, twisted_multiply(V, M))
        mismatches += not (a == b)
    assert (mismatches == 0) == commuting
