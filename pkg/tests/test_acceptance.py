"""Acceptance criteria, one test per criterion.

Each test is named ``test_criterion_NN_<topic>``; the terminal summary hook in
conftest prints one PASS/FAIL line per criterion after the run.  Runtime
bounds are asserted where a criterion states one.
"""
import cmath
import random
import time
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from conftest import heisenberg, instances, rand_invertible, rand_matrix, rand_q, rand_skew
from nlie import linalg
from nlie.algebra import Cochain, StructureConstants, act_basis_change, check_nambu, circle
from nlie.cohomology import (H2, ScalarForm, check_delta_commutation, cohomology_dims, delta1_skew,
                             delta_general, delta2,
                             delta_squared_is_zero, derivations)
from nlie.deformation import (DeformationSeries, FormalAutomorphism, apply_automorphism,
                              deformation_residual, trivialize_if_possible)
from nlie.extensions import CentralExtensionSpec, extension_valid_iff_cocycle
from nlie.poisson import check_poisson_axioms, larsson_brackets, monomials, virasoro_check
from nlie.variety import (LaurentFamily, NoLimit, degenerate, identify, random_basis_change,
                          similar_up_to_scalar)


def report(line):
    print(line)


def catalog_instances(pairs, draws=1, seed=0):
    out = []
    for n, m in pairs:
        out.extend(instances(n, m, draws=draws, seed=seed + 10 * n + m))
    return out


ALL = [(n, m) for n in (3, 4) for m in range(2, n + 3)]
N3_SMALL = [(3, 2), (3, 3), (3, 4)]


def random_cocycle(rng, A, h2):
    coords = [rand_q(rng) for _ in range(h2.dim)]
    return h2.representative(coords) + delta1_skew(rand_matrix(rng, A.m, A.m), A)


# 1 ---------------------------------------------------------------------------

def test_criterion_01_catalog_validity():
    t0 = time.perf_counter()
    algs = catalog_instances(ALL, draws=5)
    bad = [(e.id, p) for e, p, A in algs if check_nambu(A)]
    elapsed = time.perf_counter() - t0
    report(f"{len(algs)} instances, {len(bad)} invalid, {elapsed:.2f}s")
    assert not bad
    assert elapsed < 10
    ids = {e.id for e, _, _ in algs}
    assert any(i.startswith("n+2:") for i in ids) and any(i.startswith("le-n+1:") for i in ids)


# 2 ---------------------------------------------------------------------------

def test_criterion_02_circle_equivalence():
    rng = random.Random(2)
    algs = [A for _, _, A in catalog_instances(ALL, draws=2)]
    for _ in range(50):
        A = rng.choice([B for B in algs if B.m >= B.n])
        algs.append(A + rand_skew(rng, A.n, A.m, density=0.3))
    disagree = 0
    failing = 0
    for A in algs:
        nambu = not check_nambu(A)
        circ = circle(A, A).is_zero()
        disagree += nambu != circ
        failing += not nambu
    report(f"{len(algs)} tables, {failing} non-Nambu, {disagree} disagreements")
    assert disagree == 0
    assert failing >= 45


# 3 ---------------------------------------------------------------------------

def test_criterion_03_complex_property():
    t0 = time.perf_counter()
    algs = catalog_instances(N3_SMALL, draws=2)
    for e, _, A in algs:
        assert delta_squared_is_zero(A, 1), e.id
        assert delta_squared_is_zero(A, 2), e.id
    elapsed = time.perf_counter() - t0
    report(f"{len(algs)} algebras, d2 d1 = 0 and d3 d2 = 0, {elapsed:.2f}s")
    assert elapsed < 60


# 4 ---------------------------------------------------------------------------

@pytest.mark.parametrize("n,m", [(2, 3), (3, 3), (3, 4), (3, 5), (4, 5), (4, 6)])
def test_criterion_04_abelian_cohomology(n, m):
    h = cohomology_dims(StructureConstants.zero(n, m), 2).dim_H
    report(f"n={n} m={m} H2={h}")
    assert h == m * comb(m, n)
    if (n, m) == (3, 4):
        assert h == 16


# 5 ---------------------------------------------------------------------------

def test_criterion_05_deformation_theorems():
    rng = random.Random(5)
    algs = catalog_instances(N3_SMALL, draws=1)
    for _, _, A in algs:
        # (a) first residual is delta^2 mu_1
        for _ in range(20):
            mu1 = rand_skew(rng, A.n, A.m)
            R = deformation_residual(DeformationSeries(A, [mu1]))
            assert R[1] == delta2(mu1, A) == delta_general(Cochain.from_skew(mu1), A)
        # (c) the obstruction of a cocycle is a 3-cocycle
        h2 = H2(A)
        for _ in range(20):
            mu1 = random_cocycle(rng, A, h2)
            assert delta_general(circle(mu1, mu1), A).is_zero()
    # (b) rigid algebras found by a scan
    rigid = [(e, A) for e, _, A in algs if A.m >= A.n and cohomology_dims(A, 2).dim_H == 0]
    assert rigid
    for e, A in rigid:
        for _ in range(20):
            mu1 = delta1_skew(rand_matrix(rng, A.m, A.m), A)
            assert trivialize_if_possible(DeformationSeries(A, [mu1])).trivialized, e.id
    report(f"{len(algs)} algebras; rigid: {[e.id for e, _ in rigid]}")


# 6 ---------------------------------------------------------------------------

def test_criterion_06_equivalence_invariance():
    rng = random.Random(6)
    count = 0
    for _, _, A in catalog_instances(N3_SMALL, draws=1):
        h2 = H2(A)
        for _ in range(3):
            mu1 = random_cocycle(rng, A, h2)
            D = DeformationSeries(A, [mu1])
            c = h2.coordinates(mu1)
            for _ in range(10):
                Phi = FormalAutomorphism([rand_matrix(rng, A.m, A.m)], m=A.m)
                mu1b = apply_automorphism(D, Phi).term(1)
                assert h2.coordinates(mu1b) == c
                count += 1
    report(f"{count} automorphisms, classes unchanged")


# 7 ---------------------------------------------------------------------------

def test_criterion_07_central_extension():
    rng = random.Random(7)
    disagree = total = valid = 0
    for _, _, A in catalog_instances(N3_SMALL, draws=2):
        keys = A.keys()
        for _ in range(30):
            dens = rng.choice([0.2, 0.5, 0.9])
            omega = ScalarForm(3, A.m, {k: rand_q(rng) for k in keys if rng.random() < dens})
            ok, cocycle = extension_valid_iff_cocycle(CentralExtensionSpec(A, omega))
            disagree += ok != cocycle
            valid += ok
            total += 1
    report(f"{total} forms, {valid} cocycles, {disagree} disagreements")
    assert disagree == 0
    assert 0 < valid < total


# 8 ---------------------------------------------------------------------------

def test_criterion_08_degeneration():
    rng = random.Random(8)
    algs = catalog_instances(ALL, draws=1)
    for e, _, A in algs:
        L = degenerate(LaurentFamily.diagonal(["t"] * A.m), A)
        assert isinstance(L, StructureConstants) and L.is_abelian(), e.id
    pole = degenerate(LaurentFamily.diagonal(["t", "1", "1", "1"]), heisenberg())
    assert isinstance(pole, NoLimit) and pole.poles
    limits = poles = 0
    for e, _, A in algs:
        if A.m < A.n:
            continue
        for _ in range(3):
            F = LaurentFamily.diagonal([f"t^{rng.randint(0, 2)}" for _ in range(A.m)])
            L = degenerate(F, A)
            if isinstance(L, NoLimit):
                poles += 1
            else:
                assert not check_nambu(L), e.id
                limits += 1
    report(f"t*I abelian on {len(algs)}; random diagonal families: {limits} limits, {poles} poles")
    assert limits > 0 and poles > 0


# 9 ---------------------------------------------------------------------------

def test_criterion_09_orbit_tangent():
    algs = catalog_instances(ALL, draws=1)
    for e, _, A in algs:
        assert cohomology_dims(A, 2).dim_B == A.m ** 2 - len(derivations(A)), e.id
    report(f"{len(algs)} algebras")


# 10 --------------------------------------------------------------------------

def _eigs(C):
    tr = C[0][0] + C[1][1]
    det = C[0][0] * C[1][1] - C[0][1] * C[1][0]
    r = cmath.sqrt(float(tr) ** 2 - 4 * float(det))
    return [(float(tr) + r) / 2, (float(tr) - r) / 2]


def eigenvalue_ratio_oracle(C1, C2):
    """Does alpha C1 ~ C2 hold for some rational alpha != 0?  Candidates are
    ratios of eigenvalues (numeric), rounded to nearby rationals; each is
    confirmed exactly with the 2 x 2 similarity invariants."""
    C1 = [[Fraction(x) for x in r] for r in C1]
    C2 = [[Fraction(x) for x in r] for r in C2]
    scal = lambda C: C[0][1] == 0 == C[1][0] and C[0][0] == C[1][1]
    inv = lambda C: (C[0][0] + C[1][1], C[0][0] * C[1][1] - C[0][1] * C[1][0])
    cands = {Fraction(1)}
    for lam in _eigs(C1):
        for mu in _eigs(C2):
            if abs(lam) > 1e-9:
                q = mu / lam
                if abs(q.imag) < 1e-9 and abs(q.real) > 1e-9:
                    cands.add(Fraction(q.real).limit_denominator(1000))
    for a in cands:
        S = [[a * x for x in r] for r in C1]
        if scal(S) or scal(C2):
            if S == C2:
                return True
        elif inv(S) == inv(C2):
            return True
    return False


def test_criterion_10_identification():
    rng = random.Random(10)
    count = 0
    for e, p, A in catalog_instances([(3, 2), (3, 3), (3, 4), (3, 5)], draws=1):
        for _ in range(10):
            B = act_basis_change(random_basis_change(A.m, rng), A)
            ids = [x.id for x in identify(B)]
            assert e.id in ids, (e.id, p, ids)
            count += 1
    agree = positives = 0
    for i in range(20):
        C1 = [[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)]
        if i % 2:
            P = rand_invertible(rng, 2)
            a = rng.choice([Fraction(2), Fraction(-1, 2), Fraction(3), Fraction(-5, 3)])
            C2 = (a * P.dot(np.array(C1, dtype=object)).dot(linalg.inverse(P))).tolist()
        else:
            C2 = [[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)]
        got = similar_up_to_scalar(C1, C2)
        expect = eigenvalue_ratio_oracle(C1, C2)
        agree += (got is not None) == expect
        positives += expect
        if got is not None:
            assert eigenvalue_ratio_oracle([[got * x for x in r] for r in C1], C2)
    report(f"{count} basis changes identified; 3(d) similarity {agree}/20 agree, {positives} similar")
    assert agree == 20 and positives >= 10


# 11 --------------------------------------------------------------------------

def test_criterion_11_nambu_poisson():
    t0 = time.perf_counter()
    rep = check_poisson_axioms(monomials(3), leibniz_degree=2)
    elapsed = time.perf_counter() - t0
    report(f"{rep.checked}, ok={rep.ok}, {elapsed:.1f}s")
    assert rep.ok
    assert rep.checked["nambu_tuples"] == comb(20, 2) * comb(20, 3)
    assert rep.checked["leibniz_tuples"] == 10 ** 4
    assert elapsed < 120


# 12 --------------------------------------------------------------------------

def test_criterion_12_virasoro_witt():
    rep = virasoro_check(3)
    report(f"{rep.as_dict()['residual_count']} residuals, all divisible: {rep.all_divisible}, "
           f"nonzero at z=0: {rep.nonzero_at_zero}")
    assert rep.all_divisible
    assert rep.nonzero_at_zero >= 1


# 13 --------------------------------------------------------------------------

def test_criterion_13_larsson():
    rep = larsson_brackets(3)
    d = rep.as_dict()
    report(f"checked {d['checked']}, z sign {rep.z_sign}")
    assert not rep.binary_mismatches
    assert not rep.ternary_mismatches
    assert not rep.substitution_mismatches
    assert d["checked"]["binary"] == 49 and d["checked"]["ternary"] > 0


# 14 --------------------------------------------------------------------------

def test_criterion_14_delta_commutation():
    rng = random.Random(14)
    algs = [A for _, _, A in catalog_instances([(3, 3)], draws=1)]
    algs += [StructureConstants.from_brackets(3, 3, {(1, 2, 3): {1: 1}})]
    F = comb(3, 2)
    for A in algs:
        samples = []
        for p in [1] * 10 + [2] * 10:
            shape = (F,) * (p - 1) + (3, 3)
            data = np.array([rand_q(rng) for _ in range(int(np.prod(shape)))],
                            dtype=object).reshape(shape)
            samples.append(Cochain(3, 3, p, data))
        assert check_delta_commutation(A, samples) == []
    report(f"{len(algs)} algebras x 20 cochains, no residuals")
