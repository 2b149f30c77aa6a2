import random
from fractions import Fraction

import numpy as np
import pytest

from nlie.algebra import StructureConstants
from nlie.variety import catalog


def simple3():
    """[e1,e2,e3] = e1 (n = 3, m = 3)."""
    return StructureConstants.from_brackets(3, 3, {(1, 2, 3): {1: 1}})


def heisenberg(n=3):
    """[e2,...,e_{n+1}] = e1 in dimension n+1."""
    return StructureConstants.from_brackets(n, n + 1, {tuple(range(2, n + 2)): {1: 1}})


def cross4():
    """The 3-bracket of R^4: [e_i,e_j,e_k] = e_l with sign from the volume form."""
    return StructureConstants.from_brackets(3, 4, {
        (2, 3, 4): {1: 1}, (1, 3, 4): {2: -1}, (1, 2, 4): {3: 1}, (1, 2, 3): {4: -1}})


def bad4():
    """Skew table violating the Nambu identity."""
    return StructureConstants.from_brackets(3, 4, {(1, 2, 3): {1: 1}, (1, 2, 4): {2: 1}})


def rank2_image4():
    """[e1,e2,e3] = e4, [e1,e2,e4] = e4: looks suspicious but is a 3-Lie algebra."""
    return StructureConstants.from_brackets(3, 4, {(1, 2, 3): {4: 1}, (1, 2, 4): {4: 1}})


def rand_q(rng, lo=-3, hi=3, den=(1, 1, 2, 3)):
    return Fraction(rng.randint(lo, hi), rng.choice(den))


def rand_matrix(rng, r, c, **kw):
    return np.array([[rand_q(rng, **kw) for _ in range(c)] for _ in range(r)], dtype=object)


def rand_invertible(rng, m, spread=2):
    from nlie.linalg import det
    while True:
        f = rand_matrix(rng, m, m, lo=-spread, hi=spread)
        if det(f) != 0:
            return f


def rand_skew(rng, n, m, density=0.6):
    """Random skew table (generically not Nambu)."""
    from itertools import combinations
    table = {}
    for key in combinations(range(m), n):
        if rng.random() < density:
            table[key] = tuple(rand_q(rng) for _ in range(m))
    return StructureConstants(n, m, table)


def instances(n, m, draws=1, seed=0):
    """(entry, params, algebra) for every catalog entry; parametric entries drawn `draws` times."""
    rng = random.Random(seed)
    out = []
    for e in catalog(n, m):
        plist = [e.random_params(rng) for _ in range(draws)] if e.is_parametric else [e.default_params()]
        for p in plist:
            out.append((e, p, e.instantiate(p)))
    return out


@pytest.fixture
def rng():
    return random.Random(20240611)


# ---------------------------------------------------------- acceptance summary

_CRITERIA = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::test_criterion_")[1]
    num, _, rest = name.partition("_")
    topic = rest.split("[")[0].replace("_", " ")
    prev = _CRITERIA.get(num, (topic, "PASS"))
    failed = report.failed or (report.when == "call" and report.skipped)
    _CRITERIA[num] = (topic, "FAIL" if failed or prev[1] == "FAIL" else "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        topic, verdict = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {int(num):>2}  {topic:<28} {verdict}")
