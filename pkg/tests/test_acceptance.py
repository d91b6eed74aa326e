"""Acceptance criteria 1-8, each timed against its budget.

Every criterion appends one ``criterion N: PASS|FAIL`` line to ``SUMMARY``;
conftest prints the collected lines at the end of the session.  Budgets
cover the whole criterion, fixture generation included.
"""
import math
import subprocess
import sys
from contextlib import contextmanager
from time import perf_counter

import numpy as np

from algebra_gen import check_instance
from oracles import fine_index, nondegenerate_2d, twist_ready, winding_index, winding_index_2d
from sftorient import symplectic as sp
from sftorient.algebra import verify_d_squared
from sftorient.fixtures import dga_fixture, dga_terms
from sftorient.index import fredholm_index, glue_surfaces, moduli_dimension
from sftorient.orbits import OrbitClass, OrbitDescriptor, classify, cz_index
from sign_checks import (
    check_block_exchange,
    check_complete_gluing,
    check_decomposition_independence,
    check_marker_group_law,
)
from surface_gen import random_gluable_pair

SUMMARY: list[str] = []
DELTAS = (0.1, 0.25, 0.4)


@contextmanager
def criterion(number: int, what: str, budget: float):
    start = perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = perf_counter() - start
        passed = ok and elapsed < budget
        timing = f"{elapsed:.2f}s" if math.isinf(budget) else f"{elapsed:.2f}s of {budget:g}s"
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'} ({timing}) {what}"
        SUMMARY.append(line)
        print(line)
    assert elapsed < budget, line


def test_criterion_1_rotation_formula():
    rng = np.random.default_rng(1)
    thetas = [t for t in rng.uniform(0, 5, 200) if abs(t - round(t)) > 1e-2][:50]
    assert len(thetas) == 50
    with criterion(1, "rotation(theta) index = 2 floor(theta) + 1 on 50 angles, fine-grid and winding oracles", 5):
        for theta in thetas:
            path = sp.rotation(theta)
            want = 2 * math.floor(theta) + 1
            assert sp.maslov_index_rs(path) == want, theta
            assert fine_index(path) == want, theta
            assert winding_index_2d(path) == want, theta


def test_criterion_2_twist_shift():
    rng = np.random.default_rng(2)
    with criterion(2, "twists shift the index by -1 / +1 for 20 paths in dims 2 and 4, three rates", 30):
        for dim in (2, 4):
            for _ in range(20):
                _, path = twist_ready(rng, dim, DELTAS)
                mu = sp.maslov_index_rs(path)
                for delta in DELTAS:
                    assert sp.maslov_index_rs(sp.twist(path, delta, sp.POSITIVE)) == mu - 1
                    assert sp.maslov_index_rs(sp.twist(path, delta, sp.NEGATIVE)) == mu + 1


def test_criterion_3_additivity_and_loop_shift():
    rng = np.random.default_rng(3)
    with criterion(3, "direct-sum additivity and loop shift on 100 random paths", 30):
        for _ in range(100):
            a, b = nondegenerate_2d(rng), nondegenerate_2d(rng)
            mu_a, mu_b = sp.maslov_index_rs(a), sp.maslov_index_rs(b)
            assert sp.maslov_index_rs(sp.direct_sum(a, b)) == mu_a + mu_b == winding_index([a, b])
            k = int(rng.integers(-2, 3))
            assert sp.maslov_index_rs(sp.product(sp.rotation(k), a)) == mu_a + 2 * k


def test_criterion_4_bad_orbit_fixture():
    with criterion(4, "negative hyperbolic double cover is bad, elliptic covers good", 5):
        nh = sp.negative_hyperbolic(1.0)
        simple, double = OrbitDescriptor("h", nh), OrbitDescriptor("h", nh, 2)
        assert classify(simple) is OrbitClass.GOOD
        assert classify(double) is OrbitClass.BAD
        assert (cz_index(simple), cz_index(double)) == (1, 2)
        for m in range(1, 7):
            assert classify(OrbitDescriptor("e", sp.rotation(0.3), m)) is OrbitClass.GOOD


def test_criterion_5_index_coherence():
    rng = np.random.default_rng(5)
    with criterion(5, "index and dimension additivity on 200 random gluings", 10):
        for _ in range(200):
            top, bottom, t = random_gluable_pair(rng)
            glued = glue_surfaces(top, bottom, t)
            assert fredholm_index(glued) == fredholm_index(top) + fredholm_index(bottom) - 2 * t
            assert moduli_dimension(glued) == moduli_dimension(top) + moduli_dimension(bottom)


def test_criterion_6_sign_coherence():
    with criterion(6, "decomposition independence, complete gluing, block exchange, marker group law", 60):
        assert check_decomposition_independence(max_size=5) == sum(
            2**s * math.factorial(s) for s in range(6)
        )
        assert check_complete_gluing(max_arity=4) > 0
        assert check_block_exchange(max_arity=4) > 0
        assert check_marker_group_law() > 0


def test_criterion_7_algebra_axioms():
    rng = np.random.default_rng(7)
    with criterion(7, "algebra axioms on 500 instances, six-generator d^2 fixture and its sign flips", 30):
        for _ in range(500):
            check_instance(rng)
        _, d = dga_fixture()
        assert verify_d_squared(d) == []
        for flip in dga_terms():
            assert verify_d_squared(dga_fixture(flip)[1]), flip


def test_criterion_8_selftest_determinism():
    cmd = [sys.executable, "-m", "sftorient", "selftest"]
    with criterion(8, "selftest output byte-identical across two runs", math.inf):
        first = subprocess.run(cmd, capture_output=True, check=False)
        second = subprocess.run(cmd, capture_output=True, check=False)
        assert first.returncode == 0, first.stderr
        assert first.stdout == second.stdout and first.stdout

