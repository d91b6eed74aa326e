from fractions import Fraction
from itertools import permutations, product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sftorient import symplectic as sp
from sftorient.algebra import (
    AlgebraElement,
    DifferentialData,
    Monomial,
    apply_differential,
    format_element,
    generator,
    multiply,
    normalize,
    one,
    verify_d_squared,
    zero,
)
from sftorient.errors import BadOrbitGenerator, GradingViolation
from sftorient.fixtures import dga_fixture, dga_terms
from sftorient.index import DecoratedSurface
from sftorient.orbits import OrbitDescriptor
from sftorient.signs import permutation_sign
from algebra_gen import N, check_instance, gen

seeds = st.integers(min_value=0, max_value=2**32 - 1)
BAD = OrbitDescriptor("h", sp.negative_hyperbolic(1.0), 2)


def element(terms):
    return AlgebraElement.from_terms(terms, N)


# normalize --------------------------------------------------------------------


def test_normalize_two_odd():
    a, b = gen("a", 1), gen("b", 3)
    assert normalize(Monomial((b, a)), N) == (Monomial((a, b), True), -1)


def test_normalize_even_odd():
    a, b = gen("a", 1), gen("b", 2)
    mono, sign = normalize([b, a], N)
    assert mono.factors == (a, b) and sign == 1


def test_odd_square_vanishes():
    a = gen("a", 1)
    assert normalize([a, a], N)[1] == 0
    assert multiply(generator(a), generator(a), N) == zero()


def test_even_square_survives():
    a = gen("a", 2)
    assert normalize([a, a], N)[1] == 1


def test_bad_orbit_rejected():
    with pytest.raises(BadOrbitGenerator):
        generator(BAD)
    with pytest.raises(BadOrbitGenerator):
        normalize([BAD], 2)


# multiply -------------------------------------------------------------------


def test_unit():
    x = element([([gen("a", 1), gen("b", 2)], Fraction(2, 3)), ([gen("c", 3)], -1)])
    assert multiply(x, one(), N) == x
    assert multiply(one(), x, N) == x
    assert multiply(x, zero(), N) == zero()


@pytest.mark.parametrize("ka, kb", [(1, 1), (1, 2), (2, 2), (-1, 3)])
def test_generators_supercommute(ka, kb):
    a, b = generator(gen("a", ka)), generator(gen("b", kb))
    assert multiply(a, b, N) == multiply(b, a, N).scale((-1) ** (ka * kb))


def test_bilinearity_with_rational_coefficients():
    a, b, c = gen("a", 1), gen("b", 1), gen("c", 2)
    x = generator(a, Fraction(1, 2)) + generator(b, 3)
    got = multiply(x, generator(c), N)
    want = element([([a, c], Fraction(1, 2)), ([b, c], 3)])
    assert got == want
    assert got == multiply(generator(a), generator(c), N).scale(Fraction(1, 2)) + multiply(
        generator(b), generator(c), N
    ).scale(3)


def test_elements_are_immutable_and_drop_zeros():
    x = AlgebraElement({(gen("a", 1),): 0})
    assert not x and x == zero()
    with pytest.raises(AttributeError):
        x.foo = 1


def test_format_element():
    a, b = gen("a", 1), gen("b", 2)
    x = element([([b, a], -1), ([], Fraction(2, 3)), ([a], 2)])
    assert format_element(x) == "2/3 + 2 a - a*b"
    assert format_element(zero()) == "0"


# differential -----------------------------------------------------------------


def diff(images):
    return DifferentialData({g: v for g, v in images.items()}, N)


def test_d_of_unit():
    a, b = gen("a", 1), gen("b", 0)
    assert apply_differential(diff({a: generator(b)}), one()) == zero()


def test_leibniz_with_odd_unit_image():
    a, b = gen("a", 1), gen("b", 2)
    d = diff({a: one()})
    assert apply_differential(d, multiply(generator(a), generator(b), N)) == generator(b)


def test_leibniz_with_even_first_factor():
    a, b, c, e = gen("a", 2), gen("b", 1), gen("c", 1), gen("e", 0)
    d = diff({a: generator(c), b: generator(e)})
    got = apply_differential(d, multiply(generator(a), generator(b), N))
    want = multiply(generator(c), generator(b), N) + multiply(generator(a), generator(e), N)
    assert got == want


def test_grading_violation():
    a, b = gen("a", 2), gen("b", 2)
    with pytest.raises(GradingViolation):
        diff({a: generator(b)})


def test_bad_generator_in_differential():
    with pytest.raises(BadOrbitGenerator):
        DifferentialData({BAD: zero()}, 2)


def test_verify_zero_differential():
    assert verify_d_squared(diff({})) == []


def test_verify_two_step_chain():
    a, b = gen("a", 2), gen("b", 1)
    assert verify_d_squared(diff({a: generator(b)})) == []


def test_verify_reports_residual():
    a, b, c = gen("a", 3), gen("b", 2), gen("c", 1)
    report = verify_d_squared(diff({a: generator(b), b: generator(c)}))
    assert [r.generator for r in report] == [a]
    assert report[0].value == generator(c)


def test_six_generator_fixture_passes():
    _, d = dga_fixture()
    assert len(d.images) == 4
    assert verify_d_squared(d) == []


@pytest.mark.parametrize("flip", dga_terms())
def test_any_single_sign_flip_is_detected(flip):
    _, d = dga_fixture(flip)
    assert verify_d_squared(d)


# randomized axioms ------------------------------------------------------------


@given(seeds)
def test_random_axioms(seed):
    check_instance(np.random.default_rng(seed))


@pytest.mark.parametrize("size", range(1, 5))
def test_normalize_matches_permutation_sign(size):
    for ks in product((1, 2), repeat=size):
        gens = [gen(oid, k) for oid, k in zip("abcd", ks)]
        for order in permutations(range(size)):
            factors = [gens[i] for i in order]
            mono, sign = normalize(factors, N)
            # the sorting permutation, in the new[i] = old[perm[i]] convention
            perm = sorted(range(size), key=lambda i: factors[i].key)
            surface = DecoratedSurface(0, N, negatives=factors)
            assert mono.factors == tuple(gens)
            assert sign == permutation_sign(surface, perm_neg=perm)
