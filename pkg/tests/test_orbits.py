import pytest

from sftorient import orbits
from sftorient import symplectic as sp
from sftorient.errors import FamilyError, InternalInconsistency, PathError
from sftorient.fixtures import orbit_with_index, path_with_index
from sftorient.orbits import (
    OrbitClass,
    OrbitDescriptor,
    classify,
    cz_index,
    grading,
    is_good,
    orientation_choice_set,
)

ELLIPTIC = sp.rotation(0.3)
NEG_HYP = sp.negative_hyperbolic(1.0)


@pytest.mark.parametrize("m, mu", [(1, 1), (3, 1), (4, 3), (6, 3)])
def test_cz_of_elliptic_covers(m, mu):
    assert cz_index(OrbitDescriptor("e", ELLIPTIC, m)) == mu


def test_cz_of_negative_hyperbolic_double_cover():
    assert cz_index(OrbitDescriptor("h", NEG_HYP, 2)) == 2


def test_cz_of_simple_orbit_is_path_index():
    p = sp.concatenate(sp.rotation(0.7), sp.negative_hyperbolic(0.4))
    assert cz_index(OrbitDescriptor("x", p)) == sp.maslov_index_rs(p)


@pytest.mark.parametrize("mu, n, expected", [(3, 2, 2), (1, 3, 1), (2, 4, 3)])
def test_grading_examples(mu, n, expected):
    assert grading(orbit_with_index("o", mu, n), n) == expected


def test_grading_checks_dimension():
    with pytest.raises(PathError):
        grading(orbit_with_index("o", 1, 2), 3)


def test_multiplicity_one_is_good():
    assert classify(OrbitDescriptor("x", sp.rotation(2.2))) is OrbitClass.GOOD


@pytest.mark.parametrize("m", range(1, 7))
def test_elliptic_covers_are_good(m):
    assert classify(OrbitDescriptor("e", ELLIPTIC, m)) is OrbitClass.GOOD


@pytest.mark.parametrize("m", range(1, 7))
def test_negative_hyperbolic_covers(m):
    orbit = OrbitDescriptor("h", NEG_HYP, m)
    assert cz_index(orbit) == m
    assert is_good(orbit) is (m % 2 == 1)


def test_bad_with_odd_multiplicity_is_internal_error(monkeypatch):
    fake = {1: 0, 3: 1}
    monkeypatch.setattr(orbits, "_cover_index", lambda orbit, m, tol: fake[m])
    with pytest.raises(InternalInconsistency):
        classify(OrbitDescriptor("e", ELLIPTIC, 3))


def test_degenerate_cover_rejected():
    # rotation(0.5) is nondegenerate but its double cover ends at the identity
    with pytest.raises(PathError):
        OrbitDescriptor("r", sp.rotation(0.5), 2)


@pytest.mark.parametrize("m", [0, -1, 1.5])
def test_multiplicity_must_be_positive_integer(m):
    with pytest.raises(PathError):
        OrbitDescriptor("e", ELLIPTIC, m)


def test_action_must_be_positive():
    with pytest.raises(PathError):
        OrbitDescriptor("e", ELLIPTIC, 1, action=-1.0)
    assert OrbitDescriptor("e", ELLIPTIC, 1, action=2.5).action == 2.5


def test_covers_share_identity_by_key():
    e3 = OrbitDescriptor("e", ELLIPTIC, 3)
    assert e3.cover(1) == OrbitDescriptor("e", ELLIPTIC)
    assert e3.cover(3) is e3
    assert e3.label() == "e^3"
    assert e3.n == 2


def family(path, ms, oid="f"):
    return [OrbitDescriptor(oid, path, m) for m in ms]


def test_choices_odd_family():
    assert orientation_choice_set(family(sp.direct_sum(ELLIPTIC, ELLIPTIC), [1, 3, 5]), 3) == [("f", (1,))]


def test_choices_even_covers_need_double():
    path = sp.direct_sum(NEG_HYP, sp.positive_hyperbolic(1.0))
    assert orientation_choice_set(family(path, [1, 2, 4]), 3) == [("f", (1, 2))]


def test_choices_in_dimension_four_good_even_covers():
    assert orientation_choice_set(family(ELLIPTIC, [1, 2]), 2) == [("f", (1,))]


def test_choices_in_dimension_four_bad_even_cover():
    assert orientation_choice_set(family(NEG_HYP, [1, 2]), 2) == [("f", (1, 2))]


def test_choices_several_families_sorted():
    got = orientation_choice_set(family(NEG_HYP, [2], "h") + family(ELLIPTIC, [1], "e"), 2)
    assert got == [("e", (1,)), ("h", (1, 2))]


def test_choices_inconsistent_family():
    bad = [OrbitDescriptor("f", ELLIPTIC), OrbitDescriptor("f", sp.rotation(0.4), 2)]
    with pytest.raises(FamilyError):
        orientation_choice_set(bad, 2)


@pytest.mark.parametrize("mu", range(-4, 6))
@pytest.mark.parametrize("dim", [2, 4, 6])
def test_fixture_paths_have_requested_index(mu, dim):
    assert sp.maslov_index_rs(path_with_index(mu, dim)) == mu
