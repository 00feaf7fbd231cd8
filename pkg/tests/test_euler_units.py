import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from etnckit.algebra_core import (CyclotomicNumber, FiniteAbelianGroup, GroupRingElement,
                                  characters_of, chi_component)
from etnckit.euler_units import (CoordinateQuotient, PlaceData, conductor_unit,
                                 conductor_unit_check, delta_factor, delta_trivial,
                                 descent_factor, descent_identity_suite, discriminant_twist_check,
                                 discriminant_unit, euler_factor, euler_factor_expected,
                                 h_element, h_element_interpolation_check, level_group,
                                 random_group, random_place, random_quotient, twist_op)

ONE = CyclotomicNumber.from_rational(1)


def basis(group, g, c=1):
    return GroupRingElement.basis(group, g, Fraction(c))


def test_euler_factor_trivial_group_j0_is_zero():
    g = FiniteAbelianGroup([1])
    v = PlaceData.build(g, [], (0,), 5)
    assert euler_factor(v, 0).is_zero()


def test_unramified_euler_factor_over_z2():
    g = FiniteAbelianGroup([2])
    v = PlaceData.build(g, [], (1,), 7)
    assert euler_factor(v, 1) == GroupRingElement.one(g) - basis(g, (1,), Fraction(1, 7))


def test_ramified_characters_have_component_one():
    g = FiniteAbelianGroup([4])
    v = PlaceData.build(g, [(2,)], (1,), 3)
    for chi in characters_of(g):
        if not chi.is_trivial_on(v.inertia):
            assert chi_component(euler_factor(v, 2), chi) == ONE


def test_delta_trivial_over_z2_is_minus_sigma():
    g = FiniteAbelianGroup([2])
    assert delta_trivial(g) == -basis(g, (1,))
    triv = characters_of(g)[0]
    assert chi_component(delta_trivial(g), triv) == CyclotomicNumber.from_rational(-1)


def test_delta_factor_trivial_group_is_one():
    g = FiniteAbelianGroup([1])
    assert delta_factor(PlaceData.build(g, [], (0,), 5)) == GroupRingElement.one(g)


def test_h_element_scalar_case():
    g = FiniteAbelianGroup([1])
    v = PlaceData.build(g, [], (0,), 5)
    h = h_element(v, 3)
    value = chi_component(h.numerator, characters_of(g)[0]) / chi_component(h.denominator, characters_of(g)[0])
    assert value == CyclotomicNumber.from_rational((1 - Fraction(5) ** -2) / (1 - Fraction(5) ** -3))


@given(st.integers(0, 10 ** 6), st.integers(-3, 4))
def test_euler_factor_interpolates(seed, j):
    rng = random.Random(seed)
    group = random_group(rng, 24)
    v = random_place(rng, group, 3)
    for chi in characters_of(group):
        assert chi_component(euler_factor(v, j), chi) == euler_factor_expected(v, chi, j)


@given(st.integers(0, 10 ** 6), st.integers(-2, 4))
def test_h_element_interpolation(seed, j):
    rng = random.Random(seed)
    group = random_group(rng, 24)
    v = random_place(rng, group, 3)
    assert h_element_interpolation_check(v, j)["equal"]


def test_twist_definition_on_level_group():
    base = FiniteAbelianGroup([1])
    big, cyc = level_group(base, 3, 2)
    # the generator 2 of (Z/9)^x sends zeta_9 to zeta_9^2
    sigma = (0, 1)
    assert cyc.value(sigma) == 2
    x = basis(big, sigma)
    assert twist_op(x, 0, cyc) == twist_op(x, 0, cyc)
    tw = twist_op(x, 1, cyc)
    assert tw.coeff(sigma).value == 2


def test_conductor_unit_unramified_is_norm_power_times_inverse_frobenius():
    g = FiniteAbelianGroup([2, 4])
    v = PlaceData.build(g, [], (1, 1), 7, [[]])
    unit, inverse = conductor_unit(v, 2, (0, 1), 5)
    assert unit == basis(g, (0, 3), 49)
    assert unit * inverse == GroupRingElement.one(g)


def test_conductor_unit_two_step_filtration():
    g = FiniteAbelianGroup([2, 4])
    v = PlaceData.build(g, [(1, 0), (0, 2)], (0, 1), 7, [[(1, 0), (0, 2)], [(0, 2)], []])
    for j in range(5):
        assert conductor_unit_check(v, j, (0, 1), 5)["equal"]


@given(st.integers(0, 10 ** 6))
def test_conductor_unit_random_filtrations(seed):
    rng = random.Random(seed)
    group = random_group(rng, 32)
    p = next(q for q in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37) if len(group) % q)
    v = random_place(rng, group, p, with_filtration=True)
    for j in range(5):
        assert conductor_unit_check(v, j, group.random_element(rng), p)["equal"]


def test_conductor_unit_rejects_wild_filtration():
    g = FiniteAbelianGroup([3])
    v = PlaceData.build(g, [(1,)], (0,), 7, [[(1,)], []])
    with pytest.raises(ZeroDivisionError):
        conductor_unit(v, 1, (0,), 3)


def test_discriminant_unit():
    g = FiniteAbelianGroup([1])
    assert discriminant_unit(g, 1, [], 3, 5) == GroupRingElement.one(g)
    base = FiniteAbelianGroup([2])
    big, cyc = level_group(base, 5, 1)
    rec = [cyc.element_with_value(big, 3)]
    assert discriminant_twist_check(big, 3, rec, 2, 1, 5, cyc)


def test_descent_factor_is_one_for_j_at_least_two():
    g = FiniteAbelianGroup([4])
    v = PlaceData.build(g, [], (1,), 3)
    q = CoordinateQuotient(g, (2,))
    assert descent_factor(v, q, 2) == GroupRingElement.one(q.quotient)


def test_descent_suite_documented_instances():
    g = FiniteAbelianGroup([1])
    assert descent_identity_suite(PlaceData.build(g, [], (0,), 7), 2, 3, 1).passed
    g4 = FiniteAbelianGroup([4])
    v = PlaceData.build(g4, [(2,)], (1,), 7)
    report = descent_identity_suite(v, 1, 3, 1, CoordinateQuotient(g4, (2,)))
    assert report.passed and report.results["delta_identity"]


@given(st.integers(0, 10 ** 6))
def test_descent_suite_random(seed):
    rng = random.Random(seed)
    group = random_group(rng, 16)
    p = rng.choice((3, 5))
    v = random_place(rng, group, p)
    report = descent_identity_suite(v, rng.randint(-2, 3), p, 1, random_quotient(rng, group))
    assert report.passed, report.results
