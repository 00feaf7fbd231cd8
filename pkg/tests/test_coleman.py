import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from etnckit.algebra_core import CyclotomicNumber
from etnckit.coleman import (NormCompatibleFamily, PairingSetup, RElement, a_n, a_n_chi_check,
                             chi_component_exact, coleman_example_value,
                             coleman_interpolation_check, coleman_value,
                             interpolation_branches_agree, interpolation_factor, local_pairing,
                             pairing_law_check, r_pairing, xi_chi_closed_exact, xi_exact,
                             xi_interpolation_grid, xi_specialize, xi_twist_check)
from etnckit.gauss_sums import PrimePowerCharacter, characters_mod_prime_power
from etnckit.local_ring import TruncatedSeries, make_unramified, reduce_cyclotomic_block


def rational_log(c, p, digits):
    """log_p(c) for c = 1 mod p by the rational series, reduced mod p^digits."""
    z = Fraction(c - 1)
    total = Fraction(0)
    for n in range(1, 12 * digits):
        total += (-1) ** (n + 1) * z ** n / n
    P = p ** digits
    return total.numerator * pow(total.denominator, -1, P) % P


def test_coleman_value_of_constants_and_binomials():
    ring = make_unramified(5, 1, 8)
    M = 12
    assert not np.any(coleman_value(TruncatedSeries.constant(ring, 1, M)).coeffs)
    col = coleman_value(TruncatedSeries.one_plus_T_power(ring, 3, M))
    assert col.coeffs[0, 0] == 0


@pytest.mark.parametrize("p", [3, 5])
def test_coleman_example_against_rational_log(p):
    digits = 10
    for c in (1 + p, 1 + p + p * p, (1 + p) ** 2):
        lhs, rhs = coleman_example_value(p, c, 12)
        assert lhs == rhs
        # -(1 - 1/p) log c, with log c divisible by p
        log_c = rational_log(c, p, digits + 1)
        expected = (-(log_c * (p - 1)) // p) % p ** digits
        assert lhs == expected


def test_hand_instance_minus_nine_eighths():
    trivial = PrimePowerCharacter(3, 1, 0, 0)
    x = xi_exact(3, {1: Fraction(1)}, 1, 2)
    assert chi_component_exact(x, 3, 1, trivial) == CyclotomicNumber.from_rational(Fraction(-9, 8))
    assert xi_chi_closed_exact(3, {1: Fraction(1)}, 1, 2, trivial) == \
        CyclotomicNumber.from_rational(Fraction(-9, 8))


coords_strategy = st.dictionaries(st.integers(1, 40).filter(lambda l: l % 3),
                                  st.integers(-9, 9).map(Fraction), min_size=1, max_size=5)


@given(coords_strategy, st.integers(1, 3), st.integers(1, 3))
def test_exact_closed_form_matches_brute_force(coords, n, j):
    p = 3
    x = xi_exact(p, coords, n, j)
    for chi in characters_mod_prime_power(p, n):
        assert chi_component_exact(x, p, n, chi) == xi_chi_closed_exact(p, coords, n, j, chi)


@given(coords_strategy, st.integers(1, 3), st.integers(1, 3))
def test_batched_specialisation_matches_exact_oracle(coords, n, j):
    p = 3
    ring = make_unramified(p, 1, 10)
    f = TruncatedSeries.from_one_plus_T_basis(ring, {l: ring.from_int(c) for l, c in coords.items()}, 48)
    arr, V = xi_specialize(f, n, j)
    red = reduce_cyclotomic_block(arr[:, 0].astype(object), p, n, ring.P)
    exact = xi_exact(p, coords, n, j) * Fraction(p) ** V
    expected = [Fraction(c).numerator * pow(Fraction(c).denominator, -1, ring.P) % ring.P
                for c in exact.embed_to_order(p ** n)]
    assert [int(v) for v in red] == expected


def test_level_zero_is_trace_of_level_one():
    p = 5
    rng = random.Random(1)
    for _ in range(50):
        coords = {l: Fraction(rng.randint(-5, 5)) for l in rng.sample([1, 2, 3, 4, 6, 7, 8], 3)}
        x1 = xi_exact(p, coords, 1, 2)
        total = sum((x1.galois(c) for c in range(1, p)), CyclotomicNumber.from_rational(0))
        assert xi_exact(p, coords, 0, 2) == total


@pytest.mark.parametrize("p,r,n,j", [(3, 1, 2, 1), (3, 2, 2, 2), (5, 1, 1, 3), (5, 2, 2, 1)])
def test_interpolation_grid_small(p, r, n, j):
    assert xi_interpolation_grid(p, r, n, j, samples=10, seed=p + r + n + j)["equal"]


def test_twist_by_D_operator():
    assert xi_twist_check(3, 1, 2, 2, samples=4, seed=0)["equal"]


def test_interpolation_factor_j1_trivial_branch():
    one = CyclotomicNumber.from_rational(1)
    value = interpolation_factor(5, 0, 1, 0, 1, one, 5, True, 2)
    assert value == CyclotomicNumber.from_rational(1 / ((1 - Fraction(1, 5)) * 2))


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_a_n_components_and_branch_conversion(p, n):
    assert a_n_chi_check(p, n)
    for j in (1, 2, 3):
        for n_chi in range(n + 1):
            for zeta_exp in (0, 1):
                chi_sigma = CyclotomicNumber.zeta(4, zeta_exp)
                assert interpolation_branches_agree(p, n, j, n_chi, 1, chi_sigma, zeta_exp == 0, 1)


def test_a_0_is_minus_one():
    assert a_n(3, 0) == CyclotomicNumber.from_rational(-1)


@pytest.mark.parametrize("kind,c", [("zeta_minus_one", 1), ("cyclotomic_unit", 4), ("trivial", 1)])
def test_norm_compatible_families(kind, c):
    report = coleman_interpolation_check(NormCompatibleFamily(kind, 3, c), None, 3, N=6)
    assert report["equal"], report


def test_pairing_laws_random():
    setup = PairingSetup(3, 2, 1, 5)
    rng = random.Random(0)
    for _ in range(25):
        assert pairing_law_check(setup, rng)["equal"]


def test_pairing_of_one_plus_T_with_itself():
    setup = PairingSetup(3, 2, 1, 4)
    coeffs = np.zeros((setup.gamma_order, setup.r), dtype=np.int64)
    coeffs[0, 0] = 1
    one = RElement(setup, coeffs)
    prod = local_pairing(one, one)
    assert prod[0, 0] == 1 and prod.sum() == 1
    pairing = r_pairing(one, one)
    # only the identity of G pairs nontrivially: Tr(1) = r at sigma_{-1}
    assert pairing.coeff((0, setup.minus_one)).value == setup.r
