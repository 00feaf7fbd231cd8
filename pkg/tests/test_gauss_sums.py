import cmath
import math
import random

import pytest
from hypothesis import given, strategies as st

from etnckit.algebra_core import CyclotomicNumber, involution
from etnckit.gauss_sums import (BudgetExceeded, LocalCharacterData,
                                PrimePowerCharacter, additive_character, characters_mod_prime_power,
                                classical_gauss_sum, cyclotomic_galois_group,
                                davenport_hasse_classical, davenport_hasse_generalized_check,
                                dirichlet_characters, dirichlet_gauss_sum, equivariant_gauss_sum,
                                gauss_decomposition_check, gauss_norm_law_check, local_gauss_sum,
                                local_reciprocity, primitive_dirichlet_characters, primitive_root,
                                wild_invariant)
from etnckit.local_ring import make_unramified, norm, trace

Z = CyclotomicNumber.zeta
ONE = CyclotomicNumber.from_rational(1)


def classical_complex(chi):
    f = chi.modulus
    return sum(chi.complex_value(a) * cmath.exp(2j * math.pi * a / f) for a in range(1, f))


def test_additive_character_values():
    assert additive_character(5, 1, 5) == ONE
    assert additive_character(1, 1, 5) == Z(5)
    ring = make_unramified(3, 2, 2)
    u = next(x for x in ring.elements() if x.is_unit() and trace(x) % 3 == 2)
    assert additive_character(u, 1) == Z(3, 2)


def test_quadratic_gauss_sum_mod_5_is_sqrt5():
    chi = PrimePowerCharacter(5, 1, 2, 0)
    tau = local_gauss_sum(LocalCharacterData(chi)).value
    assert tau == Z(5) - Z(5, 2) - Z(5, 3) + Z(5, 4)
    assert tau * tau == CyclotomicNumber.from_rational(5)


def test_unramified_trivial_gauss_sum_is_one():
    out = local_gauss_sum(LocalCharacterData(PrimePowerCharacter(7, 1, 0, 0), 2, 1, 3))
    assert out.value == ONE and not out.ramified


@pytest.mark.parametrize("p,n,r", [(5, 1, 1), (7, 1, 1), (3, 2, 1), (5, 2, 1), (3, 3, 1),
                                   (3, 1, 2), (3, 2, 2), (5, 1, 2)])
def test_norm_law_all_characters(p, n, r):
    for theta in characters_mod_prime_power(p, n):
        assert gauss_norm_law_check(LocalCharacterData(theta, degree=r))["equal"]


@pytest.mark.parametrize("f", range(3, 31))
def test_global_gauss_sum_matches_classical_sum_of_inverse(f):
    for chi in dirichlet_characters(f):
        if chi.conductor != f or chi.is_trivial():
            continue
        tau = complex(dirichlet_gauss_sum(chi))
        assert abs(tau - classical_complex(chi.inverse())) < 1e-9
        assert abs(abs(tau) ** 2 - f) < 1e-9


def test_gauss_sum_of_character_mod_4_is_2i():
    chi = next(c for c in dirichlet_characters(4) if not c.is_trivial())
    assert dirichlet_gauss_sum(chi) == CyclotomicNumber.zeta(4) * 2


def test_classical_gauss_sum_values():
    assert classical_gauss_sum(7, 1, 0) == CyclotomicNumber.from_rational(-1)
    g = classical_gauss_sum(3, 1, 1)
    assert g * g.conjugate() == CyclotomicNumber.from_rational(3)
    out = davenport_hasse_classical(3, 2, 1)
    assert out["equal"] and out["lhs"] == CyclotomicNumber.from_rational(3)


def brute_classical(p, s, k):
    """Complex g(chi' o N) over F_{p^s} built from an explicit F_p[x]/(poly) model."""
    ring = make_unramified(p, s, 1)
    h = primitive_root(p)
    total = 0j
    for x in ring.elements():
        if x.is_zero():
            continue
        nx = norm(x) % p
        # chi'(h^i) = zeta_{p-1}^{k i} with h a primitive root mod p
        i = next(i for i in range(p - 1) if pow(h, i, p) == nx)
        total += cmath.exp(2j * math.pi * k * i / (p - 1)) * cmath.exp(2j * math.pi * trace(x) / p)
    return total


@pytest.mark.parametrize("p,s", [(3, 2), (3, 3), (5, 2), (7, 2)])
def test_davenport_hasse_against_field_model(p, s):
    for k in range(p - 1):
        out = davenport_hasse_classical(p, s, k)
        assert out["equal"]
        assert abs(complex(out["lhs"]) - brute_classical(p, s, k)) < 1e-8


@pytest.mark.parametrize("p,r,n", [(3, 2, 0), (5, 2, 1), (3, 2, 2), (3, 3, 1), (5, 3, 1)])
def test_generalized_davenport_hasse(p, r, n):
    for theta in characters_mod_prime_power(p, max(n, 1)):
        if theta.conductor_exponent != n:
            continue
        out = davenport_hasse_generalized_check(p, r, theta)
        assert out["equal"]
        if n == 0:
            assert out["lhs"] == ONE


def test_generalized_davenport_hasse_budget():
    with pytest.raises(BudgetExceeded):
        davenport_hasse_generalized_check(3, 3, PrimePowerCharacter(3, 2, 1, 1), budget=10)


@pytest.mark.parametrize("r", [1, 2])
def test_wild_invariant_is_independent_of_degree(r):
    theta = PrimePowerCharacter(3, 2, 0, 1)
    e1 = wild_invariant(LocalCharacterData(theta, 1))
    er = wild_invariant(LocalCharacterData(theta, r))
    assert er.coeffs[0] == e1.coeffs[0] and all(c == 0 for c in er.coeffs[1:])


def test_local_reciprocity():
    assert local_reciprocity(1, 1, 5).act_on_zeta() == 1
    assert local_reciprocity(-1, 1, 5).act_on_zeta() == 4
    rng = random.Random(3)
    for _ in range(100):
        u, v = (rng.choice([x for x in range(27) if x % 3]) for _ in range(2))
        a = local_reciprocity(u, 3, 3) * local_reciprocity(v, 3, 3)
        assert a.cyclotomic_exponent == local_reciprocity(u * v, 3, 3).cyclotomic_exponent


@pytest.mark.parametrize("order,exp", [(2, 1), (4, 1), (4, 3)])
def test_gauss_decomposition_at_p(order, exp):
    for theta in characters_mod_prime_power(5, 2):
        assert gauss_decomposition_check(theta, exp, order)["equal"]


def character_value_on(x, chi, to_group, m):
    acc = CyclotomicNumber.from_rational(0)
    for a in range(1, m):
        if math.gcd(a, m) == 1:
            acc = acc + CyclotomicNumber._coerce(x.coeff(to_group(a))) * chi(a)
    return acc


@pytest.mark.parametrize("m", [5, 7, 8, 9, 12])
def test_equivariant_gauss_sum_components(m):
    tau = equivariant_gauss_sum(m)
    _, to_group, _ = cyclotomic_galois_group(m)
    for chi in dirichlet_characters(m):
        prim = chi.primitive()
        expected = dirichlet_gauss_sum(prim) if prim.modulus > 1 else ONE
        assert character_value_on(tau, chi, to_group, m) == expected


def test_equivariant_gauss_sum_norm_identity_mod_5():
    tau = equivariant_gauss_sum(5)
    _, to_group, _ = cyclotomic_galois_group(5)
    prod = tau * involution(tau)
    for chi in dirichlet_characters(5):
        expected = 1 if chi.is_trivial() else 5 * (-1 if chi.parity() else 1)
        assert character_value_on(prod, chi, to_group, 5) == CyclotomicNumber.from_rational(expected)


@given(st.integers(3, 60))
def test_primitive_characters_have_full_conductor(f):
    for chi in primitive_dirichlet_characters(f):
        assert chi.conductor == chi.modulus
        assert chi.primitive() == chi
