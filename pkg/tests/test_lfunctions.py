import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from etnckit.algebra_core import CyclotomicNumber
from etnckit.gauss_sums import (DirichletCharacter, dirichlet_characters, dirichlet_gauss_sum,
                                primitive_dirichlet_characters)
from etnckit.lfunctions import (ArchData, PiGraded, alpha_period_numeric, an_gauss_identity,
                                arch_constant, b_an_check, b_an_suite, b_component,
                                bernoulli_number, bernoulli_polynomial, digamma,
                                functional_equation_check, functional_equation_grid,
                                functional_equation_rhs, gauss_norm_identity, gen_bernoulli,
                                gram_identity_check, hurwitz_zeta, is_normal_basis_generator,
                                l_derivative_numeric, l_numeric, l_value_nonpositive,
                                normal_basis_generator, period_matrix_B, trace, two_pi_i_power,
                                vanishing_order, wedge_alpha_check)

TRIVIAL = DirichletCharacter(())
Z = CyclotomicNumber.zeta


def rational(x):
    return CyclotomicNumber.from_rational(Fraction(x))


def chi_minus_4():
    return next(c for c in dirichlet_characters(4) if not c.is_trivial())


def primitive_of_conductor(f):
    return [c for c in primitive_dirichlet_characters(f) if c.conductor == f]


# --- Bernoulli numbers ------------------------------------------------------

def test_bernoulli_numbers():
    assert [bernoulli_number(n) for n in range(7)] == [
        1, Fraction(-1, 2), Fraction(1, 6), 0, Fraction(-1, 30), 0, Fraction(1, 42)]
    assert bernoulli_number(12) == Fraction(-691, 2730)


@given(st.integers(1, 12), st.fractions(min_value=-3, max_value=3, max_denominator=7))
def test_bernoulli_polynomial_difference(n, x):
    # B_n(x + 1) - B_n(x) = n x^{n-1}
    assert bernoulli_polynomial(n, x + 1) - bernoulli_polynomial(n, x) == n * x ** (n - 1)


def test_zeta_at_negative_integers():
    assert l_value_nonpositive(TRIVIAL, 2) == rational(Fraction(-1, 12))
    assert l_value_nonpositive(TRIVIAL, 4) == rational(Fraction(1, 120))
    assert l_value_nonpositive(TRIVIAL, 3).is_zero()


def test_generalized_bernoulli_chi_minus_4():
    chi = chi_minus_4()
    # L(chi_{-4}, 0) = 1/2 and L(chi_{-4}, -2) = -1/2 (Euler numbers)
    assert l_value_nonpositive(chi, 1) == rational(Fraction(1, 2))
    assert l_value_nonpositive(chi, 3) == rational(Fraction(-1, 2))


@pytest.mark.parametrize("chi", primitive_dirichlet_characters(30)[1:], ids=lambda c: c.label())
def test_generalized_bernoulli_parity_vanishing(chi):
    # B_{n,chi} = 0 when n and chi have opposite parity (n >= 2)
    for n in range(2, 6):
        if (n + chi.parity()) % 2 == 1:
            assert gen_bernoulli(n, chi).is_zero()
        else:
            assert not gen_bernoulli(n, chi).is_zero()


def test_generalized_bernoulli_against_mpmath():
    for chi in primitive_dirichlet_characters(13)[1:]:
        for n in (1, 2, 3):
            f = chi.modulus
            exact = complex(l_value_nonpositive(chi, n))
            ref = complex(sum(complex(chi.complex_value(a)) * complex(mpmath.zeta(1 - n, mpmath.mpf(a) / f))
                              for a in range(1, f + 1) if math.gcd(a, f) == 1) * f ** (n - 1))
            assert abs(exact - ref) < 1e-10


# --- numeric values ---------------------------------------------------------

@pytest.mark.parametrize("s", [2, 3, 5, 8])
@pytest.mark.parametrize("a", [0.1, 0.5, 1.0, 2.75])
def test_hurwitz_zeta_against_mpmath(s, a):
    v = hurwitz_zeta(s, a)
    ref = float(mpmath.zeta(s, a))
    assert abs(v.value - ref) <= 4e-16 * abs(ref) + v.error_bound
    assert v.error_bound <= 1e-17


@pytest.mark.parametrize("x", [0.05, 0.25, 1.0, 3.5])
def test_digamma_against_mpmath(x):
    v = digamma(x)
    ref = float(mpmath.digamma(x))
    assert abs(v.value - ref) <= 1e-14 * max(1.0, abs(ref))


def test_zeta_two():
    v = l_numeric(TRIVIAL, 2)
    assert abs(v.value - math.pi ** 2 / 6) < 1e-15
    assert not v.pole


def test_residue_flag_at_one():
    assert l_numeric(TRIVIAL, 1).pole


def test_l_chi_minus_4_at_one_against_alternating_series():
    # 1 - 1/3 + 1/5 - ..., accelerated by mpmath's nsum
    ref = float(mpmath.nsum(lambda k: (-1) ** k / (2 * k + 1), [0, mpmath.inf]))
    v = l_numeric(chi_minus_4(), 1)
    assert abs(v.value - ref) < 1e-14
    assert abs(v.value - math.pi / 4) < 1e-15


def test_euler_factor_removal():
    v = l_numeric(TRIVIAL, 2, excluded=[2])
    assert abs(v.value - 0.75 * math.pi ** 2 / 6) < 1e-15


def test_derivative_of_zeta_at_zero():
    assert abs(l_derivative_numeric(TRIVIAL, 0) + 0.5 * math.log(2 * math.pi)) < 1e-14


# --- archimedean constants --------------------------------------------------

def test_arch_constant_values():
    even, odd = ArchData(1, 0, 0), ArchData(1, 0, 1)
    assert arch_constant(even, 2) == PiGraded(rational(2), 0)
    assert arch_constant(odd, 2) == PiGraded(Z(4), 1)
    assert arch_constant(even, 1) == PiGraded(Z(4), 1)
    assert arch_constant(odd, 1) == PiGraded(rational(2), 0)


def test_pi_graded_arithmetic():
    x = two_pi_i_power(2)
    assert complex(x) == pytest.approx(-4 * math.pi ** 2)
    assert complex(x * x.inverse()) == pytest.approx(1)


def test_arch_data_validation():
    with pytest.raises(ValueError):
        ArchData(1, 0, 2)


def test_vanishing_orders():
    assert vanishing_order(TRIVIAL, 1) == 0
    assert vanishing_order(TRIVIAL, 2) == 0
    assert vanishing_order(TRIVIAL, 3) == 1
    assert vanishing_order(chi_minus_4(), 2) == 1
    assert vanishing_order(chi_minus_4(), 1) == 0


# --- functional equation ----------------------------------------------------

def test_functional_equation_trivial_j2():
    rhs = complex(functional_equation_rhs(TRIVIAL, 2))
    assert rhs == pytest.approx(-1 / (2 * math.pi ** 2), rel=1e-15)
    assert functional_equation_check(TRIVIAL, 2).passed


def test_functional_equation_trivial_j1():
    assert complex(functional_equation_rhs(TRIVIAL, 1)) == pytest.approx(-0.5, rel=1e-15)
    assert functional_equation_check(TRIVIAL, 1).passed


def test_functional_equation_chi_minus_4_j1():
    rhs = complex(functional_equation_rhs(chi_minus_4(), 1))
    assert rhs == pytest.approx(2 / math.pi, rel=1e-15)
    report = functional_equation_check(chi_minus_4(), 1)
    assert report.passed and report.rel_err < 1e-13


def test_functional_equation_with_derivative():
    report = functional_equation_check(TRIVIAL, 3)
    assert report.order_lhs == 1 and report.passed


def test_functional_equation_grid_small():
    reports = functional_equation_grid(max_conductor=20, js=(1, 2, 3))
    assert reports
    assert max(r.rel_err for r in reports) < 1e-12
    assert all(r.passed for r in reports)


def test_functional_equation_rejects_imprimitive():
    imprimitive = next(c for c in dirichlet_characters(8) if not c.is_primitive() and not c.is_trivial())
    with pytest.raises(ValueError):
        functional_equation_rhs(imprimitive, 1)


def test_report_json_shape():
    data = functional_equation_check(chi_minus_4(), 2).to_json()
    assert set(data) == {"chi", "j", "lhs", "rhs", "rel_err", "order_lhs", "tail_bound", "pass"}


@pytest.mark.parametrize("chi", primitive_dirichlet_characters(50), ids=lambda c: c.label())
def test_gauss_norm_identity(chi):
    assert gauss_norm_identity(chi)


def test_gauss_sum_of_chi_minus_4():
    assert dirichlet_gauss_sum(chi_minus_4()) == rational(2) * Z(4)


# --- periods ----------------------------------------------------------------

@pytest.mark.parametrize("m", [5, 7, 9])
def test_gram_identity(m):
    x = normal_basis_generator(m)
    result = gram_identity_check(x, m)
    assert result["equal"] and result["normal_basis"]


def test_gram_identity_for_non_normal_element():
    assert gram_identity_check(Z(9) + 1, 9)["equal"]
    assert not is_normal_basis_generator(Z(9) + 1, 9)


def test_zeta_p_is_normal():
    assert is_normal_basis_generator(Z(7), 7)
    assert normal_basis_generator(7) == Z(7)


def test_trace_of_root_of_unity():
    assert trace(Z(7), 7) == -1
    assert trace(Z(9), 9) == 0


def test_period_matrix_requires_one_element():
    with pytest.raises(ValueError):
        period_matrix_B([Z(5), Z(5)], 5)


def test_b_component_matches_group_ring_coefficients():
    x = Z(7) + rational(3) * Z(7, 2)
    for chi in dirichlet_characters(7):
        # B(x)^chi = sum_a iota(sigma_a x) chi(a)^{-1}
        direct = sum(complex(chi.complex_value(a)).conjugate() * complex(x.galois(a)) for a in range(1, 7))
        assert abs(complex(b_component(x, 7, chi)) - direct) < 1e-12


def test_b_an_level_zero():
    results = b_an_suite(3, 0)
    assert len(results) == 1 and results[0]["equal"]


def test_b_an_p3_n1():
    results = b_an_suite(3, 1)
    assert results and all(r["equal"] for r in results)


@pytest.mark.parametrize("p,n,m", [(3, 2, 1), (5, 1, 1), (3, 1, 5), (5, 2, 3)])
def test_b_an_suites(p, n, m):
    assert all(r["equal"] for r in b_an_suite(p, n, m=m))


def test_b_an_check_rejects_ramified_base():
    chi = dirichlet_characters(9)[1]
    with pytest.raises(ValueError):
        b_an_check(Z(3), 3, 3, 1, chi)


@pytest.mark.parametrize("p,n", [(3, 1), (3, 2), (5, 1), (7, 1)])
def test_an_gauss_identity(p, n):
    for chi in dirichlet_characters(p ** n):
        assert an_gauss_identity(p, n, chi)["equal"]


def test_wedge_alpha_trivial():
    x = rational(1)
    assert wedge_alpha_check([x], 2, TRIVIAL, 1)["pass"]
    coeffs = alpha_period_numeric(x, 2, 1)
    assert coeffs[1] == pytest.approx(2 / (2j * math.pi) ** 2)


@pytest.mark.parametrize("j", [1, 2, 3, 4])
def test_wedge_alpha_mod_7(j):
    x = normal_basis_generator(7)
    for chi in dirichlet_characters(7):
        assert wedge_alpha_check([x], j, chi, 7)["pass"]


@pytest.mark.parametrize("j", [1, 2])
def test_wedge_alpha_scaling(j):
    x = Z(5) + rational(2) * Z(5, 3)
    for chi in dirichlet_characters(5):
        one = wedge_alpha_check([x], j, chi, 5)
        two = wedge_alpha_check([rational(2) * x], j, chi, 5)
        assert one["pass"] and two["pass"]
        assert abs(two["lhs"] - 2 * one["lhs"]) < 1e-12
