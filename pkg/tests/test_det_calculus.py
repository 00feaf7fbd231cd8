import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from etnckit.algebra_core import FiniteAbelianGroup, GroupRingElement, characters_of
from etnckit.det_calculus import (GradedLine, PrimeField, RationalField, TensorElement,
                                  TruncatedDVR, bockstein_detA, bockstein_suite, columns_to_matrix,
                                  det, det02_sign_check, det02_suite, det_frobenius,
                                  det_frobenius_expected, det_frobenius_involution_check,
                                  det_frobenius_quotient_expected, evaluation, four_term_closed_form,
                                  four_term_iso, gamma_limit_identity, graded_swap, mat_mul,
                                  nullspace, product_inverse_square_check, random_complex,
                                  random_invertible, rank, ses_isomorphism, solve)
from etnckit.euler_units import PlaceData

F7 = PrimeField(7)
Q = RationalField()


def naive_det(A):
    """Cofactor expansion over the rationals."""
    n = len(A)
    if n == 0:
        return Fraction(1)
    total = Fraction(0)
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in A[1:]]
        total += (-1) ** j * Fraction(A[0][j]) * naive_det(minor)
    return total


# --- linear algebra ---------------------------------------------------------

@given(st.lists(st.integers(-5, 5), min_size=9, max_size=9))
def test_rational_det_matches_cofactor(entries):
    A = [entries[0:3], entries[3:6], entries[6:9]]
    assert det(Q, A) == naive_det(A)


@given(st.integers(0, 10 ** 6))
def test_prime_field_det_multiplicative(seed):
    rng = random.Random(seed)
    A = [[rng.randrange(7) for _ in range(3)] for _ in range(3)]
    B = [[rng.randrange(7) for _ in range(3)] for _ in range(3)]
    assert det(F7, mat_mul(F7, A, B)) == F7.norm(det(F7, A) * det(F7, B))


@given(st.integers(0, 10 ** 6))
def test_nullspace_and_solve(seed):
    rng = random.Random(seed)
    A = [[rng.randrange(7) for _ in range(5)] for _ in range(3)]
    kernel = nullspace(F7, A, 5)
    assert len(kernel) == 5 - rank(F7, A)
    for k in kernel:
        assert all(F7.norm(sum(a * x for a, x in zip(row, k))) == 0 for row in A)
    x = [rng.randrange(7) for _ in range(5)]
    b = [F7.norm(sum(a * xi for a, xi in zip(row, x))) for row in A]
    y = solve(F7, A, b)
    assert [F7.norm(sum(a * yi for a, yi in zip(row, y))) for row in A] == b


def test_random_invertible_has_unit_det():
    rng = random.Random(3)
    for n in range(1, 5):
        assert det(F7, random_invertible(F7, n, rng)) != 0


# --- graded lines -----------------------------------------------------------

def test_graded_swap_sign_for_odd_grades():
    L = GradedLine.of(F7, [[1, 0]])
    M = GradedLine.of(F7, [[0, 1]])
    swapped = graded_swap(TensorElement((L, M), 1))
    assert swapped.coeff == F7.norm(-1)
    assert swapped.lines == (M, L)


@pytest.mark.parametrize("r,s", [(0, 0), (1, 2), (2, 2), (2, 3), (3, 3)])
def test_graded_swap_sign_and_involution(r, s):
    L = GradedLine.of(F7, [[int(i == j) for i in range(r + s)] for j in range(r)], r + s)
    M = GradedLine.of(F7, [[int(i == j + r) for i in range(r + s)] for j in range(s)], r + s)
    x = TensorElement((L, M), 3)
    once = graded_swap(x)
    assert once.coeff == F7.norm(3 * (-1) ** (r * s))
    assert graded_swap(once) == x


def test_dependent_wedge_rejected():
    with pytest.raises(ValueError):
        GradedLine.of(F7, [[1, 2], [2, 4]])


@pytest.mark.parametrize("r", [1, 2, 3])
def test_evaluation_basis_against_dual_is_one(r):
    L = GradedLine.of(F7, [[int(i == j) for i in range(r)] for j in range(r)])
    assert evaluation(L.element(1), L.inverse().element(1)) == 1
    expected = F7.norm((-1) ** r)
    assert evaluation(L.element(1), L.inverse().element(1), left_inverse=True) == expected


def test_evaluation_after_change_of_basis():
    L = GradedLine.of(F7, [[1, 0], [0, 1]])
    L2 = GradedLine.of(F7, [[2, 0], [1, 3]])
    # L2 wedge = 6 * L wedge, so the dual of L2 pairs with L to 1/6
    assert L2.ratio_to(L) == 6
    assert evaluation(L.element(1), L2.inverse().element(1)) == F7.inv(6)


def test_evaluation_requires_dual():
    L = GradedLine.of(F7, [[1, 0]])
    with pytest.raises(ValueError):
        evaluation(L.element(1), L.element(1))


@given(st.integers(0, 10 ** 6))
def test_product_inverse_square(seed):
    assert product_inverse_square_check(random.Random(seed), F7)


def test_product_inverse_square_rationals():
    rng = random.Random(5)
    assert all(product_inverse_square_check(rng, Q, max_grade=2) for _ in range(10))


# --- exact sequences --------------------------------------------------------

def random_ses(rng, F, n1, n3):
    n2 = n1 + n3
    P = random_invertible(F, n2, rng)
    Pinv = [solve(F, P, [int(i == j) for i in range(n2)]) for j in range(n2)]
    Pinv = columns_to_matrix(Pinv, n2)
    f = [[P[i][j] for j in range(n1)] for i in range(n2)]
    g = [Pinv[n1 + i] for i in range(n3)]
    return f, g


@pytest.mark.parametrize("seed", range(10))
def test_ses_isomorphism_independent_of_lifts(seed):
    rng = random.Random(seed)
    f, g = random_ses(rng, F7, 2, 3)
    values = {ses_isomorphism(F7, f, g, 2, 5, 3, rng=random.Random(seed * 100 + k)) for k in range(5)}
    assert len(values) == 1
    assert values.pop() != 0


def test_ses_split_standard_is_one():
    f = [[1, 0], [0, 1], [0, 0]]
    g = [[0, 0, 1]]
    assert ses_isomorphism(F7, f, g, 2, 3, 1) == 1


def test_ses_rejects_non_exact():
    with pytest.raises(ValueError):
        ses_isomorphism(F7, [[1], [0]], [[1, 0]], 1, 2, 1)


@pytest.mark.parametrize("n", [1, 2, 4])
def test_four_term_with_zero_kernel_is_identity(n):
    ident = [[int(i == j) for j in range(n)] for i in range(n)]
    assert four_term_iso(F7, [[] for _ in range(n)], ident, [], 0, n, n) == 1


@pytest.mark.parametrize("seed", range(8))
def test_four_term_matches_closed_form(seed):
    rng = random.Random(seed)
    a, n = rng.randint(0, 2), rng.randint(2, 4)
    # A -> A1 -> A2 -> A with A1 = A2 = F^n, f = first a coordinates, h = last a coordinates
    f = [[int(i == j) for j in range(a)] for i in range(n)]
    g = [[int(j == i + a) if i < n - a else 0 for j in range(n)] for i in range(n)]
    h = [[int(j == n - a + i) for j in range(n)] for i in range(a)]
    kappa = four_term_iso(F7, f, g, h, a, n, n, rng)
    assert kappa == four_term_closed_form(F7, f, g, h, a, n, n, rng)


# --- truncated DVR ----------------------------------------------------------

def test_truncated_dvr_arithmetic():
    R = TruncatedDVR(5, 4)
    w = R.omega_power(1)
    assert R.valuation(R.mul(w, w)) == 2
    assert R.valuation(R.omega_power(4)) is None
    u = R.const(3)
    assert R.mul(u, R.inv(u)) == R.one()


@pytest.mark.parametrize("seed", range(6))
def test_smith_form_valuations(seed):
    rng = random.Random(seed)
    C = random_complex(rng, 5, 6, h1_rank=2, rank2=3, s=2)
    assert sorted(C.smith_data.valuations) == [0, 1, 1]
    assert C.s == 2 and C.h1_rank == 2 and C.h2_killed_by_omega


def test_det_valuation_unit_of_diagonal():
    R = TruncatedDVR(5, 6)
    A = [[R.omega_power(1), R.zero()], [R.zero(), R.const(2)]]
    v, unit = R.det_valuation_unit(A)
    assert v == 1
    assert R.residue(unit) == 2


# --- Bockstein and H^1_f squares -------------------------------------------

def test_bockstein_plain_case():
    C = random_complex(random.Random(1), 5, 6, h1_rank=2, rank2=2, s=0)
    assert bockstein_detA(C, random.Random(2)).passed


def test_bockstein_ranks_two_one():
    C = random_complex(random.Random(4), 5, 4, h1_rank=1, rank2=1, s=1)
    assert C.rank1 == 2 and C.rank2 == 1
    assert bockstein_detA(C, random.Random(5)).passed


def test_bockstein_suite_small():
    reports = bockstein_suite(count=40, seed=7)
    assert all(r.passed for r in reports)


@pytest.mark.parametrize("s", [0, 1, 2])
def test_det02_sign_is_minus_one_to_s(s):
    for k in range(4):
        rng = random.Random(100 * s + k)
        C = random_complex(rng, 5, 6, h1_rank=s + 1, rank2=s + 1, s=s)
        report = det02_sign_check(C, random.Random(k))
        assert report.s == s
        assert report.sign_measured == (-1) ** s


def test_det02_suite_small():
    reports = det02_suite(count=40, seed=11)
    assert all(r.passed for r in reports)


@given(st.integers(0, 10 ** 6))
def test_det02_random_seeds(seed):
    report = det02_suite(count=1, seed=seed)[0]
    assert report.passed


# --- Frobenius determinants -------------------------------------------------

def place(order=6):
    group = FiniteAbelianGroup([order])
    return PlaceData.build(group, [], (1,), 7)


def test_det_frobenius_rank_one():
    v = place()
    sigma = GroupRingElement.basis(v.group, (1,), Fraction(3))
    assert det_frobenius(3, v, 1) == GroupRingElement.one(v.group) - sigma


def test_det_frobenius_rank_three():
    v = place()
    expected = GroupRingElement.one(v.group) - GroupRingElement.basis(v.group, (1,), Fraction(8))
    assert det_frobenius(2, v, 3) == expected


@pytest.mark.parametrize("degree", [1, 2, 3, 4])
@pytest.mark.parametrize("a", [1, 2, Fraction(1, 3)])
def test_det_frobenius_full_matches_formula(degree, a):
    v = place()
    assert det_frobenius(a, v, degree) == det_frobenius_expected(a, v, degree)
    assert det_frobenius(a, v, degree, inverse=True) == det_frobenius_expected(a, v, degree, inverse=True)
    assert det_frobenius_involution_check(a, v, degree)


@pytest.mark.parametrize("degree", [1, 2, 3, 5])
def test_det_frobenius_quotient_at_a_one(degree):
    assert det_frobenius(1, place(), degree, mode="quotient") == degree


@pytest.mark.parametrize("degree", [2, 3, 4])
@pytest.mark.parametrize("a", [2, Fraction(-1, 2)])
def test_det_frobenius_quotient_general(degree, a):
    assert det_frobenius(a, place(), degree, mode="quotient") == det_frobenius_quotient_expected(a, degree)


def test_det_frobenius_quotient_needs_trivial_on_decomposition():
    v = place()
    nontrivial = next(c for c in characters_of(v.group) if not c.is_trivial())
    with pytest.raises(ValueError):
        det_frobenius(1, v, 2, mode="quotient", chi=nontrivial)


@pytest.mark.parametrize("c", range(-6, 7))
def test_gamma_limit(c):
    assert gamma_limit_identity(c) == -c
