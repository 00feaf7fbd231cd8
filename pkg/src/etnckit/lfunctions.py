"""Dirichlet L-values, archimedean constants, period determinants and the functional equation over Q.

Exact values at non-positive integers come from generalized Bernoulli numbers.
Values at positive integers use the Hurwitz decomposition
L(chi, s) = f^{-s} sum_a chi(a) zeta(s, a/f) with an Euler-Maclaurin evaluation
whose remainder is bounded by the first omitted term (the summands are
completely monotone).  Powers of pi and i on the archimedean side stay symbolic
until the final comparison.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import mpmath

from .algebra_core import CyclotomicNumber, GroupRingElement, involution
from .gauss_sums import (DirichletCharacter, cyclotomic_galois_group, dirichlet_characters,
                         dirichlet_gauss_sum, dirichlet_local_gauss_sum,
                         primitive_dirichlet_characters)
from .coleman import a_n

DirichletChar = DirichletCharacter
TAIL_TARGET = 1e-15

# ---------------------------------------------------------------------------
# Bernoulli numbers
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def bernoulli_number(n: int) -> Fraction:
    """B_n with B_1 = -1/2."""
    if n == 0:
        return Fraction(1)
    total = Fraction(0)
    for k in range(n):
        total += math.comb(n + 1, k) * bernoulli_number(k)
    return -total / (n + 1)


def bernoulli_polynomial(n: int, x: Fraction) -> Fraction:
    x = Fraction(x)
    return sum((math.comb(n, k) * bernoulli_number(k) * x ** (n - k) for k in range(n + 1)), Fraction(0))


def gen_bernoulli(n: int, chi: DirichletCharacter) -> CyclotomicNumber:
    """B_{n,chi} = f^{n-1} sum_{a=1}^{f} chi(a) B_n(a/f) in Q(zeta_{ord chi})."""
    if n < 1:
        raise ValueError("n must be at least 1")
    f = chi.modulus
    d = chi.order
    counts: dict[int, Fraction] = {}
    for a in range(1, f + 1):
        if math.gcd(a, f) != 1:
            continue
        e = chi.exponent(a) if f > 1 else 0
        counts[e] = counts.get(e, Fraction(0)) + bernoulli_polynomial(n, Fraction(a, f))
    value = CyclotomicNumber.from_exponent_counts(d, counts)
    return value * Fraction(f) ** (n - 1)


def l_value_nonpositive(chi: DirichletCharacter, n: int) -> CyclotomicNumber:
    """L(chi, 1 - n) = -B_{n,chi} / n."""
    return gen_bernoulli(n, chi) * Fraction(-1, n)


# ---------------------------------------------------------------------------
# numeric L-values at positive integers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NumericValue:
    value: complex
    error_bound: float


def _rising(s: float, k: int) -> float:
    out = 1.0
    for i in range(k):
        out *= s + i
    return out


def hurwitz_zeta(s: int, a: float, shift: int = 12, tol: float = 1e-17) -> NumericValue:
    """zeta(s, a) for integer s >= 2 and a > 0 by Euler-Maclaurin with a certified remainder."""
    if s < 2:
        raise ValueError("s must be at least 2")
    if a <= 0:
        raise ValueError("a must be positive")
    y = shift + a
    head = math.fsum((k + a) ** (-s) for k in range(shift))
    terms = [y ** (1 - s) / (s - 1), 0.5 * y ** (-s)]
    m = 1
    while True:
        term = float(bernoulli_number(2 * m)) / math.factorial(2 * m) * _rising(s, 2 * m - 1) \
            * y ** (-s - 2 * m + 1)
        nxt = abs(float(bernoulli_number(2 * m + 2)) / math.factorial(2 * m + 2)
                  * _rising(s, 2 * m + 1) * y ** (-s - 2 * m - 1))
        terms.append(term)
        if nxt <= tol:
            return NumericValue(head + math.fsum(terms), nxt)
        if m > 60:
            return hurwitz_zeta(s, a, shift * 2, tol)
        m += 1


def digamma(x: float, shift: int = 12, tol: float = 1e-17) -> NumericValue:
    """psi(x) for x > 0 by recurrence and the asymptotic series with a certified remainder."""
    if x <= 0:
        raise ValueError("x must be positive")
    y = x + shift
    head = -math.fsum(1.0 / (x + k) for k in range(shift))
    terms = [math.log(y), -0.5 / y]
    m = 1
    while True:
        terms.append(-float(bernoulli_number(2 * m)) / (2 * m * y ** (2 * m)))
        nxt = abs(float(bernoulli_number(2 * m + 2)) / ((2 * m + 2) * y ** (2 * m + 2)))
        if nxt <= tol:
            return NumericValue(head + math.fsum(terms), nxt)
        if m > 60:
            return digamma(x, shift * 2, tol)
        m += 1


def _complex_fsum(values: Iterable[complex]) -> complex:
    values = list(values)
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


@dataclass(frozen=True)
class LValue:
    """Leading term of L_S(chi, s) at a positive integer; `pole` marks a residue."""

    value: complex
    error_bound: float
    pole: bool = False


def l_numeric(chi: DirichletCharacter, j: int, excluded: Iterable[int] = ()) -> LValue:
    """L_S(chi, j) for j >= 1; the residue at s = 1 for trivial chi."""
    if j < 1:
        raise ValueError("use l_value_nonpositive for j <= 0")
    f = chi.modulus
    units = [a for a in range(1, f + 1) if math.gcd(a, f) == 1]
    if chi.is_trivial() and j == 1:
        value, bound, pole = 1 + 0j, 0.0, True
    elif j == 1:
        parts = []
        bound = 0.0
        for a in units:
            psi = digamma(a / f)
            parts.append(chi.complex_value(a) * psi.value)
            bound += psi.error_bound
        value = -_complex_fsum(parts) / f
        bound = bound / f
        pole = False
    else:
        parts = []
        bound = 0.0
        for a in units:
            hz = hurwitz_zeta(j, a / f)
            parts.append(chi.complex_value(a) * hz.value)
            bound += hz.error_bound
        scale = f ** (-j)
        value = _complex_fsum(parts) * scale
        bound *= scale
        pole = False
    for ell in excluded:
        if f % ell == 0 and not chi.is_trivial():
            continue
        factor = 1 - chi.complex_value(ell) * ell ** (-j) if not chi.is_trivial() else 1 - ell ** (-j)
        value *= factor
        bound *= abs(factor)
    return LValue(value, bound, pole)


def l_derivative_numeric(chi: DirichletCharacter, s: int, dps: int = 30) -> complex:
    """L'(chi, s) by differentiating the Hurwitz decomposition (mpmath, dps digits)."""
    f = chi.modulus
    with mpmath.workdps(dps):
        total = mpmath.mpc(0)
        logf = mpmath.log(f)
        for a in range(1, f + 1):
            if math.gcd(a, f) != 1:
                continue
            c = _mp_root_of_unity(chi, a) if f > 1 else mpmath.mpc(1)
            x = mpmath.mpf(a) / f
            term = mpmath.power(f, -s) * (-logf * mpmath.zeta(s, x) + mpmath.zeta(s, x, 1))
            total += c * term
        return complex(total)


def _mp_root_of_unity(chi: DirichletCharacter, a: int):
    return mpmath.expjpi(mpmath.mpf(2 * chi.exponent(a)) / chi.order)


# ---------------------------------------------------------------------------
# archimedean data and pi-graded numbers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ArchData:
    r_real: int
    r_complex: int
    r_real_ramified: int

    def __post_init__(self):
        if min(self.r_real, self.r_complex, self.r_real_ramified) < 0:
            raise ValueError("counts must be nonnegative")
        if self.r_real_ramified > self.r_real:
            raise ValueError("ramified real places exceed real places")

    @property
    def degree(self) -> int:
        return self.r_real + 2 * self.r_complex

    @classmethod
    def rationals(cls, chi: DirichletCharacter) -> "ArchData":
        return cls(1, 0, chi.parity())


@dataclass(frozen=True)
class PiGraded:
    """coefficient * pi^pi_power with an exact cyclotomic coefficient."""

    coefficient: CyclotomicNumber
    pi_power: int

    def __mul__(self, other):
        if isinstance(other, PiGraded):
            return PiGraded(self.coefficient * other.coefficient, self.pi_power + other.pi_power)
        return PiGraded(self.coefficient * other, self.pi_power)

    def inverse(self) -> "PiGraded":
        return PiGraded(self.coefficient.inverse(), -self.pi_power)

    def __complex__(self) -> complex:
        return complex(self.coefficient) * math.pi ** self.pi_power

    def to_json(self) -> dict:
        return {"coefficient": self.coefficient.to_json(), "pi_power": self.pi_power}


def _i_power(k: int) -> CyclotomicNumber:
    return CyclotomicNumber.zeta(4, k % 4)


def arch_constant(arch: ArchData, j: int) -> PiGraded:
    """2^a (pi i)^b with the exponents switching roles with the parity of j."""
    unram = arch.r_real + arch.r_complex - arch.r_real_ramified
    other = arch.r_complex + arch.r_real_ramified
    two_exp, pi_i_exp = (unram, other) if j % 2 == 0 else (other, unram)
    return PiGraded(_i_power(pi_i_exp) * Fraction(2) ** two_exp, pi_i_exp)


def two_pi_i_power(k: int) -> PiGraded:
    return PiGraded(_i_power(k) * Fraction(2) ** k, k)


def vanishing_order(chi: DirichletCharacter, j: int) -> int:
    """Order of vanishing of L(chi^{-1}, s) at s = 1 - j over Q."""
    arch = ArchData.rationals(chi)
    if j % 2 == 0:
        return arch.r_real_ramified + arch.r_complex
    if j == 1 and chi.is_trivial():
        return arch.r_real + arch.r_complex - 1
    return arch.r_real - arch.r_real_ramified + arch.r_complex


def functional_equation_rhs(chi: DirichletCharacter, j: int) -> PiGraded:
    """delta f^{j-1} tau(chi) ((j-1)!) A(Q, chi, j) / (2 pi i)^j, exact up to the pi grading."""
    if not chi.is_primitive():
        raise ValueError("the functional equation is stated for primitive characters")
    delta = -1 if (chi.is_trivial() and j == 1) else 1
    f = chi.conductor
    tau = dirichlet_gauss_sum(chi) if f > 1 else CyclotomicNumber.from_rational(1)
    scalar = Fraction(delta * f ** (j - 1) * math.factorial(j - 1))
    core = PiGraded(tau * scalar, 0)
    return core * arch_constant(ArchData.rationals(chi), j) * two_pi_i_power(j).inverse()


@dataclass
class FunctionalEquationReport:
    chi: str
    j: int
    lhs: complex
    rhs: complex
    rel_err: float
    order_lhs: int
    parity_consistent: bool
    tail_bound: float

    @property
    def passed(self) -> bool:
        return self.parity_consistent and self.rel_err <= 1e-10

    def to_json(self) -> dict:
        return {"chi": self.chi, "j": self.j,
                "lhs": {"re": self.lhs.real, "im": self.lhs.imag},
                "rhs": {"re": self.rhs.real, "im": self.rhs.imag},
                "rel_err": self.rel_err, "order_lhs": self.order_lhs,
                "tail_bound": self.tail_bound, "pass": self.passed}


def functional_equation_check(chi: DirichletCharacter, j: int) -> FunctionalEquationReport:
    """L*(chi^{-1}, 1-j) / L*(chi, j) against the assembled right-hand side."""
    if j < 1:
        raise ValueError("j must be positive")
    chi_inv = chi.inverse()
    lam = vanishing_order(chi, j)
    bern = l_value_nonpositive(chi_inv, j)
    if lam == 0:
        parity_ok = not bern.is_zero()
        numerator = complex(bern)
    else:
        # the Bernoulli value must vanish; the leading term is the derivative
        parity_ok = bern.is_zero()
        numerator = l_derivative_numeric(chi_inv, 1 - j)
        if lam > 1:
            raise NotImplementedError("higher-order zeros do not occur over Q")
        parity_ok = parity_ok and abs(numerator) > 1e-8
    denom = l_numeric(chi, j)
    if abs(denom.value) <= 1e-8:
        raise ArithmeticError("L(chi, j) vanishes numerically")
    lhs = numerator / denom.value
    rhs = complex(functional_equation_rhs(chi, j))
    rel = abs(lhs - rhs) / abs(rhs)
    return FunctionalEquationReport(chi.label(), j, lhs, rhs, rel, lam, parity_ok, denom.error_bound)


def functional_equation_grid(max_conductor: int = 40, js: Iterable[int] = (1, 2, 3, 4)
                             ) -> list[FunctionalEquationReport]:
    return [functional_equation_check(chi, j)
            for chi in primitive_dirichlet_characters(max_conductor) for j in js]


def gauss_norm_identity(chi: DirichletCharacter) -> bool:
    """tau(chi) tau(chi^{-1}) = chi(-1) f for primitive chi."""
    f = chi.conductor
    if f == 1:
        return True
    lhs = dirichlet_gauss_sum(chi) * dirichlet_gauss_sum(chi.inverse())
    sign = -1 if chi.parity() else 1
    return lhs == CyclotomicNumber.from_rational(sign * f)


# ---------------------------------------------------------------------------
# period determinants over k = Q
# ---------------------------------------------------------------------------

def _units(m: int) -> list[int]:
    return [a for a in range(1, m + 1) if math.gcd(a, m) == 1] if m > 1 else [1]


def period_coefficients(x: CyclotomicNumber, m: int) -> dict[int, CyclotomicNumber]:
    """a -> iota(sigma_a x), the coefficient of sigma_a^{-1} in B_{K/Q}(x) for K = Q(zeta_m)."""
    return {a: (x.galois(a) if m > 1 else x) for a in _units(m)}


def period_matrix_B(xs: list[CyclotomicNumber], m: int) -> GroupRingElement:
    """B_{K/Q}(x) = sum_sigma iota(x^sigma) sigma^{-1} in Q(zeta)[Gal(Q(zeta_m)/Q)]."""
    if len(xs) != 1:
        raise ValueError("over k = Q the period determinant takes exactly one element")
    group, to_group, _ = cyclotomic_galois_group(m)
    terms = {}
    for a, c in period_coefficients(xs[0], m).items():
        inv = pow(a, -1, m) if m > 1 else 1
        terms[to_group(inv)] = c
    return GroupRingElement(group, terms)


def b_component(x: CyclotomicNumber, m: int, chi: DirichletCharacter) -> CyclotomicNumber:
    """B_{K/Q}(x)^chi = sum_a iota(sigma_a x) chi(a)^{-1}."""
    chi_inv = chi.inverse()
    total = CyclotomicNumber.from_rational(0)
    for a, c in period_coefficients(x, m).items():
        total = total + c * chi_inv(a)
    return total


def trace(x: CyclotomicNumber, m: int) -> Fraction:
    total = CyclotomicNumber.from_rational(0)
    for a in _units(m):
        total = total + (x.galois(a) if m > 1 else x)
    return total.to_fraction()


def gram_element(x: CyclotomicNumber, m: int) -> GroupRingElement:
    """sum_sigma Tr(x^{sigma^{-1}} x) sigma."""
    group, to_group, _ = cyclotomic_galois_group(m)
    terms = {}
    for a in _units(m):
        inv = pow(a, -1, m) if m > 1 else 1
        y = (x.galois(inv) if m > 1 else x) * x
        terms[to_group(a)] = CyclotomicNumber.from_rational(trace(y, m))
    return GroupRingElement(group, terms)


def gram_identity_check(x: CyclotomicNumber, m: int) -> dict:
    B = period_matrix_B([x], m)
    lhs = B * involution(B)
    rhs = gram_element(x, m)
    return {"m": m, "equal": lhs == rhs, "normal_basis": is_normal_basis_generator(x, m)}


def is_normal_basis_generator(x: CyclotomicNumber, m: int) -> bool:
    return all(not b_component(x, m, chi).is_zero() for chi in
               (dirichlet_characters(m) if m > 1 else [DirichletCharacter(())]))


def normal_basis_generator(m: int) -> CyclotomicNumber:
    """sum of zeta_d over divisors d > 1 of m (a normal basis generator for the m used here)."""
    x = CyclotomicNumber.from_rational(0 if m > 1 else 1)
    for d in range(2, m + 1):
        if m % d == 0:
            x = x + CyclotomicNumber.zeta(d)
    if not is_normal_basis_generator(x, m):
        x = x + 1
        if not is_normal_basis_generator(x, m):
            raise ValueError("no normal basis generator among the tried candidates")
    return x


def _split_character(chi: DirichletCharacter, p: int) -> tuple[DirichletCharacter, DirichletCharacter]:
    tame = DirichletCharacter(tuple(c for c in chi.components if c.prime != p))
    wild = DirichletCharacter(tuple(c for c in chi.components if c.prime == p))
    return tame, wild


def an_gauss_identity(p: int, n: int, chi: DirichletCharacter) -> dict:
    """sum_sigma iota(a_n^sigma) chi(sigma)^{-1} = tau_Q(chi_p) / p^{n_chi - 1} (or -1 if n_chi = 0)."""
    q = p ** n
    lhs = b_component(a_n(p, n), q, chi)
    m = chi.conductor
    if m == 1:
        rhs = CyclotomicNumber.from_rational(-1)
    else:
        n_chi = round(math.log(m, p))
        rhs = dirichlet_gauss_sum(chi.primitive()) * Fraction(1, p ** (n_chi - 1))
    return {"lhs": lhs, "rhs": rhs, "equal": lhs == rhs}


def b_an_check(x: CyclotomicNumber, m: int, p: int, n: int, chi: DirichletCharacter) -> dict:
    """B_{K_n/Q}(a_n x)^chi against its Gauss-sum factorization, K = Q(zeta_m), p not dividing m."""
    if m % p == 0:
        raise ValueError("p must be unramified in K")
    M = m * p ** n
    if chi.modulus != M:
        raise ValueError("chi must be a character mod m p^n")
    y = a_n(p, n) * x
    lhs = b_component(y, M, chi)
    tame, wild = _split_character(chi, p)
    n_chi = wild.components[0].conductor_exponent if wild.components else 0
    b1 = b_component(x, m, tame)
    if n_chi == 0:
        rhs = -b1
    else:
        tau_v = dirichlet_local_gauss_sum(chi.primitive(), p)
        frob = tame(p) if tame.components else CyclotomicNumber.from_rational(1)
        # (-1)^{n_chi (r_k - #S_p)} = 1 over Q with one p-adic place
        rhs = b1 * tau_v * frob ** n_chi * Fraction(p) ** (1 - n_chi)
    return {"chi": chi.label(), "n_chi": n_chi, "lhs": lhs, "rhs": rhs, "equal": lhs == rhs}


def b_an_suite(p: int, n_max: int, m: int = 1, x: CyclotomicNumber | None = None) -> list[dict]:
    x = x if x is not None else (normal_basis_generator(m) if m > 1 else CyclotomicNumber.from_rational(1))
    out = []
    for n in range(0, n_max + 1):
        for chi in dirichlet_characters(m * p ** n) if m * p ** n > 1 else [DirichletCharacter(())]:
            if m * p ** n == 1:
                lhs = b_component(a_n(p, 0) * x, 1, chi)
                out.append({"chi": "trivial", "n_chi": 0, "lhs": lhs, "rhs": -x, "equal": lhs == -x})
                continue
            out.append(b_an_check(x, m, p, n, chi))
    return out


# ---------------------------------------------------------------------------
# the period map alpha
# ---------------------------------------------------------------------------

def alpha_period_numeric(x: CyclotomicNumber, j: int, m: int) -> dict[int, complex]:
    """a -> coefficient of sigma_a^{-1} b_iota in alpha^j(x), K = Q(zeta_m)."""
    scale = (2j * math.pi) ** (-j)
    out = {}
    for a, c in period_coefficients(x, m).items():
        z = complex(c)
        if j % 2 == 0:
            out[a] = (2 * z.real - math.pi * z.imag) * scale
        else:
            out[a] = (2j * z.imag + math.pi * 1j * z.real) * scale
    return out


def wedge_alpha_check(xs: list[CyclotomicNumber], j: int, chi: DirichletCharacter, m: int,
                      tol: float = 1e-12) -> dict:
    """(alpha^j x)^chi against A(Q, chi, j) B(x)^chi / (2 pi i)^j numerically."""
    if len(xs) != 1:
        raise ValueError("over k = Q the wedge has one factor")
    coeffs = alpha_period_numeric(xs[0], j, m)
    lhs = _complex_fsum(c * chi.complex_value(a).conjugate() for a, c in coeffs.items())
    rhs_graded = arch_constant(ArchData.rationals(chi), j) * two_pi_i_power(j).inverse()
    rhs = complex(rhs_graded) * complex(b_component(xs[0], m, chi))
    err = abs(lhs - rhs)
    scale = max(abs(rhs), 1e-300)
    return {"chi": chi.label(), "j": j, "lhs": lhs, "rhs": rhs, "abs_err": err,
            "pass": err <= tol * max(1.0, scale)}


__all__ = [
    "DirichletChar", "bernoulli_number", "bernoulli_polynomial", "gen_bernoulli",
    "l_value_nonpositive", "hurwitz_zeta", "digamma", "l_numeric", "l_derivative_numeric",
    "LValue", "ArchData", "PiGraded", "arch_constant", "vanishing_order",
    "functional_equation_rhs", "functional_equation_check", "functional_equation_grid",
    "FunctionalEquationReport", "gauss_norm_identity", "period_matrix_B", "b_component",
    "gram_element", "gram_identity_check", "normal_basis_generator", "is_normal_basis_generator",
    "an_gauss_identity", "b_an_check", "b_an_suite", "alpha_period_numeric", "wedge_alpha_check",
]
