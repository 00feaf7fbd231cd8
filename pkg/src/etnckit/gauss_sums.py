"""Local and global Gauss sums, local reciprocity and Davenport-Hasse relations.

Conventions.  The additive character is ``psi(x) = exp(2 pi i Tr(x))`` on
``p^{-n} O / O``.  The local reciprocity map sends a unit ``u`` to the
automorphism ``zeta -> zeta^{u^{-1}}`` of the cyclotomic tower and the
uniformizer to the arithmetic Frobenius, so for a Dirichlet character
``chi_D`` of ``(Z/p^n)^x`` viewed as a Galois character the local character
is ``theta(u) = chi_D(u)^{-1}`` on units.
"""
from __future__ import annotations

import cmath
import itertools
import math
import os
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import kernels
from .algebra_core import (CyclotomicNumber, factorize, is_prime, lcm, valuation)
from .local_ring import URElement, is_primitive_mod_p, make_unramified

DEFAULT_BUDGET = int(os.environ.get("ETNCKIT_BUDGET_TERMS", 10 ** 7))


class BudgetExceeded(RuntimeError):
    """Raised when a brute-force sum would exceed the configured term budget."""


def _check_budget(terms: int, budget: int | None) -> None:
    limit = DEFAULT_BUDGET if budget is None else budget
    if terms > limit:
        raise BudgetExceeded(f"{terms} terms exceed the budget of {limit}")


# ---------------------------------------------------------------------------
# characters of (Z/l^n)^x
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    """Least primitive root modulo an odd prime p."""
    phi = p - 1
    qs = [q for q, _ in factorize(phi)]
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in qs):
            return g
    return 1


@lru_cache(maxsize=None)
def unit_coordinates(p: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Tables (i, t) with u = omega(g)^i (1+p)^t mod p^n for each unit u (-1 on non-units).

    ``omega(g)`` is the Teichmuller lift of the least primitive root g.
    """
    P = p ** n
    g = primitive_root(p)
    omega = pow(g, p ** (n - 1), P)
    tame = np.full(P, -1, dtype=np.int64)
    wild = np.full(P, -1, dtype=np.int64)
    w = 1
    for i in range(p - 1):
        v = w
        for t in range(p ** (n - 1)):
            tame[v] = i
            wild[v] = t
            v = v * (1 + p) % P
        w = w * omega % P
    return tame, wild


@lru_cache(maxsize=None)
def two_adic_coordinates(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Tables (s, t) with u = (-1)^s 5^t mod 2^n (-1 on even residues)."""
    P = 2 ** n
    sign = np.full(P, -1, dtype=np.int64)
    wild = np.full(P, -1, dtype=np.int64)
    for s in range(2 if n >= 2 else 1):
        v = (-1) ** s % P
        for t in range(max(P // 4, 1)):
            sign[v] = s
            wild[v] = t
            v = v * 5 % P
    return sign, wild


@dataclass(frozen=True)
class PrimePowerCharacter:
    """Character of (Z/l^n)^x with values in mu_order.

    Odd l: ``chi(omega(g)^i (1+l)^t) = zeta_{l-1}^{a i} zeta_{l^{n-1}}^{b t}``.
    l = 2:  ``chi((-1)^s 5^t) = (-1)^{a s} zeta_{2^{n-2}}^{b t}``.
    """

    prime: int
    n: int
    a: int
    b: int

    def __post_init__(self):
        if not is_prime(self.prime) or self.n < 0:
            raise ValueError("invalid prime power")
        object.__setattr__(self, "a", self.a % self._tame_order())
        object.__setattr__(self, "b", self.b % self._wild_order())

    def _tame_order(self) -> int:
        if self.n == 0:
            return 1
        if self.prime == 2:
            return 2 if self.n >= 2 else 1
        return self.prime - 1

    def _wild_order(self) -> int:
        if self.n == 0:
            return 1
        if self.prime == 2:
            return max(2 ** (self.n - 2), 1)
        return self.prime ** (self.n - 1)

    @property
    def modulus(self) -> int:
        return self.prime ** self.n

    @property
    def order(self) -> int:
        """Exponent of the value group: values are powers of zeta_order."""
        return max(self._tame_order() * self._wild_order(), 1)

    def exponents(self, units: np.ndarray) -> np.ndarray:
        """Exponents k (chi(u) = zeta_order^k) for an integer array of units mod l^n."""
        if self.n == 0:
            return np.zeros(np.shape(units), dtype=np.int64)
        u = np.asarray(units, dtype=np.int64) % self.modulus
        if self.prime == 2:
            s_tab, t_tab = two_adic_coordinates(self.n)
        else:
            s_tab, t_tab = unit_coordinates(self.prime, self.n)
        s, t = s_tab[u], t_tab[u]
        if np.any(s < 0):
            raise ValueError("character evaluated at a non-unit")
        tw = self._wild_order()
        tame = self._tame_order()
        return (self.a * s * tw + self.b * t * tame) % self.order

    def exponent(self, u: int) -> int:
        return int(self.exponents(np.array([u]))[0])

    def __call__(self, u: int) -> CyclotomicNumber:
        return CyclotomicNumber.zeta(self.order, self.exponent(u))

    def inverse(self) -> "PrimePowerCharacter":
        return PrimePowerCharacter(self.prime, self.n, -self.a, -self.b)

    def __mul__(self, other: "PrimePowerCharacter") -> "PrimePowerCharacter":
        if (other.prime, other.n) != (self.prime, self.n):
            raise ValueError("characters of different groups")
        return PrimePowerCharacter(self.prime, self.n, self.a + other.a, self.b + other.b)

    def is_trivial(self) -> bool:
        return self.a == 0 and self.b == 0

    @property
    def conductor_exponent(self) -> int:
        """Least c with the character trivial on 1 + l^c (0 when trivial)."""
        if self.is_trivial():
            return 0
        if self.prime == 2:
            if self.b == 0:
                return 2
            return self.n - valuation(self.b, 2) if self.b else 2
        if self.b == 0:
            return 1
        return self.n - valuation(self.b, self.prime)

    def restrict(self, n: int) -> "PrimePowerCharacter":
        """The same character on (Z/l^n)^x for conductor exponent <= n <= self.n."""
        if n < self.conductor_exponent or n > self.n:
            raise ValueError("cannot restrict below the conductor")
        if n == self.n:
            return self
        if self.prime == 2:
            if n < 2:
                return PrimePowerCharacter(2, n, 0, 0)
            return PrimePowerCharacter(2, n, self.a, self.b // 2 ** (self.n - n))
        if n == 0:
            return PrimePowerCharacter(self.prime, 0, 0, 0)
        return PrimePowerCharacter(self.prime, n, self.a, self.b // self.prime ** (self.n - n))

    def parity(self) -> int:
        """0 when chi(-1) = 1, 1 otherwise."""
        if self.n == 0:
            return 0
        e = self.exponent(self.modulus - 1)
        return 0 if e == 0 else 1


def characters_mod_prime_power(prime: int, n: int) -> list[PrimePowerCharacter]:
    probe = PrimePowerCharacter(prime, n, 0, 0)
    return [PrimePowerCharacter(prime, n, a, b)
            for a in range(probe._tame_order()) for b in range(probe._wild_order())]


# ---------------------------------------------------------------------------
# additive character and reciprocity
# ---------------------------------------------------------------------------

def additive_character(numerator: URElement | int, n: int, prime: int | None = None
                       ) -> CyclotomicNumber:
    """psi(numerator / prime^n) = zeta_{prime^n}^{Tr(numerator)}."""
    if isinstance(numerator, URElement):
        from .local_ring import trace

        prime = numerator.parent.p
        tr = trace(numerator)
    else:
        if prime is None:
            raise ValueError("an integer numerator needs the prime")
        tr = int(numerator)
    if n <= 0:
        return CyclotomicNumber.from_rational(1)
    return CyclotomicNumber.zeta(prime ** n, tr % prime ** n)


@dataclass(frozen=True)
class ReciprocityImage:
    """Element of Gal(k(mu_{p^n})/k) = (Z/p^n)^x x <Frobenius on the unramified part>."""

    cyclotomic_exponent: int
    frobenius_power: int
    modulus: int

    def act_on_zeta(self, power: int = 1) -> int:
        """Exponent of the image of zeta_{p^n}^power."""
        return (power * self.cyclotomic_exponent) % self.modulus

    def __mul__(self, other: "ReciprocityImage") -> "ReciprocityImage":
        return ReciprocityImage(self.cyclotomic_exponent * other.cyclotomic_exponent % self.modulus,
                                self.frobenius_power + other.frobenius_power, self.modulus)


def local_reciprocity(u: int | Fraction | URElement, n: int, p: int | None = None
                      ) -> ReciprocityImage:
    """rec(u) on k(mu_{p^n}): unit u acts as zeta -> zeta^{N(u)^{-1}}, p as Frobenius.

    ``u`` may be a rational number (p given) or a unit of an unramified ring.
    """
    if isinstance(u, URElement):
        from .local_ring import norm

        p = u.parent.p
        if not u.is_unit():
            raise ValueError("only units of the unramified ring are supported")
        P = p ** n
        nu = norm(u) % P if n else 0
        return ReciprocityImage(pow(nu, -1, P) if n else 0, 0, P)
    if p is None:
        raise ValueError("rational input needs p")
    value = Fraction(u)
    if value == 0:
        raise ValueError("reciprocity of zero")
    k = valuation(value.numerator, p) - valuation(value.denominator, p)
    unit = value / Fraction(p) ** k
    P = p ** n
    unit_mod = unit.numerator * pow(unit.denominator, -1, P) % P if n else 0
    exp = pow(unit_mod, -1, P) if n else 0
    return ReciprocityImage(exp % P if n else 0, k, P)


# ---------------------------------------------------------------------------
# local character data and Gauss sums
# ---------------------------------------------------------------------------

@dataclass
class LocalCharacterData:
    """theta = (theta_base o Norm) on units, theta(uniformizer) = zeta_frob_order^frob_exponent.

    ``degree`` is the residue degree r (r > 1 needs an odd prime).
    """

    theta_base: PrimePowerCharacter
    degree: int = 1
    frobenius_exponent: int = 0
    frobenius_order: int = 1

    @property
    def prime(self) -> int:
        return self.theta_base.prime

    @property
    def conductor_exponent(self) -> int:
        return self.theta_base.conductor_exponent

    @property
    def value_order(self) -> int:
        return lcm(self.theta_base.order, self.frobenius_order)

    def theta_exponents(self, units: np.ndarray) -> np.ndarray:
        """Exponents of theta (in zeta_value_order) on units (int array or (.., r) array)."""
        base = self.theta_base
        if self.degree > 1:
            ring = make_unramified(self.prime, self.degree, max(self.conductor_exponent, 1))
            norms = ring.norm_arrays(units.astype(ring.dtype))
            units = norms
        scale = self.value_order // base.order
        return base.exponents(np.asarray(units, dtype=np.int64)) * scale

    def theta_uniformizer_exponent(self) -> int:
        return self.frobenius_exponent * (self.value_order // self.frobenius_order)

    def inverse(self) -> "LocalCharacterData":
        return LocalCharacterData(self.theta_base.inverse(), self.degree,
                                  -self.frobenius_exponent, self.frobenius_order)

    def theta_at(self, u) -> CyclotomicNumber:
        arr = np.array([u.coeffs if isinstance(u, URElement) else u], dtype=np.int64)
        if self.degree == 1:
            arr = arr.reshape(-1)
        return CyclotomicNumber.zeta(self.value_order, int(self.theta_exponents(arr)[0]))


@dataclass
class GaussSumResult:
    value: CyclotomicNumber
    conductor_norm: int
    ramified: bool
    terms: int = 0


def _units_and_traces(prime: int, degree: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """All units of O/prime^n and their traces mod prime^n."""
    if degree == 1:
        P = prime ** n
        u = np.arange(P, dtype=np.int64)
        u = u[u % prime != 0]
        return u, u % P
    ring = make_unramified(prime, degree, n)
    elems = ring.all_elements_array()
    units = elems[ring.unit_mask(elems)]
    return units, ring.trace_arrays(units) % ring.P


def local_gauss_sum(chi: LocalCharacterData, budget: int | None = None) -> GaussSumResult:
    """tau(chi_v) with c = prime^{n_chi}; equal to 1 for unramified characters."""
    n = chi.conductor_exponent
    prime, r = chi.prime, chi.degree
    if n == 0:
        # c = 1 generates the trivial conductor times the trivial different
        return GaussSumResult(CyclotomicNumber.from_rational(1), 1, False, 1)
    terms = prime ** ((n - 1) * r) * (prime ** r - 1)
    _check_budget(terms, budget)
    units, traces = _units_and_traces(prime, r, n)
    d = chi.value_order
    q = prime ** n
    L = lcm(d, q)
    theta_exp = chi.theta_exponents(units)
    counts = kernels.exponent_counts(theta_exp, traces, L // d, L // q, L)
    value = CyclotomicNumber.from_int_exponent_array(L, counts)
    shift = (-n * chi.theta_uniformizer_exponent()) % d
    if shift:
        value = value * CyclotomicNumber.zeta(d, shift)
    return GaussSumResult(value, prime ** (n * r), True, terms)


def gauss_norm_law_check(chi: LocalCharacterData) -> dict:
    """tau(chi) tau(chi^{-1}) = theta(-1) N(conductor)."""
    t1 = local_gauss_sum(chi)
    t2 = local_gauss_sum(chi.inverse())
    lhs = t1.value * t2.value
    if chi.conductor_exponent == 0:
        rhs = CyclotomicNumber.from_rational(1)
    else:
        minus_one = np.array([chi.prime ** chi.conductor_exponent - 1], dtype=np.int64)
        if chi.degree > 1:
            minus_one = np.array([[minus_one[0]] + [0] * (chi.degree - 1)], dtype=np.int64)
        sign = CyclotomicNumber.zeta(chi.value_order, int(chi.theta_exponents(minus_one)[0]))
        rhs = sign * t1.conductor_norm
    return {"lhs": lhs, "rhs": rhs, "equal": lhs == rhs}


# ---------------------------------------------------------------------------
# global Dirichlet Gauss sums (base field Q)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DirichletCharacter:
    """Dirichlet character mod f as a product of prime-power components.

    The Galois character attached to it is sigma_a -> chi(a).
    """

    components: tuple[PrimePowerCharacter, ...]

    @property
    def modulus(self) -> int:
        return math.prod(c.modulus for c in self.components) if self.components else 1

    @property
    def order(self) -> int:
        return lcm(*(c.order for c in self.components)) if self.components else 1

    def exponent(self, a: int) -> int:
        if math.gcd(a, self.modulus) != 1:
            raise ValueError("Dirichlet character at a non-unit")
        d = self.order
        return sum(c.exponent(a % c.modulus) * (d // c.order) for c in self.components) % d

    def __call__(self, a: int) -> CyclotomicNumber:
        if math.gcd(a, self.modulus) != 1:
            return CyclotomicNumber.from_rational(0)
        return CyclotomicNumber.zeta(self.order, self.exponent(a))

    def complex_value(self, a: int) -> complex:
        if math.gcd(a, self.modulus) != 1:
            return 0j
        return cmath.exp(2j * math.pi * self.exponent(a) / self.order)

    def inverse(self) -> "DirichletCharacter":
        return DirichletCharacter(tuple(c.inverse() for c in self.components))

    def is_trivial(self) -> bool:
        return all(c.is_trivial() for c in self.components)

    def is_primitive(self) -> bool:
        return all(c.conductor_exponent == c.n for c in self.components)

    @property
    def conductor(self) -> int:
        return math.prod(c.prime ** c.conductor_exponent for c in self.components) \
            if self.components else 1

    def primitive(self) -> "DirichletCharacter":
        comps = tuple(c.restrict(c.conductor_exponent) for c in self.components
                      if c.conductor_exponent > 0)
        return DirichletCharacter(comps)

    def parity(self) -> int:
        if not self.components:
            return 0
        return 0 if self.exponent(self.modulus - 1) == 0 else 1

    def label(self) -> str:
        return "x".join(f"{c.prime}^{c.n}:{c.a},{c.b}" for c in self.components) or "trivial"


def dirichlet_characters(f: int) -> list[DirichletCharacter]:
    """All Dirichlet characters mod f."""
    parts = [characters_mod_prime_power(p, e) for p, e in factorize(f)] if f > 1 else []
    return [DirichletCharacter(tuple(c)) for c in itertools.product(*parts)]


def primitive_dirichlet_characters(max_conductor: int) -> list[DirichletCharacter]:
    out = []
    for f in range(1, max_conductor + 1):
        if f == 2:
            continue
        for chi in dirichlet_characters(f):
            if chi.is_primitive():
                out.append(chi)
    return out


def _crt(residues: list[tuple[int, int]]) -> int:
    x, m = 0, 1
    for r, mod in residues:
        t = ((r - x) * pow(m, -1, mod)) % mod
        x += m * t
        m *= mod
    return x % m


def dirichlet_local_gauss_sum(chi: DirichletCharacter, prime: int) -> CyclotomicNumber:
    """tau(chi_l) for the Galois character of a primitive Dirichlet character.

    theta(u) = chi(a) with a = u^{-1} mod l^m and a = 1 away from l;
    theta(l) = chi(a') with a' = 1 mod l^m and a' = l away from l.
    """
    f = chi.modulus
    comp = [c for c in chi.components if c.prime == prime]
    if not comp or comp[0].conductor_exponent == 0:
        return CyclotomicNumber.from_rational(1)
    m = comp[0].n
    q = prime ** m
    rest = f // q
    d = chi.order
    units = [u for u in range(q) if u % prime]
    L = lcm(d, q)
    counts = np.zeros(L, dtype=np.int64)
    for u in units:
        a = _crt([(pow(u, -1, q), q), (1, rest)]) if rest > 1 else pow(u, -1, q)
        e = chi.exponent(a)
        counts[(e * (L // d) + u * (L // q)) % L] += 1
    value = CyclotomicNumber.from_int_exponent_array(L, counts)
    a_frob = _crt([(1, q), (prime % rest, rest)]) if rest > 1 else 1
    frob = chi.exponent(a_frob)
    return value * CyclotomicNumber.zeta(d, (-m * frob) % d)


def dirichlet_gauss_sum(chi: DirichletCharacter) -> CyclotomicNumber:
    """Global tau_Q(chi) = product of local Gauss sums (chi primitive)."""
    if not chi.is_primitive():
        raise ValueError("global Gauss sums are defined here for primitive characters")
    value = CyclotomicNumber.from_rational(1)
    for c in chi.components:
        value = value * dirichlet_local_gauss_sum(chi, c.prime)
    return value


# ---------------------------------------------------------------------------
# finite fields and Davenport-Hasse
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def finite_field_powers(p: int, s: int) -> tuple[np.ndarray, np.ndarray, int]:
    """(powers of a generator gamma of F_{p^s}^x as (q-1, s) array, their traces, N(gamma))."""
    ring = make_unramified(p, s, 1)
    q = p ** s
    if s == 1:
        g = primitive_root(p)
        pw = np.array([[pow(g, i, p)] for i in range(q - 1)], dtype=np.int64)
        return pw, pw[:, 0] % p, g
    if is_primitive_mod_p(ring.modulus, p):
        gen = ring.element([0, 1])
    else:
        gen = next(x for x in ring.elements() if x.is_unit() and
                   all((x ** ((q - 1) // f)) != ring.one() for f, _ in factorize(q - 1)))
    rows = []
    cur = ring.one()
    for _ in range(q - 1):
        rows.append(cur.coeffs)
        cur = cur * gen
    pw = np.array(rows, dtype=np.int64)
    from .local_ring import norm as ur_norm

    return pw, ring.trace_arrays(pw) % p, ur_norm(gen) % p


def classical_gauss_sum(p: int, s: int, k: int, order: int | None = None) -> CyclotomicNumber:
    """g(chi) = sum_{a in F_q^x} chi(a) zeta_p^{Tr a}, chi(gamma^i) = zeta_{q-1}^{k i}.

    ``order`` defaults to q - 1; pass it to give k relative to a smaller value group.
    """
    q = p ** s
    d = q - 1 if order is None else order
    if (q - 1) % d:
        raise ValueError("character order must divide q - 1")
    _, traces, _ = finite_field_powers(p, s)
    idx = np.arange(q - 1, dtype=np.int64)
    theta_exp = (k * idx) % d
    L = lcm(d, p)
    counts = kernels.exponent_counts(theta_exp, traces, L // d, L // p, L)
    return CyclotomicNumber.from_int_exponent_array(L, counts)


def davenport_hasse_classical(p: int, s: int, k: int) -> dict:
    """Compare g(chi' o N) with (-1)^{s-1} g(chi')^s for chi'(h^i) = zeta_{p-1}^{k i}.

    h = N(gamma) generates F_p^x, so chi' o N(gamma^i) = zeta_{p-1}^{k i}.
    """
    t0 = time.perf_counter()
    _, _, h = finite_field_powers(p, s)
    lhs = classical_gauss_sum(p, s, k, order=p - 1)
    # base sum over F_p^x written in powers of h
    base_traces = np.array([pow(h, i, p) for i in range(p - 1)], dtype=np.int64)
    L = lcm(p - 1, p)
    theta_exp = (k * np.arange(p - 1, dtype=np.int64)) % (p - 1)
    counts = kernels.exponent_counts(theta_exp, base_traces, L // (p - 1), L // p, L)
    base = CyclotomicNumber.from_int_exponent_array(L, counts)
    rhs = base ** s * (-1) ** (s - 1)
    return {"lhs": lhs, "rhs": rhs, "equal": lhs == rhs, "terms": p ** s - 1,
            "wall_ms": (time.perf_counter() - t0) * 1000}


def davenport_hasse_generalized_check(p: int, r: int, theta: PrimePowerCharacter,
                                      budget: int | None = None) -> dict:
    """tau_k(theta o N) = (-1)^{n_chi (r-1)} tau_Q(theta)^r over the degree-r unramified ring."""
    t0 = time.perf_counter()
    if theta.prime != p:
        raise ValueError("character must live on (Z/p^n)^x")
    n = theta.conductor_exponent
    lhs = local_gauss_sum(LocalCharacterData(theta, degree=r), budget)
    base = local_gauss_sum(LocalCharacterData(theta, degree=1), budget)
    rhs = base.value ** r * (-1) ** (n * (r - 1))
    return {"lhs": lhs.value, "rhs": rhs, "equal": lhs.value == rhs, "terms": lhs.terms,
            "wall_ms": (time.perf_counter() - t0) * 1000}


# ---------------------------------------------------------------------------
# wild invariant
# ---------------------------------------------------------------------------

def wild_invariant(chi: LocalCharacterData) -> URElement:
    """The unit e with theta(E(z)) = psi(e z p^{-n}) for all z in p^m O / p^n O.

    Odd n = 2m+1 uses E(z) = 1 + z + z^2/2 and e is unique mod p^{m+1};
    even n = 2m uses E(z) = 1 + z and e is unique mod p^m.
    """
    n = chi.conductor_exponent
    if n < 2:
        raise ValueError("the wild invariant needs conductor exponent >= 2")
    p, r = chi.prime, chi.degree
    m = n // 2
    odd = n % 2 == 1
    e_prec = m + 1 if odd else m
    ring = make_unramified(p, r, n)
    inv2 = pow(2, -1, ring.P)
    # z runs over p^m O / p^n O
    zring = make_unramified(p, r, n - m)
    zs = zring.all_elements_array().astype(np.int64) * p ** m % ring.P
    zs = zs.astype(ring.dtype)
    one = np.zeros_like(zs)
    one[:, 0] = 1
    if odd:
        sq = ring.mul_arrays(zs, zs)
        ez = (one + zs + (sq * inv2) % ring.P) % ring.P
    else:
        ez = (one + zs) % ring.P
    theta_vals = chi.theta_exponents(ez if r > 1 else ez[:, 0]) % chi.value_order
    # psi(e z / p^n) = zeta_{p^n}^{Tr(e z)}; compare in zeta_L
    d = chi.value_order
    L = lcm(d, p ** n)
    lhs = theta_vals * (L // d) % L
    cand_ring = make_unramified(p, r, e_prec)
    found = []
    for cand in cand_ring.all_elements_array():
        if not np.any(cand % p):
            continue
        c = np.broadcast_to(cand.astype(ring.dtype), zs.shape)
        prod = ring.mul_arrays(zs, c)
        tr = ring.trace_arrays(prod) % ring.P
        rhs = tr * (L // p ** n) % L
        if np.array_equal(lhs, rhs):
            found.append(URElement(cand_ring, [int(x) for x in cand]))
    if len(found) != 1:
        raise ArithmeticError(f"wild invariant not unique or missing ({len(found)} solutions)")
    return found[0]


# ---------------------------------------------------------------------------
# decompositions and equivariant Gauss sums
# ---------------------------------------------------------------------------

def gauss_decomposition_check(theta2: PrimePowerCharacter, chi1_frobenius_exponent: int,
                              chi1_order: int, degree: int = 1) -> dict:
    """v | p: tau(chi_v) = chi(sigma_v)^{-n_chi} tau(chi_{2,v}).

    chi = chi_1 chi_2 with chi_1 unramified at v, chi_1(sigma_v) =
    zeta_{chi1_order}^{chi1_frobenius_exponent} and theta_{chi_2} = theta2 o N.
    """
    full = LocalCharacterData(theta2, degree, chi1_frobenius_exponent, chi1_order)
    wild = LocalCharacterData(theta2, degree)
    lhs = local_gauss_sum(full).value
    n = theta2.conductor_exponent
    factor = CyclotomicNumber.zeta(chi1_order, (-n * chi1_frobenius_exponent) % chi1_order)
    rhs = factor * local_gauss_sum(wild).value
    return {"lhs": lhs, "rhs": rhs, "equal": lhs == rhs}


def gauss_decomposition_check_away(chi1: DirichletCharacter, chi2: DirichletCharacter,
                                   prime: int) -> dict:
    """v = l away from p over Q: tau(chi_l) = chi_2(rec(l^m))^{-1} tau(chi_{1,l}).

    chi_1 carries the ramification at l; chi_2 is unramified at l.
    """
    chi = DirichletCharacter(_merge_components(chi1, chi2))
    lhs = dirichlet_local_gauss_sum(chi, prime)
    comp = [c for c in chi1.components if c.prime == prime]
    m = comp[0].conductor_exponent if comp else 0
    # rec(l) acts on the chi_2 part as the Frobenius sigma_l
    frob = chi2.exponent(prime % chi2.modulus) if chi2.modulus > 1 else 0
    factor = CyclotomicNumber.zeta(chi2.order, (-m * frob) % chi2.order)
    rhs = factor * dirichlet_local_gauss_sum(chi1, prime)
    return {"lhs": lhs, "rhs": rhs, "equal": lhs == rhs}


def _merge_components(a: DirichletCharacter, b: DirichletCharacter
                      ) -> tuple[PrimePowerCharacter, ...]:
    by_prime: dict[int, PrimePowerCharacter] = {}
    for c in a.components + b.components:
        if c.prime in by_prime:
            by_prime[c.prime] = by_prime[c.prime] * c
        else:
            by_prime[c.prime] = c
    return tuple(by_prime[p] for p in sorted(by_prime))


def equivariant_gauss_sum(m: int, prime: int | None = None):
    """tau_{K/Q} (or its v-part) for K = Q(zeta_m), G = (Z/m)^x, as an element of Q(zeta)[G].

    Characters of G are the Dirichlet characters mod m; each contributes the
    Gauss sum of its primitive part.
    """
    group, to_exponents, _ = cyclotomic_galois_group(m)
    comps = {}
    for chi in dirichlet_characters(m) if m > 1 else [DirichletCharacter(())]:
        prim = chi.primitive()
        if prime is None:
            val = dirichlet_gauss_sum(prim)
        else:
            val = dirichlet_local_gauss_sum(prim, prime) if prim.modulus > 1 else \
                CyclotomicNumber.from_rational(1)
        comps[chi] = val
    return _assemble_over_units(group, to_exponents, comps, m)


def cyclotomic_galois_group(m: int):
    """(Z/m)^x = Gal(Q(zeta_m)/Q) as a product of cyclic groups.

    Returns (group, a -> group element, group element -> a).
    """
    from .algebra_core import FiniteAbelianGroup

    orders: list[int] = []
    coords = []
    for p, e in (factorize(m) if m > 1 else ()):
        if p == 2:
            if e >= 2:
                orders.append(2)
                coords.append((2, e, 0))
            if e >= 3:
                orders.append(2 ** (e - 2))
                coords.append((2, e, 1))
        else:
            orders.append(p - 1)
            coords.append((p, e, 0))
            if e >= 2:
                orders.append(p ** (e - 1))
                coords.append((p, e, 1))
    group = FiniteAbelianGroup(orders if orders else [1])
    units = [a for a in range(1, max(m, 2)) if math.gcd(a, m) == 1] if m > 1 else [1]
    table = {}
    for a in units:
        g = []
        for p, e, which in coords:
            tabs = two_adic_coordinates(e) if p == 2 else unit_coordinates(p, e)
            g.append(int(tabs[which][a % p ** e]))
        table[a] = group.normalize(g if g else [0])
    inverse_table = {v: k for k, v in table.items()}
    return group, table.__getitem__, inverse_table.__getitem__


def _assemble_over_units(group, to_group, comps: dict, m: int):
    """sum_chi c_chi e_chi in Q(zeta)[(Z/m)^x] from Dirichlet-character components."""
    from .algebra_core import GroupRingElement

    units = [a for a in range(1, m + 1) if math.gcd(a, m) == 1] if m > 1 else [1]
    size = len(units)
    terms = {}
    for a in units:
        acc = CyclotomicNumber.from_rational(0)
        inv_a = pow(a, -1, m) if m > 1 else 1
        for chi, c in comps.items():
            acc = acc + c * chi(inv_a)
        acc = acc * Fraction(1, size)
        terms[to_group(a)] = acc
    return GroupRingElement(group, terms)
