"""Truncated unramified p-adic rings, Frobenius, p-adic logarithm and O[[T]].

An :class:`UnramifiedRing` is ``(Z/p^N)[x]/(modulus)`` for a monic lift of an
irreducible polynomial over F_p.  Elements are length-``r`` coefficient
vectors; vectorized helpers act on numpy arrays shaped ``(..., r)``.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .algebra_core import is_prime, valuation

# Conway polynomials (coefficients low -> high, monic) for small fields.
CONWAY_POLYNOMIALS: dict[tuple[int, int], tuple[int, ...]] = {
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
    (11, 1): (9, 1),
    (11, 2): (2, 7, 1),
    (11, 3): (9, 2, 0, 1),
    (13, 1): (11, 1),
    (13, 2): (2, 12, 1),
    (13, 3): (11, 2, 0, 1),
}


# ---------------------------------------------------------------------------
# polynomials over F_p
# ---------------------------------------------------------------------------

def _fp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = [x % p for x in a]
    _fp_trim(a)
    inv = pow(m[-1], -1, p)
    while len(a) >= len(m):
        c = a[-1] * inv % p
        shift = len(a) - len(m)
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _fp_trim(a)
    return a


def _fp_mulmod(a, b, m, p):
    prod = [0] * (len(a) + len(b))
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _fp_mod(prod, m, p)


def _fp_powmod(a, e, m, p):
    result = [1]
    base = _fp_mod(list(a), m, p)
    while e:
        if e & 1:
            result = _fp_mulmod(result, base, m, p)
        base = _fp_mulmod(base, base, m, p)
        e >>= 1
    return result


def _fp_gcd(a, b, p):
    a, b = _fp_trim([x % p for x in a]), _fp_trim([x % p for x in b])
    while b:
        a, b = b, _fp_mod(a, b, p)
    return a


def is_irreducible_mod_p(poly: Sequence[int], p: int) -> bool:
    """Rabin-style test: gcd(x^{p^i} - x, f) = 1 for i <= deg/2 and f | x^{p^deg} - x."""
    f = _fp_trim([c % p for c in poly])
    r = len(f) - 1
    if r < 1:
        return False
    if r == 1:
        return True
    xp = [0, 1]
    for i in range(1, r // 2 + 1):
        xp = _fp_powmod(xp, p, f, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(_fp_gcd(f, diff, p)) > 1:
            return False
    xq = _fp_powmod([0, 1], p ** r, f, p)
    return _fp_trim(list(xq)) == [0, 1]


def is_primitive_mod_p(poly: Sequence[int], p: int) -> bool:
    """True when x generates (F_p[x]/poly)^x (poly irreducible)."""
    from .algebra_core import factorize

    f = [c % p for c in poly]
    r = len(f) - 1
    order = p ** r - 1
    if _fp_trim(list(_fp_powmod([0, 1], order, f, p))) != [1]:
        return False
    return all(_fp_trim(list(_fp_powmod([0, 1], order // q, f, p))) != [1]
               for q, _ in factorize(order))


@lru_cache(maxsize=None)
def defining_polynomial(p: int, r: int) -> tuple[int, ...]:
    """Conway polynomial when tabulated, else the lexicographically least irreducible."""
    if (p, r) in CONWAY_POLYNOMIALS:
        return CONWAY_POLYNOMIALS[(p, r)]
    if r == 1:
        return (0, 1)
    for n in range(p ** r):
        coeffs = [(n // p ** i) % p for i in range(r)] + [1]
        if is_irreducible_mod_p(coeffs, p):
            return tuple(coeffs)
    raise RuntimeError("no irreducible polynomial found")


# ---------------------------------------------------------------------------
# the ring
# ---------------------------------------------------------------------------

class UnramifiedRing:
    """O/p^N for O the unramified extension of Z_p of degree r."""

    def __init__(self, p: int, r: int, N: int, modulus: Sequence[int] | None = None):
        if not is_prime(p) or p == 2:
            raise ValueError(f"p must be an odd prime, got {p}")
        if r < 1 or N < 1:
            raise ValueError("degree and precision must be positive")
        self.p, self.r, self.N = p, r, N
        self.P = p ** N
        mod = tuple(modulus) if modulus is not None else defining_polynomial(p, r)
        if len(mod) != r + 1 or mod[-1] % p != 1 % p:
            raise ValueError("modulus must be monic of degree r")
        if not is_irreducible_mod_p(mod, p):
            raise ValueError("modulus is not irreducible modulo p")
        self.modulus = tuple(int(c) % self.P for c in mod)
        self._mod_low = np.array(self.modulus[:r], dtype=self.dtype)
        self.frobenius_matrix = self._compute_frobenius_matrix()

    # numpy dtype: int64 when products of residues fit, object otherwise
    @property
    def dtype(self):
        return np.int64 if self.P < kernels.INT64_LIMIT else object

    def __eq__(self, other):
        return isinstance(other, UnramifiedRing) and (self.p, self.r, self.N, self.modulus) == \
            (other.p, other.r, other.N, other.modulus)

    def __hash__(self):
        return hash((self.p, self.r, self.N, self.modulus))

    def __repr__(self):
        return f"UnramifiedRing(p={self.p}, r={self.r}, N={self.N})"

    def with_precision(self, N: int) -> "UnramifiedRing":
        return make_unramified(self.p, self.r, N)

    # -- array-level arithmetic ---------------------------------------------
    def arr(self, values) -> np.ndarray:
        a = np.array(values, dtype=object) % self.P
        return a.astype(self.dtype) if self.dtype is not object else a

    def mul_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return kernels.ring_mul(a, b, self._mod_low, self.P)

    def frobenius_arrays(self, a: np.ndarray, power: int = 1) -> np.ndarray:
        """Apply Frobenius^power (any integer power) to arrays shaped (..., r)."""
        power %= self.r
        out = a
        for _ in range(power):
            out = self._matvec(self.frobenius_matrix, out)
        return out

    def _matvec(self, mat, a: np.ndarray) -> np.ndarray:
        r = self.r
        out = np.zeros_like(a)
        for i in range(r):
            acc = np.zeros(a.shape[:-1], dtype=a.dtype)
            for k in range(r):
                if mat[i][k]:
                    acc = (acc + (a[..., k] * mat[i][k]) % self.P) % self.P
            out[..., i] = acc
        return out

    def trace_arrays(self, a: np.ndarray) -> np.ndarray:
        acc = a.copy()
        cur = a
        for _ in range(self.r - 1):
            cur = self.frobenius_arrays(cur)
            acc = (acc + cur) % self.P
        return acc[..., 0]

    def norm_arrays(self, a: np.ndarray) -> np.ndarray:
        acc = a.copy()
        cur = a
        for _ in range(self.r - 1):
            cur = self.frobenius_arrays(cur)
            acc = self.mul_arrays(acc, cur)
        return acc[..., 0]

    def all_elements_array(self, precision: int | None = None) -> np.ndarray:
        """All residues modulo p^precision (default N) as an array (p^{prec r}, r)."""
        n = self.N if precision is None else precision
        base = self.p ** n
        count = base ** self.r
        idx = np.arange(count, dtype=np.int64)
        cols = [(idx // base ** i) % base for i in range(self.r)]
        return np.stack(cols, axis=-1).astype(self.dtype)

    def unit_mask(self, a: np.ndarray) -> np.ndarray:
        """True where the element is a unit (nonzero residue mod p)."""
        return np.any(a % self.p != 0, axis=-1)

    # -- scalar construction ------------------------------------------------
    def element(self, coeffs: Iterable[int]) -> "URElement":
        c = [int(x) for x in coeffs]
        if len(c) > self.r:
            raise ValueError("too many coefficients")
        c += [0] * (self.r - len(c))
        return URElement(self, c)

    def from_int(self, n: int | Fraction) -> "URElement":
        if isinstance(n, Fraction):
            if n.denominator % self.p == 0:
                raise ZeroDivisionError(f"{n} is not p-integral")
            n = n.numerator * pow(n.denominator, -1, self.P)
        return self.element([n])

    def zero(self) -> "URElement":
        return self.element([])

    def one(self) -> "URElement":
        return self.element([1])

    def gen(self) -> "URElement":
        return self.element([0, 1]) if self.r > 1 else self.element([-self.modulus[0]])

    def random_element(self, rng: random.Random) -> "URElement":
        return self.element([rng.randrange(self.P) for _ in range(self.r)])

    def elements(self) -> Iterable["URElement"]:
        for row in self.all_elements_array():
            yield URElement(self, [int(x) for x in row])

    # -- Frobenius lift -----------------------------------------------------
    def _compute_frobenius_matrix(self) -> list[list[int]]:
        r, p = self.r, self.p
        if r == 1:
            return [[1]]
        x = self.element([0, 1])
        y = x ** p
        mod = self.modulus

        def f(z):
            acc = self.zero()
            for c in reversed(mod):
                acc = acc * z + self.from_int(c)
            return acc

        def fprime(z):
            acc = self.zero()
            for k in range(len(mod) - 1, 0, -1):
                acc = acc * z + self.from_int(k * mod[k])
            return acc

        for _ in range(self.N.bit_length() + 2):
            y = y - f(y) * fprime(y).inverse()
        if not f(y).is_zero():
            raise ArithmeticError("Frobenius lift did not converge")
        cols = []
        power = self.one()
        for _ in range(r):
            cols.append(power.coeffs)
            power = power * y
        return [[cols[k][i] for k in range(r)] for i in range(r)]


def make_unramified(p: int, r: int, N: int) -> UnramifiedRing:
    """Deterministic construction of the truncated unramified ring of degree r."""
    return _cached_ring(p, r, N)


@lru_cache(maxsize=None)
def _cached_ring(p: int, r: int, N: int) -> UnramifiedRing:
    return UnramifiedRing(p, r, N)


class URElement:
    """Element of an :class:`UnramifiedRing`."""

    __slots__ = ("parent", "coeffs")

    def __init__(self, parent: UnramifiedRing, coeffs: Sequence[int]):
        self.parent = parent
        self.coeffs = tuple(int(c) % parent.P for c in coeffs)

    def _arr(self) -> np.ndarray:
        return self.parent.arr(self.coeffs)

    def _lift(self, other) -> "URElement":
        if isinstance(other, URElement):
            if other.parent != self.parent:
                raise ValueError("elements of different rings")
            return other
        return self.parent.from_int(other)

    def __add__(self, other):
        o = self._lift(other)
        return URElement(self.parent, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return URElement(self.parent, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return URElement(self.parent, [a * other for a in self.coeffs])
        o = self._lift(other)
        prod = self.parent.mul_arrays(self._arr()[None, :], o._arr()[None, :])[0]
        return URElement(self.parent, [int(v) for v in prod])

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.parent.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except (ValueError, ZeroDivisionError):
            return False
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.parent, self.coeffs))

    def __repr__(self):
        return f"URElement({list(self.coeffs)} mod {self.parent.p}^{self.parent.N})"

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_unit(self) -> bool:
        return any(c % self.parent.p for c in self.coeffs)

    def valuation(self) -> int:
        """Minimum p-adic valuation of the coefficients (N for zero)."""
        vals = [valuation(c, self.parent.p) for c in self.coeffs if c]
        return min(vals) if vals else self.parent.N

    def inverse(self) -> "URElement":
        if not self.is_unit():
            raise ZeroDivisionError("element is not a unit")
        ring = self.parent
        q = ring.p ** ring.r
        v = self ** (q - 2)  # correct modulo p
        for _ in range(ring.N.bit_length() + 1):
            v = v * (2 - self * v)
        return v

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def frobenius(self, power: int = 1) -> "URElement":
        out = self.parent.frobenius_arrays(self._arr(), power)
        return URElement(self.parent, [int(v) for v in out])

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_int(self) -> int:
        if not self.is_rational():
            raise ValueError("element is not in the prime subring")
        return self.coeffs[0]

    def teichmuller(self) -> "URElement":
        """The unique root of unity of order prime to p congruent to self mod p."""
        ring = self.parent
        q = ring.p ** ring.r
        t = self
        for _ in range(ring.N):
            t = t ** q
        return t

    def reduce(self, N: int) -> "URElement":
        return URElement(make_unramified(self.parent.p, self.parent.r, N), self.coeffs)


def frobenius(x: URElement, power: int = 1) -> URElement:
    return x.frobenius(power)


def trace(x: URElement) -> int:
    """Tr to Z/p^N, as the sum of Frobenius conjugates."""
    acc = x
    cur = x
    for _ in range(x.parent.r - 1):
        cur = cur.frobenius()
        acc = acc + cur
    return acc.to_int()


def norm(x: URElement) -> int:
    """Norm to Z/p^N, as the product of Frobenius conjugates."""
    acc = x
    cur = x
    for _ in range(x.parent.r - 1):
        cur = cur.frobenius()
        acc = acc * cur
    return acc.to_int()


def padic_log(u: URElement) -> URElement:
    """log(u) for u = 1 mod p, exact modulo p^N.

    With u - 1 = p w the n-th term is (-1)^{n+1} p^{n - v(n)} w^n / n', where
    n' is the prime-to-p part of n; all terms are integral.
    """
    ring = u.parent
    p, N = ring.p, ring.N
    z = u - 1
    if any(c % p for c in z.coeffs):
        raise ValueError("padic_log needs u = 1 mod p")
    w = URElement(ring, [c // p for c in z.coeffs])
    total = ring.zero()
    wn = ring.one()
    n = 1
    while True:
        wn = wn * w
        e = n - valuation(n, p)
        if e >= N and n > N:
            break
        if e < N:
            unit = n // p ** valuation(n, p)
            term = wn * (p ** e) * pow(unit, -1, ring.P)
            total = total + term if n % 2 else total - term
        n += 1
    return total


# ---------------------------------------------------------------------------
# power series
# ---------------------------------------------------------------------------

def _binomial_general(c: int, k: int) -> Fraction:
    num = 1
    for i in range(k):
        num *= c - i
    return Fraction(num, math.factorial(k))


class TruncatedSeries:
    """f(T) in O[[T]] modulo (T^M, p^N).

    ``polynomial=True`` records that the stored coefficients are the whole
    power series (all higher coefficients vanish).  Operations that do not
    preserve T-adic order (D, substitution of T -> zeta - 1) are exact on
    polynomials and lose T-precision otherwise.
    """

    __slots__ = ("ring", "M", "coeffs", "polynomial")

    def __init__(self, ring: UnramifiedRing, coeffs, M: int | None = None,
                 polynomial: bool = False):
        arr = np.array(coeffs, dtype=object)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1) if ring.r == 1 else arr.reshape(-1, ring.r)
        if M is None:
            M = arr.shape[0]
        out = np.zeros((M, ring.r), dtype=object)
        k = min(M, arr.shape[0])
        out[:k, :arr.shape[1]] = arr[:k]
        if polynomial and arr.shape[0] > M and np.any(arr[M:] % ring.P != 0):
            raise ValueError("polynomial degree exceeds the T-precision")
        self.ring = ring
        self.M = M
        self.coeffs = ring.arr(out)
        self.polynomial = polynomial

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_array(cls, ring, arr: np.ndarray, polynomial=False) -> "TruncatedSeries":
        obj = object.__new__(cls)
        obj.ring = ring
        obj.M = arr.shape[0]
        obj.coeffs = (arr % ring.P).astype(ring.dtype) if ring.dtype is not object else arr % ring.P
        obj.polynomial = polynomial
        return obj

    @classmethod
    def zero(cls, ring, M) -> "TruncatedSeries":
        return cls(ring, np.zeros((M, ring.r), dtype=object), M, polynomial=True)

    @classmethod
    def constant(cls, ring, value, M) -> "TruncatedSeries":
        c = value.coeffs if isinstance(value, URElement) else ring.from_int(value).coeffs
        arr = np.zeros((M, ring.r), dtype=object)
        arr[0] = c
        return cls(ring, arr, M, polynomial=True)

    @classmethod
    def T(cls, ring, M) -> "TruncatedSeries":
        arr = np.zeros((M, ring.r), dtype=object)
        if M > 1:
            arr[1, 0] = 1
        return cls(ring, arr, M, polynomial=M > 1)

    @classmethod
    def one_plus_T_power(cls, ring, c: int, M: int, scalar: URElement | None = None
                         ) -> "TruncatedSeries":
        """scalar * (1+T)^c for an integer c (binomial series)."""
        s = scalar.coeffs if scalar is not None else ring.one().coeffs
        arr = np.zeros((M, ring.r), dtype=object)
        for k in range(M):
            b = _binomial_general(c, k)
            if b:
                bk = b.numerator * pow(b.denominator, -1, ring.P)
                arr[k] = [(bk * x) % ring.P for x in s]
        poly = 0 <= c < M
        return cls(ring, arr, M, polynomial=poly)

    @classmethod
    def from_one_plus_T_basis(cls, ring, coeffs: dict[int, URElement], M: int
                              ) -> "TruncatedSeries":
        """sum_k c_k (1+T)^k for nonnegative k."""
        total = cls.zero(ring, M)
        for k, c in coeffs.items():
            total = total + cls.one_plus_T_power(ring, k, M, c)
        total.polynomial = all(0 <= k < M for k in coeffs)
        return total

    # -- basic arithmetic ---------------------------------------------------
    def _check(self, other: "TruncatedSeries"):
        if other.ring.p != self.ring.p or other.ring.r != self.ring.r:
            raise ValueError("series over different rings")

    def _common(self, other: "TruncatedSeries"):
        M = min(self.M, other.M)
        N = min(self.ring.N, other.ring.N)
        ring = self.ring if self.ring.N == N else other.ring
        a = self.coeffs[:M] % ring.P
        b = other.coeffs[:M] % ring.P
        return ring, M, a.astype(ring.dtype), b.astype(ring.dtype)

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(self.ring, other, self.M)
        self._check(other)
        ring, M, a, b = self._common(other)
        return TruncatedSeries.from_array(ring, (a + b) % ring.P,
                                          self.polynomial and other.polynomial)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries.from_array(self.ring, (-self.coeffs) % self.ring.P, self.polynomial)

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(self.ring, other, self.M)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return TruncatedSeries.from_array(self.ring, (self.coeffs * (other % self.ring.P))
                                              % self.ring.P, self.polynomial)
        if isinstance(other, URElement):
            prod = self.ring.mul_arrays(self.coeffs, np.broadcast_to(other._arr(), self.coeffs.shape))
            return TruncatedSeries.from_array(self.ring, prod, self.polynomial)
        self._check(other)
        ring, M, a, b = self._common(other)
        prod = kernels.series_mul(a, b, ring._mod_low, ring.P)
        poly = self.polynomial and other.polynomial and \
            self.degree() + other.degree() < M
        return TruncatedSeries.from_array(ring, prod, poly)

    __rmul__ = __mul__

    def degree(self) -> int:
        nz = np.nonzero(np.any(self.coeffs != 0, axis=1))[0]
        return int(nz[-1]) if len(nz) else -1

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        ring, M, a, b = self._common(other)
        return bool(np.all(a == b))

    __hash__ = None

    def coeff(self, k: int) -> URElement:
        return URElement(self.ring, [int(v) for v in self.coeffs[k]])

    def value_at_zero(self) -> URElement:
        return self.coeff(0)

    def with_precision(self, M: int | None = None, N: int | None = None) -> "TruncatedSeries":
        ring = self.ring if N is None else make_unramified(self.ring.p, self.ring.r, N)
        M = self.M if M is None else M
        arr = np.zeros((M, ring.r), dtype=object)
        k = min(M, self.M)
        arr[:k] = self.coeffs[:k]
        poly = self.polynomial and self.degree() < M
        return TruncatedSeries.from_array(ring, arr, poly)

    def __repr__(self):
        return (f"TruncatedSeries(p={self.ring.p}, r={self.ring.r}, N={self.ring.N}, "
                f"M={self.M}, polynomial={self.polynomial})")

    def to_json(self) -> dict:
        return {"p": self.ring.p, "r": self.ring.r, "N": self.ring.N, "M": self.M,
                "coeffs": [[int(v) for v in row] for row in self.coeffs]}

    @classmethod
    def from_json(cls, data) -> "TruncatedSeries":
        ring = make_unramified(int(data["p"]), int(data["r"]), int(data["N"]))
        return cls(ring, data["coeffs"], int(data["M"]))

    # -- structure maps ------------------------------------------------------
    def frobenius_coeffs(self, power: int = 1) -> "TruncatedSeries":
        """Apply Frobenius^power to every coefficient."""
        return TruncatedSeries.from_array(self.ring, self.ring.frobenius_arrays(self.coeffs, power),
                                          self.polynomial)

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse; needs a unit constant term."""
        c0 = self.value_at_zero()
        if not c0.is_unit():
            raise ZeroDivisionError("constant term is not a unit")
        ring, M = self.ring, self.M
        inv0 = c0.inverse()
        out = np.zeros((M, ring.r), dtype=ring.dtype)
        out[0] = inv0._arr()
        a = self.coeffs
        for k in range(1, M):
            acc = np.zeros(ring.r, dtype=ring.dtype)
            for i in range(1, k + 1):
                if np.any(a[i]):
                    acc = (acc + ring.mul_arrays(a[i][None, :], out[k - i][None, :])[0]) % ring.P
            out[k] = ring.mul_arrays((-acc % ring.P)[None, :], inv0._arr()[None, :])[0]
        return TruncatedSeries.from_array(ring, out, False)

    def __truediv__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self * other.inverse()

    def evaluate(self, x: URElement) -> URElement:
        """f(x) for x with positive valuation (certified modulo p^min(N, M*v(x)))."""
        acc = self.ring.zero()
        for k in range(self.M - 1, -1, -1):
            acc = acc * x + self.coeff(k)
        return acc

    def certified_precision_at(self, x_valuation: Fraction) -> int:
        """p-adic digits certified when substituting an element of valuation x_valuation."""
        if self.polynomial:
            return self.ring.N
        return min(self.ring.N, math.floor(self.M * x_valuation))


def series_compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """f(g(T)) for g(0) = 0 mod p, truncated to (T^M, p^N)."""
    c0 = g.value_at_zero()
    if any(c % g.ring.p for c in c0.coeffs):
        raise ValueError("series_compose needs g(0) = 0 mod p")
    M = min(f.M, g.M)
    if not c0.is_zero():
        # T-adic order is not preserved; only exact for polynomial f
        if not f.polynomial:
            raise ValueError("composition with g(0) != 0 needs a polynomial outer series")
    ring = f.ring if f.ring.N <= g.ring.N else g.ring
    g = g.with_precision(M, ring.N)
    top = min(f.M, M) - 1 if c0.is_zero() else f.degree()
    if top < 0:
        return TruncatedSeries.zero(ring, M)
    acc = TruncatedSeries.constant(ring, f.coeff(top), M)
    for k in range(top - 1, -1, -1):
        acc = acc * g + TruncatedSeries.constant(ring, f.coeff(k), M)
    acc.polynomial = f.polynomial and g.polynomial and \
        max(f.degree(), 0) * max(g.degree(), 0) < M
    return acc


def D_op(f: TruncatedSeries) -> TruncatedSeries:
    """D = (1+T) d/dT; loses one T-degree unless f is a polynomial."""
    ring, M = f.ring, f.M
    k = np.arange(M, dtype=object).reshape(-1, 1)
    deriv = np.zeros((M, ring.r), dtype=object)
    deriv[:M - 1] = (f.coeffs[1:].astype(object) * k[1:]) % ring.P
    out = (deriv + np.vstack([np.zeros((1, ring.r), dtype=object), deriv[:M - 1]])) % ring.P
    if f.polynomial:
        return TruncatedSeries.from_array(ring, out, True)
    return TruncatedSeries.from_array(ring, out[:M - 1], False)


def phi_op(f: TruncatedSeries) -> TruncatedSeries:
    """(phi f)(T) = f^sigma((1+T)^p - 1)."""
    ring = f.ring
    g = TruncatedSeries.one_plus_T_power(ring, ring.p, f.M) - 1
    return series_compose(f.frobenius_coeffs(1), g)


def galois_act(c: int, frobenius_power: int, f: TruncatedSeries) -> TruncatedSeries:
    """(sigma f)(T) = f^{Frob^k}((1+T)^c - 1) for c = chi_cyc(sigma), a unit."""
    ring = f.ring
    if c % ring.p == 0:
        raise ValueError("cyclotomic character value must be a unit")
    g = TruncatedSeries.one_plus_T_power(ring, c, f.M) - 1
    return series_compose(f.frobenius_coeffs(frobenius_power), g)


def one_plus_T_coordinates(f: TruncatedSeries) -> dict[int, URElement]:
    """Coefficients c_l with f = sum c_l (1+T)^l (f a polynomial)."""
    if not f.polynomial:
        raise ValueError("the (1+T)-basis expansion needs a polynomial")
    ring = f.ring
    deg = f.degree()
    out = {}
    # T^k = sum_l C(k,l) (-1)^{k-l} (1+T)^l
    for k in range(deg + 1):
        ck = f.coeff(k)
        if ck.is_zero():
            continue
        for l in range(k + 1):
            b = math.comb(k, l) * (-1) ** (k - l)
            out[l] = out.get(l, ring.zero()) + ck * b
    return {l: c for l, c in out.items() if not c.is_zero()}


def mu_p_average(f: TruncatedSeries) -> TruncatedSeries:
    """sum over zeta in mu_p of f(zeta(1+T) - 1), for polynomial f.

    Using f = sum c_l (1+T)^l the sum is p * sum_{p | l} c_l (1+T)^l.
    """
    ring = f.ring
    coords = one_plus_T_coordinates(f)
    kept = {l: c * ring.p for l, c in coords.items() if l % ring.p == 0}
    return TruncatedSeries.from_one_plus_T_basis(ring, kept, f.M)


def r_membership(f: TruncatedSeries) -> bool:
    """Whether sum_{zeta in mu_p} f(zeta(1+T) - 1) vanishes at the certified precision.

    For a truncated series the substitution T -> zeta(1+T) - 1 feeds the
    unknown tail into every coefficient, but with a factor (zeta - 1)^{M-k};
    coefficient k is therefore tested modulo p^{min(N, (M-k)//(p-1))}.
    """
    ring = f.ring
    avg = mu_p_average(TruncatedSeries.from_array(ring, f.coeffs.copy(), True))
    if f.polynomial:
        return not np.any(avg.coeffs % ring.P)
    p = ring.p
    for k in range(f.M):
        digits = min(ring.N, (f.M - k) // (p - 1))
        if digits >= 1 and np.any(avg.coeffs[k] % p ** digits):
            return False
    return True


# ---------------------------------------------------------------------------
# evaluation at zeta_{p^m} - 1
# ---------------------------------------------------------------------------

def reduce_cyclotomic_block(arr: np.ndarray, p: int, m: int, P: int) -> np.ndarray:
    """Reduce an array on exponents mod p^m (axis 0) modulo Phi_{p^m}."""
    if m == 0:
        return arr.copy()
    q = p ** m
    block = q // p
    blocks = arr.reshape((p, block) + arr.shape[1:])
    out = (blocks[:p - 1] - blocks[p - 1][None]) % P
    return out.reshape(((p - 1) * block,) + arr.shape[1:])


def evaluate_at_zeta_minus_one(f: TruncatedSeries, m: int, level: int | None = None
                               ) -> tuple[np.ndarray, int]:
    """f(zeta_{p^m} - 1) inside O[Z/p^level] (zeta_{p^m} = x^{p^{level-m}}).

    Returns ``(array of shape (p^level, r), certified p-adic digits)``; the
    array represents the value modulo x^{p^level} - 1, which is exact for
    polynomial f and certified to the returned digits otherwise.
    """
    ring = f.ring
    p, P = ring.p, ring.P
    level = m if level is None else level
    size = p ** level
    step = p ** (level - m)
    acc = np.zeros((size, ring.r), dtype=ring.dtype)
    if m == 0:
        acc[0] = f.coeffs[0]
        return acc, ring.N
    for k in range(f.M - 1, -1, -1):
        rolled = np.roll(acc, step, axis=0)
        acc = (rolled - acc) % P
        acc[0] = (acc[0] + f.coeffs[k]) % P
    e = (p - 1) * p ** (m - 1)
    digits = ring.N if f.polynomial else min(ring.N, f.M // e)
    return acc, digits
