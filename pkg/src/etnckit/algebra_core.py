"""Exact cyclotomic numbers, finite abelian groups, characters and group rings.

A :class:`CyclotomicNumber` is stored on the tensor basis of
``Q(zeta_N) = (x) Q(zeta_q)`` over the prime-power factors ``q`` of ``N``,
with each factor on its power basis ``zeta_q^i, 0 <= i < phi(q)``.  That
basis is canonical, turns subfield membership into a coordinate test and
makes reduction modulo each ``Phi_q`` a blockwise subtraction.  The
power basis modulo ``Phi_N`` is used for serialization.
"""
from __future__ import annotations

import cmath
import itertools
import math
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Mapping, Sequence

import numpy as np

Scalar = "int | Fraction | CyclotomicNumber | ResidueInteger"


# ---------------------------------------------------------------------------
# integer helpers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of ``n >= 1`` as ``((p, e), ...)`` sorted by p."""
    if n < 1:
        raise ValueError("factorize needs a positive integer")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == ((n, 1),)


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result = n
    for p, _ in factorize(n):
        result = result // p * (p - 1)
    return result


def lcm(*values: int) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_exact_div(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def _poly_exact_div(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    dq = len(den) - 1
    quot = [0] * (len(num) - dq)
    for i in range(len(num) - 1, dq - 1, -1):
        c = num[i] // den[-1]
        quot[i - dq] = c
        if c:
            for k in range(dq + 1):
                num[i - dq + k] -= c * den[k]
    if any(num[:dq]):
        raise ArithmeticError("inexact polynomial division")
    return quot


def _prime_power_parts(n: int) -> list[int]:
    return [p ** e for p, e in factorize(n)]


def canonical_order(n: int) -> int:
    """Q(zeta_n) = Q(zeta_2n) for odd n; keep the representative with 4 | n or n odd."""
    return n // 2 if n % 4 == 2 else n


# ---------------------------------------------------------------------------
# cyclotomic numbers
# ---------------------------------------------------------------------------

def _reduce_axis(full: np.ndarray, axis: int, q: int) -> np.ndarray:
    """Reduce an axis of length q (exponents mod x^q - 1) modulo Phi_q."""
    p = factorize(q)[0][0]
    m = q // p
    shape = full.shape
    blocks = full.reshape(shape[:axis] + (p, m) + shape[axis + 1:])
    last = np.take(blocks, [p - 1], axis=axis)
    head = np.take(blocks, list(range(p - 1)), axis=axis)
    res = head - last
    return res.reshape(shape[:axis] + ((p - 1) * m,) + shape[axis + 1:])


def _fold_axis(arr: np.ndarray, axis: int, q: int) -> np.ndarray:
    """Fold an axis of length < 2q into length q using x^q = 1."""
    length = arr.shape[axis]
    out_shape = list(arr.shape)
    out_shape[axis] = q
    out = np.zeros(out_shape, dtype=object)
    lo = min(length, q)
    idx = [slice(None)] * arr.ndim
    idx[axis] = slice(0, lo)
    out[tuple(idx)] += arr[tuple(idx)]
    if length > q:
        src = [slice(None)] * arr.ndim
        src[axis] = slice(q, length)
        dst = [slice(None)] * arr.ndim
        dst[axis] = slice(0, length - q)
        out[tuple(dst)] += arr[tuple(src)]
    return out


def _obj_zeros(shape: Sequence[int]) -> np.ndarray:
    arr = np.empty(tuple(shape), dtype=object)
    arr.fill(0)
    return arr


class CyclotomicNumber:
    """Exact element of a cyclotomic field Q(zeta_N).

    Values are immutable.  Equality and hashing use the canonical form at
    the least cyclotomic order containing the value.
    """

    __slots__ = ("_qs", "_num", "_den", "_hash")

    def __init__(self, order: int, coeffs: Sequence[int | Fraction] = ()):
        """Build ``sum coeffs[i] * zeta_order^i`` (any length; reduced mod Phi_order)."""
        counts = {}
        for i, c in enumerate(coeffs):
            if c:
                counts[i % order] = counts.get(i % order, 0) + Fraction(c)
        other = CyclotomicNumber.from_exponent_counts(order, counts)
        self._qs, self._num, self._den = other._qs, other._num, other._den
        self._hash = None

    # -- construction -----------------------------------------------------
    @classmethod
    def _raw(cls, qs: tuple[int, ...], num: np.ndarray, den: int) -> "CyclotomicNumber":
        obj = object.__new__(cls)
        obj._qs, obj._num, obj._den = qs, num, den
        obj._hash = None
        obj._normalize()
        return obj

    @classmethod
    def from_rational(cls, value: int | Fraction) -> "CyclotomicNumber":
        value = Fraction(value)
        num = _obj_zeros(())
        num[()] = value.numerator
        return cls._raw((), num, value.denominator)

    @classmethod
    def zeta(cls, order: int, power: int = 1) -> "CyclotomicNumber":
        """The root of unity exp(2 pi i power / order)."""
        return cls.from_exponent_counts(order, {power % order: 1})

    @classmethod
    def from_exponent_counts(cls, order: int, counts) -> "CyclotomicNumber":
        """Build ``sum_e counts[e] * zeta_order^e``.

        ``counts`` is a mapping exponent -> coefficient or a length-``order``
        integer sequence.  Coefficients may be ints or Fractions.
        """
        if isinstance(counts, Mapping):
            items = [(int(e) % order, Fraction(c)) for e, c in counts.items() if c]
        else:
            arr = np.asarray(counts)
            nz = np.nonzero(arr)[0]
            items = [(int(e) % order, Fraction(int(arr[e])) if arr.dtype.kind in "iu"
                      else Fraction(arr[e])) for e in nz]
        den = lcm(*(c.denominator for _, c in items)) if items else 1
        qs_all = _prime_power_parts(order)
        qs = tuple(q for q in qs_all if q != 2)
        sign_two = 2 in qs_all
        full = _obj_zeros(qs)
        # zeta_order^e = prod zeta_q^{e * u_q} with u_q = (order/q)^{-1} mod q
        units = [pow(order // q, -1, q) for q in qs]
        u2 = pow(order // 2, -1, 2) if sign_two else 0
        for e, c in items:
            val = c.numerator * (den // c.denominator)
            if sign_two and (e * u2) % 2:
                val = -val
            idx = tuple((e * u) % q for u, q in zip(units, qs))
            full[idx] += val
        for ax, q in enumerate(qs):
            full = _reduce_axis(full, ax, q)
        return cls._raw(qs, full, den)

    @classmethod
    def from_int_exponent_array(cls, order: int, counts: np.ndarray) -> "CyclotomicNumber":
        """Fast path for a dense integer count vector of length ``order``."""
        counts = np.asarray(counts, dtype=np.int64)
        qs_all = _prime_power_parts(order)
        qs = tuple(q for q in qs_all if q != 2)
        exps = np.arange(order, dtype=np.int64)
        vals = counts.copy()
        if 2 in qs_all:
            u2 = pow(order // 2, -1, 2)
            vals = np.where((exps * u2) % 2 == 1, -vals, vals)
        full = np.zeros(qs if qs else (), dtype=np.int64)
        if qs:
            idx = tuple((exps * pow(order // q, -1, q)) % q for q in qs)
            np.add.at(full, idx, vals)
        else:
            full = np.array(vals.sum(), dtype=np.int64)
        full = full.astype(object)
        for ax, q in enumerate(qs):
            full = _reduce_axis(full, ax, q)
        return cls._raw(qs, full, 1)

    # -- normal form --------------------------------------------------------
    def _normalize(self) -> None:
        num = self._num
        qs = list(self._qs)
        ax = 0
        while ax < len(qs):
            q = qs[ax]
            p = factorize(q)[0][0]
            if p == 2:
                sub = np.take(num, list(range(1, num.shape[ax], 2)), axis=ax)
                if not np.any(sub != 0):
                    num = np.take(num, list(range(0, num.shape[ax], 2)), axis=ax)
                    if q // 2 >= 4:
                        qs[ax] = q // 2
                        continue
                    num = np.take(num, 0, axis=ax)
                    qs.pop(ax)
                    continue
            elif q == p:
                sub = np.take(num, list(range(1, num.shape[ax])), axis=ax)
                if not np.any(sub != 0):
                    num = np.take(num, 0, axis=ax)
                    qs.pop(ax)
                    continue
            else:
                keep = list(range(0, num.shape[ax], p))
                drop = [i for i in range(num.shape[ax]) if i % p]
                if not np.any(np.take(num, drop, axis=ax) != 0):
                    num = np.take(num, keep, axis=ax)
                    qs[ax] = q // p
                    continue
            ax += 1
        num = np.asarray(num, dtype=object)
        den = self._den
        if den < 0:
            num, den = -num, -den
        flat = [int(v) for v in num.reshape(-1)]
        g = math.gcd(den, *flat) if flat else den
        if g == 0:
            g = 1
        if g > 1:
            num = np.asarray(num // g, dtype=object)
            den //= g
        if not any(flat):
            den = 1
        self._qs, self._num, self._den = tuple(qs), num, den

    # -- structure ----------------------------------------------------------
    @property
    def order(self) -> int:
        """Least N with the value in Q(zeta_N) (normalized so N is odd or 4 | N)."""
        return math.prod(self._qs) if self._qs else 1

    def _lift(self, qs: tuple[int, ...]) -> np.ndarray:
        """Coefficient array on the tensor basis for the axes ``qs`` (a refinement)."""
        if qs == self._qs:
            return self._num
        shape = tuple(euler_phi(q) for q in qs)
        out = _obj_zeros(shape)
        mine = dict(zip((factorize(q)[0][0] for q in self._qs), self._qs))
        src_axes = []
        index_maps = []
        for q in qs:
            p = factorize(q)[0][0]
            if p in mine:
                src_q = mine[p]
                step = q // src_q
                index_maps.append([i * step for i in range(euler_phi(src_q))])
                src_axes.append(True)
            else:
                index_maps.append([0])
                src_axes.append(False)
        src = self._num
        # add singleton axes for missing primes
        for ax, present in enumerate(src_axes):
            if not present:
                src = np.expand_dims(src, ax)
        out[np.ix_(*index_maps)] = src
        return out

    @staticmethod
    def _common_axes(a: "CyclotomicNumber", b: "CyclotomicNumber") -> tuple[int, ...]:
        parts: dict[int, int] = {}
        for q in a._qs + b._qs:
            p = factorize(q)[0][0]
            parts[p] = max(parts.get(p, 1), q)
        return tuple(parts[p] for p in sorted(parts))

    @staticmethod
    def _coerce(x) -> "CyclotomicNumber":
        if isinstance(x, CyclotomicNumber):
            return x
        if isinstance(x, (int, Fraction)):
            return CyclotomicNumber.from_rational(x)
        return NotImplemented

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        qs = self._common_axes(self, other)
        den = lcm(self._den, other._den)
        num = self._lift(qs) * (den // self._den) + other._lift(qs) * (den // other._den)
        return CyclotomicNumber._raw(qs, num, den)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber._raw(self._qs, -self._num, self._den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return CyclotomicNumber._raw(self._qs, self._num * other.numerator,
                                         self._den * other.denominator)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        if not other._qs:
            return self * Fraction(int(other._num[()]), other._den)
        if not self._qs:
            return other * Fraction(int(self._num[()]), self._den)
        qs = self._common_axes(self, other)
        a = self._lift(qs)
        b = other._lift(qs)
        if np.count_nonzero(a != 0) > np.count_nonzero(b != 0):
            a, b = b, a
        out = _obj_zeros(tuple(2 * s - 1 for s in a.shape))
        bshape = b.shape
        for idx in zip(*np.nonzero(a != 0)):
            sl = tuple(slice(i, i + s) for i, s in zip(idx, bshape))
            out[sl] += a[idx] * b
        for ax, q in enumerate(qs):
            out = _reduce_axis(_fold_axis(out, ax, q), ax, q)
        return CyclotomicNumber._raw(qs, out, self._den * other._den)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = CyclotomicNumber.from_rational(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division of a cyclotomic number by zero")
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def inverse(self) -> "CyclotomicNumber":
        """Multiplicative inverse by solving the multiplication-matrix system."""
        if self.is_zero():
            raise ZeroDivisionError("division by zero in a cyclotomic field")
        if not self._qs:
            return CyclotomicNumber.from_rational(1 / self.to_fraction())
        qs = self._qs
        shape = tuple(euler_phi(q) for q in qs)
        dim = math.prod(shape)
        matrix = [[Fraction(0)] * dim for _ in range(dim)]
        for j in range(dim):
            e = _obj_zeros(shape)
            e[np.unravel_index(j, shape)] = 1
            prod = self * CyclotomicNumber._raw_nonorm(qs, e, 1)
            col = prod._lift(qs).reshape(-1)
            for i in range(dim):
                if col[i]:
                    matrix[i][j] = Fraction(int(col[i]), prod._den)
        rhs = [Fraction(0)] * dim
        rhs[0] = Fraction(1)
        sol = solve_rational(matrix, rhs)
        den = lcm(*(s.denominator for s in sol))
        num = np.array([s.numerator * (den // s.denominator) for s in sol], dtype=object)
        return CyclotomicNumber._raw(qs, num.reshape(shape), den)

    @classmethod
    def _raw_nonorm(cls, qs, num, den):
        obj = object.__new__(cls)
        obj._qs, obj._num, obj._den = qs, num, den
        obj._hash = None
        return obj

    # -- Galois action and embeddings ----------------------------------------
    def galois(self, a: int) -> "CyclotomicNumber":
        """Apply sigma_a: zeta_N -> zeta_N^a (a coprime to the order)."""
        if self._qs and math.gcd(a, self.order) != 1:
            raise ValueError("galois exponent must be a unit modulo the order")
        num = self._num
        for ax, q in enumerate(self._qs):
            full_shape = list(num.shape)
            full_shape[ax] = q
            full = _obj_zeros(full_shape)
            for i in range(num.shape[ax]):
                src = [slice(None)] * num.ndim
                src[ax] = i
                dst = [slice(None)] * num.ndim
                dst[ax] = (i * a) % q
                full[tuple(dst)] += num[tuple(src)]
            num = _reduce_axis(full, ax, q)
        return CyclotomicNumber._raw(self._qs, num, self._den)

    def conjugate(self) -> "CyclotomicNumber":
        return self.galois(-1)

    def __complex__(self) -> complex:
        value = 0j
        for idx in zip(*np.nonzero(self._num != 0)) if self._qs else [()]:
            c = self._num[idx]
            if not c:
                continue
            angle = sum(i / q for i, q in zip(idx, self._qs))
            value += float(c) * cmath.exp(2j * math.pi * angle)
        return value / self._den

    def to_mpc(self):
        """High-precision complex value at the current mpmath precision."""
        import mpmath

        value = mpmath.mpc(0)
        for idx in zip(*np.nonzero(self._num != 0)) if self._qs else [()]:
            c = self._num[idx]
            if not c:
                continue
            angle = sum((mpmath.mpf(i) / q for i, q in zip(idx, self._qs)), mpmath.mpf(0))
            value += mpmath.mpf(int(c)) * mpmath.expjpi(2 * angle)
        return value / self._den

    # -- predicates / conversions ------------------------------------------
    def is_zero(self) -> bool:
        return not np.any(self._num != 0)

    def is_rational(self) -> bool:
        return not self._qs

    def to_fraction(self) -> Fraction:
        if self._qs:
            raise ValueError("cyclotomic number is not rational")
        return Fraction(int(self._num[()]), self._den)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self._qs == other._qs and self._den == other._den
                and bool(np.all(self._num == other._num)))

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._qs, self._den, tuple(int(v) for v in self._num.reshape(-1))))
        return self._hash

    @property
    def coeffs(self) -> list[Fraction]:
        """Coefficients on the power basis zeta_N^i, 0 <= i < phi(N), N = order."""
        n = self.order
        full = [0] * n
        if self._qs:
            for idx in zip(*np.nonzero(self._num != 0)):
                e = sum(i * (n // q) for i, q in zip(idx, self._qs)) % n
                full[e] += int(self._num[idx])
        else:
            full[0] = int(self._num[()])
        phi = cyclotomic_polynomial(n)
        deg = len(phi) - 1
        for i in range(n - 1, deg - 1, -1):
            c = full[i]
            if c:
                for k in range(deg + 1):
                    full[i - deg + k] -= c * phi[k]
        return [Fraction(c, self._den) for c in full[:deg]]

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: Mapping) -> "CyclotomicNumber":
        return cls(int(data["order"]), [Fraction(c) for c in data["coeffs"]])

    def embed_to_order(self, order: int) -> list[Fraction]:
        """Power-basis coefficients of this value viewed in Q(zeta_order)."""
        if order % self.order and canonical_order(order) % self.order:
            raise ValueError("target order is not a multiple of the value's order")
        n = self.order
        src = self.coeffs
        full = [Fraction(0)] * order
        scale = order // n if order % n == 0 else None
        if scale is None:
            # order = 2 * odd multiple of n's odd part; zeta_n = -zeta_order^k
            zeta = CyclotomicNumber.zeta(n)
            target = CyclotomicNumber.zeta(order)
            for k in range(order):
                if target ** k == zeta:
                    scale = k
                    break
        for i, c in enumerate(src):
            full[(i * scale) % order] += c
        phi = cyclotomic_polynomial(order)
        deg = len(phi) - 1
        for i in range(order - 1, deg - 1, -1):
            c = full[i]
            if c:
                for k in range(deg + 1):
                    full[i - deg + k] -= c * phi[k]
        return full[:deg]

    def __repr__(self) -> str:
        if not self._qs:
            return f"CyclotomicNumber({self.to_fraction()})"
        terms = [f"{c}*z^{i}" for i, c in enumerate(self.coeffs) if c]
        return f"CyclotomicNumber(N={self.order}: {' + '.join(terms)})"


def cyclo_arith(a: CyclotomicNumber, b: CyclotomicNumber, op: str) -> CyclotomicNumber:
    """Exact field operation ``op`` in {add, sub, mul, div}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if CyclotomicNumber._coerce(b).is_zero():
            raise ZeroDivisionError("division by zero in cyclo_arith")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def solve_rational(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Solve a nonsingular square rational system by Gaussian elimination."""
    n = len(matrix)
    aug = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular rational system")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        row_c = [v * inv for v in aug[col]]
        aug[col] = row_c
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], row_c)]
    return [aug[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# truncated p-adic scalars
# ---------------------------------------------------------------------------

class ResidueInteger:
    """Element of Z / modulus, used as the truncated p-adic scalar domain."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int | Fraction, modulus: int):
        if isinstance(value, Fraction):
            if math.gcd(value.denominator, modulus) != 1:
                raise ZeroDivisionError(f"{value} is not integral modulo {modulus}")
            value = value.numerator * pow(value.denominator, -1, modulus)
        self.value = int(value) % modulus
        self.modulus = modulus

    def _other(self, other) -> int:
        if isinstance(other, ResidueInteger):
            if other.modulus != self.modulus:
                raise ValueError("mismatched moduli")
            return other.value
        return ResidueInteger(other, self.modulus).value

    def __add__(self, other):
        return ResidueInteger(self.value + self._other(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return ResidueInteger(self.value - self._other(other), self.modulus)

    def __rsub__(self, other):
        return ResidueInteger(self._other(other) - self.value, self.modulus)

    def __mul__(self, other):
        return ResidueInteger(self.value * self._other(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return ResidueInteger(-self.value, self.modulus)

    def inverse(self) -> "ResidueInteger":
        if math.gcd(self.value, self.modulus) != 1:
            raise ZeroDivisionError(f"{self.value} is not a unit modulo {self.modulus}")
        return ResidueInteger(pow(self.value, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        return self * ResidueInteger(self._other(other), self.modulus).inverse()

    def __eq__(self, other):
        try:
            return self.value == self._other(other)
        except (ZeroDivisionError, ValueError):
            return False

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value} (mod {self.modulus})"


# ---------------------------------------------------------------------------
# finite abelian groups and characters
# ---------------------------------------------------------------------------

class FiniteAbelianGroup:
    """Product of cyclic groups Z/d_1 x ... x Z/d_t with exponent-vector elements."""

    def __init__(self, cyclic_orders: Iterable[int]):
        orders = tuple(int(d) for d in cyclic_orders)
        if any(d < 1 for d in orders):
            raise ValueError("cyclic orders must be positive")
        self.cyclic_orders = orders
        self.order = math.prod(orders)
        self._elements = [tuple(e) for e in itertools.product(*(range(d) for d in orders))]
        self._index = {e: i for i, e in enumerate(self._elements)}
        self.exponent = lcm(*orders) if orders else 1

    def __eq__(self, other):
        return isinstance(other, FiniteAbelianGroup) and other.cyclic_orders == self.cyclic_orders

    def __hash__(self):
        return hash(self.cyclic_orders)

    def __repr__(self):
        return f"FiniteAbelianGroup({list(self.cyclic_orders)})"

    def __len__(self):
        return self.order

    def elements(self) -> list[tuple[int, ...]]:
        return list(self._elements)

    def identity(self) -> tuple[int, ...]:
        return tuple(0 for _ in self.cyclic_orders)

    def normalize(self, g: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(x) % d for x, d in zip(g, self.cyclic_orders))

    def index(self, g: Sequence[int]) -> int:
        return self._index[self.normalize(g)]

    def element(self, i: int) -> tuple[int, ...]:
        return self._elements[i]

    def add(self, g, h) -> tuple[int, ...]:
        return tuple((a + b) % d for a, b, d in zip(g, h, self.cyclic_orders))

    def neg(self, g) -> tuple[int, ...]:
        return tuple((-a) % d for a, d in zip(g, self.cyclic_orders))

    def scale(self, g, k: int) -> tuple[int, ...]:
        return tuple((a * k) % d for a, d in zip(g, self.cyclic_orders))

    def element_order(self, g) -> int:
        return lcm(*(d // math.gcd(a, d) for a, d in zip(g, self.cyclic_orders)))

    def subgroup(self, generators: Iterable[Sequence[int]]) -> "Subgroup":
        return Subgroup(self, generators)

    def random_element(self, rng) -> tuple[int, ...]:
        return tuple(int(rng.randrange(d)) for d in self.cyclic_orders)


class Subgroup:
    """Subgroup of a FiniteAbelianGroup stored by generators and its element set."""

    def __init__(self, group: FiniteAbelianGroup, generators: Iterable[Sequence[int]]):
        self.group = group
        self.generators = [group.normalize(g) for g in generators]
        members = {group.identity()}
        frontier = [group.identity()]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.generators:
                    y = group.add(x, g)
                    if y not in members:
                        members.add(y)
                        nxt.append(y)
            frontier = nxt
        self.members = frozenset(members)
        self.order = len(members)

    def __contains__(self, g) -> bool:
        return self.group.normalize(g) in self.members

    def issubset(self, other: "Subgroup") -> bool:
        return self.members <= other.members

    def __repr__(self):
        return f"Subgroup(order={self.order}, generators={self.generators})"


class Character:
    """Character chi(g) = zeta_d^{sum e_i g_i d/d_i} with d the group exponent."""

    def __init__(self, group: FiniteAbelianGroup, exponents: Sequence[int]):
        self.group = group
        self.exponents = tuple(int(e) % d for e, d in zip(exponents, group.cyclic_orders))
        self._weights = tuple(e * (group.exponent // d)
                              for e, d in zip(self.exponents, group.cyclic_orders))

    def exponent_at(self, g: Sequence[int]) -> int:
        """Exponent k with chi(g) = zeta_d^k, d = group exponent."""
        return sum(w * x for w, x in zip(self._weights, g)) % self.group.exponent

    def __call__(self, g: Sequence[int]) -> CyclotomicNumber:
        return CyclotomicNumber.zeta(self.group.exponent, self.exponent_at(g))

    def complex_value(self, g: Sequence[int]) -> complex:
        return cmath.exp(2j * math.pi * self.exponent_at(g) / self.group.exponent)

    def inverse(self) -> "Character":
        return Character(self.group, [-e for e in self.exponents])

    def __mul__(self, other: "Character") -> "Character":
        return Character(self.group, [a + b for a, b in zip(self.exponents, other.exponents)])

    def is_trivial(self) -> bool:
        return not any(self.exponents)

    def is_trivial_on(self, subgroup: Subgroup) -> bool:
        return all(self.exponent_at(g) == 0 for g in subgroup.generators)

    def order(self) -> int:
        return lcm(*(d // math.gcd(e, d) for e, d in zip(self.exponents, self.group.cyclic_orders)))

    def __eq__(self, other):
        return isinstance(other, Character) and self.group == other.group and \
            self.exponents == other.exponents

    def __hash__(self):
        return hash((self.group, self.exponents))

    def __repr__(self):
        return f"Character({list(self.exponents)})"


def characters_of(group: FiniteAbelianGroup) -> list[Character]:
    """All characters in lexicographic exponent order, trivial first."""
    return [Character(group, e) for e in itertools.product(*(range(d) for d in group.cyclic_orders))]


# ---------------------------------------------------------------------------
# group rings
# ---------------------------------------------------------------------------

def _is_zero(c) -> bool:
    if isinstance(c, CyclotomicNumber):
        return c.is_zero()
    return c == 0


class GroupRingElement:
    """Finite sum of scalars times group elements (sparse, immutable)."""

    __slots__ = ("group", "_terms")

    def __init__(self, group: FiniteAbelianGroup, terms: Mapping | None = None):
        self.group = group
        clean = {}
        for g, c in (terms or {}).items():
            key = group.index(g) if not isinstance(g, int) else g
            if key in clean:
                c = clean[key] + c
            clean[key] = c
        self._terms = {k: v for k, v in clean.items() if not _is_zero(v)}

    @classmethod
    def _from_index(cls, group, terms: dict) -> "GroupRingElement":
        obj = object.__new__(cls)
        obj.group = group
        obj._terms = {k: v for k, v in terms.items() if not _is_zero(v)}
        return obj

    # constructors
    @classmethod
    def scalar(cls, group, c) -> "GroupRingElement":
        return cls._from_index(group, {0: c})

    @classmethod
    def one(cls, group) -> "GroupRingElement":
        return cls.scalar(group, Fraction(1))

    @classmethod
    def zero(cls, group) -> "GroupRingElement":
        return cls._from_index(group, {})

    @classmethod
    def basis(cls, group, g, c=Fraction(1)) -> "GroupRingElement":
        return cls._from_index(group, {group.index(g): c})

    # access
    def coeff(self, g) -> Scalar:
        return self._terms.get(self.group.index(g), 0)

    def items(self):
        for k, v in sorted(self._terms.items()):
            yield self.group.element(k), v

    def support(self) -> list[tuple[int, ...]]:
        return [self.group.element(k) for k in sorted(self._terms)]

    # arithmetic
    def _check(self, other):
        if not isinstance(other, GroupRingElement):
            return GroupRingElement.scalar(self.group, other)
        if other.group != self.group:
            raise ValueError("group ring elements over different groups")
        return other

    def __add__(self, other):
        other = self._check(other)
        terms = dict(self._terms)
        for k, v in other._terms.items():
            terms[k] = terms[k] + v if k in terms else v
        return GroupRingElement._from_index(self.group, terms)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElement._from_index(self.group, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, GroupRingElement):
            return GroupRingElement._from_index(
                self.group, {k: v * other for k, v in self._terms.items()})
        other = self._check(other)
        grp = self.group
        elems = grp._elements
        terms: dict[int, object] = {}
        for k1, v1 in self._terms.items():
            g1 = elems[k1]
            for k2, v2 in other._terms.items():
                k = grp._index[grp.add(g1, elems[k2])]
                prod = v1 * v2
                terms[k] = terms[k] + prod if k in terms else prod
        return GroupRingElement._from_index(grp, terms)

    def __rmul__(self, other):
        return GroupRingElement._from_index(
            self.group, {k: other * v for k, v in self._terms.items()})

    def __truediv__(self, scalar):
        return GroupRingElement._from_index(
            self.group, {k: v / scalar for k, v in self._terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers need an inverse; use invert()")
        result = GroupRingElement.one(self.group)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, GroupRingElement):
            other = GroupRingElement.scalar(self.group, other) if not isinstance(
                other, (list, dict, tuple)) else None
            if other is None:
                return NotImplemented
        if other.group != self.group:
            return False
        keys = set(self._terms) | set(other._terms)
        return all(_is_zero(self._terms.get(k, 0) - other._terms.get(k, 0)) for k in keys)

    __hash__ = None

    def is_zero(self) -> bool:
        return not self._terms

    def map_coeffs(self, fn) -> "GroupRingElement":
        return GroupRingElement._from_index(self.group, {k: fn(v) for k, v in self._terms.items()})

    def to_cyclotomic(self) -> "GroupRingElement":
        return self.map_coeffs(lambda c: c if isinstance(c, CyclotomicNumber)
                               else CyclotomicNumber.from_rational(c))

    def __repr__(self):
        parts = [f"({c})*{g}" for g, c in self.items()]
        return "GroupRingElement(" + (" + ".join(parts) if parts else "0") + ")"

    def to_json(self) -> dict:
        def enc(c):
            if isinstance(c, CyclotomicNumber):
                return c.to_json()
            if isinstance(c, ResidueInteger):
                return {"residue": c.value, "modulus": c.modulus}
            return str(Fraction(c))
        return {"group": list(self.group.cyclic_orders),
                "terms": [{"elt": list(g), "coeff": enc(c)} for g, c in self.items()]}

    @classmethod
    def from_json(cls, data: Mapping) -> "GroupRingElement":
        group = FiniteAbelianGroup(data["group"])

        def dec(c):
            if isinstance(c, dict) and "order" in c:
                return CyclotomicNumber.from_json(c)
            if isinstance(c, dict):
                return ResidueInteger(c["residue"], c["modulus"])
            return Fraction(c)
        return cls(group, {tuple(t["elt"]): dec(t["coeff"]) for t in data["terms"]})


def _scalar_inverse_of_int(n: int, like) -> Scalar:
    """1/n in the scalar domain of ``like``; errors when n is not invertible there."""
    if isinstance(like, ResidueInteger):
        return ResidueInteger(n, like.modulus).inverse()
    return Fraction(1, n)


def subgroup_sum(subgroup: Subgroup, scalar=Fraction(1)) -> GroupRingElement:
    """Norm element N_H = sum of the elements of H (times ``scalar``)."""
    group = subgroup.group
    return GroupRingElement._from_index(group, {group.index(h): scalar for h in subgroup.members})


def subgroup_idempotent(subgroup: Subgroup, like=Fraction(1)) -> GroupRingElement:
    """e_H = N_H / #H."""
    inv = _scalar_inverse_of_int(subgroup.order, like)
    return subgroup_sum(subgroup, inv * like if isinstance(like, ResidueInteger) else inv)


def idempotent(chi: Character, scalar_domain: str = "cyclotomic", modulus: int | None = None
               ) -> GroupRingElement:
    """e_chi = (1/#G) sum chi(g) g^{-1}.

    ``scalar_domain`` is ``"cyclotomic"`` or ``"residue"`` (Z/modulus, trivial
    character only unless the group exponent divides the unit group).
    """
    group = chi.group
    if scalar_domain == "residue":
        if modulus is None:
            raise ValueError("residue scalar domain needs a modulus")
        if math.gcd(group.order, modulus) != 1:
            raise ZeroDivisionError(f"1/{group.order} does not exist modulo {modulus}")
        if not chi.is_trivial():
            raise ValueError("residue idempotents are available for the trivial character only")
        inv = ResidueInteger(group.order, modulus).inverse()
        return GroupRingElement._from_index(group, {i: inv for i in range(group.order)})
    inv = Fraction(1, group.order)
    terms = {}
    for g in group.elements():
        val = chi(g) * inv
        terms[group.index(group.neg(g))] = val.to_fraction() if val.is_rational() else val
    return GroupRingElement._from_index(group, terms)


def chi_component(x: GroupRingElement, chi: Character) -> CyclotomicNumber:
    """Image of x under the ring homomorphism g -> chi(g)."""
    d = chi.group.exponent
    rational: dict[int, Fraction] = {}
    total = CyclotomicNumber.from_rational(0)
    for k, c in x._terms.items():
        e = chi.exponent_at(x.group.element(k))
        if isinstance(c, CyclotomicNumber):
            total = total + c * CyclotomicNumber.zeta(d, e)
        elif isinstance(c, ResidueInteger):
            raise TypeError("chi_component of residue scalars needs a p-adic character")
        else:
            rational[e] = rational.get(e, Fraction(0)) + Fraction(c)
    if rational:
        total = total + CyclotomicNumber.from_exponent_counts(d, rational)
    return total


def involution(x: GroupRingElement) -> GroupRingElement:
    """x^#: g -> g^{-1}."""
    grp = x.group
    return GroupRingElement._from_index(
        grp, {grp.index(grp.neg(grp.element(k))): v for k, v in x._terms.items()})


def from_chi_components(group: FiniteAbelianGroup, components: Mapping[Character, object]
                        ) -> GroupRingElement:
    """Reassemble sum_chi c_chi e_chi from its character components."""
    d = group.exponent
    inv = Fraction(1, group.order)
    terms = {}
    comps = [(chi, CyclotomicNumber._coerce(c)) for chi, c in components.items()]
    for g in group.elements():
        acc = CyclotomicNumber.from_rational(0)
        rational: dict[int, Fraction] = {}
        for chi, c in comps:
            e = (-chi.exponent_at(g)) % d
            if c.is_rational():
                rational[e] = rational.get(e, Fraction(0)) + c.to_fraction()
            else:
                acc = acc + c * CyclotomicNumber.zeta(d, e)
        if rational:
            acc = acc + CyclotomicNumber.from_exponent_counts(d, rational)
        acc = acc * inv
        terms[group.index(g)] = acc.to_fraction() if acc.is_rational() else acc
    return GroupRingElement._from_index(group, terms)


def _det_leibniz(matrix: Sequence[Sequence], one):
    n = len(matrix)
    total = None
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = one
        for i in range(n):
            term = term * matrix[i][perm[i]]
        if inversions % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else one


def det_field(matrix: Sequence[Sequence]):
    """Determinant over an exact field (Fractions or CyclotomicNumbers)."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    if n <= 4:
        return _det_leibniz(matrix, Fraction(1))
    rows = [list(r) for r in matrix]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if not _is_zero(rows[r][col])), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det = det * rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, n):
            if not _is_zero(rows[r][col]):
                f = rows[r][col] * inv
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return det


def group_ring_det(matrix: Sequence[Sequence[GroupRingElement]]) -> GroupRingElement:
    """Determinant of a square matrix over R[G].

    Exact field scalars use the semisimple route (per-character determinants
    reassembled through idempotents); other scalars use the Leibniz formula.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("group_ring_det needs a square matrix")
    if n == 0:
        raise ValueError("empty matrix")
    group = matrix[0][0].group
    scalars = [c for row in matrix for x in row for c in x._terms.values()]
    if any(isinstance(c, ResidueInteger) for c in scalars):
        return _det_leibniz(matrix, GroupRingElement.one(group))
    comps = {}
    for chi in characters_of(group):
        m = [[chi_component(x, chi) for x in row] for row in matrix]
        comps[chi] = det_field(m)
    return from_chi_components(group, comps)
