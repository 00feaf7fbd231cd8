"""Euler factors, delta factors, conductor and discriminant units, twists and descent identities.

Group elements of a finite-level group ``G x C`` are exponent vectors; the
cyclotomic quotient ``C`` is a designated cyclic axis together with the value
of the cyclotomic character on its generator.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .algebra_core import (Character, CyclotomicNumber, FiniteAbelianGroup, GroupRingElement,
                           ResidueInteger, Subgroup, characters_of, chi_component, factorize,
                           involution, subgroup_idempotent)


# ---------------------------------------------------------------------------
# data
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def least_primitive_root(modulus: int) -> int:
    """Least generator of (Z/modulus)^x for modulus = p^n, p odd."""
    (p, n), = factorize(modulus)
    phi = (p - 1) * p ** (n - 1)
    qs = [q for q, _ in factorize(phi)]
    for g in range(2, modulus):
        if g % p and all(pow(g, phi // q, modulus) != 1 for q in qs):
            return g
    return 1


@dataclass(frozen=True)
class CyclotomicStructure:
    """chi_cyc(g) = generator_value^{g[axis]} mod modulus on the designated axis."""

    axis: int
    generator_value: int
    modulus: int

    def value(self, g: Sequence[int]) -> int:
        return pow(self.generator_value, int(g[self.axis]), self.modulus)

    def element_with_value(self, group: FiniteAbelianGroup, target: int) -> tuple[int, ...]:
        """The element of the cyclotomic axis with chi_cyc = target (mod modulus)."""
        order = group.cyclic_orders[self.axis]
        target %= self.modulus
        x = 1
        for k in range(order):
            if x == target:
                g = [0] * len(group.cyclic_orders)
                g[self.axis] = k
                return tuple(g)
            x = x * self.generator_value % self.modulus
        raise ValueError(f"{target} is not in the image of the cyclotomic character")


def level_group(base: FiniteAbelianGroup, p: int, n: int
                ) -> tuple[FiniteAbelianGroup, CyclotomicStructure]:
    """G x Gal(Q(mu_{p^n})/Q) with its cyclotomic character (base field Q)."""
    P = p ** n
    order = (p - 1) * p ** (n - 1)
    group = FiniteAbelianGroup(list(base.cyclic_orders) + [order])
    return group, CyclotomicStructure(len(base.cyclic_orders), least_primitive_root(P), P)


def embed_base(x_group: FiniteAbelianGroup, g: Sequence[int]) -> tuple[int, ...]:
    """Pad a base-group element with zeros on the cyclotomic axes."""
    return tuple(list(g) + [0] * (len(x_group.cyclic_orders) - len(g)))


@dataclass
class PlaceData:
    """Inertia, decomposition group, Frobenius and norm of a place v in a finite abelian group."""

    group: FiniteAbelianGroup
    inertia: Subgroup
    decomposition: Subgroup
    frobenius: tuple[int, ...]
    norm: int
    filtration: list[Subgroup] = field(default_factory=list)

    def __post_init__(self):
        self.frobenius = self.group.normalize(self.frobenius)
        if not self.inertia.issubset(self.decomposition):
            raise ValueError("inertia must lie in the decomposition group")
        generated = Subgroup(self.group, list(self.inertia.generators) + [self.frobenius])
        if generated.members != self.decomposition.members:
            raise ValueError("Frobenius must generate D_v / I_v")
        if self.filtration:
            if self.filtration[0].members != self.inertia.members:
                raise ValueError("filtration must start at the inertia group")
            for a, b in zip(self.filtration, self.filtration[1:]):
                if not b.issubset(a):
                    raise ValueError("filtration must be decreasing")
            if self.filtration[-1].order != 1:
                raise ValueError("filtration must end at the trivial group")

    @classmethod
    def build(cls, group: FiniteAbelianGroup, inertia_gens, frobenius, norm: int,
              filtration_gens: Iterable | None = None) -> "PlaceData":
        inertia = Subgroup(group, inertia_gens)
        decomp = Subgroup(group, list(inertia_gens) + [frobenius])
        filt = [Subgroup(group, gens) for gens in filtration_gens] if filtration_gens else []
        return cls(group, inertia, decomp, tuple(frobenius), norm, filt)

    @property
    def residue_degree(self) -> int:
        return self.decomposition.order // self.inertia.order

    def to_json(self) -> dict:
        return {"group": list(self.group.cyclic_orders),
                "inertia_gens": [list(g) for g in self.inertia.generators],
                "decomp_gens": [list(g) for g in self.decomposition.generators],
                "frobenius": list(self.frobenius), "norm": self.norm,
                "filtration": [[list(g) for g in s.generators] for s in self.filtration]}

    @classmethod
    def from_json(cls, data: dict) -> "PlaceData":
        group = FiniteAbelianGroup(data["group"])
        filt = [Subgroup(group, gens) for gens in data.get("filtration", [])]
        return cls(group, Subgroup(group, data["inertia_gens"]),
                   Subgroup(group, data["decomp_gens"]), tuple(data["frobenius"]),
                   int(data["norm"]), filt)

    def lift_to_level(self, group: FiniteAbelianGroup, cyc: CyclotomicStructure
                      ) -> "PlaceData":
        """The same place in G x C, with Frobenius (sigma_K, sigma_k) and inertia I x 1."""
        sigma_k = cyc.element_with_value(group, self.norm)
        frob = group.add(embed_base(group, self.frobenius), sigma_k)
        inertia_gens = [embed_base(group, g) for g in self.inertia.generators]
        filt = [[embed_base(group, g) for g in s.generators] for s in self.filtration]
        return PlaceData.build(group, inertia_gens, frob, self.norm, filt or None)


def _basis(group, g, c=Fraction(1)) -> GroupRingElement:
    return GroupRingElement.basis(group, g, c)


# ---------------------------------------------------------------------------
# Euler and delta factors
# ---------------------------------------------------------------------------

def euler_factor(v: PlaceData, j: int) -> GroupRingElement:
    """1 - e_I N(v)^{-j} sigma_v."""
    e_I = subgroup_idempotent(v.inertia)
    return GroupRingElement.one(v.group) - e_I * _basis(v.group, v.frobenius,
                                                         Fraction(v.norm) ** (-j))


def delta_factor(v: PlaceData) -> GroupRingElement:
    """epsilon^0 + e_D / #(D/I)."""
    e_D = subgroup_idempotent(v.decomposition)
    return euler_factor(v, 0) + e_D * Fraction(1, v.residue_degree)


def delta_trivial(group: FiniteAbelianGroup) -> GroupRingElement:
    """The unit with component -1 at the trivial character and +1 elsewhere."""
    e_triv = subgroup_idempotent(Subgroup(group, [list(g) for g in _group_generators(group)]))
    return GroupRingElement.one(group) - e_triv * 2


def _group_generators(group: FiniteAbelianGroup) -> list[tuple[int, ...]]:
    gens = []
    for i in range(len(group.cyclic_orders)):
        g = [0] * len(group.cyclic_orders)
        g[i] = 1
        gens.append(tuple(g))
    return gens


def euler_factor_expected(v: PlaceData, chi: Character, j: int) -> CyclotomicNumber:
    """1 - chi(v) N(v)^{-j} with chi(v) = 0 for chi ramified at v."""
    one = CyclotomicNumber.from_rational(1)
    if not chi.is_trivial_on(v.inertia):
        return one
    return one - chi(v.frobenius) * Fraction(v.norm) ** (-j)


# ---------------------------------------------------------------------------
# fractions of group-ring elements
# ---------------------------------------------------------------------------

@dataclass
class GroupRingFraction:
    """numerator / denominator with the characters where the denominator vanishes."""

    numerator: GroupRingElement
    denominator: GroupRingElement
    degenerate: list[Character]

    def component(self, chi: Character) -> CyclotomicNumber | None:
        if chi in self.degenerate:
            return None
        return chi_component(self.numerator, chi) / chi_component(self.denominator, chi)


def h_element(v: PlaceData, j: int) -> GroupRingFraction:
    """(1 - e_I N^{1-j} sigma_v) / (1 - e_I N^{-j} sigma_v)."""
    num = euler_factor(v, j - 1)
    den = euler_factor(v, j)
    degenerate = [chi for chi in characters_of(v.group) if chi_component(den, chi).is_zero()]
    return GroupRingFraction(num, den, degenerate)


def h_element_interpolation_check(v: PlaceData, j: int) -> dict:
    """-N^{j-1} sigma_v^{-1} h^j against eps^{1-j,#} / eps^j on unramified components."""
    h = h_element(v, j)
    g = v.group
    factor = _basis(g, g.neg(v.frobenius), -Fraction(v.norm) ** (j - 1))
    eps_sharp = involution(euler_factor(v, 1 - j))
    eps = euler_factor(v, j)
    failures = []
    for chi in characters_of(g):
        if not chi.is_trivial_on(v.inertia) or chi in h.degenerate:
            continue
        lhs = chi_component(factor, chi) * h.component(chi)
        rhs = chi_component(eps_sharp, chi) / chi_component(eps, chi)
        if lhs != rhs:
            failures.append(chi)
    return {"equal": not failures, "failures": failures}


# ---------------------------------------------------------------------------
# twists
# ---------------------------------------------------------------------------

def _to_residue(c, modulus: int) -> ResidueInteger:
    if isinstance(c, ResidueInteger):
        if c.modulus != modulus:
            raise ValueError("mismatched residue moduli")
        return c
    if isinstance(c, CyclotomicNumber):
        c = c.to_fraction()
    return ResidueInteger(Fraction(c), modulus)


def to_residues(x: GroupRingElement, modulus: int) -> GroupRingElement:
    """Reduce p-integral rational coefficients modulo p^n."""
    return x.map_coeffs(lambda c: _to_residue(c, modulus))


def twist_op(x: GroupRingElement, m: int, cyc: CyclotomicStructure | None) -> GroupRingElement:
    """tw_m: g -> chi_cyc(g)^m g, with coefficients in Z/p^n."""
    if cyc is None:
        raise ValueError("twisting needs a cyclotomic structure")
    grp = x.group
    terms = {}
    for g, c in x.items():
        val = pow(cyc.value(g), m, cyc.modulus)
        terms[g] = _to_residue(c, cyc.modulus) * val
    return GroupRingElement(grp, terms)


def residue_equal(a: GroupRingElement, b: GroupRingElement, modulus: int) -> bool:
    return to_residues(a, modulus) == to_residues(b, modulus)


def h_twist_check(v: PlaceData, j: int, j_prime: int, cyc: CyclotomicStructure) -> bool:
    """tw_{j-j'}(h^j) = h^{j'} as fractions over Z/p^n (cross-multiplied)."""
    h = h_element(v, j)
    h2 = h_element(v, j_prime)
    m = j - j_prime
    num = twist_op(h.numerator, m, cyc)
    den = twist_op(h.denominator, m, cyc)
    P = cyc.modulus
    return num * to_residues(h2.denominator, P) == to_residues(h2.numerator, P) * den


def frobenius_twist_check(v: PlaceData, j: int, j_prime: int, cyc: CyclotomicStructure) -> bool:
    """tw_{j-j'}(N^{j-1} sigma_v^{-1}) = N^{j'-1} sigma_v^{-1} when chi_cyc(sigma_v) = N(v)."""
    g = v.group
    lhs = twist_op(_basis(g, g.neg(v.frobenius), Fraction(v.norm) ** (j - 1)), j - j_prime, cyc)
    rhs = _basis(g, g.neg(v.frobenius), Fraction(v.norm) ** (j_prime - 1))
    return lhs == to_residues(rhs, cyc.modulus)


# ---------------------------------------------------------------------------
# conductor and discriminant units
# ---------------------------------------------------------------------------

def _filtration_idempotents(v: PlaceData, p: int) -> list[GroupRingElement]:
    if not v.filtration:
        raise ValueError("conductor units need a ramification filtration")
    for s in v.filtration:
        if s.order % p == 0:
            raise ZeroDivisionError(f"p = {p} divides #I_v^i = {s.order}")
    return [subgroup_idempotent(s) for s in v.filtration]


def conductor_unit(v: PlaceData, j: int, sigma_k: Sequence[int], p: int
                   ) -> tuple[GroupRingElement, GroupRingElement]:
    """(f_j, f_j^{-1}) for v away from p.

    ``sigma_k`` is the Frobenius of v in the cyclotomic quotient;
    f_j = N^j s^{-1} e_0 + sum_{i>=1} (N^j s^{-1})^i (e_i - e_{i-1}).
    """
    es = _filtration_idempotents(v, p)
    g = v.group
    s_inv = g.neg(tuple(sigma_k))

    def build(scale: Fraction, elt):
        total = es[0] * _basis(g, elt, scale)
        for i in range(1, len(es)):
            total = total + (es[i] - es[i - 1]) * _basis(g, g.scale(elt, i), scale ** i)
        return total

    unit = build(Fraction(v.norm) ** j, s_inv)
    inverse = build(Fraction(v.norm) ** (-j), tuple(sigma_k))
    return unit, inverse


def conductor_exponent_of(v: PlaceData, chi: Character) -> int:
    """Least i with chi trivial on I_v^i."""
    for i, s in enumerate(v.filtration):
        if chi.is_trivial_on(s):
            return i
    return len(v.filtration)


def conductor_unit_check(v: PlaceData, j: int, sigma_k: Sequence[int], p: int) -> dict:
    """Product with the inverse is 1, coefficients are p-integral, components interpolate."""
    unit, inverse = conductor_unit(v, j, sigma_k, p)
    g = v.group
    product_ok = unit * inverse == GroupRingElement.one(g)
    integral = all(Fraction(c).denominator % p != 0
                   for x in (unit, inverse) for _, c in x.items())
    failures = []
    for chi in characters_of(g):
        i = conductor_exponent_of(v, chi)
        s_val = chi(tuple(sigma_k))
        if i == 0:
            expected = s_val.inverse() * Fraction(v.norm) ** j
        else:
            expected = (s_val.inverse() * Fraction(v.norm) ** j) ** i
        if chi_component(unit, chi) != expected:
            failures.append(chi)
    return {"product_is_one": product_ok, "p_integral": integral,
            "interpolation": not failures, "equal": product_ok and integral and not failures}


def discriminant_unit(group: FiniteAbelianGroup, abs_discriminant: int,
                      reciprocity_elements: Sequence[Sequence[int]], j: int, p: int
                      ) -> GroupRingElement:
    """|D_k|^j prod_v rec(D_{k_v})^{-1} from supplied reciprocity images."""
    if abs_discriminant % p == 0:
        raise ValueError("p divides the discriminant")
    elt = group.identity()
    for r in reciprocity_elements:
        elt = group.add(elt, group.neg(tuple(r)))
    return _basis(group, elt, Fraction(abs_discriminant) ** j)


def discriminant_twist_check(group, abs_discriminant, reciprocity_elements, j, j_prime, p,
                             cyc: CyclotomicStructure) -> bool:
    """tw_{j-j'}(D_{j-1}) = D_{j'-1} on the supplied data."""
    lhs = twist_op(discriminant_unit(group, abs_discriminant, reciprocity_elements, j - 1, p),
                   j - j_prime, cyc)
    rhs = discriminant_unit(group, abs_discriminant, reciprocity_elements, j_prime - 1, p)
    return lhs == to_residues(rhs, cyc.modulus)


# ---------------------------------------------------------------------------
# descent
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoordinateQuotient:
    """G / H with H = prod c_i Z/d_i, so G / H = prod Z/c_i."""

    group: FiniteAbelianGroup
    quotient_orders: tuple[int, ...]

    def __post_init__(self):
        for c, d in zip(self.quotient_orders, self.group.cyclic_orders):
            if d % c:
                raise ValueError("quotient orders must divide the cyclic orders")

    @property
    def quotient(self) -> FiniteAbelianGroup:
        return FiniteAbelianGroup(self.quotient_orders)

    def project(self, g: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(x) % c for x, c in zip(g, self.quotient_orders))

    def restrict(self, x: GroupRingElement) -> GroupRingElement:
        q = self.quotient
        terms: dict = {}
        for g, c in x.items():
            k = self.project(g)
            terms[k] = terms[k] + c if k in terms else c
        return GroupRingElement(q, terms)

    def place(self, v: PlaceData) -> PlaceData:
        q = self.quotient
        inertia = [self.project(g) for g in v.inertia.generators]
        return PlaceData.build(q, inertia, self.project(v.frobenius), v.norm)


def descent_factor(v: PlaceData, quotient: CoordinateQuotient, j: int) -> GroupRingElement:
    """d_v^j(K/K'): (1 - e_{D'}) + f e_{D'} for j = 1, 1 for j >= 2."""
    q = quotient.quotient
    if j >= 2:
        return GroupRingElement.one(q)
    if j != 1:
        raise ValueError("descent factors are defined for j >= 1")
    v2 = quotient.place(v)
    f = v.residue_degree // v2.residue_degree
    e_D = subgroup_idempotent(v2.decomposition)
    return GroupRingElement.one(q) - e_D + e_D * f


@dataclass
class IdentityReport:
    results: dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.results.values())


def descent_identity_suite(v: PlaceData, j: int, p: int, n: int,
                           quotient: CoordinateQuotient | None = None) -> IdentityReport:
    """Check every descent and Euler identity for v (in G) at level n over G x C."""
    results: dict[str, bool] = {}
    g = v.group
    for chi in characters_of(g):
        if chi_component(euler_factor(v, j), chi) != euler_factor_expected(v, chi, j):
            results["euler_interpolation"] = False
            break
    else:
        results["euler_interpolation"] = True

    big, cyc = level_group(g, p, n)
    vn = v.lift_to_level(big, cyc)
    e_I = subgroup_idempotent(vn.inertia)
    one = GroupRingElement.one(big)

    eps_sharp = involution(euler_factor(vn, 1 - j))
    results["eps_sharp_identity"] = (eps_sharp - e_I) * euler_factor(vn, j - 1) == eps_sharp

    eps0 = euler_factor(vn, 0)
    e_D = subgroup_idempotent(vn.decomposition)
    lhs = (involution(eps0) - e_I) * (eps0 - e_D * Fraction(1, vn.residue_degree))
    results["delta_identity"] = lhs == involution(delta_factor(vn))

    # base-level epsilon^0(K/k) embedded in G x C against the level-n factor
    base_frob = embed_base(big, v.frobenius)
    eps0_base_sharp = one - e_I * _basis(big, big.neg(base_frob))
    sigma_k = cyc.element_with_value(big, v.norm)
    corr = one - e_I + e_I * _basis(big, big.neg(sigma_k), Fraction(v.norm) ** (j - 1))
    results["cyclotomic_descent"] = (eps0_base_sharp - e_I) * corr == eps_sharp - e_I

    if vn.inertia.order % p:
        # twists act on Z/p^n coefficients, which need 1/#I
        results["h_twist"] = h_twist_check(vn, j, j + 1, cyc)
    results["frobenius_twist"] = frobenius_twist_check(vn, j, j - 1, cyc)

    if quotient is not None:
        v2 = quotient.place(v)
        lhs = involution(delta_factor(v2))
        rhs = descent_factor(v, quotient, 1) * quotient.restrict(involution(delta_factor(v)))
        results["delta_descent"] = lhs == rhs
        results["descent_factor_trivial"] = descent_factor(v, quotient, max(j, 2)) == \
            GroupRingElement.one(quotient.quotient)
    return IdentityReport(results)


# ---------------------------------------------------------------------------
# random instances
# ---------------------------------------------------------------------------

def random_group(rng: random.Random, max_order: int = 32) -> FiniteAbelianGroup:
    while True:
        k = rng.randint(1, 3)
        orders = [rng.randint(1, 8) for _ in range(k)]
        if math.prod(orders) <= max_order:
            return FiniteAbelianGroup(orders)


def random_place(rng: random.Random, group: FiniteAbelianGroup, avoid_prime: int,
                 with_filtration: bool = False) -> PlaceData:
    """Random inertia and Frobenius with N(v) a prime power coprime to avoid_prime."""
    gens = [group.random_element(rng) for _ in range(rng.randint(0, 2))]
    frob = group.random_element(rng)
    primes = [q for q in (2, 3, 5, 7, 11, 13) if q != avoid_prime]
    norm = rng.choice(primes) ** rng.randint(1, 2)
    filt = None
    if with_filtration:
        filt = [gens]
        cur = gens
        while Subgroup(group, cur).order > 1:
            cur = [group.scale(x, rng.randint(1, 4)) for x in cur]
            if rng.random() < 0.4:
                cur = [group.identity()]
            filt.append(cur)
        if len(filt) == 1:
            filt.append([group.identity()])
    return PlaceData.build(group, gens, frob, norm, filt)


def random_quotient(rng: random.Random, group: FiniteAbelianGroup) -> CoordinateQuotient:
    orders = []
    for d in group.cyclic_orders:
        divs = [c for c in range(1, d + 1) if d % c == 0]
        orders.append(rng.choice(divs))
    return CoordinateQuotient(group, tuple(orders))
