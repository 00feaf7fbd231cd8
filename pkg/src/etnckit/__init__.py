"""Exact and certified-numeric verification of equivariant Tamagawa number identities."""
from .algebra_core import (Character, CyclotomicNumber, FiniteAbelianGroup, GroupRingElement,
                           ResidueInteger, Subgroup, characters_of, chi_component, involution)
from .gauss_sums import (DirichletCharacter, LocalCharacterData, PrimePowerCharacter,
                         dirichlet_gauss_sum, local_gauss_sum)
from .kernels import BACKEND
from .local_ring import TruncatedSeries, UnramifiedRing, make_unramified
from .suites import CHECKS, CheckResult, run_check

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CHECKS", "Character", "CheckResult", "CyclotomicNumber", "DirichletCharacter",
    "FiniteAbelianGroup", "GroupRingElement", "LocalCharacterData", "PrimePowerCharacter",
    "ResidueInteger", "Subgroup", "TruncatedSeries", "UnramifiedRing", "characters_of",
    "chi_component", "dirichlet_gauss_sum", "involution", "local_gauss_sum", "make_unramified",
    "run_check",
]
