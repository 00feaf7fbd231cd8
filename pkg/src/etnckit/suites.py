"""Named verification checks shared by the command line driver and the acceptance tests.

Every check takes ``(params, seed, budget)`` and returns a ``CheckResult`` whose
``details`` are JSON-serialisable and free of timing data, so reports are
reproducible byte for byte.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import coleman, det_calculus, euler_units, gauss_sums, lfunctions
from .algebra_core import CyclotomicNumber, factorize, is_prime
from .gauss_sums import BudgetExceeded

DEFAULT_BUDGET = 10 ** 7


@dataclass
class CheckResult:
    check: str
    seed: int
    status: str  # "pass", "fail" or "skipped: budget"
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {"check": self.check, "seed": self.seed, "status": self.status,
                "details": self.details}


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _guard(terms: int, budget: int) -> None:
    """Each individual computation in a job must fit the term budget."""
    if terms > budget:
        raise BudgetExceeded(f"{terms} terms exceed the budget of {budget}")


# ---------------------------------------------------------------------------
# Gauss sums
# ---------------------------------------------------------------------------

def check_gauss(params: dict, seed: int, budget: int) -> dict:
    moduli = params.get("moduli", [5, 7, 9, 25, 27, 49])
    degree = int(params.get("degree", 1))
    rows = []
    for q in moduli:
        (p, n), = factorize(int(q))
        chars = gauss_sums.characters_mod_prime_power(p, n)
        _guard(2 * len(chars) * p ** (n * degree), budget)
        failures = 0
        for theta in chars:
            data = gauss_sums.LocalCharacterData(theta, degree=degree)
            failures += not gauss_sums.gauss_norm_law_check(data)["equal"]
        rows.append({"modulus": q, "degree": degree, "characters": len(chars), "failures": failures})
    return {"ok": all(r["failures"] == 0 for r in rows), "rows": rows}


def check_dh_classical(params: dict, seed: int, budget: int) -> dict:
    primes = params.get("primes", [3, 5, 7, 11, 13])
    degrees = params.get("degrees", [2, 3])
    max_q = int(params.get("max_field_size", 2200))
    rows = []
    for p in primes:
        for s in degrees:
            if p ** s > max_q:
                continue
            _guard((p - 1) * p ** s, budget)
            failures = [k for k in range(p - 1)
                        if not gauss_sums.davenport_hasse_classical(p, s, k)["equal"]]
            rows.append({"p": p, "s": s, "characters": p - 1, "failures": failures})
    return {"ok": all(not r["failures"] for r in rows), "rows": rows}


DH_GRID = [(p, r, n) for p in (3, 5) for r in (1, 2, 3) for n in (0, 1, 2)] + [(7, 2, 2)]


def check_dh_generalized(params: dict, seed: int, budget: int) -> dict:
    if "p" in params:
        grid = [(int(params["p"]), int(params.get("r", 1)), int(params.get("n", 1)))]
    else:
        grid = [tuple(x) for x in params.get("grid", DH_GRID)]
    rows = []
    for p, r, n in grid:
        # characters of exact conductor exponent n on (Z/p^max(n,1))^x
        level = max(n, 1)
        chars = [c for c in gauss_sums.characters_mod_prime_power(p, level)
                 if c.conductor_exponent == n]
        terms = p ** (max(n - 1, 0) * r) * (p ** r - 1) if n else 1
        _guard(terms * len(chars), budget)
        failures = [f"{c.a},{c.b}" for c in chars
                    if not gauss_sums.davenport_hasse_generalized_check(p, r, c)["equal"]]
        rows.append({"p": p, "r": r, "n_chi": n, "characters": len(chars), "failures": failures})
    return {"ok": all(not r["failures"] for r in rows), "rows": rows}


# ---------------------------------------------------------------------------
# Coleman maps and interpolation
# ---------------------------------------------------------------------------

XI_GRID = [(p, r, n, j) for p in (3, 5) for r in (1, 2) for n in (1, 2, 3) for j in (1, 2, 3)]


def check_xi_interp(params: dict, seed: int, budget: int) -> dict:
    samples = int(params.get("samples", 200))
    N = int(params.get("N", 12))
    M = int(params.get("M", 64))
    if "p" in params:
        grid = [(int(params["p"]), int(params.get("r", 1)), int(params.get("n", 1)),
                 int(params.get("j", 1)))]
    else:
        grid = [tuple(x) for x in params.get("grid", XI_GRID)]
    rows = []
    for idx, (p, r, n, j) in enumerate(grid):
        if j * n >= N:
            rows.append({"p": p, "r": r, "n": n, "j": j, "status": "vacuous"})
            continue
        _guard(samples * M * p ** n * r, budget)
        out = coleman.xi_interpolation_grid(p, r, n, j, samples, seed + idx, N, M)
        rows.append({k: out[k] for k in ("p", "r", "n", "j", "samples", "characters",
                                         "certified_digits", "target_digits", "equal")})
    hand = xi_hand_instance()
    ok = all(r.get("equal", True) for r in rows) and hand["equal"]
    return {"ok": ok, "rows": rows, "hand_instance": hand}


def xi_hand_instance() -> dict:
    """p = 3, f = 1 + T, n = 1, j = 2, trivial character: both routes give -9/8."""
    trivial = gauss_sums.PrimePowerCharacter(3, 1, 0, 0)
    brute = coleman.chi_component_exact(coleman.xi_exact(3, {1: Fraction(1)}, 1, 2), 3, 1, trivial)
    closed = coleman.xi_chi_closed_exact(3, {1: Fraction(1)}, 1, 2, trivial)
    expected = CyclotomicNumber.from_rational(Fraction(-9, 8))
    return {"brute": str(brute.to_fraction()), "closed": str(closed.to_fraction()),
            "equal": brute == closed == expected}


def check_coleman_interp(params: dict, seed: int, budget: int) -> dict:
    primes = params.get("primes", [3, 5])
    N = int(params.get("N", 12))
    rows = []
    for p in primes:
        for c in params.get("c_values", None) or [1 + p, 1 + p + p * p, (1 + p) ** 2]:
            lhs, rhs = coleman.coleman_example_value(p, c, N)
            rows.append({"p": p, "c": c, "digits": N - 2, "lhs": lhs, "rhs": rhs,
                         "equal": lhs == rhs})
    return {"ok": all(r["equal"] for r in rows), "rows": rows}


def check_pairing(params: dict, seed: int, budget: int) -> dict:
    setup = coleman.PairingSetup(int(params.get("p", 3)), int(params.get("r", 2)),
                                 int(params.get("n", 1)), int(params.get("N", 6)))
    count = int(params.get("count", 100))
    rng = random.Random(seed)
    failures = {"left_linear": 0, "right_sesquilinear": 0, "iota_involution": 0}
    for _ in range(count):
        out = coleman.pairing_law_check(setup, rng)
        for key in failures:
            failures[key] += not out[key]
    return {"ok": not any(failures.values()), "count": count, "failures": failures}


# ---------------------------------------------------------------------------
# Euler factors and conductor units
# ---------------------------------------------------------------------------

def _prime_coprime_to(order: int, avoid: tuple[int, ...] = ()) -> int:
    p = 3
    while order % p == 0 or p in avoid or not is_prime(p):
        p += 2
    return p


def check_euler_identities(params: dict, seed: int, budget: int) -> dict:
    count = int(params.get("count", 500))
    max_order = int(params.get("max_order", 32))
    rng = random.Random(seed)
    failures: dict[str, int] = {}
    checked = 0
    for _ in range(count):
        group = euler_units.random_group(rng, max_order)
        p = rng.choice((3, 5))
        v = euler_units.random_place(rng, group, p)
        j = rng.randint(-2, 3)
        n = rng.randint(1, 2) if len(group) * p < 160 else 1
        quotient = euler_units.random_quotient(rng, group)
        report = euler_units.descent_identity_suite(v, j, p, n, quotient)
        checked += 1
        for name, ok in report.results.items():
            if not ok:
                failures[name] = failures.get(name, 0) + 1
    return {"ok": not failures, "instances": checked, "failures": failures}


def check_conductor_unit(params: dict, seed: int, budget: int) -> dict:
    count = int(params.get("count", 100))
    max_order = int(params.get("max_order", 32))
    js = params.get("js", [0, 1, 2, 3, 4])
    rng = random.Random(seed)
    failures = 0
    for _ in range(count):
        group = euler_units.random_group(rng, max_order)
        p = _prime_coprime_to(len(group))
        v = euler_units.random_place(rng, group, p, with_filtration=True)
        sigma_k = group.random_element(rng)
        for j in js:
            failures += not euler_units.conductor_unit_check(v, j, sigma_k, p)["equal"]
    return {"ok": failures == 0, "instances": count, "twists": list(js), "failures": failures}


# ---------------------------------------------------------------------------
# determinant signs
# ---------------------------------------------------------------------------

def check_det_signs(params: dict, seed: int, budget: int) -> dict:
    count = int(params.get("count", 200))
    kwargs = {k: int(params[k]) for k in ("p", "precision") if k in params}
    bock = det_calculus.bockstein_suite(count, seed=seed, **kwargs)
    d02 = det_calculus.det02_suite(count, seed=seed, **kwargs)
    signs: dict[str, int] = {}
    for rep in d02:
        key = f"s={rep.s},sign={rep.sign_measured:+d}"
        signs[key] = signs.get(key, 0) + 1
    bock_fail = [r.instance for r in bock if not r.passed]
    d02_fail = [r.instance for r in d02 if not r.passed]
    return {"ok": not bock_fail and not d02_fail, "instances": count,
            "bockstein_failures": bock_fail, "det02_failures": d02_fail,
            "det02_sign_histogram": dict(sorted(signs.items()))}


# ---------------------------------------------------------------------------
# L-functions and periods
# ---------------------------------------------------------------------------

def check_functional_eq(params: dict, seed: int, budget: int) -> dict:
    max_f = int(params.get("max_conductor", 40))
    js = [int(j) for j in params.get("js", [1, 2, 3, 4])]
    reports = lfunctions.functional_equation_grid(max_f, js)
    worst = max((r.rel_err for r in reports), default=0.0)
    failing = [r.to_json() for r in reports if not r.passed]
    tail = max((r.tail_bound for r in reports), default=0.0)
    return {"ok": not failing, "cases": len(reports), "max_rel_err": worst,
            "max_tail_bound": tail, "failures": failing,
            "sample": [r.to_json() for r in reports[:4]]}


def check_period_b(params: dict, seed: int, budget: int) -> dict:
    ms = [int(m) for m in params.get("gram_moduli", [5, 7, 9])]
    primes = [int(p) for p in params.get("primes", [3, 5])]
    n_max = int(params.get("n_max", 3))
    gram = [lfunctions.gram_identity_check(lfunctions.normal_basis_generator(m), m) for m in ms]
    b_rows = []
    for p in primes:
        out = lfunctions.b_an_suite(p, n_max)
        b_rows.append({"p": p, "n_max": n_max, "characters": len(out),
                       "failures": [d["chi"] for d in out if not d["equal"]]})
    ok = all(g["equal"] and g["normal_basis"] for g in gram) and all(not r["failures"] for r in b_rows)
    return {"ok": ok, "gram": gram, "b_an": b_rows}


CHECKS: dict[str, Callable[[dict, int, int], dict]] = {
    "gauss": check_gauss,
    "dh_classical": check_dh_classical,
    "dh_generalized": check_dh_generalized,
    "xi_interp": check_xi_interp,
    "coleman_interp": check_coleman_interp,
    "euler_identities": check_euler_identities,
    "conductor_unit": check_conductor_unit,
    "det_signs": check_det_signs,
    "functional_eq": check_functional_eq,
    "period_b": check_period_b,
    "pairing": check_pairing,
}


def run_check(name: str, params: dict | None = None, seed: int = 0,
              budget: int = DEFAULT_BUDGET) -> CheckResult:
    if name not in CHECKS:
        raise KeyError(f"unknown check {name!r}")
    try:
        details = CHECKS[name](dict(params or {}), seed, budget)
    except BudgetExceeded as exc:
        return CheckResult(name, seed, "skipped: budget", {"reason": str(exc)})
    ok = details.pop("ok")
    return CheckResult(name, seed, _status(ok), details)
