"""Invariant suites behind `demo` and `selftest`. Each suite records named checks and human-readable lines."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sympy.ntheory import primitive_root

from IwasawaLambda.cohomology import (
    CharacterChi,
    Cochain1,
    FiniteGroup,
    FpModule,
    bockstein_direct,
    bockstein_formula,
    d1,
    equivariance_check,
    idempotent_identities,
    min_nonvanishing_psi,
    omega_module,
)
from IwasawaLambda.cohomology.bockstein import assemble
from IwasawaLambda.config import settings
from IwasawaLambda.cyclolayer import (
    K1Element,
    build_period_field,
    eta_element,
    group_ring_identity,
    lemma_a_identities,
    relative_norm,
)
from IwasawaLambda.logger import log
from IwasawaLambda.massey import (
    all_proper_systems,
    block_compose,
    build_Mn,
    extend_proper,
    lift_search,
    massey_cocycle_check,
    massey_value,
    proper_psis,
    proper_system,
    random_proper_system,
)
from IwasawaLambda.quadfield import QuadElement

TOPICS = ("bockstein", "massey", "mn", "equivariance", "periods")


@dataclass
class SuiteResult:
    topic: str
    checks: list[tuple[str, bool]] = field(default_factory=list)
    lines: list[str] = field(default_factory=list)

    def check(self, label: str, ok: bool) -> bool:
        ok = bool(ok)
        self.checks.append((label, ok))
        if not ok:
            log.error("Invariant failed", topic=self.topic, check=label)
        return ok

    def say(self, line: str) -> None:
        self.lines.append(line)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.checks)

    @property
    def failures(self) -> list[str]:
        return [label for label, ok in self.checks if not ok]

    def render(self) -> str:
        status = "ok" if self.ok else f"FAILED ({len(self.failures)} checks)"
        body = [f"[{self.topic}] {status}"] + [f"  {line}" for line in self.lines]
        body += [f"  failed: {label}" for label in self.failures]
        return "\n".join(body)


@dataclass(frozen=True)
class Scenario:
    name: str
    base: FpModule
    chi: CharacterChi


def standard_setups(p: int) -> list[Scenario]:
    """Z/p² with trivial F_p, (Z/p)² with χ the first projection, and Z/2 × Z/p² with Z/2 acting by −1."""
    cyclic = FiniteGroup.cyclic(p * p)
    square = FiniteGroup.direct_product(FiniteGroup.cyclic(p), FiniteGroup.cyclic(p))
    twisted = FiniteGroup.direct_product(FiniteGroup.cyclic(2), FiniteGroup.cyclic(p * p))
    return [
        Scenario(cyclic.name, FpModule.trivial(cyclic, p), CharacterChi.from_generator_values(cyclic, p, 2, [1])),
        Scenario(square.name, FpModule.trivial(square, p),
                 CharacterChi.from_generator_values(square, p, 1, [1, 0])),
        Scenario(twisted.name, FpModule.from_generator_matrices(twisted, p, [[[-1]], [[1]]], name="F_p(−1)"),
                 CharacterChi.from_generator_values(twisted, p, 2, [0, 1])),
    ]


def bockstein_suite(p: int = 3, samples: int = 100, seed: int | None = None) -> SuiteResult:
    """Direct Bockstein, cup-product formula and Massey value of the proper system agree as classes."""
    result = SuiteResult("bockstein")
    rng = np.random.default_rng(settings.random_seed if seed is None else seed)
    setups = standard_setups(p)
    agree = 0
    for k in range(samples):
        setup = setups[k % len(setups)]
        n = int(rng.integers(1, min(3, setup.chi.modulus - 1) + 1))
        ds = random_proper_system(setup.base, setup.chi, n, rng)
        psis = proper_psis(ds)
        omega = omega_module(setup.base, setup.chi, n)
        direct = bockstein_direct(assemble(psis, omega), omega)
        formula = bockstein_formula(psis, setup.chi, setup.base)
        massey = massey_value(ds).cohomology_class
        agree += direct.equals(formula) and formula.equals(massey)
    result.say(f"direct vs formula vs Massey agreement: {agree}/{samples}")
    result.check("bridge identity on random cocycles", agree == samples)
    for setup in setups:
        n_max = min(3, setup.chi.modulus - 1)
        reduced = min_nonvanishing_psi(setup.base, setup.chi, n_max)
        exhaustive = min_nonvanishing_psi(setup.base, setup.chi, n_max, exhaustive=True)
        result.say(f"{setup.name}: least nonvanishing Ψ up to {n_max}: {reduced}")
        result.check(f"reduce and exhaustive scans agree on {setup.name}", reduced == exhaustive)
    return result


def massey_suite(p: int = 3, pairs: int = 50, seed: int | None = None) -> SuiteResult:
    result = SuiteResult("massey")
    rng = np.random.default_rng(settings.random_seed if seed is None else seed)
    cyclic, square, _ = standard_setups(p)

    total = agree = 0
    for ds in all_proper_systems(cyclic.base, cyclic.chi, 2):
        outcome = massey_value(ds)
        lifted = lift_search(ds)
        total += 1
        agree += outcome.vanishes == (lifted is not None)
        if outcome.vanishes:
            result.check("witness bounds the negated value", d1(outcome.witness) == outcome.value.scale(-1))
        result.check("Massey value is a cocycle", massey_cocycle_check(ds))
    result.say(f"vanishing ⟺ lift on {cyclic.name}, n = 2: {agree}/{total}")
    result.check("vanishing agrees with lift existence", agree == total)

    order = square.base.group.order
    psi0 = Cochain1.from_scalars(square.base, np.arange(order) % p)
    two_fold = proper_system(square.chi, [psi0])
    vanishes = massey_value(two_fold).vanishes
    result.say(f"χ ∪ ψ₀ on {square.name} with independent projections vanishes: {vanishes}")
    result.check("independent cup product is nonzero", not vanishes and lift_search(two_fold) is None)

    composed = 0
    for _ in range(pairs):
        ds1 = random_proper_system(cyclic.base, cyclic.chi, 2, rng)
        ds2 = random_proper_system(cyclic.base, cyclic.chi, 2, rng)
        merged = block_compose(ds1, ds2, ds1.size - 1)
        expected = [a + b for a, b in zip(proper_psis(ds1), proper_psis(ds2), strict=True)]
        composed += all(x == y for x, y in zip(proper_psis(merged), expected, strict=True))
    result.say(f"block compositions matching ψ + ψ′: {composed}/{pairs}")
    result.check("block composition adds the last columns", composed == pairs)

    short = random_proper_system(cyclic.base, cyclic.chi, 1, rng)
    extended = extend_proper(short, 1)
    result.check("extension puts zeros below ψ₀", proper_psis(extended)[0].is_zero()
                 and proper_psis(extended)[1] == proper_psis(short)[0])
    return result


def mn_suite(p: int = 3, n: int = 2) -> SuiteResult:
    result = SuiteResult("mn")
    mn = build_Mn(p, n, max_order=max(settings.max_group_order, p ** (n + 2)))
    result.say(f"M_{n} over F_{p}: order {mn.group.order}")
    for name, ok in mn.relations().items():
        result.say(f"{name:<22}{'holds' if ok else 'FAILS'}")
        result.check(name, ok)
    result.check("order is p^(n+2)", mn.group.order == p ** (n + 2))
    result.check("t_n is central", mn.center_contains_top())
    return result


def equivariance_suite(p: int = 3, n_max: int = 2) -> SuiteResult:
    """Z/(p−1) × Z/p² with Δ = Z/(p−1) acting on F_p through a primitive root."""
    result = SuiteResult("equivariance")
    delta = FiniteGroup.cyclic(p - 1)
    big = FiniteGroup.direct_product(delta, FiniteGroup.cyclic(p * p))
    root = int(primitive_root(p))
    module = FpModule.from_generator_matrices(big, p, [[[root]], [[1]]], name="F_p(ω)")
    g_elems = list(range(p * p))
    for n in range(1, n_max + 1):
        ok = equivariance_check(big, g_elems, [big.identity], module, list(range(p * p)), 2, n)
        result.say(f"Ψ⁽{n}⁾ commutes with Δ: {ok}")
        result.check(f"Δ-equivariance at n = {n}", ok)
    identities = idempotent_identities(delta, p, settings.prec)
    for name, ok in identities.items():
        result.check(f"ε_ω {name}", ok)
    result.say(f"idempotent identities mod {p}^{settings.prec}: {identities}")
    return result


def _random_beta(field_, disc: int, rng: np.random.Generator) -> K1Element:
    coeffs = [QuadElement.from_uv(disc, int(rng.integers(-3, 4)), int(rng.integers(-3, 4))) for _ in range(field_.p)]
    coeffs[0] = QuadElement.from_uv(disc, int(rng.integers(1, 4)), int(rng.integers(0, 4)))
    return K1Element.from_quad(field_, coeffs)


def periods_suite(p: int = 3, samples: int = 5, seed: int | None = None) -> SuiteResult:
    result = SuiteResult("periods")
    rng = np.random.default_rng(settings.random_seed if seed is None else seed)
    field_ = build_period_field(p)
    result.say(f"minimal polynomial of η₀: {field_.min_poly}")
    norm = relative_norm(eta_element(p))
    result.say(f"N(η₁) = {norm}")
    result.check("cyclotomic unit norm is p", norm == QuadElement.from_int(-3, p))
    result.check("group ring identities", all(group_ring_identity(p, n) for n in range(1, p)))
    passed = 0
    for _ in range(samples):
        beta = _random_beta(field_, -3, rng)
        passed += all(lemma_a_identities(beta).values())
    result.say(f"A-product identities on random β: {passed}/{samples}")
    result.check("A-product identities", passed == samples)
    return result


def run_topic(topic: str, p: int = 3, n: int = 2, seed: int | None = None) -> SuiteResult:
    match topic:
        case "bockstein":
            result = bockstein_suite(p, seed=seed)
        case "massey":
            result = massey_suite(p, seed=seed)
        case "mn":
            result = mn_suite(p, n)
        case "equivariance":
            result = equivariance_suite(p)
        case "periods":
            result = periods_suite(p, seed=seed)
        case _:
            raise ValueError(f"topic must be one of {', '.join(TOPICS)}")
    log.info("Suite finished", topic=topic, p=p, checks=len(result.checks), ok=result.ok)
    return result


def selftest(seed: int | None = None) -> list[SuiteResult]:
    return [run_topic(topic, 3, 2, seed) for topic in TOPICS]
