"""The generalized Bockstein maps Ψ⁽ⁿ⁾: H¹(G, Ω/Iⁿ ⊗ T) → H²(G, T).

Ψ⁽ⁿ⁾ is the connecting map of 0 → xⁿ ⊗ T → Ω/I^{n+1} ⊗ T → Ω/Iⁿ ⊗ T → 0.
It is computed twice. Directly, by lifting a cocycle with a zero top coordinate and reading off the xⁿ
part of its coboundary. And by the cup product formula Σ_{k=1}^{n} C(χ, k) ∪ ψ_{n−k}.
"""

from __future__ import annotations

import numpy as np

from IwasawaLambda.cohomology.complex import (
    Cochain1,
    Cochain2,
    CohomologyClass,
    cochain_complex,
    cup,
    d0,
    d1,
)
from IwasawaLambda.cohomology.module import CharacterChi, FpModule, OmegaModule, omega_module
from IwasawaLambda.config import settings
from IwasawaLambda.errors import InvariantError, PreconditionError
from IwasawaLambda.fp_linalg import FpMatrix, solve
from IwasawaLambda.logger import log

REDUCE_SAMPLES = 50


def _require_cocycle(f: Cochain1, where: str) -> None:
    if not cochain_complex(f.module).is_cocycle1(f):
        raise PreconditionError("NOT_A_COCYCLE", f"{where} needs a 1-cocycle", module=f.module.name)


def _require_omega(f: Cochain1, omega: OmegaModule) -> None:
    if f.module is not omega.module:
        raise PreconditionError("PARAMETER_MISMATCH", "the cochain does not take values in this Ω-module",
                                module=f.module.name, expected=omega.module.name)


def psi_components(f: Cochain1, omega: OmegaModule) -> list[Cochain1]:
    """f = Σ ψ_i xⁱ; returns ψ_0, …, ψ_{n−1} as cochains in T."""
    _require_omega(f, omega)
    return [Cochain1(omega.base, omega.coordinate(f.values, i)) for i in range(omega.n)]


def assemble(psis: list[Cochain1], omega: OmegaModule) -> Cochain1:
    """Σ ψ_i xⁱ as a cochain in Ω/Iⁿ ⊗ T."""
    if len(psis) != omega.n:
        raise PreconditionError("PARAMETER_MISMATCH", "need one coefficient per power of x", n=omega.n, got=len(psis))
    return Cochain1(omega.module, np.concatenate([psi.values for psi in psis], axis=1))


def zero_fill_lift(f: Cochain1, omega: OmegaModule, upper: OmegaModule) -> Cochain1:
    d = omega.base.dim
    values = np.zeros((f.values.shape[0], upper.n * d), dtype=np.int64)
    values[:, : omega.n * d] = f.values
    return Cochain1(upper.module, values)


def bockstein_direct(f: Cochain1, omega: OmegaModule) -> CohomologyClass:
    """Ψ⁽ⁿ⁾(f) from the coboundary of the zero-filled lift of f to Ω/I^{n+1} ⊗ T."""
    _require_omega(f, omega)
    _require_cocycle(f, "bockstein_direct")
    upper = omega_module(omega.base, omega.chi, omega.n + 1)
    boundary = d1(zero_fill_lift(f, omega, upper))
    d = omega.base.dim
    if boundary.values[:, :, : omega.n * d].any():
        raise InvariantError("INTERNAL_INCONSISTENCY", "the coboundary of the lift leaves xⁿ ⊗ T", n=omega.n)
    top = boundary.values[:, :, omega.n * d:]
    return CohomologyClass(Cochain2(omega.base, top))


def binomial_cochain(chi: CharacterChi, k: int, scalars: FpModule) -> Cochain1:
    """g ↦ C(χ(g), k) as a cochain into the trivial 1-dimensional module."""
    return Cochain1.from_scalars(scalars, chi.binom(k))


def bockstein_formula(psis: list[Cochain1], chi: CharacterChi, base: FpModule) -> CohomologyClass:
    """Σ_{k=1}^{n} C(χ, k) ∪ ψ_{n−k} for n = len(psis); Ψ⁽⁰⁾ is zero."""
    n = len(psis)
    if n == 0:
        return CohomologyClass(Cochain2.zero(base))
    omega = omega_module(base, chi, n)
    f = assemble(psis, omega)
    _require_cocycle(f, "bockstein_formula")
    scalars = FpModule.trivial(base.group, base.p)
    total = Cochain2.zero(base)
    for k in range(1, n + 1):
        total = total + cup(binomial_cochain(chi, k, scalars), psis[n - k])
    return CohomologyClass(total)


def lift_one_level(f: Cochain1, omega: OmegaModule) -> Cochain1 | None:
    """A cocycle F in Ω/I^{n+1} ⊗ T truncating to f, or None when Ψ⁽ⁿ⁾(f) ≠ 0.

    With d(w) = Ψ⁽ⁿ⁾(f), the lift is F = f̃ − xⁿ·w where f̃ is the zero-filled lift.
    """
    psi = bockstein_direct(f, omega)
    w = cochain_complex(omega.base).coboundary_preimage(psi.representative)
    if w is None:
        return None
    upper = omega_module(omega.base, omega.chi, omega.n + 1)
    lifted = zero_fill_lift(f, omega, upper)
    values = lifted.values.copy()
    values[:, omega.n * omega.base.dim:] -= w.values
    result = Cochain1(upper.module, values)
    if not cochain_complex(upper.module).is_cocycle1(result):
        raise InvariantError("INTERNAL_INCONSISTENCY", "the corrected lift is not a cocycle", n=omega.n)
    return result


def _truncation_on_cochains(omega: OmegaModule, level: int) -> FpMatrix:
    order = omega.base.group.order
    return FpMatrix(omega.base.p, np.kron(np.eye(order, dtype=np.int64), omega.truncation(level).entries))


def lifts_by_solve(f: Cochain1, omega: OmegaModule, target_n: int | None = None) -> Cochain1 | None:
    """A cocycle of Ω/I^{target} ⊗ T truncating to f, found by one joint linear solve, or None."""
    _require_omega(f, omega)
    target_n = omega.n + 1 if target_n is None else target_n
    upper = omega_module(omega.base, omega.chi, target_n)
    cx = cochain_complex(upper.module)
    trunc = _truncation_on_cochains(upper, omega.n)
    system = np.concatenate([cx.d1_matrix.entries, trunc.entries], axis=0)
    rhs = np.concatenate([np.zeros(cx.d1_matrix.rows, dtype=np.int64), f.vector])
    x = solve(FpMatrix(omega.base.p, system), rhs)
    return None if x is None else Cochain1.from_vector(upper.module, x)


def _z1_basis(module: FpModule) -> list[Cochain1]:
    return [Cochain1.from_vector(module, v) for v in cochain_complex(module).cocycles1]


def _check_scan_range(chi: CharacterChi, n_max: int) -> None:
    if not 1 <= n_max < chi.modulus:
        raise PreconditionError("TRUNCATION_RANGE", "the scan needs 1 ≤ n_max < p^l", n_max=n_max,
                                modulus=chi.modulus)


def psi_vanishes(base: FpModule, chi: CharacterChi, n: int) -> bool:
    """Whether Ψ⁽ⁿ⁾ is the zero map on all of H¹(G, Ω/Iⁿ ⊗ T), checked on a basis of cocycles."""
    omega = omega_module(base, chi, n)
    return all(bockstein_direct(f, omega).is_zero() for f in _z1_basis(omega.module))


def min_nonvanishing_psi(base: FpModule, chi: CharacterChi, n_max: int, exhaustive: bool = False) -> int | None:
    """The least n ≤ n_max with Ψ⁽ⁿ⁾ ≠ 0, or None.

    By default only lifts of a basis of H¹(G, T) are followed level by level: while all lower Ψ vanish, Ψ⁽ⁿ⁾
    depends only on the class of ψ_0. With `exhaustive` every level scans a full basis of Z¹(G, Ω/Iⁿ ⊗ T).
    """
    _check_scan_range(chi, n_max)
    if exhaustive:
        for n in range(1, n_max + 1):
            if not psi_vanishes(base, chi, n):
                log.info("Found nonvanishing Bockstein", n=n, mode="exhaustive", group=base.group.name)
                return n
        return None
    omega = omega_module(base, chi, 1)
    lifts = [Cochain1(omega.module, cls.representative.values) for cls in cochain_complex(base).h1().classes]
    for n in range(1, n_max + 1):
        next_lifts = []
        for f in lifts:
            lifted = lift_one_level(f, omega)
            if lifted is None:
                log.info("Found nonvanishing Bockstein", n=n, mode="reduce", group=base.group.name)
                return n
            next_lifts.append(lifted)
        lifts = next_lifts
        omega = omega_module(base, chi, n + 1)
        log.debug("Bockstein vanishes", n=n, classes=len(lifts))
    return None


def reduce_independence_check(base: FpModule, chi: CharacterChi, n: int, samples: int = REDUCE_SAMPLES,
                              seed: int | None = None) -> bool:
    """Ψ⁽ⁿ⁾(f) and Ψ⁽ⁿ⁾(f + d m + x·h) agree as classes when every lower Ψ vanishes."""
    if n == 1:
        return True
    for i in range(1, n):
        if not psi_vanishes(base, chi, i):
            raise PreconditionError("HYPOTHESIS_FAILED", "a lower Bockstein map is nonzero", level=i, n=n)
    omega = omega_module(base, chi, n)
    lower = omega_module(base, chi, n - 1)
    basis = cochain_complex(omega.module).cocycles1
    lower_basis = cochain_complex(lower.module).cocycles1
    if not basis:
        return True
    rng = np.random.default_rng(settings.random_seed if seed is None else seed)
    p, order = base.p, base.group.order
    shift = omega.times_x().entries
    ok = True
    for _ in range(samples):
        f = Cochain1.from_vector(omega.module, rng.integers(0, p, len(basis)) @ np.array(basis))
        m = rng.integers(0, p, omega.dim)
        h = np.zeros(order * lower.dim, dtype=np.int64)
        if lower_basis:
            h = rng.integers(0, p, len(lower_basis)) @ np.array(lower_basis)
        x_h = (h.reshape(order, lower.dim) @ shift.T) % p
        g = f + d0(m, omega.module) + Cochain1(omega.module, x_h)
        ok &= bockstein_direct(f, omega).equals(bockstein_direct(g, omega))
    log.debug("Checked ψ₀-dependence", n=n, samples=samples, agree=ok)
    return bool(ok)
