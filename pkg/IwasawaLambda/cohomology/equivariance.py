"""The prime-to-p part Δ of 𝒢/N acting on cochains of G, and the idempotents ε_ω of Z/p^N[Δ]."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sympy.ntheory import primitive_root

from IwasawaLambda.cohomology.bockstein import bockstein_direct
from IwasawaLambda.cohomology.complex import Cochain1, Cochain2, CohomologyClass, cochain_complex
from IwasawaLambda.cohomology.group import FiniteGroup
from IwasawaLambda.cohomology.module import CharacterChi, FpModule, omega_module
from IwasawaLambda.errors import PreconditionError
from IwasawaLambda.logger import log
from IwasawaLambda.padic import PadicInt, teichmuller


@dataclass(frozen=True, eq=False)
class IdempotentEpsilon:
    """ε_ω = (1/#Δ)·Σ ω(σ)·σ⁻¹ in Z/p^N[Δ]; coeffs[g] is the coefficient of the element g."""

    delta: FiniteGroup
    p: int
    precision: int
    omega: tuple[int, ...]
    coeffs: np.ndarray = field(repr=False)

    @property
    def modulus(self) -> int:
        return self.p**self.precision

    def project(self, module: FpModule, vec) -> np.ndarray:
        """ε·v for a vector of an F_p[Δ]-module."""
        v = np.asarray(vec, dtype=np.int64)
        weights = np.array([int(c) % self.p for c in self.coeffs], dtype=np.int64)
        return np.einsum("g,gij,j->i", weights, module.mats, v) % self.p


def group_ring_mul(group: FiniteGroup, a, b, modulus: int) -> np.ndarray:
    """Convolution in Z/m[G]: (ab)[gh] += a[g]·b[h]."""
    out = np.zeros(group.order, dtype=object)
    for g in range(group.order):
        if a[g]:
            for h in range(group.order):
                out[group.mul(g, h)] += a[g] * b[h]
    return np.array([int(x) % modulus for x in out], dtype=object)


def _check_character(delta: FiniteGroup, omega: tuple[int, ...], modulus: int) -> None:
    for a in range(delta.order):
        for b in delta.generators:
            if omega[delta.mul(a, b)] != omega[a] * omega[b] % modulus:
                raise PreconditionError("PARAMETER_MISMATCH", "ω is not a character of Δ", element=a)


def epsilon_idempotent(delta: FiniteGroup, omega_values, p: int, precision: int) -> IdempotentEpsilon:
    if delta.order % p == 0:
        raise PreconditionError("P_DIVIDES_DELTA", "ε_ω needs p ∤ #Δ", order=delta.order, p=p)
    modulus = p**precision
    omega = tuple(int(v) % modulus for v in omega_values)
    if len(omega) != delta.order:
        raise PreconditionError("PARAMETER_MISMATCH", "need one value of ω per element of Δ", order=delta.order)
    _check_character(delta, omega, modulus)
    inv_order = pow(delta.order, -1, modulus)
    coeffs = np.zeros(delta.order, dtype=object)
    for sigma in range(delta.order):
        coeffs[delta.inv(sigma)] = (coeffs[delta.inv(sigma)] + omega[sigma] * inv_order) % modulus
    return IdempotentEpsilon(delta, p, precision, omega, coeffs)


def delta_characters(delta: FiniteGroup, p: int, precision: int) -> list[tuple[int, ...]]:
    """All characters Δ → μ_{p−1} ⊂ (Z/p^N)^* of a cyclic Δ, through Teichmüller lifts."""
    m = delta.order
    if len(delta.generators) != 1 or delta.element_order(delta.generators[0]) != m:
        raise PreconditionError("NOT_CYCLIC", "characters are enumerated for cyclic Δ given by one generator")
    if (p - 1) % m:
        raise PreconditionError("PARAMETER_MISMATCH", "#Δ must divide p − 1", order=m, p=p)
    root = primitive_root(p)
    zeta = teichmuller(PadicInt(p, precision, pow(root, (p - 1) // m, p))).value
    modulus = p**precision
    gen = delta.generators[0]
    exponent, x = {}, delta.identity
    for j in range(m):
        exponent[x] = j
        x = delta.mul(x, gen)
    return [tuple(pow(zeta, k * exponent[g], modulus) for g in range(m)) for k in range(m)]


def idempotent_identities(delta: FiniteGroup, p: int, precision: int) -> dict[str, bool]:
    """ε² = ε, ε_ω·ε_ω′ = 0 for ω ≠ ω′ and Σ ε_ω = 1, over all characters of a cyclic Δ."""
    modulus = p**precision
    eps = [epsilon_idempotent(delta, w, p, precision) for w in delta_characters(delta, p, precision)]
    one = np.zeros(delta.order, dtype=object)
    one[delta.identity] = 1
    zero = np.zeros(delta.order, dtype=object)
    idempotent = all(np.array_equal(group_ring_mul(delta, e.coeffs, e.coeffs, modulus), e.coeffs) for e in eps)
    orthogonal = all(
        np.array_equal(group_ring_mul(delta, a.coeffs, b.coeffs, modulus), zero)
        for i, a in enumerate(eps) for j, b in enumerate(eps) if i != j
    )
    total = sum((e.coeffs for e in eps), start=zero.copy()) % modulus
    return {"idempotent": idempotent, "orthogonal": orthogonal, "complete": bool(np.array_equal(total, one))}


@dataclass(frozen=True, eq=False)
class DeltaAction:
    """Δ ⊂ 𝒢 acting on cochains of G ⊂ 𝒢 by (τφ)(g) = τ·φ(τ⁻¹gτ)."""

    big: FiniteGroup
    delta: tuple[int, ...]
    parent: np.ndarray = field(repr=False)
    conj: dict[int, np.ndarray] = field(repr=False)

    def act1(self, tau: int, phi: Cochain1, tau_matrix: np.ndarray) -> Cochain1:
        return Cochain1(phi.module, phi.values[self.conj[tau]] @ tau_matrix.T)

    def act2(self, tau: int, phi: Cochain2, tau_matrix: np.ndarray) -> Cochain2:
        c = self.conj[tau]
        return Cochain2(phi.module, phi.values[c[:, None], c[None, :]] @ tau_matrix.T)


def _structure(script_g: FiniteGroup, g_elems, n_elems) -> DeltaAction:
    g_set = sorted(set(int(e) for e in g_elems))
    n_set = set(int(e) for e in n_elems)
    members = set(g_set)
    if not script_g.is_normal(g_set) or not n_set <= members or len(script_g.closure(g_set)) != len(g_set):
        raise PreconditionError("STRUCTURE_MISMATCH", "need normal subgroups N ⊆ G ⊆ 𝒢", group=script_g.name)
    m, rem = divmod(script_g.order, len(g_set))
    if rem:
        raise PreconditionError("STRUCTURE_MISMATCH", "|G| does not divide |𝒢|")
    delta = [t for t in range(script_g.order) if script_g.power(t, m) == script_g.identity]
    if len(delta) != m or len(script_g.closure(delta)) != m:
        raise PreconditionError("STRUCTURE_MISMATCH", "elements of order dividing [𝒢:G] do not form a complement",
                                found=len(delta), index=m)
    if set(delta) & members != {script_g.identity}:
        raise PreconditionError("STRUCTURE_MISMATCH", "Δ meets G nontrivially")
    if any(script_g.commutator(t, g) not in n_set for t in delta for g in g_set):
        raise PreconditionError("STRUCTURE_MISMATCH", "Δ does not commute with G modulo N")
    position = {e: i for i, e in enumerate(g_set)}
    parent = np.array(g_set, dtype=np.int64)
    conj = {t: np.array([position[script_g.conj(t, g)] for g in g_set], dtype=np.int64) for t in delta}
    return DeltaAction(script_g, tuple(delta), parent, conj)


def equivariance_check(script_g: FiniteGroup, g_elems, n_elems, module: FpModule, chi_values, level: int,
                       n: int) -> bool:
    """Ψ⁽ⁿ⁾(τφ) = τΨ⁽ⁿ⁾(φ) in H²(G, T) for all τ ∈ Δ
    and a cocycle basis φ of Z¹(G, Ω/Iⁿ ⊗ T).

    `module` is T over 𝒢 and `chi_values` lists χ on the elements of G in increasing order.
    """
    action = _structure(script_g, g_elems, n_elems)
    g_group, parent = script_g.subgroup(action.parent, name=f"{script_g.name}_G")
    chi = CharacterChi(g_group, module.p, level, chi_values)
    positions = {int(e): i for i, e in enumerate(action.parent)}
    if any(chi(positions[int(e)]) for e in n_elems):
        raise PreconditionError("STRUCTURE_MISMATCH", "N is not contained in ker χ")
    base = module.restrict(g_group, parent)
    omega = omega_module(base, chi, n)
    basis = [Cochain1.from_vector(omega.module, v) for v in cochain_complex(omega.module).cocycles1]
    ok = True
    for tau in action.delta:
        t_mat = module.mats[tau]
        omega_mat = np.kron(np.eye(n, dtype=np.int64), t_mat)
        for phi in basis:
            moved = action.act1(tau, phi, omega_mat)
            lhs = bockstein_direct(moved, omega)
            rhs = action.act2(tau, bockstein_direct(phi, omega).representative, t_mat)
            ok &= lhs.equals(CohomologyClass(rhs))
    log.info("Checked Δ-equivariance", group=script_g.name, delta=len(action.delta), cocycles=len(basis), ok=ok)
    return bool(ok)
