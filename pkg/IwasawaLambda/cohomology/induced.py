"""Induction from a normal subgroup U: Shapiro dimension checks, corestriction and its image in H¹(G, T)."""

from __future__ import annotations

import numpy as np

from IwasawaLambda.cohomology.bockstein import lifts_by_solve
from IwasawaLambda.cohomology.complex import Cochain1, cochain_complex
from IwasawaLambda.cohomology.group import FiniteGroup
from IwasawaLambda.cohomology.module import CharacterChi, FpModule, omega_module
from IwasawaLambda.config import settings
from IwasawaLambda.errors import InvariantError, PreconditionError
from IwasawaLambda.fp_linalg import ColumnSpace, FpMatrix
from IwasawaLambda.logger import log


def _require_normal_p_power(group: FiniteGroup, sub_elems, p: int) -> list[int]:
    elems = sorted(set(int(e) for e in sub_elems))
    if len(group.closure(elems)) != len(elems) or not group.is_normal(elems):
        raise PreconditionError("STRUCTURE_MISMATCH", "U must be a normal subgroup of G", group=group.name)
    index = group.order // len(elems)
    while index % p == 0:
        index //= p
    if index != 1:
        raise PreconditionError("STRUCTURE_MISMATCH", "[G : U] must be a power of p", group=group.name)
    return elems


def induced_module(module: FpModule, sub_elems) -> FpModule:
    """F_p[G/U] ⊗ T with g·(sU ⊗ t) = gsU ⊗ g·t, on the basis (coset j, t_i) with index j·dim T + i."""
    group = module.group
    cosets = group.left_cosets(sub_elems)
    coset_of = np.empty(group.order, dtype=np.int64)
    for j, coset in enumerate(cosets):
        coset_of[coset] = j
    reps = [c[0] for c in cosets]
    k = len(cosets)
    mats = np.zeros((group.order, k * module.dim, k * module.dim), dtype=np.int64)
    for g in range(group.order):
        perm = np.zeros((k, k), dtype=np.int64)
        for j, s in enumerate(reps):
            perm[coset_of[group.mul(g, s)], j] = 1
        mats[g] = np.kron(perm, module.mats[g])
    cap = (module.max_dim or settings.max_module_dim) * k
    return FpModule(group, module.p, mats, name=f"Ind({module.name})", max_dim=cap)


def shapiro_check(module: FpModule, sub_elems, degrees: tuple[int, ...] = (1, 2)) -> bool:
    """dim Hʳ(U, T) = dim Hʳ(G, F_p[G/U] ⊗ T) for each requested degree."""
    group = module.group
    elems = _require_normal_p_power(group, sub_elems, module.p)
    sub, parent = group.subgroup(elems, name=f"{group.name}_U")
    restricted = module.restrict(sub, parent)
    induced = induced_module(module, elems)
    ok = True
    for r in degrees:
        if r == 1:
            left, right = cochain_complex(restricted).h1_dim(), cochain_complex(induced).h1_dim()
        elif r == 2:
            left, right = cochain_complex(restricted).h2_dim(), cochain_complex(induced).h2_dim()
        else:
            raise PreconditionError("PARAMETER_MISMATCH", "only degrees 1 and 2 are computed", degree=r)
        log.debug("Shapiro dimensions", degree=r, subgroup=left, induced=right)
        ok &= left == right
    return bool(ok)


def corestriction(c: Cochain1, module: FpModule, sub_elems) -> Cochain1:
    """Cor(c)(g) = Σ_j s_{π(j)}·c(s_{π(j)}⁻¹ g s_j), where g·s_j lies in the coset s_{π(j)}U.

    `c` is a cochain on the subgroup on `sub_elems` (elements in increasing parent order) with values in the
    restriction of `module`.
    """
    group = module.group
    elems = sorted(set(int(e) for e in sub_elems))
    position = {e: i for i, e in enumerate(elems)}
    if c.values.shape != (len(elems), module.dim):
        raise PreconditionError("PARAMETER_MISMATCH", "the cochain does not live on U", shape=c.values.shape)
    cosets = group.left_cosets(elems)
    reps = [coset[0] for coset in cosets]
    rep_of = {}
    for coset in cosets:
        for x in coset:
            rep_of[x] = coset[0]
    values = np.zeros((group.order, module.dim), dtype=np.int64)
    for g in range(group.order):
        for s in reps:
            target = rep_of[group.mul(g, s)]
            u = group.mul(group.inv(target), group.mul(g, s))
            values[g] += module.mats[target] @ c.values[position[u]]
    return Cochain1(module, values)


def restriction(c: Cochain1, sub_module: FpModule, parent: np.ndarray) -> Cochain1:
    return Cochain1(sub_module, c.values[np.asarray(parent)])


def norm_image_check(psi: Cochain1, sub_elems) -> bool:
    """Whether the class of ψ ∈ Z¹(G, T) is a corestriction from U.

    Decided twice: by a span computation over Cor(Z¹(U, T)) + B¹(G, T), and by asking whether ψ lifts to
    H¹(G, Ω ⊗ T) with Ω = F_p[G/U] presented through the quotient character.
    """
    module = psi.module
    group = module.group
    elems = _require_normal_p_power(group, sub_elems, module.p)
    cx = cochain_complex(module)
    if not cx.is_cocycle1(psi):
        raise PreconditionError("NOT_A_COCYCLE", "norm_image_check needs a 1-cocycle", module=module.name)
    if len(elems) == group.order:
        return True
    sub, parent = group.subgroup(elems, name=f"{group.name}_U")
    restricted = module.restrict(sub, parent)
    images = [corestriction(Cochain1.from_vector(restricted, z), module, elems).vector
              for z in cochain_complex(restricted).cocycles1]
    spanning = images + cx.coboundaries1.basis()
    by_span = bool(spanning) and ColumnSpace(FpMatrix(module.p, np.column_stack(spanning))).contains(psi.vector)
    by_span = by_span or psi.is_zero()

    chi = CharacterChi.from_quotient(group, module.p, elems)
    bottom = omega_module(module, chi, 1)
    lifted = lifts_by_solve(Cochain1(bottom.module, psi.values), bottom, target_n=chi.modulus)
    by_lift = lifted is not None
    if by_span != by_lift:
        raise InvariantError("INTERNAL_INCONSISTENCY", "corestriction image and liftability disagree",
                             by_span=by_span, by_lift=by_lift)
    log.debug("Checked corestriction image", group=group.name, index=chi.modulus, in_image=by_span)
    return by_span
