"""Finite Ω-modules through their x-adic filtration, and the dimension bookkeeping of the Kummer sequences."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from IwasawaLambda.errors import PreconditionError
from IwasawaLambda.fp_linalg import FpMatrix, matmul_mod, rank
from IwasawaLambda.logger import log
from IwasawaLambda.quadfield.forms import QuadForm, SplitType, reduced_forms, require_fundamental, split_type


@dataclass(frozen=True)
class FiltrationReport:
    ranks: tuple[int, ...]
    graded: tuple[int, ...]
    length: int
    dim: int
    uniserial: bool
    p: int

    @property
    def order(self) -> int:
        return self.p**self.dim


def filtration_order(x_action: FpMatrix) -> FiltrationReport:
    """Ranks of xⁱ on M = F_p^dim and the graded pieces xⁱM/x^{i+1}M, up to the point where they stabilize.

    x must act nilpotently: a stable nonzero xⁿM = x^{n+1}M would contradict Nakayama. M is uniserial when every
    graded piece is F_p, and then #M = pⁿ for the length n.
    """
    p, dim = x_action.p, x_action.rows
    if x_action.shape != (dim, dim):
        raise PreconditionError("PARAMETER_MISMATCH", "x must act by a square matrix", shape=x_action.shape)
    ranks = [dim]
    power = np.eye(dim, dtype=np.int64)
    while True:
        power = matmul_mod(x_action.entries, power, p)
        r = rank(FpMatrix(p, power))
        if r == ranks[-1]:
            if r:
                raise PreconditionError("HYPOTHESIS_FAILED", "x does not act nilpotently", stable_rank=r)
            break
        ranks.append(r)
        if r == 0:
            break
    graded = tuple(ranks[i] - ranks[i + 1] for i in range(len(ranks) - 1))
    report = FiltrationReport(tuple(ranks), graded, len(graded), dim, all(g == 1 for g in graded), p)
    log.debug("Filtration", ranks=report.ranks, graded=report.graded, uniserial=report.uniserial)
    return report


def _prime_form(d: int, p: int) -> QuadForm | None:
    """A form (p, b, c) representing a prime above p, or None when p is inert."""
    for b in range(-p + 1, p + 1):
        if (b - d) % 2 == 0 and (b * b - d) % (4 * p) == 0:
            return QuadForm(p, b, (b * b - d) // (4 * p))
    return None


def _p_rank(size: int, p: int) -> int:
    r = 0
    while size % p == 0:
        size //= p
        r += 1
    if size != 1:
        raise PreconditionError("INTERNAL_INCONSISTENCY", "p-torsion count is not a power of p", p=p)
    return r


@dataclass(frozen=True)
class KummerDimensions:
    """dim_Fp of the terms of the two Kummer sequences for μ_p:

    0 → O_S^*/p → H¹ → Cl_S[p] → 0 and 0 → Cl_S/p → H² → Br[p] → 0.
    """

    disc: int
    p: int
    s_count: int
    mu_p: int
    units: int
    cl_s_rank: int
    h1: int
    h2: int
    brauer: int

    @property
    def euler_characteristic(self) -> int:
        return self.mu_p - self.h1 + self.h2

    def to_dict(self) -> dict:
        data = {k: getattr(self, k) for k in self.__dataclass_fields__}
        data["euler_characteristic"] = self.euler_characteristic
        return data


def kummer_dimensions(d: int, p: int) -> KummerDimensions:
    """Dimensions for G_{K,S} with S the primes above p of an imaginary quadratic K.

    O_S^* has rank #S and torsion μ(K), so dim O_S^*/p = #S + dim μ_p(K); Br(O_K[1/p])[p] has dimension #S − 1.
    """
    require_fundamental(d)
    kind = split_type(d, p)
    s_count = 2 if kind == SplitType.SPLIT else 1
    mu_p = 1 if (d, p) == (-3, 3) else 0
    forms = reduced_forms(d)
    torsion = [f for f in forms if (f**p).is_identity()]
    rank_cl = _p_rank(len(torsion), p)
    prime = _prime_form(d, p)
    # the image of [𝔓] in Cl/p vanishes exactly when [𝔓] is a p-th power
    drop = 0
    if prime is not None:
        target = prime.reduced()
        drop = 0 if any((f**p).reduced() == target for f in forms) else 1
    cl_s_rank = rank_cl - drop
    units = s_count + mu_p
    dims = KummerDimensions(
        disc=d,
        p=p,
        s_count=s_count,
        mu_p=mu_p,
        units=units,
        cl_s_rank=cl_s_rank,
        h1=units + cl_s_rank,
        h2=cl_s_rank + s_count - 1,
        brauer=s_count - 1,
    )
    log.debug("Kummer dimensions", **dims.to_dict())
    return dims
