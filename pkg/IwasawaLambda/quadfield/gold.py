"""The λ ≥ 2 decision for imaginary quadratic fields: Gold's criterion and the experimental nonsplit test."""

from __future__ import annotations

from dataclasses import dataclass, field

from IwasawaLambda.config import settings
from IwasawaLambda.errors import InvariantError, PreconditionError
from IwasawaLambda.logger import log
from IwasawaLambda.padic import PadicInt, gold_criteria, log_normalized, padic_log
from IwasawaLambda.quadfield.forms import (
    QuadField,
    SplitType,
    class_number_dirichlet,
    classes_of_order_dividing,
    reduced_forms,
    split_type,
)
from IwasawaLambda.quadfield.ideals import (
    QuadElement,
    QuadIdeal,
    completion_root,
    embed,
    ideal_pow_generator,
    prime_above,
    principal_generator,
)


@dataclass
class GoldReport:
    disc: int
    p: int
    h_k: int
    split_type: SplitType
    alpha: QuadElement
    log_val: PadicInt
    lambda_ge_2: bool
    s_count: int
    prec: int
    alpha_embed: PadicInt | None = None
    log_coordinate: PadicInt | None = None
    experimental: bool = False
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        data = {
            "disc": str(self.disc),
            "p": str(self.p),
            "h_k": str(self.h_k),
            "split_type": str(self.split_type),
            "alpha": self.alpha.to_json(),
            "log_val": str(self.log_val.value),
            "log_prec": str(self.log_val.prec),
            "lambda_ge_2": self.lambda_ge_2,
            "s_count": str(self.s_count),
            "prec": str(self.prec),
            "experimental": self.experimental,
        }
        if self.alpha_embed is not None:
            data["alpha_embed"] = str(self.alpha_embed.value)
        if self.log_coordinate is not None:
            data["log_coordinate"] = str(self.log_coordinate.value)
        if self.notes:
            data["notes"] = list(self.notes)
        return data


def class_number(d: int) -> int:
    """h_K from reduced forms, confirmed by the analytic class number formula."""
    h = len(reduced_forms(d))
    h_analytic = class_number_dirichlet(d)
    if h != h_analytic:
        raise InvariantError("INTERNAL_INCONSISTENCY", "class number oracles disagree", disc=d,
                             forms=h, dirichlet=h_analytic)
    return h


def power_criterion(alpha: QuadElement, p: int, which_root: int) -> bool:
    """α^(p−1) ≡ 1 modulo p², computed in O_K before embedding."""
    power = alpha ** (p - 1)
    return embed(power, alpha.disc, p, 2, which_root).value == 1


def gold_test(d: int, p: int, prec: int | None = None, budget: int | None = None) -> GoldReport:
    n = settings.prec if prec is None else prec
    field_ = QuadField(d)
    kind = split_type(d, p)
    if kind != SplitType.SPLIT:
        raise PreconditionError("NOT_SPLIT", "p does not split in K", disc=d, p=p, split_type=str(kind))
    if n < 3:
        raise PreconditionError("PRECISION_TOO_LOW", "the mod p² verdict needs precision ≥ 3", prec=n)
    h = class_number(field_.disc)
    if h % p == 0:
        raise PreconditionError("PRECONDITION_P_DIVIDES_H", "p divides h", disc=d, p=p, h=h)

    p0, p0_tilde = prime_above(d, p)
    alpha = ideal_pow_generator(d, p0, h, budget)
    root = completion_root(p0_tilde, p, n)
    alpha_embed = embed(alpha, d, p, n, root)
    by_log, by_power = gold_criteria(alpha_embed)
    direct = power_criterion(alpha, p, root)
    if not (by_log == by_power == direct):
        raise InvariantError("INTERNAL_INCONSISTENCY", "Gold criteria disagree", disc=d, p=p,
                             by_log=by_log, by_power=by_power, direct=direct)

    report = GoldReport(
        disc=d,
        p=p,
        h_k=h,
        split_type=kind,
        alpha=alpha,
        log_val=padic_log(alpha_embed),
        lambda_ge_2=by_log,
        s_count=2,
        prec=n,
        alpha_embed=alpha_embed,
        log_coordinate=log_normalized(alpha_embed),
    )
    log.info("Gold test finished", disc=d, p=p, h=h, alpha=str(alpha), lambda_ge_2=by_log)
    return report


def order_p_ideal(d: int, p: int) -> QuadIdeal:
    """An ideal prime to p whose class has order exactly p; requires Cl(K)[p] cyclic and nontrivial."""
    torsion = classes_of_order_dividing(d, p)
    if len(torsion) == 1:
        raise PreconditionError("NO_ORDER_P_CLASS", "Cl(K)[p] is trivial", disc=d, p=p)
    if len(torsion) != p:
        raise PreconditionError("NOT_CYCLIC", "Cl(K)[p] is not cyclic", disc=d, p=p, size=len(torsion))
    form = next(f for f in torsion if not f.is_identity()).equivalent_coprime_to(p)
    return QuadIdeal(d, form.a, -form.b)


def nonsplit_lambda2_test(d: int, p: int, prec: int | None = None, budget: int | None = None,
                          ideal: QuadIdeal | None = None) -> GoldReport:
    """Local-norm test of χ∪α = 0 for p inert or ramified. EXPERIMENTAL."""
    n = settings.prec if prec is None else prec
    field_ = QuadField(d)
    kind = split_type(d, p)
    if kind == SplitType.SPLIT:
        raise PreconditionError("NOT_SPLIT", "the nonsplit test needs p inert or ramified", disc=d, p=p)
    if n < 3:
        raise PreconditionError("PRECISION_TOO_LOW", "the mod p² verdict needs precision ≥ 3", prec=n)
    h = class_number(field_.disc)
    base = ideal if ideal is not None else order_p_ideal(d, p)
    if base.norm % p == 0:
        raise PreconditionError("PARAMETER_MISMATCH", "the ideal must be prime to p", ideal=str(base))
    alpha = principal_generator(base**p, budget)
    norm = PadicInt(p, n, alpha.norm())
    log_val = padic_log(norm)
    verdict = log_val.value % (p * p) == 0
    log.warning("Nonsplit λ≥2 test is experimental", disc=d, p=p, ideal=str(base), verdict=verdict)
    return GoldReport(
        disc=d,
        p=p,
        h_k=h,
        split_type=kind,
        alpha=alpha,
        log_val=log_val,
        lambda_ge_2=verdict,
        s_count=1,
        prec=n,
        experimental=True,
        notes=["local criterion log_p(N(α)) ≡ 0 mod p² derived from norm functoriality; not yet validated"],
    )
