"""β/α₁ certificates for the λ ≥ 3 step and the valuation machinery they need.

Primes of K₁ above q ≠ p are pairs (prime of K, prime of Q₁): Q₁ is unramified at q and its residue
degrees are 1 or p, so the pair never splits further. Valuations use a separator element τ that is a
unit at the chosen prime and lies in every other prime over q.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb
from pathlib import Path

import numpy as np
from sympy import Poly, factorint
from sympy.ntheory import sqrt_mod

from IwasawaLambda.config import settings
from IwasawaLambda.errors import CertificateError, InvariantError, LambdaError, PreconditionError
from IwasawaLambda.logger import log
from IwasawaLambda.padic import GOLD_MIN_PRECISION, PadicInt, gold_criteria, padic_log
from IwasawaLambda.quadfield.forms import SplitType, kronecker, require_fundamental, split_type
from IwasawaLambda.quadfield.gold import class_number, gold_test
from IwasawaLambda.quadfield.ideals import QuadElement, completion_root, embed, prime_above
from IwasawaLambda.cyclolayer.k1 import K1Element, absolute_norm, conjugates, relative_norm, step4_products
from IwasawaLambda.cyclolayer.periods import X, PeriodField, build_period_field

SCHEMA_KEYS = {"disc", "p", "beta", "alpha1", "prime_data", "alpha", "beta1"}


@dataclass(frozen=True, eq=False)
class PrimeOfK1:
    q: int
    e: int
    f: int
    k_root: int | None
    factor: tuple[int, ...]
    separator: K1Element = field(repr=False)
    uniformizer: K1Element | None = field(repr=False, default=None)

    def describe(self) -> dict:
        return {
            "q": str(self.q),
            "e": str(self.e),
            "f": str(self.f),
            "k_root": None if self.k_root is None else str(self.k_root),
            "factor": [str(c) for c in self.factor],
        }


def _evaluate(field_: PeriodField, coeffs, theta: np.ndarray) -> np.ndarray:
    result = field_.zero()
    for c in coeffs:
        result = field_.mul(result, theta) + int(c) * field_.one()
    return result


def _omega_poly(d: int, x: int) -> int:
    """Value at x of the minimal polynomial x² − δx − (D − δ)/4 of ω."""
    delta = d % 2
    return x * x - delta * x - (d - delta) // 4


def _omega_roots(d: int, q: int) -> list[int]:
    if q == 2:
        return [r for r in range(2) if _omega_poly(d, r) % 2 == 0]
    delta = d % 2
    half = pow(2, -1, q)
    roots = {((delta + s) * half) % q for s in sqrt_mod(d % q, q, all_roots=True)}
    return sorted(roots)


def _omega_minus(field_: PeriodField, d: int, r: int) -> K1Element:
    return K1Element.constant(field_, QuadElement.from_uv(d, -r, 1))


def factor_rational_prime(field_: PeriodField, d: int, q: int, theta: np.ndarray | None = None) -> list[PrimeOfK1]:
    """The primes of K₁ above q, by Dedekind's criterion on the characteristic polynomial of θ."""
    if q == field_.p:
        raise PreconditionError("PARAMETER_MISMATCH", "the prime above p is not handled by this factorization", q=q)
    theta = field_.eta(0) if theta is None else np.array([int(c) for c in theta], dtype=object)
    index = field_.index_of(theta)
    if index == 0:
        raise CertificateError("MALFORMED_CERTIFICATE", "θ does not generate Q₁", q=q, theta=list(map(int, theta)))
    if index % q == 0:
        raise CertificateError("INDEX_DIVISOR", f"q = {q} divides the index of Z[θ]; supply another θ in prime_data",
                               q=q, index=index)

    _, factors = Poly(field_.charpoly(theta).as_expr(), X, modulus=q).factor_list()
    if any(e != 1 for _, e in factors):
        raise InvariantError("INTERNAL_INCONSISTENCY", "Q₁ ramifies at a prime different from p", q=q)
    q1_parts = [tuple(int(c) for c in g.all_coeffs()) for g, _ in factors]
    q1_values = [_evaluate(field_, g, theta) for g in q1_parts]

    kind = kronecker(d, q)
    if kind == 1:
        k_parts = _omega_roots(d, q)
        k_data = [(r, 1, 1, next(s for s in k_parts if s != r)) for r in k_parts]
    elif kind == -1:
        k_data = [(None, 1, 2, None)]
    else:
        k_data = [(_omega_roots(d, q)[0], 2, 1, None)]

    primes = []
    for root, e, f_k, other_root in k_data:
        for j, g in enumerate(q1_parts):
            tau = K1Element.one(field_, d)
            if other_root is not None:
                tau = tau * _omega_minus(field_, d, other_root)
            for k, value in enumerate(q1_values):
                if k != j:
                    tau = tau * K1Element.from_rational_vector(field_, d, value)
            pi = _omega_minus(field_, d, root) if e == 2 else None
            primes.append(PrimeOfK1(q=q, e=e, f=f_k * (len(g) - 1), k_root=root, factor=g, separator=tau,
                                    uniformizer=pi))
    total = sum(pr.e * pr.f for pr in primes)
    if total != 2 * field_.p:
        raise InvariantError("INTERNAL_INCONSISTENCY", "Σ e·f differs from [K₁ : Q]", q=q, total=total)
    log.debug("Factored rational prime in K₁", q=q, primes=[(pr.e, pr.f) for pr in primes])
    return primes


def _pow_mod(x: K1Element, e: int, m: int) -> K1Element:
    result, base = K1Element.one(x.field, x.disc), x.reduced_mod(m)
    while e:
        if e & 1:
            result = (result * base).reduced_mod(m)
        e >>= 1
        if e:
            base = (base * base).reduced_mod(m)
    return result


def _at_least(gamma: K1Element, prime: PrimeOfK1, j: int) -> bool:
    """v_𝔔(γ) ≥ j ⟺ γ·π^s·τ^(e·k) ∈ q^k·O with k = ⌈j/e⌉ and s = e·k − j."""
    e = prime.e
    k = -(-j // e)
    s = e * k - j
    m = prime.q**k
    x = gamma.reduced_mod(m)
    if s:
        x = (x * _pow_mod(prime.uniformizer, s, m)).reduced_mod(m)
    x = (x * _pow_mod(prime.separator, e * k, m)).reduced_mod(m)
    return x.is_zero()


def _vq(n: int, q: int) -> int:
    n, v = abs(n), 0
    while n and n % q == 0:
        n //= q
        v += 1
    return v


def valuation(gamma: K1Element, prime: PrimeOfK1) -> int:
    if gamma.is_zero():
        raise PreconditionError("PARAMETER_MISMATCH", "the valuation of zero is infinite")
    bound = _vq(absolute_norm(gamma), prime.q) // prime.f
    v = 0
    while v < bound and _at_least(gamma, prime, v + 1):
        v += 1
    return v


@dataclass
class BetaCertificate:
    disc: int
    p: int
    beta: K1Element
    alpha1: QuadElement
    prime_data: dict[int, tuple[int, ...]] = field(default_factory=dict)
    alpha: QuadElement | None = None
    beta1: K1Element | None = None

    @classmethod
    def from_json(cls, data: dict) -> BetaCertificate:
        if not isinstance(data, dict):
            raise CertificateError("MALFORMED_CERTIFICATE", "a certificate is a JSON object")
        unknown = set(data) - SCHEMA_KEYS
        if unknown:
            raise CertificateError("MALFORMED_CERTIFICATE", "unknown certificate keys", keys=sorted(unknown))
        try:
            d, p = int(data["disc"]), int(data["p"])
            require_fundamental(d)
            field_ = build_period_field(p)
            beta = _parse_k1(field_, d, data["beta"])
            alpha1 = QuadElement.from_json(d, data["alpha1"])
            prime_data = {}
            for entry in data.get("prime_data") or []:
                theta = tuple(int(c) for c in entry["theta"])
                if len(theta) != p:
                    raise ValueError("θ must have one coordinate per period basis element")
                prime_data[int(entry["q"])] = theta
            alpha = QuadElement.from_json(d, data["alpha"]) if data.get("alpha") is not None else None
            beta1 = _parse_k1(field_, d, data["beta1"]) if data.get("beta1") is not None else None
        except LambdaError:
            raise
        except (KeyError, TypeError, ValueError) as e:
            raise CertificateError("MALFORMED_CERTIFICATE", f"cannot parse certificate: {e}") from e
        return cls(disc=d, p=p, beta=beta, alpha1=alpha1, prime_data=prime_data, alpha=alpha, beta1=beta1)

    @classmethod
    def load(cls, path: str | Path) -> BetaCertificate:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise CertificateError("MALFORMED_CERTIFICATE", f"cannot read certificate: {e}", path=str(path)) from e
        return cls.from_json(data)

    def to_json(self) -> dict:
        data = {
            "disc": str(self.disc),
            "p": str(self.p),
            "beta": self.beta.to_json(),
            "alpha1": self.alpha1.to_json(),
            "prime_data": [
                {"q": str(q), "theta": [str(c) for c in theta]} for q, theta in sorted(self.prime_data.items())
            ],
        }
        if self.alpha is not None:
            data["alpha"] = self.alpha.to_json()
        if self.beta1 is not None:
            data["beta1"] = self.beta1.to_json()
        return data


def _parse_k1(field_: PeriodField, d: int, rows) -> K1Element:
    coeffs = [QuadElement.from_json(d, row) for row in rows]
    if len(coeffs) != field_.p:
        raise ValueError(f"β needs {field_.p} coefficients, got {len(coeffs)}")
    return K1Element.from_quad(field_, coeffs)


@dataclass
class CertificateReport:
    disc: int
    p: int
    alpha: QuadElement
    alpha_source: str
    lambda_ge_2: bool | None
    lambda_ge_3: bool
    norm_sign: int | None = None
    checked_primes: list[dict] = field(default_factory=list)
    local_log: PadicInt | None = None
    step4: dict | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        data = {
            "disc": str(self.disc),
            "p": str(self.p),
            "alpha": self.alpha.to_json(),
            "alpha_source": self.alpha_source,
            "lambda_ge_2": self.lambda_ge_2,
            "lambda_ge_3": self.lambda_ge_3,
            "checked_primes": self.checked_primes,
        }
        if self.norm_sign is not None:
            data["norm_sign"] = str(self.norm_sign)
        if self.local_log is not None:
            data["local_log"] = str(self.local_log.value)
        if self.step4 is not None:
            data["step4"] = self.step4
        if self.notes:
            data["notes"] = list(self.notes)
        return data


def _check_norm(beta: K1Element, target: QuadElement, what: str) -> int:
    norm = relative_norm(beta)
    if norm == target:
        return 1
    if norm == -target:
        return -1
    raise CertificateError("NORM_MISMATCH", f"N(β) is not ±{what}", norm=str(norm), expected=str(target))


def _check_valuations(cert: BetaCertificate) -> list[dict]:
    """v_𝔔(α₁·A₁′) ≡ 0 mod p at every prime 𝔔 of K₁ over q ≠ p dividing its norm."""
    p, d, field_ = cert.p, cert.disc, cert.beta.field
    base_norm = abs(cert.alpha1.norm() * absolute_norm(cert.beta))
    alpha1_k1 = K1Element.constant(field_, cert.alpha1)
    betas = conjugates(cert.beta)
    checked = []
    for q in sorted(factorint(base_norm)):
        if q == p:
            continue
        for prime in factor_rational_prime(field_, d, q, cert.prime_data.get(q)):
            # v(A₁′) = Σ i·v(σ^i β)
            v = valuation(alpha1_k1, prime) if cert.alpha1.norm() % q == 0 else 0
            v += sum(i * valuation(b, prime) for i, b in enumerate(betas) if i)
            row = prime.describe() | {"valuation": str(v)}
            checked.append(row)
            if v % p:
                raise CertificateError("VALUATION_FAIL", f"v(α₁A₁′) = {v} is not divisible by p over {q}",
                                       **{k: val for k, val in row.items() if k != "valuation"})
    if not checked:
        log.debug("No prime away from p divides the norm", norm=base_norm)
    return checked


def verify_certificate(cert: BetaCertificate, prec: int | None = None, budget: int | None = None) -> CertificateReport:
    n = settings.prec if prec is None else prec
    d, p = cert.disc, cert.p
    if n < GOLD_MIN_PRECISION:
        raise PreconditionError("PRECISION_TOO_LOW", "the mod p² verdict needs precision ≥ 3", prec=n)
    if split_type(d, p) != SplitType.SPLIT:
        raise PreconditionError("NOT_SPLIT", "p does not split in K", disc=d, p=p)
    h = class_number(d)
    if h % p == 0:
        raise PreconditionError("PRECONDITION_P_DIVIDES_H", "p divides h", disc=d, p=p, h=h)

    if cert.alpha1.is_zero():
        raise CertificateError("MALFORMED_CERTIFICATE", "α₁ must be nonzero")

    notes: list[str] = []
    if cert.alpha is not None:
        alpha, source, lambda2 = cert.alpha, "override", None
        notes.append("α supplied by the certificate; the λ ≥ 2 precondition was not checked")
    else:
        gold = gold_test(d, p, n, budget)
        alpha, source, lambda2 = gold.alpha, "field", gold.lambda_ge_2
        if not gold.lambda_ge_2:
            notes.append("λ ≥ 2 fails, so the certificate is moot")
            log.warning("Certificate skipped: λ ≥ 2 is refuted", disc=d, p=p)
            return CertificateReport(disc=d, p=p, alpha=alpha, alpha_source=source, lambda_ge_2=False,
                                     lambda_ge_3=False, notes=notes)

    sign = _check_norm(cert.beta, alpha, "α")
    checked = _check_valuations(cert)

    _, p0_tilde = prime_above(d, p)
    root = completion_root(p0_tilde, p, n)
    alpha1_embed = embed(cert.alpha1, d, p, n, root)
    by_log, by_power = gold_criteria(alpha1_embed)
    if by_log != by_power:
        raise InvariantError("INTERNAL_INCONSISTENCY", "local criteria disagree on α₁", disc=d, p=p)

    step4 = None
    if cert.beta1 is not None:
        beta1_sign = _check_norm(cert.beta1, cert.alpha1, "α₁")
        a2, b1 = step4_products(cert.beta, cert.beta1)
        step4 = {
            "status": "GATED",
            "beta1_norm_sign": str(beta1_sign),
            "a2_norm": str(absolute_norm(a2)),
            "b1_norm": str(absolute_norm(b1)),
            "a2_exponent_sum": str(sum(comb(i, 2) for i in range(p))),
        }
        notes.append("step-4 products computed; the λ ≥ 4 verdict is not issued")

    report = CertificateReport(
        disc=d,
        p=p,
        alpha=alpha,
        alpha_source=source,
        lambda_ge_2=lambda2,
        lambda_ge_3=by_log,
        norm_sign=sign,
        checked_primes=checked,
        local_log=padic_log(alpha1_embed),
        step4=step4,
        notes=notes,
    )
    log.info("Certificate verified", disc=d, p=p, lambda_ge_3=by_log, primes=len(checked), alpha_source=source)
    return report
