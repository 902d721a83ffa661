"""The degree-p subfield Q₁ of Q(μ_{p²}) in Gaussian-period coordinates.

Periods η_i = Σ_{h∈H} ζ^{g^i h} over the order-(p−1) subgroup H of (Z/p²)^* sum to zero, so the
integral basis used everywhere is (1, η₁, …, η_{p−1}) and η₀ = −(η₁ + … + η_{p−1}).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import isqrt

import numpy as np
from sympy import Matrix, Poly, discriminant, isprime, symbols
from sympy.ntheory import is_primroot

from IwasawaLambda.config import settings
from IwasawaLambda.errors import InvariantError, PreconditionError
from IwasawaLambda.logger import log

X = symbols("x")


def smallest_primitive_root(n: int) -> int:
    return next(g for g in range(2, n) if is_primroot(g, n))


@dataclass(frozen=True, eq=False)
class PeriodField:
    p: int
    g: int
    cosets: tuple[tuple[int, ...], ...] = field(repr=False)
    mult_table: np.ndarray = field(repr=False)
    sigma_matrix: np.ndarray = field(repr=False)
    min_poly: tuple[int, ...] = ()

    @property
    def degree(self) -> int:
        return self.p

    def one(self) -> np.ndarray:
        v = np.zeros(self.p, dtype=object)
        v[0] = 1
        return v

    def zero(self) -> np.ndarray:
        return np.zeros(self.p, dtype=object)

    def eta(self, i: int) -> np.ndarray:
        """Coordinates of η_i."""
        i %= self.p
        v = self.zero()
        if i == 0:
            v[1:] = -1
        else:
            v[i] = 1
        return v

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.tensordot(np.outer(x, y), self.mult_table, axes=([0, 1], [0, 1]))

    def sigma(self, x: np.ndarray) -> np.ndarray:
        return self.sigma_matrix.dot(x)

    def mul_matrix(self, x: np.ndarray) -> Matrix:
        """Matrix of multiplication by x; column j holds x·b_j."""
        cols = []
        for j in range(self.p):
            e = self.zero()
            e[j] = 1
            cols.append([int(c) for c in self.mul(x, e)])
        return Matrix(cols).T

    def trace(self, x: np.ndarray) -> int:
        return int(self.mul_matrix(x).trace())

    def charpoly(self, x: np.ndarray) -> Poly:
        return self.mul_matrix(x).charpoly(X)

    def ring_discriminant(self) -> int:
        basis = []
        for j in range(self.p):
            e = self.zero()
            e[j] = 1
            basis.append(e)
        gram = Matrix(self.p, self.p, lambda i, j: self.trace(self.mul(basis[i], basis[j])))
        return int(gram.det())

    def index_of(self, theta: np.ndarray) -> int:
        """[O_{Q₁} : Z[θ]], or 0 when θ does not generate Q₁."""
        poly_disc = int(discriminant(self.charpoly(theta).as_expr(), X))
        if poly_disc == 0:
            return 0
        ratio = Fraction(poly_disc, self.ring_discriminant())
        if ratio.denominator != 1 or ratio < 0:
            raise InvariantError("INTERNAL_INCONSISTENCY", "index² is not a positive integer", p=self.p)
        idx = isqrt(ratio.numerator)
        if idx * idx == ratio.numerator:
            return idx
        raise InvariantError("INTERNAL_INCONSISTENCY", "index² is not a perfect square", p=self.p)

    def from_group_ring(self, r: np.ndarray) -> np.ndarray:
        """Period coordinates of Σ r_e ζ^e, assumed to lie in Q₁ (averaged over H first)."""
        n = self.p * self.p
        h_group = self.cosets[0]
        avg = [sum(int(r[(h * e) % n]) for h in h_group) for e in range(n)]
        size = len(h_group)
        const = Fraction(avg[0], size) - Fraction(avg[self.p], size)
        c = [Fraction(avg[coset[0]], size) for coset in self.cosets]
        coords = [const] + [c[k] - c[0] for k in range(1, self.p)]
        if any(v.denominator != 1 for v in coords):
            raise InvariantError("INTERNAL_INCONSISTENCY", "group-ring element is not in Z[η]", p=self.p)
        return np.array([int(v) for v in coords], dtype=object)


def _period_products(p: int, cosets: list[list[int]]) -> np.ndarray:
    """mult_table[i, j] = coordinates of b_i·b_j in the basis (1, η₁, …, η_{p−1})."""
    n = p * p
    coset_of = {}
    for k, coset in enumerate(cosets):
        for e in coset:
            coset_of[e] = k
    size = p - 1

    def eta_product(i: int, j: int) -> np.ndarray:
        const, on_p, per_coset = 0, 0, [0] * p
        for a in cosets[i]:
            for b in cosets[j]:
                e = (a + b) % n
                if e == 0:
                    const += 1
                elif e % p == 0:
                    on_p += 1
                else:
                    per_coset[coset_of[e]] += 1
        # Σ over nonzero multiples of p of ζ^e is −1, hit equally often by H-invariance
        vec = np.zeros(p, dtype=object)
        vec[0] = const - on_p // size
        counts = [c // size for c in per_coset]
        for k in range(1, p):
            vec[k] = counts[k] - counts[0]
        return vec

    table = np.zeros((p, p, p), dtype=object)
    for k in range(p):
        table[0, k, k] = 1
        table[k, 0, k] = 1
    for i in range(1, p):
        for j in range(1, p):
            table[i, j] = eta_product(i, j)
    return table


@lru_cache(maxsize=None)
def build_period_field(p: int) -> PeriodField:
    if p <= 2 or not isprime(p):
        raise ValueError("p must be an odd prime")
    if p > settings.period_degree_cap:
        raise PreconditionError("DEGREE_CAP_EXCEEDED", "p exceeds the period degree cap", p=p,
                                cap=settings.period_degree_cap)
    n = p * p
    g = smallest_primitive_root(n)
    h_group = sorted(x for x in range(1, n) if x % p and pow(x, p - 1, n) == 1)
    cosets = [sorted((pow(g, i, n) * h) % n for h in h_group) for i in range(p)]
    table = _period_products(p, cosets)

    sigma = np.zeros((p, p), dtype=object)
    sigma[0, 0] = 1
    for k in range(1, p - 1):
        sigma[k + 1, k] = 1
    sigma[1:, p - 1] = -1

    field_ = PeriodField(p=p, g=g, cosets=tuple(tuple(c) for c in cosets), mult_table=table,
                         sigma_matrix=sigma)
    poly = field_.charpoly(field_.eta(0))
    if not poly.is_irreducible:
        raise InvariantError("INTERNAL_INCONSISTENCY", "period polynomial is reducible", p=p)
    coeffs = tuple(int(c) for c in poly.all_coeffs())
    if coeffs[1] != 0:
        raise InvariantError("INTERNAL_INCONSISTENCY", "periods must have trace zero", p=p)
    _numeric_root_check(p, cosets[0], coeffs)
    object.__setattr__(field_, "min_poly", coeffs)
    log.debug("Built period field", p=p, g=g, min_poly=coeffs)
    return field_


def _numeric_root_check(p: int, h_group: list[int], coeffs: tuple[int, ...]) -> None:
    n = p * p
    eta0 = sum(np.exp(2j * np.pi * h / n) for h in h_group)
    value = np.polyval(np.array(coeffs, dtype=float), eta0)
    scale = sum(abs(c) * abs(eta0) ** k for k, c in enumerate(reversed(coeffs)))
    if abs(value) > 1e-9 * scale:
        raise InvariantError("INTERNAL_INCONSISTENCY", "η₀ is not a numerical root of its polynomial", p=p)


def cyclotomic_units_product(p: int) -> np.ndarray:
    """Group-ring coefficients of Π_{h∈H}(1 − ζ^h) in Z[Z/p²]."""
    n = p * p
    field_ = build_period_field(p)
    r = np.zeros(n, dtype=object)
    r[0] = 1
    for h in field_.cosets[0]:
        r = r - np.roll(r, h)
    return r
