"""Arithmetic in K₁ = K·Q₁ written as O_K ⊗ O_{Q₁}.

An element is an integer table of shape (2, p): row 0 holds the coefficients of the period basis
b_j = (1, η₁, …, η_{p−1}) and row 1 those of ω·b_j, with ω = (δ + √D)/2 and ω² = δω + (D − δ)/4.
"""

from __future__ import annotations

from math import comb

import numpy as np

from IwasawaLambda.cyclolayer.periods import PeriodField, build_period_field, cyclotomic_units_product
from IwasawaLambda.errors import InvariantError, PreconditionError
from IwasawaLambda.quadfield.ideals import QuadElement


class K1Element:
    __slots__ = ("field", "disc", "data")

    def __init__(self, field: PeriodField, disc: int, data):
        arr = np.array(data, dtype=object)
        if arr.shape != (2, field.p):
            raise ValueError(f"K₁ data must have shape (2, {field.p})")
        self.field = field
        self.disc = disc
        self.data = arr

    @classmethod
    def zero(cls, field: PeriodField, disc: int) -> K1Element:
        return cls(field, disc, np.zeros((2, field.p), dtype=object))

    @classmethod
    def one(cls, field: PeriodField, disc: int) -> K1Element:
        return cls.constant(field, QuadElement.from_int(disc, 1))

    @classmethod
    def constant(cls, field: PeriodField, c: QuadElement) -> K1Element:
        u, v = c.uv()
        data = np.zeros((2, field.p), dtype=object)
        data[0, 0], data[1, 0] = u, v
        return cls(field, c.disc, data)

    @classmethod
    def from_rational_vector(cls, field: PeriodField, disc: int, coords) -> K1Element:
        """An element of O_{Q₁} given by integer period coordinates."""
        data = np.zeros((2, field.p), dtype=object)
        data[0] = [int(c) for c in coords]
        return cls(field, disc, data)

    @classmethod
    def from_quad(cls, field: PeriodField, coeffs: list[QuadElement]) -> K1Element:
        if len(coeffs) != field.p:
            raise PreconditionError("PARAMETER_MISMATCH", "need one K-coefficient per period basis element",
                                    expected=field.p, got=len(coeffs))
        disc = coeffs[0].disc
        data = np.zeros((2, field.p), dtype=object)
        for j, c in enumerate(coeffs):
            if c.disc != disc:
                raise PreconditionError("PARAMETER_MISMATCH", "coefficients from different fields")
            data[0, j], data[1, j] = c.uv()
        return cls(field, disc, data)

    @property
    def coeffs(self) -> tuple[QuadElement, ...]:
        return tuple(QuadElement.from_uv(self.disc, int(self.data[0, j]), int(self.data[1, j]))
                     for j in range(self.field.p))

    def _check(self, other: K1Element) -> None:
        if other.field is not self.field or other.disc != self.disc:
            raise PreconditionError("PARAMETER_MISMATCH", "K₁ elements over different fields",
                                    left=(self.disc, self.field.p), right=(other.disc, other.field.p))

    def __add__(self, other: K1Element) -> K1Element:
        self._check(other)
        return K1Element(self.field, self.disc, self.data + other.data)

    def __sub__(self, other: K1Element) -> K1Element:
        self._check(other)
        return K1Element(self.field, self.disc, self.data - other.data)

    def __neg__(self) -> K1Element:
        return K1Element(self.field, self.disc, -self.data)

    def __mul__(self, other) -> K1Element:
        if isinstance(other, int):
            return K1Element(self.field, self.disc, self.data * other)
        if isinstance(other, QuadElement):
            other = K1Element.constant(self.field, other)
        self._check(other)
        f, d = self.field, self.disc
        delta = d % 2
        a, b = self.data
        c, e = other.data
        ac, ae, bc, be = f.mul(a, c), f.mul(a, e), f.mul(b, c), f.mul(b, e)
        out = np.empty((2, f.p), dtype=object)
        out[0] = ac + be * ((d - delta) // 4)
        out[1] = ae + bc + be * delta
        return K1Element(f, d, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> K1Element:
        if e < 0:
            raise ValueError("negative powers are not supported")
        result, base = K1Element.one(self.field, self.disc), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, K1Element):
            return NotImplemented
        return self.field is other.field and self.disc == other.disc and bool(np.array_equal(self.data, other.data))

    def __hash__(self) -> int:
        return hash((self.disc, self.field.p, tuple(self.data.flatten().tolist())))

    def sigma(self) -> K1Element:
        f = self.field
        return K1Element(f, self.disc, np.stack([f.sigma(self.data[0]), f.sigma(self.data[1])]))

    def is_constant(self) -> bool:
        return not self.data[:, 1:].any()

    def is_zero(self) -> bool:
        return not self.data.any()

    def divisible_by(self, m: int) -> bool:
        return all(int(x) % m == 0 for x in self.data.flatten())

    def reduced_mod(self, m: int) -> K1Element:
        """Coordinates reduced into [0, m); an element of O/mO."""
        return K1Element(self.field, self.disc, self.data % m)

    def to_json(self) -> list[list[str]]:
        return [c.to_json() for c in self.coeffs]

    def __repr__(self) -> str:
        return f"K1Element(D={self.disc}, p={self.field.p}, coeffs=[{', '.join(str(c) for c in self.coeffs)}])"


def k1_add(x: K1Element, y: K1Element) -> K1Element:
    return x + y


def k1_mul(x: K1Element, y: K1Element) -> K1Element:
    return x * y


def sigma_apply(e: K1Element, times: int = 1) -> K1Element:
    for _ in range(times % e.field.p):
        e = e.sigma()
    return e


def conjugates(e: K1Element) -> list[K1Element]:
    out = [e]
    for _ in range(e.field.p - 1):
        out.append(out[-1].sigma())
    return out


def relative_norm(e: K1Element) -> QuadElement:
    """N_{K₁/K}(e) = Π σ^i(e)."""
    if e.is_zero():
        raise PreconditionError("PARAMETER_MISMATCH", "the norm of zero is not taken")
    prod = K1Element.one(e.field, e.disc)
    for c in conjugates(e):
        prod = prod * c
    if not prod.is_constant():
        raise InvariantError("INTERNAL_INCONSISTENCY", "relative norm does not lie in K", element=repr(e))
    return QuadElement.from_uv(e.disc, int(prod.data[0, 0]), int(prod.data[1, 0]))


def absolute_norm(e: K1Element) -> int:
    return relative_norm(e).norm()


def eta_element(p: int, disc: int = -3) -> K1Element:
    """η₁ = N_{Q(μ_{p²})/Q₁}(1 − ζ_{p²}) in period coordinates, viewed inside K₁."""
    field = build_period_field(p)
    coords = field.from_group_ring(cyclotomic_units_product(p))
    return K1Element.from_rational_vector(field, disc, coords)


def a_product(beta: K1Element, j: int) -> K1Element:
    """A_j = Π_{i<p} σ^i(β^C(i,j))."""
    p = beta.field.p
    if not 1 <= j < p:
        raise PreconditionError("ORDER_OUT_OF_RANGE", "the order must satisfy 1 ≤ j < p", j=j, p=p)
    result = K1Element.one(beta.field, beta.disc)
    for i, conj in enumerate(conjugates(beta)):
        exponent = comb(i, j)
        if exponent:
            result = result * conj**exponent
    return result


def group_ring_identity(p: int, n: int) -> bool:
    """(σ−1)·Σ C(i,n)σ^i + σ·Σ C(i,n−1)σ^i = C(p,n) in Z[σ]/(σ^p − 1)."""
    if not 1 <= n < p:
        raise PreconditionError("ORDER_OUT_OF_RANGE", "the order must satisfy 1 ≤ n < p", n=n, p=p)

    def binomial_sum(k: int) -> np.ndarray:
        return np.array([comb(i, k) for i in range(p)], dtype=object)

    def times_sigma(poly: np.ndarray) -> np.ndarray:
        return np.roll(poly, 1)

    first = times_sigma(binomial_sum(n)) - binomial_sum(n)
    second = times_sigma(binomial_sum(n - 1))
    expected = np.zeros(p, dtype=object)
    expected[0] = comb(p, n)
    return bool(np.array_equal(first + second, expected))


def lemma_a_identities(beta: K1Element) -> dict[int, bool]:
    """For each 1 ≤ n < p: σ(A₁)·N(β) = β^p·A₁ and σ(A_n)·σ(A_{n−1}) = β^C(p,n)·A_n for n ≥ 2."""
    p = beta.field.p
    norm = K1Element.constant(beta.field, relative_norm(beta))
    products = {n: a_product(beta, n) for n in range(1, p)}
    results = {1: products[1].sigma() * norm == beta**p * products[1]}
    for n in range(2, p):
        lhs = products[n].sigma() * products[n - 1].sigma()
        results[n] = lhs == beta ** comb(p, n) * products[n]
    return results


def step4_products(beta: K1Element, beta1: K1Element) -> tuple[K1Element, K1Element]:
    """A₂′ = Π σ^i(β^(i(i−1)/2)) and B₁′ = Π σ^i(β₁^i) for the λ ≥ 4 step."""
    beta._check(beta1)
    if beta.field.p < 3:
        raise PreconditionError("ORDER_OUT_OF_RANGE", "step 4 needs p ≥ 3")
    return a_product(beta, 2), a_product(beta1, 1)
