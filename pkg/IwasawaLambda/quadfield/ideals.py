"""Elements and ideals of the maximal order of an imaginary quadratic field, and their p-adic embeddings.

Internally elements are also written as u + v·ω with ω = (δ + √D)/2, δ = D mod 2, so an ideal is a
Z-lattice with Hermite basis {(A, 0), (B, C)} in (u, v) coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

from sympy import igcdex

from IwasawaLambda.config import settings
from IwasawaLambda.errors import BudgetError, InvariantError, PreconditionError
from IwasawaLambda.logger import log
from IwasawaLambda.padic import PadicInt, hensel_sqrt
from IwasawaLambda.quadfield.forms import QuadForm, SplitType, require_fundamental, split_type


@dataclass(frozen=True)
class QuadElement:
    """(x + y·√D)/den with den ∈ {1, 2}; den = 2 only when den = 1 is impossible."""

    disc: int
    x: int
    y: int
    den: int = 1

    def __post_init__(self):
        x, y, den = self.x, self.y, self.den
        if den not in (1, 2, 4):
            raise ValueError("den must be 1 or 2")
        while den > 1 and x % 2 == 0 and y % 2 == 0:
            x, y, den = x // 2, y // 2, den // 2
        if den == 4:
            raise ValueError("element is not integral")
        if den == 2:
            ok = (x - y) % 2 == 0 if self.disc % 4 == 1 else x % 2 == 0
            if not ok:
                raise ValueError("element is not integral")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "den", den)

    @classmethod
    def from_int(cls, disc: int, n: int) -> QuadElement:
        return cls(disc, n, 0, 1)

    @classmethod
    def from_uv(cls, disc: int, u: int, v: int) -> QuadElement:
        delta = disc % 2
        return cls(disc, 2 * u + v * delta, v, 2)

    def uv(self) -> tuple[int, int]:
        delta = self.disc % 2
        return (self.x - self.y * delta) // self.den, 2 * self.y // self.den

    def _check(self, other: QuadElement) -> None:
        if other.disc != self.disc:
            raise PreconditionError("PARAMETER_MISMATCH", "elements of different fields",
                                    left=self.disc, right=other.disc)

    def _lift(self, other) -> QuadElement:
        if isinstance(other, int):
            return QuadElement.from_int(self.disc, other)
        self._check(other)
        return other

    def __add__(self, other) -> QuadElement:
        o = self._lift(other)
        return QuadElement(self.disc, self.x * o.den + o.x * self.den, self.y * o.den + o.y * self.den,
                           self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> QuadElement:
        return QuadElement(self.disc, -self.x, -self.y, self.den)

    def __sub__(self, other) -> QuadElement:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> QuadElement:
        return self._lift(other) - self

    def __mul__(self, other) -> QuadElement:
        o = self._lift(other)
        d = self.disc
        return QuadElement(d, self.x * o.x + d * self.y * o.y, self.x * o.y + self.y * o.x, self.den * o.den)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> QuadElement:
        if e < 0:
            raise ValueError("negative powers leave the ring of integers")
        result, base = QuadElement.from_int(self.disc, 1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self) -> QuadElement:
        return QuadElement(self.disc, self.x, -self.y, self.den)

    def norm(self) -> int:
        return (self.x * self.x - self.disc * self.y * self.y) // (self.den * self.den)

    def trace(self) -> int:
        return 2 * self.x // self.den

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_rational(self) -> bool:
        return self.y == 0

    def to_json(self) -> list[str]:
        return [str(self.x), str(self.y), str(self.den)]

    @classmethod
    def from_json(cls, disc: int, data) -> QuadElement:
        x, y, den = (int(v) for v in data)
        return cls(disc, x, y, den)

    def __str__(self) -> str:
        body = f"{self.x}{self.y:+d}√{self.disc}" if self.y else f"{self.x}"
        return f"({body})/{self.den}" if self.den != 1 else body


def _hnf2(vectors: list[tuple[int, int]]) -> tuple[int, int, int]:
    """Hermite basis (A, B, C) of the Z-span of rank-2 integer vectors: {(A, 0), (B, C)}, 0 ≤ B < A."""
    pivot: tuple[int, int] | None = None
    a_gcd = 0
    for u, v in vectors:
        if v == 0:
            a_gcd = gcd(a_gcd, u)
            continue
        if pivot is None:
            pivot = (u, v) if v > 0 else (-u, -v)
            continue
        pu, pv = pivot
        s, t, g = igcdex(pv, v)
        a_gcd = gcd(a_gcd, (v // g) * pu - (pv // g) * u)
        pivot = (s * pu + t * u, g)
    if pivot is None or a_gcd == 0:
        raise ValueError("vectors do not span a full lattice")
    return a_gcd, pivot[0] % a_gcd, pivot[1]


@dataclass(frozen=True, eq=False)
class QuadIdeal:
    """content · [a, (b + √D)/2] with b² ≡ D (mod 4a)."""

    disc: int
    a: int
    b: int
    content: int = 1

    def __post_init__(self):
        if self.a <= 0 or self.content <= 0:
            raise ValueError("a and content must be positive")
        if (self.b * self.b - self.disc) % (4 * self.a) != 0:
            raise ValueError("b² must be congruent to D modulo 4a")

    @classmethod
    def unit(cls, disc: int) -> QuadIdeal:
        return cls(disc, 1, disc % 2)

    @classmethod
    def from_hnf(cls, disc: int, big_a: int, big_b: int, big_c: int) -> QuadIdeal:
        if big_a % big_c or big_b % big_c:
            raise ValueError("lattice is not an ideal")
        delta = disc % 2
        a = big_a // big_c
        return cls(disc, a, 2 * ((big_b // big_c) % a) + delta, big_c)

    def hnf(self) -> tuple[int, int, int]:
        delta = self.disc % 2
        a = self.content * self.a
        return a, (self.content * ((self.b - delta) // 2)) % a, self.content

    def generators(self) -> list[QuadElement]:
        big_a, big_b, big_c = self.hnf()
        return [QuadElement.from_uv(self.disc, big_a, 0), QuadElement.from_uv(self.disc, big_b, big_c)]

    @property
    def norm(self) -> int:
        return self.content * self.content * self.a

    def conj(self) -> QuadIdeal:
        return QuadIdeal(self.disc, self.a, -self.b, self.content)

    def contains(self, elem: QuadElement) -> bool:
        big_a, big_b, big_c = self.hnf()
        u, v = elem.uv()
        if v % big_c:
            return False
        return (u - (v // big_c) * big_b) % big_a == 0

    def __mul__(self, other: QuadIdeal) -> QuadIdeal:
        if other.disc != self.disc:
            raise PreconditionError("PARAMETER_MISMATCH", "ideals of different fields")
        products = [g1 * g2 for g1 in self.generators() for g2 in other.generators()]
        return QuadIdeal.from_hnf(self.disc, *_hnf2([e.uv() for e in products]))

    def __pow__(self, e: int) -> QuadIdeal:
        result, base = QuadIdeal.unit(self.disc), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuadIdeal):
            return NotImplemented
        return self.disc == other.disc and self.hnf() == other.hnf()

    def __hash__(self) -> int:
        return hash((self.disc, self.hnf()))

    def __str__(self) -> str:
        body = f"[{self.a}, ({self.b}+√{self.disc})/2]"
        return body if self.content == 1 else f"{self.content}·{body}"


def prime_above(d: int, p: int) -> tuple[QuadIdeal, QuadIdeal]:
    """(𝔓₀, 𝔓̃₀) = ([p, (b+√D)/2], [p, (−b+√D)/2]) with b ≥ 0 smallest, b² ≡ D (mod 4p)."""
    require_fundamental(d)
    if split_type(d, p) != SplitType.SPLIT:
        raise PreconditionError("NOT_SPLIT", "p does not split in K", disc=d, p=p)
    b = next(b for b in range(2 * p) if (b * b - d) % (4 * p) == 0)
    return QuadIdeal(d, p, b), QuadIdeal(d, p, -b)


def unit_group(d: int) -> list[QuadElement]:
    """The roots of unity of K: elements (x + y√D)/2 with x² − D·y² = 4."""
    units = set()
    for y in range(isqrt(4 // -d) + 1):
        rest = 4 + d * y * y
        x = isqrt(rest)
        if x * x != rest:
            continue
        for sx in {x, -x}:
            for sy in {y, -y}:
                try:
                    units.add(QuadElement(d, sx, sy, 2))
                except ValueError:
                    continue
    return sorted(units, key=lambda e: (e.y * 2 // e.den, -e.x * 2 // e.den))


def _reduce_tracking(a: int, b: int, c: int, e1: QuadElement, e2: QuadElement):
    """Reduces (a, b, c) as QuadForm.reduced does, carrying the basis (e1, e2) along the substitutions."""
    r = (a - b) // (2 * a)
    a, b, c = a, b + 2 * r * a, a * r * r + b * r + c
    e2 = e2 + e1 * r
    while a > c or (a == c and b < 0):
        s = (c + b) // (2 * c)
        a, b, c = c, -b + 2 * s * c, c * s * s - b * s + a
        e1, e2 = e2, e2 * s - e1
    return QuadForm(a, b, c), e1


def principal_generator(ideal: QuadIdeal, budget: int | None = None) -> QuadElement:
    """A generator of a principal ideal, normalized to y ≥ 0 minimal, then x > 0.

    The norm form N(x·e1 + y·e2)/a of the primitive part is reduced while tracking its basis; the ideal is
    principal exactly when the reduced form is the principal form, and then e1 generates it.
    """
    d = ideal.disc
    target = ideal.norm
    limit = settings.enum_budget if budget is None else budget
    if target > limit:
        raise BudgetError("ideal norm exceeds the enumeration budget", norm=target, budget=limit)
    a, b = ideal.a, ideal.b
    e1 = QuadElement.from_int(d, a)
    e2 = QuadElement(d, b, 1, 2)
    form, gen = _reduce_tracking(a, b, (b * b - d) // (4 * a), e1, e2)
    if form != QuadForm.identity(d):
        raise PreconditionError("NOT_PRINCIPAL", "the ideal class is not trivial",
                                ideal=str(ideal), reduced=str(form))
    gen = gen * ideal.content
    if gen.norm() != target or not ideal.contains(gen):
        raise InvariantError("INTERNAL_INCONSISTENCY", "reduction produced a non-generator",
                             ideal=str(ideal), candidate=str(gen))
    associates = [gen * u for u in unit_group(d)]
    best = min((e for e in associates if e.y >= 0), key=lambda e: (e.y * 2 // e.den, -e.x * 2 // e.den))
    log.debug("Found ideal generator", ideal=str(ideal), generator=str(best))
    return best


def ideal_pow_generator(d: int, p0: QuadIdeal, h: int, budget: int | None = None) -> QuadElement:
    """α with (α) = 𝔓₀^h."""
    limit = settings.enum_budget if budget is None else budget
    if p0.norm**h > limit:
        raise BudgetError("p^h exceeds the enumeration budget", p=p0.norm, h=h, budget=limit)
    return principal_generator(p0**h, limit)


def embed(elem: QuadElement, d: int, p: int, prec: int, which_root: int) -> PadicInt:
    """Image of elem under √D ↦ t (which_root = 0) or √D ↦ p^N − t (which_root = 1)."""
    if which_root not in (0, 1):
        raise ValueError("which_root must be 0 or 1")
    t = hensel_sqrt(d, p, prec)
    root = t if which_root == 0 else -t
    return (root * elem.y + elem.x) * pow(elem.den, -1, t.modulus)


def completion_root(ideal: QuadIdeal, p: int, prec: int) -> int:
    """The which_root index of the completion at the split prime `ideal` (where (b+√D)/2 is not a unit)."""
    t = hensel_sqrt(ideal.disc, p, prec)
    return 0 if (t.value + ideal.b) % p == 0 else 1
