"""Binary quadratic forms of negative fundamental discriminant and the class group they model."""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum
from math import gcd

from sympy import factorint, igcdex
from sympy.ntheory import jacobi_symbol, legendre_symbol

from IwasawaLambda.errors import PreconditionError
from IwasawaLambda.logger import log


class SplitType(StrEnum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in factorint(abs(n)).values())


def is_fundamental(d: int) -> bool:
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return _squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def require_fundamental(d: int) -> None:
    if d >= 0 or not is_fundamental(d):
        raise PreconditionError("NOT_FUNDAMENTAL", "expected a negative fundamental discriminant", disc=d)


@dataclass(frozen=True)
class QuadField:
    disc: int

    def __post_init__(self):
        require_fundamental(self.disc)

    @property
    def w(self) -> int:
        return {-3: 6, -4: 4}.get(self.disc, 2)


def solve_linmod(a: int, b: int, m: int) -> tuple[int, int]:
    """Solve a·x ≡ b (mod m); solutions are u + v·n."""
    s, _, g = igcdex(a, m)
    if b % g != 0:
        raise ValueError("no solution")
    return (b // g) * s % m, m // g


@dataclass(frozen=True)
class QuadForm:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("forms must be positive definite (a > 0)")

    @classmethod
    def identity(cls, d: int) -> QuadForm:
        k = d % 2
        return cls(1, k, (k * k - d) // 4)

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def normalized(self) -> QuadForm:
        a, b, c = self.a, self.b, self.c
        r = (a - b) // (2 * a)
        return QuadForm(a, b + 2 * r * a, a * r * r + b * r + c)

    def reduced(self) -> QuadForm:
        f = self.normalized()
        a, b, c = f.a, f.b, f.c
        while a > c or (a == c and b < 0):
            s = (c + b) // (2 * c)
            a, b, c = c, -b + 2 * s * c, c * s * s - b * s + a
        return QuadForm(a, b, c)

    def inverse(self) -> QuadForm:
        return QuadForm(self.a, -self.b, self.c).reduced()

    def __mul__(self, other: QuadForm) -> QuadForm:
        """Gauss composition, reduced."""
        if other.discriminant != self.discriminant:
            raise PreconditionError("PARAMETER_MISMATCH", "forms of different discriminant")
        a1, b1, c1 = self.a, self.b, self.c
        a2, b2 = other.a, other.b
        g = (b1 + b2) // 2
        h = (b2 - b1) // 2
        w = gcd(gcd(a1, a2), g)
        s, t, u = a1 // w, a2 // w, g // w
        k_temp, step = solve_linmod(t * u, h * u + s * c1, s * t)
        n, _ = solve_linmod(t * step, h - t * k_temp, s)
        k = k_temp + step * n
        ll = (t * k - h) // s
        m = (t * u * k - h * u - s * c1) // (s * t)
        return QuadForm(s * t, w * u - (k * t + ll * s), k * ll - w * m).reduced()

    def __pow__(self, n: int) -> QuadForm:
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadForm.identity(self.discriminant)
        base = self.reduced()
        while n > 0:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_identity(self) -> bool:
        return self.reduced() == QuadForm.identity(self.discriminant)

    def order(self) -> int:
        f, k = self.reduced(), 1
        while not f.is_identity():
            f = f * self
            k += 1
        return k

    def equivalent_coprime_to(self, p: int) -> QuadForm:
        """A properly equivalent (not necessarily reduced) form whose leading coefficient is prime to p."""
        a, b, c = self.a, self.b, self.c
        for cand in (QuadForm(a, b, c), QuadForm(c, -b, a), QuadForm(a + b + c, b + 2 * c, c)):
            if cand.a % p != 0:
                return cand
        raise PreconditionError("INTERNAL_INCONSISTENCY", "no equivalent form prime to p", form=str(self))

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


def reduced_forms(d: int) -> list[QuadForm]:
    """All reduced primitive positive-definite forms of discriminant d; the count is h_K."""
    require_fundamental(d)
    forms = []
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a + 1, a + 1):
            if (b - d) % 2 != 0:
                continue
            num = b * b - d
            if num % (4 * a) != 0:
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            forms.append(QuadForm(a, b, c))
        a += 1
    forms.sort(key=lambda f: (f.a, abs(f.b), -f.b))
    log.debug("Enumerated reduced forms", disc=d, count=len(forms))
    return forms


def kronecker(d: int, k: int) -> int:
    """The Kronecker symbol (d|k) for k ≥ 1."""
    if k < 1:
        raise ValueError("k must be positive")
    result = 1
    while k % 2 == 0:
        k //= 2
        if d % 2 == 0:
            return 0
        result *= 1 if d % 8 in (1, 7) else -1
    if k == 1:
        return result
    return result * jacobi_symbol(d % k, k)


def class_number_dirichlet(d: int) -> int:
    """h = w/(2|d|) · |Σ_{k<|d|} (d|k)·k|, by exact integer arithmetic."""
    field = QuadField(d)
    n = -d
    total = sum(kronecker(d, k) * k for k in range(1, n))
    h, rem = divmod(field.w * abs(total), 2 * n)
    if rem != 0:
        raise PreconditionError("INTERNAL_INCONSISTENCY", "class number formula is not integral", disc=d)
    return h


def split_type(d: int, p: int) -> SplitType:
    symbol = legendre_symbol(d % p, p)
    if symbol == 1:
        return SplitType.SPLIT
    if symbol == -1:
        return SplitType.INERT
    return SplitType.RAMIFIED


def classes_of_order_dividing(d: int, p: int) -> list[QuadForm]:
    """Reduced forms f with f^p equal to the identity (the p-torsion of Cl(K))."""
    return [f for f in reduced_forms(d) if (f**p).is_identity()]
