"""p-adic integers at explicit finite precision: Hensel square roots, the logarithm and Teichmüller lifts."""

from __future__ import annotations

from dataclasses import dataclass

from sympy import isprime
from sympy.ntheory import legendre_symbol, sqrt_mod

from IwasawaLambda.errors import InvariantError, PreconditionError

GOLD_MIN_PRECISION = 3


def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class PadicInt:
    p: int
    prec: int
    value: int

    def __post_init__(self):
        if self.p <= 2 or not isprime(self.p):
            raise ValueError("p must be an odd prime")
        if self.prec < 1:
            raise ValueError("precision must be positive")
        object.__setattr__(self, "value", self.value % self.p**self.prec)

    @property
    def modulus(self) -> int:
        return self.p**self.prec

    def _coerce(self, other) -> tuple[int, int]:
        """Return (value, precision) of `other` compatible with self."""
        if isinstance(other, PadicInt):
            if other.p != self.p:
                raise PreconditionError("PARAMETER_MISMATCH", "p-adic operands over different primes",
                                        left=self.p, right=other.p)
            return other.value, other.prec
        if isinstance(other, int):
            return other, self.prec
        raise TypeError(f"cannot combine PadicInt with {type(other).__name__}")

    def __add__(self, other) -> PadicInt:
        v, n = self._coerce(other)
        return PadicInt(self.p, min(self.prec, n), self.value + v)

    __radd__ = __add__

    def __sub__(self, other) -> PadicInt:
        v, n = self._coerce(other)
        return PadicInt(self.p, min(self.prec, n), self.value - v)

    def __rsub__(self, other) -> PadicInt:
        v, n = self._coerce(other)
        return PadicInt(self.p, min(self.prec, n), v - self.value)

    def __neg__(self) -> PadicInt:
        return PadicInt(self.p, self.prec, -self.value)

    def __mul__(self, other) -> PadicInt:
        v, n = self._coerce(other)
        return PadicInt(self.p, min(self.prec, n), self.value * v)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> PadicInt:
        if e < 0:
            return self.inverse() ** (-e)
        return PadicInt(self.p, self.prec, pow(self.value, e, self.modulus))

    def is_unit(self) -> bool:
        return self.value % self.p != 0

    def valuation(self) -> int:
        """v_p of the value; equals prec when the value is 0 at this precision."""
        if self.value == 0:
            return self.prec
        return _vp(self.value, self.p)

    def inverse(self) -> PadicInt:
        if not self.is_unit():
            raise PreconditionError("NOT_A_UNIT", "only units are invertible", value=str(self))
        return PadicInt(self.p, self.prec, pow(self.value, -1, self.modulus))

    def congruent(self, other, k: int) -> bool:
        v, _ = self._coerce(other)
        return (self.value - v) % self.p**k == 0

    def __str__(self) -> str:
        return f"{self.value} mod {self.p}^{self.prec}"


def _check_prime(p: int) -> None:
    if p <= 2 or not isprime(p):
        raise ValueError("p must be an odd prime")


def hensel_sqrt(d: int, p: int, prec: int) -> PadicInt:
    """Square root of d modulo p^prec, lifted from the smallest positive root mod p."""
    _check_prime(p)
    if d % p == 0 or legendre_symbol(d % p, p) != 1:
        raise PreconditionError("NOT_A_RESIDUE", "d is not a nonzero quadratic residue", d=d, p=p)
    t = min(sqrt_mod(d % p, p, all_roots=True))
    modulus = p
    for _ in range(1, prec):
        modulus *= p
        t = (t - (t * t - d) * pow(2 * t, -1, modulus)) % modulus
    return PadicInt(p, prec, t)


def _principal_log(w: int, p: int, prec: int) -> int:
    """log(w) mod p^prec for w ≡ 1 mod p, summing terms with k - v_p(k) < prec.

    With w - 1 = p*y each term p^(k-v) y^k / k' is an integer, so the sum is exact at full precision.
    """
    modulus = p**prec
    y = ((w - 1) % modulus) // p
    total = 0
    for k in range(1, 2 * prec + 3):
        v = _vp(k, p)
        if k - v >= prec:
            continue
        unit = k // p**v
        term = p ** (k - v) * pow(y, k, modulus) * pow(unit, -1, modulus)
        total += term if k % 2 == 1 else -term
    return total % modulus


def padic_log(u: PadicInt) -> PadicInt:
    """log_p(u) = log(u^(p-1)) / (p-1); always ≡ 0 mod p."""
    if not u.is_unit():
        raise PreconditionError("NOT_A_UNIT", "the logarithm is taken on units only", value=str(u))
    p, n = u.p, u.prec
    w = pow(u.value, p - 1, u.modulus)
    log_w = _principal_log(w, p, n)
    return PadicInt(p, n, log_w * pow(p - 1, -1, u.modulus))


def log_normalized(u: PadicInt) -> PadicInt:
    """log_p(u) / log_p(1+p): the Z_p-coordinate of u in the norm-group map, one digit coarser."""
    if u.prec < 2:
        raise PreconditionError("PRECISION_TOO_LOW", "need precision at least 2", prec=u.prec)
    p, n = u.p, u.prec
    num = padic_log(u).value // p
    den = padic_log(PadicInt(p, n, 1 + p)).value // p
    mod = p ** (n - 1)
    return PadicInt(p, n - 1, num * pow(den, -1, mod))


def teichmuller(a: PadicInt) -> PadicInt:
    if not a.is_unit():
        raise PreconditionError("NOT_A_UNIT", "Teichmüller lift needs a unit", value=str(a))
    x = a.value
    for _ in range(a.prec + 1):
        nxt = pow(x, a.p, a.modulus)
        if nxt == x:
            break
        x = nxt
    return PadicInt(a.p, a.prec, x)


def principal_part(a: PadicInt) -> PadicInt:
    """The 1-unit component a·ω(a)^(-1) of the Teichmüller decomposition."""
    return a * teichmuller(a).inverse()


def gold_criteria(alpha_embed: PadicInt) -> tuple[bool, bool]:
    """Both local criteria: (log_p ≡ 0 mod p², α^(p-1) ≡ 1 mod p²)."""
    if alpha_embed.prec < GOLD_MIN_PRECISION:
        raise PreconditionError("PRECISION_TOO_LOW", "the mod p² verdict needs precision ≥ 3",
                                prec=alpha_embed.prec)
    if not alpha_embed.is_unit():
        raise PreconditionError("NOT_A_UNIT", "the embedded element must be a p-adic unit", value=str(alpha_embed))
    p = alpha_embed.p
    by_log = padic_log(alpha_embed).value % (p * p) == 0
    by_power = pow(alpha_embed.value, p - 1, p * p) == 1
    return by_log, by_power


def gold_local_test(alpha_embed: PadicInt) -> bool:
    by_log, by_power = gold_criteria(alpha_embed)
    if by_log != by_power:
        raise InvariantError("INTERNAL_INCONSISTENCY", "log and power criteria disagree", value=str(alpha_embed))
    return by_log
