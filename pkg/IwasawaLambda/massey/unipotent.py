"""Upper unitriangular matrices over F_p and the groups M_n generated inside them."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sympy import isprime

from IwasawaLambda.cohomology.group import FiniteGroup
from IwasawaLambda.config import settings
from IwasawaLambda.errors import BudgetError, InvariantError, PreconditionError
from IwasawaLambda.logger import log


@dataclass(frozen=True, eq=False)
class UnipotentMatrix:
    p: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.p < 2 or not isprime(self.p):
            raise ValueError("p must be a prime")
        arr = np.mod(np.asarray(self.entries, dtype=np.int64), self.p)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("entries must form a square matrix")
        if not np.array_equal(np.tril(arr), np.eye(arr.shape[0], dtype=np.int64)):
            raise ValueError("matrix must be upper unitriangular")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def identity(cls, p: int, size: int) -> UnipotentMatrix:
        return cls(p, np.eye(size, dtype=np.int64))

    @classmethod
    def elementary(cls, p: int, size: int, i: int, j: int, value: int = 1) -> UnipotentMatrix:
        """I + value·e_{ij} for i < j."""
        if not 0 <= i < j < size:
            raise ValueError("elementary matrices need 0 ≤ i < j < size")
        m = np.eye(size, dtype=np.int64)
        m[i, j] = value
        return cls(p, m)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def __matmul__(self, other: UnipotentMatrix) -> UnipotentMatrix:
        if other.p != self.p or other.size != self.size:
            raise PreconditionError("PARAMETER_MISMATCH", "unipotent matrices of different shape or prime")
        return UnipotentMatrix(self.p, self.entries @ other.entries)

    __mul__ = __matmul__

    def __pow__(self, e: int) -> UnipotentMatrix:
        if e < 0:
            return self.inverse() ** (-e)
        result, base = UnipotentMatrix.identity(self.p, self.size), self
        while e:
            if e & 1:
                result = result @ base
            e >>= 1
            if e:
                base = base @ base
        return result

    def inverse(self) -> UnipotentMatrix:
        """(I + N)⁻¹ = Σ (−N)^k, finite since N is nilpotent."""
        nil = self.entries - np.eye(self.size, dtype=np.int64)
        term = np.eye(self.size, dtype=np.int64)
        total = term.copy()
        for _ in range(self.size - 1):
            term = (-term @ nil) % self.p
            total += term
        return UnipotentMatrix(self.p, total)

    def commutator(self, other: UnipotentMatrix) -> UnipotentMatrix:
        """[a, b] = a·b·a⁻¹·b⁻¹."""
        return self @ other @ self.inverse() @ other.inverse()

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.entries, np.eye(self.size, dtype=np.int64)))

    def order(self) -> int:
        k, x = 1, self
        while not x.is_identity():
            x = x @ self
            k += 1
        return k

    def __eq__(self, other) -> bool:
        if not isinstance(other, UnipotentMatrix):
            return NotImplemented
        return self.p == other.p and bool(np.array_equal(self.entries, other.entries))

    def __hash__(self) -> int:
        return hash((self.p, self.entries.tobytes()))

    def __repr__(self) -> str:
        return f"UnipotentMatrix(p={self.p}, {self.entries.tolist()})"


@dataclass(frozen=True, eq=False)
class MnGroup:
    """M_n = ⟨s, t₀⟩ ⊂ U_{n+2}(F_p) with t_{k+1} = [s, t_k]; t holds the element indices of t₀, …, t_n."""

    p: int
    n: int
    group: FiniteGroup
    matrices: np.ndarray = field(repr=False)
    s: int
    t: tuple[int, ...]

    def matrix(self, g: int) -> UnipotentMatrix:
        return UnipotentMatrix(self.p, self.matrices[g])

    def relations(self) -> dict[str, bool]:
        """The defining relations of M_n, checked on the multiplication table."""
        g, e, p = self.group, self.group.identity, self.p
        return {
            "s^p = 1": g.power(self.s, p) == e,
            "t_i^p = 1": all(g.power(t, p) == e for t in self.t),
            "[t_i, t_j] = 1": all(g.commutator(a, b) == e for a in self.t for b in self.t),
            "[s, t_i] = t_(i+1)": all(g.commutator(self.s, self.t[i]) == self.t[i + 1] for i in range(self.n)),
            "[s, t_n] = 1": g.commutator(self.s, self.t[-1]) == e,
        }

    def center_contains_top(self) -> bool:
        top = self.t[-1]
        return all(self.group.mul(top, x) == self.group.mul(x, top) for x in self.group.generators)


def _mn_generators(p: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    size = n + 2
    s = np.eye(size, dtype=np.int64)
    for i in range(n):
        s[i, i + 1] = 1
    t0 = np.eye(size, dtype=np.int64)
    t0[n, n + 1] = 1
    return s, t0


def _close_mn(p: int, n: int, max_order: int | None) -> MnGroup:
    if n < 1 or n > p - 1:
        raise PreconditionError("ORDER_OUT_OF_RANGE", "M_n is built for 1 ≤ n ≤ p − 1", n=n, p=p)
    if n + 2 > settings.max_matrix_size:
        raise BudgetError("matrix size exceeds LAMBDA_MAX_MATRIX_SIZE", size=n + 2, cap=settings.max_matrix_size)
    cap = settings.max_group_order if max_order is None else max_order
    if p ** (n + 2) > cap:
        raise BudgetError("|M_n| = p^(n+2) exceeds the order cap", order=p ** (n + 2), cap=cap)
    s, t0 = _mn_generators(p, n)
    group, matrices = FiniteGroup.from_matrices([s, t0], p, max_order=cap, name=f"M_{n}")
    s_idx, t_idx = group.generators
    t = [t_idx]
    for _ in range(n):
        t.append(group.commutator(s_idx, t[-1]))
    return MnGroup(p, n, group, matrices, s_idx, tuple(t))


def build_Mn(p: int, n: int, max_order: int | None = None) -> MnGroup:
    """M_n by closure, checked against its relations, its order p^(n+2) and the tower map onto M_{n−1}."""
    mn = _close_mn(p, n, max_order)
    failed = [name for name, ok in mn.relations().items() if not ok]
    if failed:
        raise InvariantError("INTERNAL_INCONSISTENCY", "M_n violates its relations", n=n, p=p, failed=failed)
    if mn.group.order != p ** (n + 2):
        raise InvariantError("INTERNAL_INCONSISTENCY", "|M_n| is not p^(n+2)", n=n, p=p, order=mn.group.order)
    if not mn.center_contains_top():
        raise InvariantError("INTERNAL_INCONSISTENCY", "t_n is not central", n=n, p=p)
    if quotient_map(mn, max_order) is None:
        raise InvariantError("INTERNAL_INCONSISTENCY", "M_n/⟨t_n⟩ is not M_(n−1)", n=n, p=p)
    log.info("Built M_n", p=p, n=n, order=mn.group.order)
    return mn


def quotient_map(mn: MnGroup, max_order: int | None = None) -> np.ndarray | None:
    """The isomorphism M_n/⟨t_n⟩ → M_{n−1} with s ↦ s, t₀ ↦ t₀, or None; M_0 is Z/p × Z/p."""
    group, p = mn.group, mn.p
    quotient, projection = group.quotient(group.closure([mn.t[-1]]), name=f"M_{mn.n}/<t_n>")
    if mn.n == 1:
        lower = FiniteGroup.direct_product(FiniteGroup.cyclic(p), FiniteGroup.cyclic(p))
        lower_s, lower_t = p, 1
    else:
        below = _close_mn(p, mn.n - 1, max_order)
        lower, lower_s, lower_t = below.group, below.s, below.t[0]
    images = {int(projection[mn.s]): lower_s, int(projection[mn.t[0]]): lower_t}
    if len(images) != 2:
        return None
    return quotient.isomorphism_via(lower, [images[g] for g in quotient.generators])
