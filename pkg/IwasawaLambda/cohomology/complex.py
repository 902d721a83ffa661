"""Inhomogeneous cochains in degrees ≤ 2, their differentials, cohomology bases and cup products.

A 1-cochain c is stored as an array of shape (|G|, dim M) and flattened with index g·dim + j; a 2-cochain
has shape (|G|, |G|, dim M) and index (g·|G| + h)·dim + j.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from IwasawaLambda.cohomology.module import FpModule
from IwasawaLambda.config import settings
from IwasawaLambda.errors import BudgetError, PreconditionError
from IwasawaLambda.fp_linalg import ColumnSpace, FpMatrix, kernel_basis, matmul_mod, rref
from IwasawaLambda.logger import log

MAX_DENSE_ENTRIES = 2 * 10**8


@dataclass(frozen=True, eq=False)
class Cochain1:
    module: FpModule
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.mod(np.asarray(self.values, dtype=np.int64), self.module.p)
        if values.shape != (self.module.group.order, self.module.dim):
            raise PreconditionError("PARAMETER_MISMATCH", "1-cochain has the wrong shape", shape=values.shape)
        object.__setattr__(self, "values", values)

    @classmethod
    def zero(cls, module: FpModule) -> Cochain1:
        return cls(module, np.zeros((module.group.order, module.dim), dtype=np.int64))

    @classmethod
    def from_vector(cls, module: FpModule, vec) -> Cochain1:
        return cls(module, np.asarray(vec, dtype=np.int64).reshape(module.group.order, module.dim))

    @classmethod
    def from_scalars(cls, module: FpModule, scalars) -> Cochain1:
        """A cochain into a 1-dimensional module from one value per element."""
        return cls(module, np.asarray(scalars, dtype=np.int64).reshape(-1, 1))

    @property
    def vector(self) -> np.ndarray:
        return self.values.reshape(-1)

    def __call__(self, g: int) -> np.ndarray:
        return self.values[g]

    def __add__(self, other: Cochain1) -> Cochain1:
        return Cochain1(self.module, self.values + other.values)

    def __sub__(self, other: Cochain1) -> Cochain1:
        return Cochain1(self.module, self.values - other.values)

    def scale(self, k: int) -> Cochain1:
        return Cochain1(self.module, self.values * k)

    def is_zero(self) -> bool:
        return not self.values.any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain1):
            return NotImplemented
        return self.module is other.module and bool(np.array_equal(self.values, other.values))

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Cochain2:
    module: FpModule
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        n = self.module.group.order
        values = np.mod(np.asarray(self.values, dtype=np.int64), self.module.p)
        if values.shape != (n, n, self.module.dim):
            raise PreconditionError("PARAMETER_MISMATCH", "2-cochain has the wrong shape", shape=values.shape)
        object.__setattr__(self, "values", values)

    @classmethod
    def zero(cls, module: FpModule) -> Cochain2:
        n = module.group.order
        return cls(module, np.zeros((n, n, module.dim), dtype=np.int64))

    @classmethod
    def from_vector(cls, module: FpModule, vec) -> Cochain2:
        n = module.group.order
        return cls(module, np.asarray(vec, dtype=np.int64).reshape(n, n, module.dim))

    @property
    def vector(self) -> np.ndarray:
        return self.values.reshape(-1)

    def __add__(self, other: Cochain2) -> Cochain2:
        return Cochain2(self.module, self.values + other.values)

    def __sub__(self, other: Cochain2) -> Cochain2:
        return Cochain2(self.module, self.values - other.values)

    def scale(self, k: int) -> Cochain2:
        return Cochain2(self.module, self.values * k)

    def is_zero(self) -> bool:
        return not self.values.any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain2):
            return NotImplemented
        return self.module is other.module and bool(np.array_equal(self.values, other.values))

    __hash__ = None


def d0(m, module: FpModule) -> Cochain1:
    """(d m)(g) = g·m − m."""
    m = np.asarray(m, dtype=np.int64)
    return Cochain1(module, module.mats @ m - m)


def d1(c: Cochain1) -> Cochain2:
    """(d c)(g, h) = g·c(h) − c(gh) + c(g)."""
    mod, v = c.module, c.values
    acted = np.einsum("gij,hj->ghi", mod.mats, v)
    return Cochain2(mod, acted - v[mod.group.table] + v[:, None, :])


def d2(c: Cochain2) -> np.ndarray:
    """(d c)(g, h, k) = g·c(h, k) − c(gh, k) + c(g, hk) − c(g, h), as a (|G|, |G|, |G|, dim) array."""
    mod, v = c.module, c.values
    t = mod.group.table
    acted = np.einsum("gij,hkj->ghki", mod.mats, v)
    return (acted - v[t] + v[:, t] - v[:, :, None, :]) % mod.p


@dataclass(frozen=True)
class CohomologyClass:
    """A cohomology class given by a representative cocycle."""

    representative: Cochain1 | Cochain2

    @property
    def degree(self) -> int:
        return 1 if isinstance(self.representative, Cochain1) else 2

    @property
    def module(self) -> FpModule:
        return self.representative.module

    def is_zero(self) -> bool:
        cx = cochain_complex(self.module)
        if self.degree == 1:
            return cx.is_coboundary1(self.representative)
        return cx.is_coboundary2(self.representative)

    def equals(self, other: CohomologyClass) -> bool:
        if other.module is not self.module or other.degree != self.degree:
            raise PreconditionError("PARAMETER_MISMATCH", "classes live in different groups")
        return CohomologyClass(self.representative - other.representative).is_zero()


@dataclass(frozen=True)
class CohomologyBasis:
    degree: int
    module: FpModule
    classes: tuple[CohomologyClass, ...]

    @property
    def dim(self) -> int:
        return len(self.classes)


class CochainComplex:
    """Differentials of C⁰ → C¹ → C² → C³ for one module, built lazily and cached."""

    def __init__(self, module: FpModule):
        self.module = module
        self.group = module.group
        self.p = module.p
        self.n = module.group.order
        self.d = module.dim

    def _guard(self, entries: int, what: str) -> None:
        if entries > MAX_DENSE_ENTRIES:
            raise BudgetError(f"the dense {what} matrix is too large", entries=entries, order=self.n, dim=self.d)

    @cached_property
    def d0_matrix(self) -> FpMatrix:
        eye = np.eye(self.d, dtype=np.int64)
        return FpMatrix(self.p, (self.module.mats - eye).reshape(self.n * self.d, self.d))

    @cached_property
    def d1_matrix(self) -> FpMatrix:
        n, d = self.n, self.d
        self._guard(n**3 * d**2, "d1")
        out = np.zeros((n, n, d, n, d), dtype=np.int64)
        g, h = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        eye = np.eye(d, dtype=np.int64)
        np.add.at(out, (g, h, slice(None), h), self.module.mats[g])
        np.add.at(out, (g, h, slice(None), self.group.table), -eye)
        np.add.at(out, (g, h, slice(None), g), eye)
        log.debug("Built d1", order=n, dim=d)
        return FpMatrix(self.p, out.reshape(n * n * d, n * d))

    def d2_block(self, g: int) -> np.ndarray:
        """The rows of d2 whose first argument is g, as an (|G|²·dim, |G|²·dim) array."""
        n, d, t = self.n, self.d, self.group.table
        out = np.zeros((n, n, d, n, n, d), dtype=np.int64)
        h, k = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        eye = np.eye(d, dtype=np.int64)
        np.add.at(out, (h, k, slice(None), h, k), self.module.mats[g])
        np.add.at(out, (h, k, slice(None), t[g, h], k), -eye)
        np.add.at(out, (h, k, slice(None), g, t[h, k]), eye)
        np.add.at(out, (h, k, slice(None), g, h), -eye)
        return out.reshape(n * n * d, n * n * d) % self.p

    @cached_property
    def coboundaries1(self) -> ColumnSpace:
        return ColumnSpace(self.d0_matrix)

    @cached_property
    def coboundaries2(self) -> ColumnSpace:
        return ColumnSpace(self.d1_matrix)

    @cached_property
    def cocycles1(self) -> list[np.ndarray]:
        """Basis of Z¹, solved on generator values and extended along the spanning tree of words."""
        gens, n, d = self.group.generators, self.n, self.d
        k = len(gens)
        slot = {g: i for i, g in enumerate(gens)}
        mats = self.module.mats
        # c(y) = c(x) + x·c(g) for y = x·g expresses every value through the generator values
        extend = np.zeros((n, d, k * d), dtype=np.int64)
        for y, x, g in self.group.words()[1:]:
            extend[y] = extend[x]
            extend[y][:, slot[g] * d:(slot[g] + 1) * d] += mats[x]
        extend %= self.p
        rows = []
        for g in gens:
            select = np.zeros((d, k * d), dtype=np.int64)
            select[:, slot[g] * d:(slot[g] + 1) * d] = np.eye(d, dtype=np.int64)
            for x in range(n):
                rows.append(extend[self.group.table[x, g]] - extend[x] - mats[x] @ select)
        constraints = FpMatrix(self.p, np.concatenate(rows, axis=0))
        flat = extend.reshape(n * d, k * d)
        return [(flat @ v) % self.p for v in kernel_basis(constraints)]

    @cached_property
    def cocycles2(self) -> list[np.ndarray]:
        """Basis of Z², cutting the kernel down one block of d2 rows at a time."""
        n, d = self.n, self.d
        if n > settings.max_h2_order:
            raise BudgetError(
                "H² bases need |G| ≤ LAMBDA_MAX_H2_ORDER; vanishing and equality of classes only need the "
                "coboundary rank test (CohomologyClass.is_zero), which runs up to LAMBDA_MAX_GROUP_ORDER",
                order=n,
                cap=settings.max_h2_order,
            )
        self._guard(n**4 * d**2, "d2 block")
        basis = np.eye(n * n * d, dtype=np.int64)
        for g in range(n):
            reduced = matmul_mod(self.d2_block(g), basis, self.p)
            kernel = kernel_basis(FpMatrix(self.p, reduced))
            if not kernel:
                return []
            basis = matmul_mod(basis, np.column_stack(kernel), self.p)
        log.debug("Solved for 2-cocycles", order=n, dim=d, cocycles=basis.shape[1])
        return [basis[:, i].copy() for i in range(basis.shape[1])]

    def is_cocycle1(self, c: Cochain1) -> bool:
        return d1(c).is_zero()

    def is_cocycle2(self, c: Cochain2) -> bool:
        return not d2(c).any()

    def is_coboundary1(self, c: Cochain1) -> bool:
        return self.coboundaries1.contains(c.vector)

    def is_coboundary2(self, c: Cochain2) -> bool:
        return self.coboundaries2.contains(c.vector)

    def coboundary_preimage(self, c: Cochain2) -> Cochain1 | None:
        """Some w with d1(w) = c, or None."""
        w = self.coboundaries2.preimage(c.vector)
        return None if w is None else Cochain1.from_vector(self.module, w)

    def _quotient_basis(self, boundaries: list[np.ndarray], cycles: list[np.ndarray]) -> list[np.ndarray]:
        """Cycles whose columns are pivots after the boundary columns in rref([B | Z])."""
        if not cycles:
            return []
        cols = np.column_stack(boundaries + cycles) if boundaries else np.column_stack(cycles)
        _, pivots = rref(FpMatrix(self.p, cols))
        offset = len(boundaries)
        return [cycles[c - offset] for c in pivots if c >= offset]

    def h1(self) -> CohomologyBasis:
        reps = self._quotient_basis(self.coboundaries1.basis(), self.cocycles1)
        log.debug("Computed H¹", group=self.group.name, module=self.module.name, dim=len(reps))
        classes = tuple(CohomologyClass(Cochain1.from_vector(self.module, v)) for v in reps)
        return CohomologyBasis(1, self.module, classes)

    def h2(self) -> CohomologyBasis:
        reps = self._quotient_basis(self.coboundaries2.basis(), self.cocycles2)
        log.debug("Computed H²", group=self.group.name, module=self.module.name, dim=len(reps))
        classes = tuple(CohomologyClass(Cochain2.from_vector(self.module, v)) for v in reps)
        return CohomologyBasis(2, self.module, classes)

    def h1_dim(self) -> int:
        return len(self.cocycles1) - self.coboundaries1.dim

    def h2_dim(self) -> int:
        return len(self.cocycles2) - self.coboundaries2.dim


@lru_cache(maxsize=64)
def cochain_complex(module: FpModule) -> CochainComplex:
    return CochainComplex(module)


def h1(module: FpModule) -> CohomologyBasis:
    return cochain_complex(module).h1()


def h2(module: FpModule) -> CohomologyBasis:
    return cochain_complex(module).h2()


def cup(a: Cochain1, b: Cochain1, target: FpModule | None = None, pairing: np.ndarray | None = None) -> Cochain2:
    """(a ∪ b)(g, h) = pairing(a(g), g·b(h)).

    `pairing[i, j, k]` is the k-th coordinate of the product of basis vectors e_i ⊗ e_j. Without one, `a` must
    take values in a 1-dimensional module and acts on `b` by scalars.
    """
    if a.module.group is not b.module.group or a.module.p != b.module.p:
        raise PreconditionError("PARAMETER_MISMATCH", "cup factors must live on the same group over the same p")
    if pairing is None:
        if a.module.dim != 1:
            raise PreconditionError("PARAMETER_MISMATCH", "a default pairing needs a 1-dimensional left factor")
        db = b.module.dim
        pairing = np.eye(db, dtype=np.int64).reshape(1, db, db)
        target = b.module if target is None else target
    pairing = np.asarray(pairing, dtype=np.int64)
    if target is None or pairing.shape != (a.module.dim, b.module.dim, target.dim):
        raise PreconditionError("PARAMETER_MISMATCH", "pairing shape does not match the modules")
    acted = np.einsum("gij,hj->ghi", b.module.mats, b.values)
    return Cochain2(target, np.einsum("gi,ghj,ijk->ghk", a.values, acted, pairing))
