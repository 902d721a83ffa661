"""Defining systems ρ̄: G → Ū_N with coefficients in an F_p[G]-module, and the Massey products they define.

Rows and columns run over 0..N−1. Entries (i, j) with j ≤ N−2 are scalar functions on G (the staircase part),
entries (i, N−1) for 1 ≤ i ≤ N−2 are cochains with values in T, and the corner (0, N−1) is absent. The law is
ρ(gh) = ρ(g)·g·ρ(h) wherever it is defined, with g acting only on the T-valued last column.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator
from dataclasses import dataclass, field

import numpy as np

from IwasawaLambda.cohomology.complex import Cochain1, Cochain2, CohomologyClass, cochain_complex
from IwasawaLambda.cohomology.group import FiniteGroup
from IwasawaLambda.cohomology.module import CharacterChi, FpModule, omega_module
from IwasawaLambda.config import settings
from IwasawaLambda.errors import BudgetError, InvariantError, PreconditionError
from IwasawaLambda.fp_linalg import solve
from IwasawaLambda.logger import log
from IwasawaLambda.massey.unipotent import UnipotentMatrix


def _incompatible(message: str, **context) -> PreconditionError:
    return PreconditionError("NOT_COCYCLE_COMPATIBLE", message, **context)


def _acted_column(base: FpModule, column: np.ndarray) -> np.ndarray:
    """acted[r, g, h] = g·column[r](h)."""
    return np.einsum("gab,rhb->rgha", base.mats, column)


@dataclass(frozen=True, eq=False)
class DefiningSystem:
    base: FpModule
    scalars: np.ndarray = field(repr=False)
    column: np.ndarray = field(repr=False)
    chi: CharacterChi | None = field(default=None, repr=False)

    def __post_init__(self):
        p, order, d = self.base.p, self.base.group.order, self.base.dim
        scalars = np.mod(np.asarray(self.scalars, dtype=np.int64), p)
        column = np.mod(np.asarray(self.column, dtype=np.int64), p)
        if scalars.ndim != 3 or scalars.shape[0] != scalars.shape[1] or scalars.shape[2] != order:
            raise PreconditionError("PARAMETER_MISMATCH", "scalar block must have shape (N−1, N−1, |G|)",
                                    shape=scalars.shape)
        size = scalars.shape[0] + 1
        if size < 3:
            raise PreconditionError("PARAMETER_MISMATCH", "a defining system has at least three rows", size=size)
        if column.shape != (size - 2, order, d):
            raise PreconditionError("PARAMETER_MISMATCH", "last column must have shape (N−2, |G|, dim T)",
                                    shape=column.shape, expected=(size - 2, order, d))
        if size > settings.max_matrix_size:
            raise BudgetError("defining system exceeds LAMBDA_MAX_MATRIX_SIZE", size=size,
                              cap=settings.max_matrix_size)
        staircase = np.broadcast_to(np.eye(size - 1, dtype=np.int64)[:, :, None], scalars.shape)
        lower = np.tril(np.ones((size - 1, size - 1), dtype=bool))
        if not np.array_equal(scalars[lower], staircase[lower]):
            raise _incompatible("the scalar block is not upper unitriangular")
        scalars.setflags(write=False)
        column.setflags(write=False)
        object.__setattr__(self, "scalars", scalars)
        object.__setattr__(self, "column", column)
        self._check_law()

    @property
    def size(self) -> int:
        return self.scalars.shape[0] + 1

    @property
    def group(self) -> FiniteGroup:
        return self.base.group

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def n(self) -> int:
        """Number of steps: the system represents an (n+1)-fold product."""
        return self.size - 2

    def entry(self, i: int, j: int) -> np.ndarray:
        """ρ_ij as an array over G; scalar entries have shape (|G|,), last-column entries (|G|, dim T)."""
        last = self.size - 1
        if not 0 <= i < j <= last or (i, j) == (0, last):
            raise PreconditionError("PARAMETER_MISMATCH", "no such entry in a defining system", i=i, j=j)
        if j < last:
            return self.scalars[i, j]
        return self.column[i - 1]

    def column_cochain(self, i: int) -> Cochain1:
        return Cochain1(self.base, self.entry(i, self.size - 1))

    def _check_law(self) -> None:
        p, table = self.p, self.group.table
        s = self.scalars
        lhs = s[:, :, table]
        rhs = np.einsum("ikg,kjh->ijgh", s, s) % p
        if not np.array_equal(lhs, rhs):
            bad = np.argwhere(lhs != rhs)[0]
            raise _incompatible("scalar entries violate ρ(gh) = ρ(g)ρ(h)", entry=(int(bad[0]), int(bad[1])))
        acted = _acted_column(self.base, self.column)
        last = self.size - 1
        for i in range(1, last):
            expected = self.column[i - 1][:, None, :].copy()
            for k in range(i, last):
                expected = expected + s[i, k][:, None, None] * acted[k - 1]
            if not np.array_equal(self.column[i - 1][table], expected % p):
                raise _incompatible("last column violates the twisted law", row=i)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "size": self.size,
            "group": self.group.to_json(),
            "module": self.base.to_json(),
            "scalars": self.scalars.tolist(),
            "column": self.column.tolist(),
            "chi": None if self.chi is None else {"level": self.chi.level, "values": self.chi.values.tolist()},
        }

    @classmethod
    def from_json(cls, data: dict) -> DefiningSystem:
        try:
            group = FiniteGroup.from_json(data["group"])
            base = FpModule.from_json(group, data["module"])
            scalars, column = data["scalars"], data["column"]
            chi_data = data.get("chi")
        except (KeyError, TypeError) as e:
            raise PreconditionError("PARAMETER_MISMATCH", f"cannot parse defining system: {e}") from e
        chi = None if chi_data is None else CharacterChi(group, base.p, int(chi_data["level"]), chi_data["values"])
        return cls(base, scalars, column, chi=chi)


@dataclass(frozen=True, eq=False)
class MasseyResult:
    value: Cochain2
    vanishes: bool
    witness: Cochain1 | None = None

    @property
    def cohomology_class(self) -> CohomologyClass:
        return CohomologyClass(self.value)


def _staircase(chi: CharacterChi, n: int) -> np.ndarray:
    scalars = np.zeros((n + 1, n + 1, chi.group.order), dtype=np.int64)
    for i in range(n + 1):
        for j in range(i, n + 1):
            scalars[i, j] = chi.binom(j - i)
    return scalars


def proper_system(chi: CharacterChi, psis: list[Cochain1]) -> DefiningSystem:
    """The staircase with (i, j) entry C(χ, j−i) and last column ψ_{n−1}, …, ψ₀ read top to bottom."""
    n = len(psis)
    if n < 1:
        raise PreconditionError("PARAMETER_MISMATCH", "a proper system needs at least ψ₀")
    if n >= chi.modulus:
        raise PreconditionError("TRUNCATION_RANGE", "a proper system needs n < p^l", n=n, modulus=chi.modulus)
    base = psis[0].module
    if any(psi.module is not base for psi in psis) or base.group is not chi.group:
        raise PreconditionError("PARAMETER_MISMATCH", "ψ's and χ must live on the same group and module")
    column = np.stack([psis[n - r].values for r in range(1, n + 1)])
    return DefiningSystem(base, _staircase(chi, n), column, chi=chi)


def proper_psis(ds: DefiningSystem) -> list[Cochain1]:
    """ψ₀, …, ψ_{n−1} of a proper system."""
    if ds.chi is None or not np.array_equal(ds.scalars, _staircase(ds.chi, ds.n) % ds.p):
        raise PreconditionError("PARAMETER_MISMATCH", "not a proper defining system")
    return [ds.column_cochain(ds.n - k) for k in range(ds.n)]


def massey_value(ds: DefiningSystem) -> MasseyResult:
    """value(g, h) = Σ_{k=1}^{N−2} ρ_0k(g)·g·ρ_{k,N−1}(h).

    When the value is a coboundary the result carries a witness w with d(w) = −value.
    """
    acted = _acted_column(ds.base, ds.column)
    weights = ds.scalars[0, 1:]
    value = Cochain2(ds.base, np.einsum("kg,kgha->gha", weights, acted))
    preimage = cochain_complex(ds.base).coboundary_preimage(value)
    witness = None if preimage is None else preimage.scale(-1)
    log.debug("Massey value", size=ds.size, group=ds.group.name, vanishes=preimage is not None)
    return MasseyResult(value, preimage is not None, witness)


@dataclass(frozen=True, eq=False)
class LiftedSystem:
    """A defining system together with a corner cochain completing it to a homomorphism into U_N."""

    system: DefiningSystem
    corner: Cochain1

    def corner_law_holds(self) -> bool:
        ds, table = self.system, self.system.group.table
        acted = _acted_column(ds.base, ds.column)
        c = self.corner.values
        moved = np.einsum("gab,hb->gha", ds.base.mats, c)
        expected = c[:, None, :] + moved + np.einsum("kg,kgha->gha", ds.scalars[0, 1:], acted)
        return bool(np.array_equal(c[table], expected % ds.p))

    def matrix(self, g: int) -> UnipotentMatrix:
        """ρ(g) as a unipotent matrix; defined for a trivial 1-dimensional coefficient module."""
        ds = self.system
        if ds.base.dim != 1 or not ds.base.is_trivial():
            raise PreconditionError("PARAMETER_MISMATCH", "matrix values need trivial 1-dimensional coefficients")
        size = ds.size
        m = np.eye(size, dtype=np.int64)
        m[: size - 1, : size - 1] = ds.scalars[:, :, g]
        m[1: size - 1, size - 1] = ds.column[:, g, 0]
        m[0, size - 1] = self.corner.values[g, 0]
        return UnipotentMatrix(ds.p, m)

    def is_homomorphism(self) -> bool:
        mats = [self.matrix(g) for g in range(self.system.group.order)]
        table = self.system.group.table
        return all(mats[int(table[a, b])] == mats[a] @ mats[b] for a in range(len(mats)) for b in range(len(mats)))


def lift_search(ds: DefiningSystem) -> LiftedSystem | None:
    """Solves d(c) = −value for the corner; the lift, when found, is checked on every pair of elements."""
    result = massey_value(ds)
    cx = cochain_complex(ds.base)
    x = solve(cx.d1_matrix, (-result.value.vector) % ds.p)
    if x is None:
        return None
    lifted = LiftedSystem(ds, Cochain1.from_vector(ds.base, x))
    if not lifted.corner_law_holds():
        raise InvariantError("INTERNAL_INCONSISTENCY", "the solved corner violates the twisted law", size=ds.size)
    if ds.base.dim == 1 and ds.base.is_trivial() and not lifted.is_homomorphism():
        raise InvariantError("INTERNAL_INCONSISTENCY", "the lifted matrices are not multiplicative", size=ds.size)
    return lifted


def block_compose(ds1: DefiningSystem, ds2: DefiningSystem, n_cols: int) -> DefiningSystem:
    """Adds the up-right blocks of two systems that share their first n_cols columns and last N − n_cols rows."""
    if ds1.base is not ds2.base or ds1.size != ds2.size:
        raise PreconditionError("BLOCK_MISMATCH", "systems differ in size or coefficients",
                                sizes=(ds1.size, ds2.size))
    size = ds1.size
    if not 1 <= n_cols <= size - 1:
        raise PreconditionError("BLOCK_MISMATCH", "the split must leave both blocks nonempty", n_cols=n_cols, size=size)
    s1, s2, c1, c2 = ds1.scalars, ds2.scalars, ds1.column, ds2.column
    same_a = np.array_equal(s1[:, :n_cols], s2[:, :n_cols])
    same_d = np.array_equal(s1[n_cols:], s2[n_cols:]) and np.array_equal(c1[n_cols - 1:], c2[n_cols - 1:])
    if not (same_a and same_d):
        raise PreconditionError("BLOCK_MISMATCH", "systems do not share their diagonal blocks", n_cols=n_cols)
    scalars = s1.copy()
    scalars[:n_cols, n_cols:] = s1[:n_cols, n_cols:] + s2[:n_cols, n_cols:]
    column = c1.copy()
    column[: n_cols - 1] = c1[: n_cols - 1] + c2[: n_cols - 1]
    chi = ds1.chi if ds1.chi is ds2.chi and n_cols == size - 1 else None
    try:
        return DefiningSystem(ds1.base, scalars, column, chi=chi)
    except PreconditionError as e:
        raise InvariantError("INTERNAL_INCONSISTENCY", f"block composition broke the law: {e.message}") from e


def extend_proper(ds: DefiningSystem, m: int) -> DefiningSystem:
    """Continues the staircase by m steps with zeros below ψ₀."""
    if m < 0:
        raise PreconditionError("PARAMETER_MISMATCH", "m must be non-negative", m=m)
    psis = proper_psis(ds)
    if m == 0:
        return ds
    zero = Cochain1.zero(ds.base)
    return proper_system(ds.chi, [zero] * m + psis)


def z1_basis(base: FpModule, chi: CharacterChi, n: int) -> list[Cochain1]:
    omega = omega_module(base, chi, n)
    return [Cochain1.from_vector(omega.module, v) for v in cochain_complex(omega.module).cocycles1]


def _split(f: Cochain1, base: FpModule, n: int) -> list[Cochain1]:
    d = base.dim
    return [Cochain1(base, f.values[:, i * d:(i + 1) * d]) for i in range(n)]


def random_proper_system(base: FpModule, chi: CharacterChi, n: int, rng: np.random.Generator) -> DefiningSystem:
    """A proper system from a uniformly random cocycle Σ ψᵢxⁱ of Ω/Iⁿ ⊗ T."""
    basis = z1_basis(base, chi, n)
    omega = omega_module(base, chi, n)
    values = np.zeros((base.group.order, omega.dim), dtype=np.int64)
    for f in basis:
        values += int(rng.integers(base.p)) * f.values
    return proper_system(chi, _split(Cochain1(omega.module, values), base, n))


def all_proper_systems(base: FpModule, chi: CharacterChi, n: int) -> Iterator[DefiningSystem]:
    """Every proper system of length n, one per cocycle of Ω/Iⁿ ⊗ T."""
    basis = z1_basis(base, chi, n)
    count = base.p ** len(basis)
    if count > settings.enum_budget:
        raise BudgetError("too many proper systems to enumerate", count=count, cap=settings.enum_budget)
    omega = omega_module(base, chi, n)
    log.debug("Enumerating proper systems", n=n, count=count, group=base.group.name)
    for coeffs in itertools.product(range(base.p), repeat=len(basis)):
        values = np.zeros((base.group.order, omega.dim), dtype=np.int64)
        for c, f in zip(coeffs, basis, strict=True):
            values += c * f.values
        yield proper_system(chi, _split(Cochain1(omega.module, values), base, n))


def massey_cocycle_check(ds: DefiningSystem) -> bool:
    """d2 of the Massey value vanishes."""
    return cochain_complex(ds.base).is_cocycle2(massey_value(ds).value)

