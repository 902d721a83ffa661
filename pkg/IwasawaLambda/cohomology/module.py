"""F_p[G]-modules as one action matrix per group element, characters χ: G → Z/p^l and the modules Ω/Iⁿ ⊗ T."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from IwasawaLambda.cohomology.group import FiniteGroup
from IwasawaLambda.config import settings
from IwasawaLambda.errors import BudgetError, PreconditionError
from IwasawaLambda.fp_linalg import FpMatrix
from IwasawaLambda.logger import log


def _invalid(message: str, **context) -> PreconditionError:
    return PreconditionError("INVALID_MODULE", message, **context)


def _check_action(group: FiniteGroup, mats: np.ndarray, p: int) -> bool:
    """T(a)·T(b) = T(ab) for every pair, one row of the table at a time."""
    for a in range(group.order):
        products = np.einsum("ij,njk->nik", mats[a], mats) % p
        if not np.array_equal(products, mats[group.table[a]]):
            return False
    return True


@dataclass(frozen=True, eq=False)
class FpModule:
    group: FiniteGroup
    p: int
    mats: np.ndarray = field(repr=False)
    name: str = "M"
    max_dim: int | None = field(default=None, repr=False)

    def __post_init__(self):
        mats = np.ascontiguousarray(np.mod(np.asarray(self.mats, dtype=np.int64), self.p))
        if mats.ndim != 3 or mats.shape[0] != self.group.order or mats.shape[1] != mats.shape[2]:
            raise _invalid("need one square action matrix per group element", shape=mats.shape)
        cap = settings.max_module_dim if self.max_dim is None else self.max_dim
        if mats.shape[1] > cap:
            raise BudgetError("module dimension exceeds LAMBDA_MAX_MODULE_DIM", dim=mats.shape[1], cap=cap)
        if not np.array_equal(mats[self.group.identity], np.eye(mats.shape[1], dtype=np.int64)):
            raise _invalid("the identity must act trivially", name=self.name)
        if not _check_action(self.group, mats, self.p):
            raise _invalid("the action matrices do not respect the multiplication table", name=self.name)
        mats.setflags(write=False)
        object.__setattr__(self, "mats", mats)

    @property
    def dim(self) -> int:
        return self.mats.shape[1]

    def act(self, g: int, v) -> np.ndarray:
        return (self.mats[g] @ np.asarray(v, dtype=np.int64)) % self.p

    def is_trivial(self) -> bool:
        return bool(np.all(self.mats == np.eye(self.dim, dtype=np.int64)))

    @classmethod
    def trivial(cls, group: FiniteGroup, p: int, dim: int = 1, name: str = "F_p") -> FpModule:
        mats = np.broadcast_to(np.eye(dim, dtype=np.int64), (group.order, dim, dim))
        return cls(group, p, mats, name=name)

    @classmethod
    def from_generator_matrices(cls, group: FiniteGroup, p: int, gen_mats, name: str = "M",
                                max_dim: int | None = None) -> FpModule:
        """Extends the generator matrices along words in the generators; the constructor verifies the relations."""
        gen_mats = [np.mod(np.asarray(m, dtype=np.int64), p) for m in gen_mats]
        if len(gen_mats) != len(group.generators):
            raise _invalid("need one matrix per generator", generators=len(group.generators), got=len(gen_mats))
        dim = gen_mats[0].shape[0]
        by_gen = dict(zip(group.generators, gen_mats, strict=True))
        mats = np.zeros((group.order, dim, dim), dtype=np.int64)
        mats[group.identity] = np.eye(dim, dtype=np.int64)
        for y, parent, g in group.words()[1:]:
            mats[y] = (mats[parent] @ by_gen[g]) % p
        return cls(group, p, mats, name=name, max_dim=max_dim)

    @classmethod
    def from_json(cls, group: FiniteGroup, data: dict) -> FpModule:
        """`{"p": 3, "dim": 1, "action": {"<generator>": [[...]]}}`; generators missing from action act trivially."""
        try:
            p, dim = int(data["p"]), int(data["dim"])
            action = {int(k): v for k, v in data.get("action", {}).items()}
        except (KeyError, TypeError, ValueError) as e:
            raise _invalid(f"cannot parse module description: {e}") from e
        unknown = set(action) - set(group.generators)
        if unknown:
            raise _invalid("action given for elements that are not generators", elements=sorted(unknown))
        gen_mats = [np.asarray(action.get(g, np.eye(dim, dtype=np.int64)), dtype=np.int64) for g in group.generators]
        if any(m.shape != (dim, dim) for m in gen_mats):
            raise _invalid("action matrices must be dim × dim", dim=dim)
        return cls.from_generator_matrices(group, p, gen_mats, name=str(data.get("name", "M")))

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "dim": self.dim,
            "action": {str(g): self.mats[g].tolist() for g in self.group.generators},
            "name": self.name,
        }

    def restrict(self, subgroup: FiniteGroup, parent: np.ndarray) -> FpModule:
        """The same module viewed over a subgroup whose element i is parent[i] here."""
        return FpModule(subgroup, self.p, self.mats[np.asarray(parent)], name=f"{self.name}|{subgroup.name}",
                        max_dim=self.max_dim)


def is_equivariant(matrix: FpMatrix, source: FpModule, target: FpModule) -> bool:
    """Whether the linear map commutes with every group element."""
    a = matrix.entries
    left = np.einsum("nij,jk->nik", target.mats, a) % source.p
    right = np.einsum("ij,njk->nik", a, source.mats) % source.p
    return bool(np.array_equal(left, right))


@dataclass(frozen=True, eq=False)
class CharacterChi:
    """A surjective homomorphism χ: G → Z/p^l, stored as its value on every element."""

    group: FiniteGroup
    p: int
    level: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("level must be at least 1")
        mod = self.modulus
        values = np.mod(np.asarray(self.values, dtype=np.int64), mod)
        if values.shape != (self.group.order,):
            raise PreconditionError("PARAMETER_MISMATCH", "need one value per group element",
                                    order=self.group.order, got=values.shape)
        t = self.group.table
        if not np.array_equal(values[t], (values[:, None] + values[None, :]) % mod):
            raise PreconditionError("NOT_A_COCYCLE", "χ is not a homomorphism", group=self.group.name)
        if not np.any(values % self.p):
            raise PreconditionError("PARAMETER_MISMATCH", "χ must be surjective onto Z/p^l", level=self.level)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def modulus(self) -> int:
        return self.p**self.level

    def __call__(self, g: int) -> int:
        return int(self.values[g])

    @classmethod
    def from_generator_values(cls, group: FiniteGroup, p: int, level: int, gen_values) -> CharacterChi:
        gen_values = [int(v) for v in gen_values]
        if len(gen_values) != len(group.generators):
            raise PreconditionError("PARAMETER_MISMATCH", "need one value per generator",
                                    generators=len(group.generators), got=len(gen_values))
        by_gen = dict(zip(group.generators, gen_values, strict=True))
        values = np.zeros(group.order, dtype=np.int64)
        for y, parent, g in group.words()[1:]:
            values[y] = values[parent] + by_gen[g]
        return cls(group, p, level, values)

    @classmethod
    def from_quotient(cls, group: FiniteGroup, p: int, kernel) -> CharacterChi:
        """The quotient map G → G/U ≅ Z/p^l for a normal subgroup U with cyclic p-power quotient."""
        quotient, projection = group.quotient(kernel)
        size, level = quotient.order, 0
        while size % p == 0:
            size //= p
            level += 1
        if size != 1 or level == 0:
            raise PreconditionError("STRUCTURE_MISMATCH", "G/U is not a nontrivial p-group", index=quotient.order)
        generator = next((q for q in range(quotient.order) if quotient.element_order(q) == quotient.order), None)
        if generator is None:
            raise PreconditionError("NOT_CYCLIC", "G/U is not cyclic", index=quotient.order)
        log_of, x = {}, quotient.identity
        for k in range(quotient.order):
            log_of[x] = k
            x = quotient.mul(x, generator)
        return cls(group, p, level, np.array([log_of[int(projection[g])] for g in range(group.order)]))

    def binom(self, k: int) -> np.ndarray:
        """g ↦ C(χ(g), k) mod p, with χ(g) read as its representative in [0, p^l)."""
        return np.array([comb(int(v), k) % self.p for v in self.values], dtype=np.int64)

    def kernel(self) -> list[int]:
        return [int(g) for g in np.flatnonzero(self.values == 0)]

    def restrict(self, subgroup: FiniteGroup, parent: np.ndarray) -> CharacterChi:
        return CharacterChi(subgroup, self.p, self.level, self.values[np.asarray(parent)])


@dataclass(frozen=True, eq=False)
class OmegaModule:
    """Ω/Iⁿ ⊗ T on the basis x^i ⊗ t_j (index i·dim T + j), where x = σ − 1 acts through χ."""

    base: FpModule
    chi: CharacterChi
    n: int
    module: FpModule = field(init=False, repr=False)

    def __post_init__(self):
        if self.chi.group is not self.base.group or self.chi.p != self.base.p:
            raise PreconditionError("PARAMETER_MISMATCH", "χ and T must live on the same group over the same p")
        if not 1 <= self.n <= self.chi.modulus:
            raise PreconditionError("TRUNCATION_RANGE", "the truncation must satisfy 1 ≤ n ≤ p^l",
                                    n=self.n, modulus=self.chi.modulus)
        d, n, p = self.base.dim, self.n, self.base.p
        mats = np.zeros((self.base.group.order, n * d, n * d), dtype=np.int64)
        for k in range(n):
            coeff = self.chi.binom(k)
            if not coeff.any():
                continue
            block = (coeff[:, None, None] * self.base.mats) % p
            for i in range(n - k):
                mats[:, (i + k) * d:(i + k + 1) * d, i * d:(i + 1) * d] = block
        cap = (self.base.max_dim or settings.max_module_dim) * self.chi.modulus
        module = FpModule(self.base.group, p, mats, name=f"Ω/I^{n}⊗{self.base.name}", max_dim=cap)
        object.__setattr__(self, "module", module)
        log.debug("Built Ω-module", n=n, dim=module.dim, group=self.base.group.name)

    @property
    def dim(self) -> int:
        return self.module.dim

    def top_inclusion(self) -> FpMatrix:
        """T → x^{n−1} ⊗ T, the kernel of truncation to level n − 1."""
        d = self.base.dim
        m = np.zeros((self.n * d, d), dtype=np.int64)
        m[(self.n - 1) * d:, :] = np.eye(d, dtype=np.int64)
        return FpMatrix(self.base.p, m)

    def truncation(self, level: int | None = None) -> FpMatrix:
        """Ω/Iⁿ ⊗ T → Ω/I^level ⊗ T, keeping the low coordinates."""
        level = self.n - 1 if level is None else level
        if not 0 <= level <= self.n:
            raise PreconditionError("TRUNCATION_RANGE", "cannot truncate above the current level",
                                    level=level, n=self.n)
        d = self.base.dim
        return FpMatrix(self.base.p, np.eye(level * d, self.n * d, dtype=np.int64))

    def times_x(self) -> FpMatrix:
        """Ω/I^{n−1} ⊗ T → Ω/Iⁿ ⊗ T, x^i ↦ x^{i+1}; its image is I/Iⁿ ⊗ T."""
        d = self.base.dim
        return FpMatrix(self.base.p, np.eye(self.n * d, (self.n - 1) * d, k=-d, dtype=np.int64))

    def coordinate(self, vec, i: int) -> np.ndarray:
        d = self.base.dim
        return np.asarray(vec)[..., i * d:(i + 1) * d]


def omega_module(base: FpModule, chi: CharacterChi, n: int) -> OmegaModule:
    return OmegaModule(base, chi, n)
