"""Finite groups given by a multiplication table on element indices 0..n−1."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from IwasawaLambda.config import settings
from IwasawaLambda.errors import BudgetError, PreconditionError
from IwasawaLambda.logger import log

EXHAUSTIVE_ASSOCIATIVITY_ORDER = 100
SAMPLED_TRIPLES = 1000


def _invalid(message: str, **context) -> PreconditionError:
    return PreconditionError("INVALID_GROUP", message, **context)


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    table: np.ndarray = field(repr=False)
    generators: tuple[int, ...] = ()
    labels: tuple[str, ...] = field(default=(), repr=False)
    name: str = "G"
    max_order: int | None = field(default=None, repr=False)
    identity: int = field(init=False)
    inverse: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        table = np.ascontiguousarray(np.asarray(self.table, dtype=np.int64))
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise _invalid("the multiplication table must be a non-empty square table")
        n = table.shape[0]
        cap = settings.max_group_order if self.max_order is None else self.max_order
        if n > cap:
            raise BudgetError("group order exceeds LAMBDA_MAX_GROUP_ORDER", order=n, cap=cap)
        if table.min() < 0 or table.max() >= n:
            raise _invalid("table entries must be element indices", order=n)
        table.setflags(write=False)
        object.__setattr__(self, "table", table)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(n)))
        elif len(self.labels) != n:
            raise _invalid("one label per element is required", order=n, labels=len(self.labels))
        object.__setattr__(self, "generators", tuple(int(g) for g in self.generators))
        self._validate()

    def _validate(self) -> None:
        n, t = self.order, self.table
        target = np.arange(n)
        if not (np.all(np.sort(t, axis=1) == target) and np.all(np.sort(t, axis=0) == target[:, None])):
            raise _invalid("every row and column of the table must be a permutation", name=self.name)
        ids = [e for e in range(n) if np.array_equal(t[e], target) and np.array_equal(t[:, e], target)]
        if not ids:
            raise _invalid("no identity element", name=self.name)
        object.__setattr__(self, "identity", ids[0])
        if n <= EXHAUSTIVE_ASSOCIATIVITY_ORDER:
            ok = np.array_equal(t[t], t[np.arange(n)[:, None, None], t[None, :, :]])
        else:
            rng = np.random.default_rng(settings.random_seed)
            a, b, c = rng.integers(0, n, size=(3, SAMPLED_TRIPLES))
            ok = np.array_equal(t[t[a, b], c], t[a, t[b, c]])
        if not ok:
            raise _invalid("the table is not associative", name=self.name)
        inverse = np.argmax(t == ids[0], axis=1)
        inverse.setflags(write=False)
        object.__setattr__(self, "inverse", inverse)
        if self.generators and len(self.closure(self.generators)) != n:
            raise _invalid("the generators do not generate the group", name=self.name)
        if not self.generators:
            object.__setattr__(self, "generators", tuple(range(n)))

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        result = self.identity
        for _ in range(k):
            result = self.mul(result, a)
        return result

    def conj(self, tau: int, g: int) -> int:
        """τ⁻¹·g·τ."""
        return self.mul(self.mul(self.inv(tau), g), tau)

    def commutator(self, a: int, b: int) -> int:
        """[a, b] = a·b·a⁻¹·b⁻¹."""
        return self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def closure(self, elems) -> list[int]:
        seen = {self.identity}
        queue = deque([self.identity])
        gens = [int(g) for g in elems]
        while queue:
            x = queue.popleft()
            for g in gens:
                y = int(self.table[x, g])
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return sorted(seen)

    def words(self) -> list[tuple[int, int, int]]:
        """Breadth-first spanning tree over the generators: (element, parent, generator) in discovery order."""
        order = [(self.identity, -1, -1)]
        seen = {self.identity}
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for g in self.generators:
                y = int(self.table[x, g])
                if y not in seen:
                    seen.add(y)
                    order.append((y, x, g))
                    queue.append(y)
        return order

    def is_normal(self, elems) -> bool:
        members = set(int(e) for e in elems)
        return all(self.conj(g, h) in members for g in self.generators for h in members)

    def subgroup(self, elems, name: str | None = None) -> tuple[FiniteGroup, np.ndarray]:
        """The subgroup on `elems` (which must be closed) and the parent index of each of its elements."""
        parent = np.array(sorted(set(int(e) for e in elems)), dtype=np.int64)
        position = {int(e): i for i, e in enumerate(parent)}
        try:
            table = [[position[self.mul(a, b)] for b in parent] for a in parent]
        except KeyError as e:
            raise _invalid("the elements are not closed under multiplication", name=self.name) from e
        labels = tuple(self.labels[e] for e in parent)
        sub = FiniteGroup(np.array(table), labels=labels, name=name or f"{self.name}_sub", max_order=self.max_order)
        return sub, parent

    def left_cosets(self, elems) -> list[list[int]]:
        """G = ⊔ s_j·U, listed with the smallest element of each coset as its representative s_j."""
        members = sorted(set(int(e) for e in elems))
        cosets, covered = [], set()
        for g in range(self.order):
            if g in covered:
                continue
            coset = sorted(self.mul(g, u) for u in members)
            covered.update(coset)
            cosets.append(coset)
        return cosets

    def quotient(self, elems, name: str | None = None) -> tuple[FiniteGroup, np.ndarray]:
        """G/N for a normal subgroup N; returns the quotient and the projection G → G/N."""
        if not self.is_normal(elems):
            raise _invalid("the subgroup is not normal", name=self.name)
        cosets = self.left_cosets(elems)
        projection = np.empty(self.order, dtype=np.int64)
        for k, coset in enumerate(cosets):
            projection[coset] = k
        reps = [c[0] for c in cosets]
        table = [[int(projection[self.mul(a, b)]) for b in reps] for a in reps]
        gens = sorted({int(projection[g]) for g in self.generators})
        quotient = FiniteGroup(np.array(table), generators=tuple(gens), name=name or f"{self.name}_quot",
                               max_order=self.max_order)
        return quotient, projection

    def abelianization_rank(self, p: int) -> int:
        """dim_Fp of G^ab ⊗ F_p, read off from the order of the subgroup generated by commutators and p-th powers."""
        seeds = {self.commutator(a, b) for a in range(self.order) for b in self.generators}
        seeds |= {self.power(a, p) for a in range(self.order)}
        frattini = len(self.closure(seeds))
        quotient, r = self.order // frattini, 0
        while quotient > 1:
            if quotient % p:
                raise _invalid("G/[G,G]G^p is not a p-group", name=self.name)
            quotient //= p
            r += 1
        return r

    def isomorphism_via(self, other: FiniteGroup, images) -> np.ndarray | None:
        """The homomorphism sending self.generators[i] to images[i], if it is a well-defined isomorphism."""
        images = [int(x) for x in images]
        if len(images) != len(self.generators) or self.order != other.order:
            return None
        gen_image = dict(zip(self.generators, images, strict=True))
        phi = np.full(self.order, -1, dtype=np.int64)
        phi[self.identity] = other.identity
        for y, parent, g in self.words()[1:]:
            phi[y] = other.mul(int(phi[parent]), gen_image[g])
        if len(set(phi.tolist())) != self.order:
            return None
        if not np.array_equal(phi[self.table], other.table[phi[:, None], phi[None, :]]):
            return None
        return phi

    @classmethod
    def cyclic(cls, n: int, name: str | None = None) -> FiniteGroup:
        if n < 1:
            raise ValueError("n must be positive")
        idx = np.arange(n)
        return cls((idx[:, None] + idx[None, :]) % n, generators=(1 % n,), name=name or f"Z/{n}")

    @classmethod
    def direct_product(cls, a: FiniteGroup, b: FiniteGroup, name: str | None = None) -> FiniteGroup:
        """Element (i, j) has index i·|B| + j."""
        nb = b.order
        table = a.table[:, None, :, None] * nb + b.table[None, :, None, :]
        table = table.reshape(a.order * nb, a.order * nb)
        gens = tuple(g * nb + b.identity for g in a.generators) + tuple(a.identity * nb + h for h in b.generators)
        labels = tuple(f"({x},{y})" for x in a.labels for y in b.labels)
        return cls(table, generators=gens, labels=labels, name=name or f"{a.name}x{b.name}")

    @classmethod
    def from_json(cls, data: dict) -> FiniteGroup:
        try:
            table = np.array([[int(x) for x in row] for row in data["mult"]], dtype=np.int64)
            order = int(data.get("order", len(table)))
            gens = tuple(int(g) for g in data.get("generators", ()))
            labels = tuple(str(x) for x in data.get("labels", ()))
        except (KeyError, TypeError, ValueError) as e:
            raise _invalid(f"cannot parse group description: {e}") from e
        if order != len(table):
            raise _invalid("order does not match the table", order=order, rows=len(table))
        return cls(table, generators=gens, labels=labels, name=str(data.get("name", "G")))

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "mult": self.table.tolist(),
            "generators": list(self.generators),
            "labels": list(self.labels),
            "name": self.name,
        }

    @classmethod
    def from_matrices(cls, gens: list[np.ndarray], p: int, max_order: int | None = None,
                      name: str = "G") -> tuple[FiniteGroup, np.ndarray]:
        """Closure of invertible matrices over F_p; returns the group and its elements as a (n, m, m) array."""
        cap = settings.max_group_order if max_order is None else max_order
        mats = [np.mod(np.asarray(g, dtype=np.int64), p) for g in gens]
        m = mats[0].shape[0]
        ident = np.eye(m, dtype=np.int64)
        elements, index = [ident], {ident.tobytes(): 0}
        queue = deque([ident])
        while queue:
            x = queue.popleft()
            for g in mats:
                y = (x @ g) % p
                k = y.tobytes()
                if k not in index:
                    if len(elements) >= cap:
                        raise BudgetError("matrix group closure exceeds the order cap", cap=cap)
                    index[k] = len(elements)
                    elements.append(y)
                    queue.append(y)
        n = len(elements)
        stacked = np.stack(elements)
        flat = stacked.reshape(n, -1)
        # only entries that vary over the group enter the integer key
        positions = np.flatnonzero(np.any(flat != flat[0], axis=0))
        if len(positions) * np.log(p) >= 62 * np.log(2):
            raise BudgetError("matrices are too large to index", size=m, p=p)
        weights = p ** np.arange(len(positions), dtype=np.int64)
        keys = flat[:, positions] @ weights
        order = np.argsort(keys)
        sorted_keys = keys[order]
        table = np.empty((n, n), dtype=np.int64)
        for a, x in enumerate(stacked):
            products = (np.einsum("ij,njk->nik", x, stacked) % p).reshape(n, -1)
            table[a] = order[np.searchsorted(sorted_keys, products[:, positions] @ weights)]
        gen_idx = tuple(index[g.tobytes()] for g in mats)
        log.debug("Closed matrix group", order=n, size=m, p=p)
        stacked.setflags(write=False)
        return cls(table, generators=gen_idx, name=name, max_order=cap), stacked
