"""Exact dense linear algebra over the prime field F_p.

Matrices are stored as contiguous row-major int64 numpy arrays with every entry reduced into [0, p).
Elimination works row-at-a-time on the whole trailing block, so a pivot step is one vectorized update.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sympy import isprime

from IwasawaLambda.errors import PreconditionError


def _as_residues(data, p: int) -> np.ndarray:
    arr = np.ascontiguousarray(np.asarray(data, dtype=np.int64))
    return np.mod(arr, p)


@dataclass(frozen=True, eq=False)
class FpMatrix:
    p: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.p <= 2 or not isprime(self.p):
            raise ValueError("p must be an odd prime")
        arr = _as_residues(self.entries, self.p)
        if arr.ndim != 2:
            raise ValueError("entries must be a 2-dimensional table")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> FpMatrix:
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, p: int, n: int) -> FpMatrix:
        return cls(p, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool(np.array_equal(self.entries, other.entries))

    def __hash__(self) -> int:
        return hash((self.p, self.shape, self.entries.tobytes()))

    def __matmul__(self, other: FpMatrix) -> FpMatrix:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        if other.p != self.p:
            raise ValueError("matrices over different primes")
        return FpMatrix(self.p, (self.entries @ other.entries) % self.p)

    def __add__(self, other: FpMatrix) -> FpMatrix:
        return FpMatrix(self.p, self.entries + other.entries)

    def __sub__(self, other: FpMatrix) -> FpMatrix:
        return FpMatrix(self.p, self.entries - other.entries)

    def apply(self, vec) -> np.ndarray:
        v = _as_residues(vec, self.p)
        if v.shape != (self.cols,):
            raise ValueError(f"vector length must be {self.cols}")
        return (self.entries @ v) % self.p

    def transpose(self) -> FpMatrix:
        return FpMatrix(self.p, self.entries.T)

    @property
    def T(self) -> FpMatrix:
        return self.transpose()


def _eliminate(arr: np.ndarray, p: int, pivot_cols: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form in place over F_p; pivots are searched in the first `pivot_cols` columns."""
    m, n = arr.shape
    limit = n if pivot_cols is None else pivot_cols
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        if r == m:
            break
        nz = np.flatnonzero(arr[r:, c])
        if nz.size == 0:
            continue
        pivot = r + int(nz[0])
        if pivot != r:
            arr[[r, pivot], :] = arr[[pivot, r], :]
        inv = pow(int(arr[r, c]), -1, p)
        arr[r, :] = (arr[r, :] * inv) % p
        col = arr[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            arr[hit, :] = (arr[hit, :] - np.outer(col[hit], arr[r, :])) % p
        pivots.append(c)
        r += 1
    return arr, pivots


def rref(m: FpMatrix) -> tuple[FpMatrix, tuple[int, ...]]:
    arr, pivots = _eliminate(m.entries.copy(), m.p)
    return FpMatrix(m.p, arr), tuple(pivots)


def rank(m: FpMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    _, pivots = _eliminate(m.entries.copy(), m.p)
    return len(pivots)


def kernel_basis(m: FpMatrix) -> list[np.ndarray]:
    """Basis of the right kernel; its size is cols - rank."""
    arr, pivots = _eliminate(m.entries.copy(), m.p)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = np.zeros(m.cols, dtype=np.int64)
        v[free] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-arr[i, free]) % m.p
        basis.append(v)
    return basis


def solve(m: FpMatrix, b) -> np.ndarray | None:
    """Any x with m @ x = b, or None when b is not in the image."""
    rhs = _as_residues(b, m.p)
    if rhs.shape != (m.rows,):
        raise PreconditionError("PARAMETER_MISMATCH", "right-hand side length must equal the row count",
                                rows=m.rows, length=rhs.shape[0] if rhs.ndim else 0)
    aug = np.concatenate([m.entries, rhs.reshape(-1, 1)], axis=1)
    arr, pivots = _eliminate(aug, m.p, pivot_cols=m.cols)
    r = len(pivots)
    if np.any(arr[r:, -1]):
        return None
    x = np.zeros(m.cols, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = arr[i, -1]
    return x


class ColumnSpace:
    """Column space of a fixed matrix, prepared once for many membership and preimage queries.

    Eliminating the transpose keeps the work proportional to the (small) column count even when the
    matrix has ~10^5 rows, which is the shape of every coboundary map.
    """

    def __init__(self, m: FpMatrix):
        self.p = m.p
        self.rows = m.rows
        self.cols = m.cols
        aug = np.concatenate([m.entries.T, np.eye(m.cols, dtype=np.int64)], axis=1)
        arr, pivots = _eliminate(aug, m.p, pivot_cols=m.rows)
        r = len(pivots)
        self._basis = arr[:r, : m.rows]
        self._coeffs = arr[:r, m.rows :]
        self._pivots = np.asarray(pivots, dtype=np.int64)

    @property
    def dim(self) -> int:
        return len(self._pivots)

    def _reduce(self, b) -> tuple[np.ndarray, np.ndarray]:
        rhs = _as_residues(b, self.p)
        if rhs.shape != (self.rows,):
            raise PreconditionError("PARAMETER_MISMATCH", "vector length must equal the row count", rows=self.rows)
        if self.dim == 0:
            return np.zeros(0, dtype=np.int64), rhs
        # reduced echelon rows vanish at each other's pivots, so the coefficients are read off directly
        coef = rhs[self._pivots].copy()
        residue = (rhs - coef @ self._basis) % self.p
        return coef, residue

    def contains(self, b) -> bool:
        _, residue = self._reduce(b)
        return not residue.any()

    def preimage(self, b) -> np.ndarray | None:
        coef, residue = self._reduce(b)
        if residue.any():
            return None
        if self.dim == 0:
            return np.zeros(self.cols, dtype=np.int64)
        return (coef @ self._coeffs) % self.p

    def basis(self) -> list[np.ndarray]:
        return [row.copy() for row in self._basis]


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """(a @ b) mod p, through float64 BLAS whenever every partial sum stays below 2^53."""
    if a.shape[1] * (p - 1) ** 2 < 2**53:
        return np.mod(a.astype(np.float64) @ b.astype(np.float64), p).astype(np.int64)
    return (a.astype(np.int64) @ b.astype(np.int64)) % p
