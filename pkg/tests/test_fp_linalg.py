import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from IwasawaLambda.errors import PreconditionError
from IwasawaLambda.fp_linalg import ColumnSpace, FpMatrix, kernel_basis, matmul_mod, rank, rref, solve

PRIMES = st.sampled_from([3, 5, 7, 11])


@st.composite
def matrices(draw, max_side=6):
    p = draw(PRIMES)
    rows = draw(st.integers(1, max_side))
    cols = draw(st.integers(1, max_side))
    data = draw(st.lists(st.integers(0, p - 1), min_size=rows * cols, max_size=rows * cols))
    return FpMatrix(p, np.array(data).reshape(rows, cols))


@pytest.mark.parametrize(
    "p, entries, expected",
    [
        (3, np.eye(3, dtype=int), 3),
        (5, np.zeros((4, 2), dtype=int), 0),
        (5, [[1, 2], [2, 4]], 1),
    ],
)
def test_rank_examples(p, entries, expected):
    assert rank(FpMatrix(p, entries)) == expected


@pytest.mark.parametrize("p", [2, 4, 9])
def test_rejects_non_odd_prime(p):
    with pytest.raises(ValueError):
        FpMatrix(p, [[1]])


def test_entries_are_reduced():
    m = FpMatrix(5, [[7, -1]])
    assert m.entries.tolist() == [[2, 4]]


def test_kernel_of_identity_and_zero():
    assert kernel_basis(FpMatrix.identity(3, 4)) == []
    basis = kernel_basis(FpMatrix.zeros(3, 3, 3))
    assert sorted(v.tolist() for v in basis) == sorted(np.eye(3, dtype=int).tolist())


def test_kernel_of_rank_one():
    m = FpMatrix(5, [[1, 2], [2, 4]])
    (v,) = kernel_basis(m)
    assert v.any()
    assert not m.apply(v).any()


def test_rref_pivots():
    reduced, pivots = rref(FpMatrix(5, [[1, 2], [2, 4]]))
    assert pivots == (0,)
    assert reduced.entries.tolist() == [[1, 2], [0, 0]]


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_rank_nullity(m):
    basis = kernel_basis(m)
    assert rank(m) + len(basis) == m.cols
    for v in basis:
        assert not m.apply(v).any()


@given(matrices(), st.data())
@settings(max_examples=60, deadline=None)
def test_solve_finds_a_preimage_of_an_image(m, data):
    x0 = np.array(data.draw(st.lists(st.integers(0, m.p - 1), min_size=m.cols, max_size=m.cols)))
    b = m.apply(x0)
    x = solve(m, b)
    assert x is not None
    assert np.array_equal(m.apply(x), b)


def test_solve_identity_returns_rhs():
    b = np.array([2, 0, 1])
    assert solve(FpMatrix.identity(3, 3), b).tolist() == b.tolist()


def test_solve_inconsistent_is_none():
    assert solve(FpMatrix.zeros(3, 2, 2), [1, 0]) is None


def test_solve_full_rank_random(rng):
    while True:
        m = FpMatrix(3, rng.integers(0, 3, (10, 10)))
        if rank(m) == 10:
            break
    x0 = rng.integers(0, 3, 10)
    assert np.array_equal(m.apply(solve(m, m.apply(x0))), m.apply(x0))


def test_solve_rejects_wrong_length():
    with pytest.raises(PreconditionError) as e:
        solve(FpMatrix.identity(3, 2), [1, 2, 0])
    assert e.value.code == "PARAMETER_MISMATCH"


@given(matrices(), st.data())
@settings(max_examples=40, deadline=None)
def test_column_space_agrees_with_solve(m, data):
    space = ColumnSpace(m)
    b = np.array(data.draw(st.lists(st.integers(0, m.p - 1), min_size=m.rows, max_size=m.rows)))
    pre = space.preimage(b)
    assert space.dim == rank(m)
    assert space.contains(b) == (solve(m, b) is not None)
    if pre is not None:
        assert np.array_equal(m.apply(pre), b)


def test_matmul_mod_matches_integer_product(rng):
    a = rng.integers(0, 11, (4, 7))
    b = rng.integers(0, 11, (7, 3))
    assert np.array_equal(matmul_mod(a, b, 11), (a @ b) % 11)
