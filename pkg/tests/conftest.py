import numpy as np
import pytest

from IwasawaLambda.cohomology import CharacterChi, FiniteGroup, FpModule


@pytest.fixture
def z3():
    return FiniteGroup.cyclic(3)


@pytest.fixture
def z9():
    return FiniteGroup.cyclic(9)


@pytest.fixture
def z3_squared():
    """Z/3 × Z/3; element (i, j) has index 3i + j."""
    return FiniteGroup.direct_product(FiniteGroup.cyclic(3), FiniteGroup.cyclic(3))


@pytest.fixture
def z2_z9():
    """Z/2 × Z/9; element (i, j) has index 9i + j."""
    return FiniteGroup.direct_product(FiniteGroup.cyclic(2), FiniteGroup.cyclic(9))


@pytest.fixture
def trivial_z9(z9):
    return FpModule.trivial(z9, 3)


@pytest.fixture
def trivial_z3_squared(z3_squared):
    return FpModule.trivial(z3_squared, 3)


@pytest.fixture
def sign_z2_z9(z2_z9):
    """F_3 with the Z/2 factor acting by −1."""
    return FpModule.from_generator_matrices(z2_z9, 3, [[[-1]], [[1]]], name="F_3(−1)")


@pytest.fixture
def chi_z9(z9):
    """The identity character Z/9 → Z/9."""
    return CharacterChi.from_generator_values(z9, 3, 2, [1])


@pytest.fixture
def chi_first(z3_squared):
    """Projection of (Z/3)² onto its first factor."""
    return CharacterChi.from_generator_values(z3_squared, 3, 1, [1, 0])


@pytest.fixture
def proj_second(trivial_z3_squared):
    from IwasawaLambda.cohomology import Cochain1

    return Cochain1.from_scalars(trivial_z3_squared, np.arange(9) % 3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)
