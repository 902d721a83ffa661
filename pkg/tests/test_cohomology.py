import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from IwasawaLambda.cohomology import (
    CharacterChi,
    Cochain1,
    CohomologyClass,
    FiniteGroup,
    FpModule,
    bockstein_direct,
    bockstein_formula,
    cochain_complex,
    cup,
    d0,
    d1,
    d2,
    epsilon_idempotent,
    equivariance_check,
    filtration_order,
    idempotent_identities,
    kummer_dimensions,
    lift_one_level,
    lifts_by_solve,
    min_nonvanishing_psi,
    norm_image_check,
    omega_module,
    psi_components,
    reduce_independence_check,
    shapiro_check,
)
from IwasawaLambda.demo import standard_setups
from IwasawaLambda.errors import BudgetError, PreconditionError
from IwasawaLambda.fp_linalg import FpMatrix


class TestGroups:
    def test_cyclic_group(self, z9):
        assert z9.order == 9
        assert z9.generators == (1,)
        assert z9.identity == 0
        assert z9.element_order(3) == 3
        assert z9.is_abelian()

    def test_direct_product_indexing(self, z2_z9):
        assert z2_z9.order == 18
        assert z2_z9.mul(9 + 4, 9 + 7) == 2
        assert z2_z9.generators == (9, 1)

    def test_rejects_invalid_tables(self):
        with pytest.raises(PreconditionError) as e:
            FiniteGroup(np.array([[0, 1], [0, 1]]))
        assert e.value.code == "INVALID_GROUP"

    def test_order_cap(self):
        with pytest.raises(BudgetError):
            FiniteGroup.cyclic(300)

    def test_json(self, z3_squared):
        again = FiniteGroup.from_json(z3_squared.to_json())
        assert np.array_equal(again.table, z3_squared.table)
        assert again.generators == z3_squared.generators
        with pytest.raises(PreconditionError):
            FiniteGroup.from_json({"order": 3, "mult": [[0, 1], [1, 0]]})

    def test_quotient(self, z9):
        quotient, projection = z9.quotient([0, 3, 6])
        assert quotient.order == 3
        assert projection.tolist() == [g % 3 for g in range(9)]

    @pytest.mark.parametrize("fixture, rank", [("z3_squared", 2), ("z9", 1), ("z2_z9", 1)])
    def test_abelianization_rank(self, request, fixture, rank):
        assert request.getfixturevalue(fixture).abelianization_rank(3) == rank

    def test_isomorphism_via(self, z9):
        phi = z9.isomorphism_via(z9, [2])
        assert phi.tolist() == [2 * g % 9 for g in range(9)]
        assert z9.isomorphism_via(z9, [3]) is None

    def test_matrix_closure(self):
        group, elements = FiniteGroup.from_matrices([np.array([[1, 1], [0, 1]])], 3)
        assert group.order == 3
        assert elements.shape == (3, 2, 2)


class TestModules:
    def test_action_must_respect_the_table(self, z3):
        with pytest.raises(PreconditionError):
            FpModule.from_generator_matrices(z3, 3, [[[2]]])

    def test_module_json(self, sign_z2_z9):
        again = FpModule.from_json(sign_z2_z9.group, sign_z2_z9.to_json())
        assert np.array_equal(again.mats, sign_z2_z9.mats)

    def test_character_must_be_a_homomorphism(self, z3):
        with pytest.raises(PreconditionError) as e:
            CharacterChi(z3, 3, 1, [0, 1, 1])
        assert e.value.code == "NOT_A_COCYCLE"

    def test_character_from_quotient(self, z3_squared):
        chi = CharacterChi.from_quotient(z3_squared, 3, [0, 1, 2])
        assert chi.level == 1
        assert sorted(chi.kernel()) == [0, 1, 2]

    def test_omega_module_bottom_level_is_the_base(self, trivial_z9, chi_z9):
        omega = omega_module(trivial_z9, chi_z9, 1)
        assert np.array_equal(omega.module.mats, trivial_z9.mats)

    def test_omega_module_truncation_range(self, trivial_z9, chi_z9):
        with pytest.raises(PreconditionError) as e:
            omega_module(trivial_z9, chi_z9, 10)
        assert e.value.code == "TRUNCATION_RANGE"

    def test_omega_module_generator_is_unipotent(self, trivial_z9, chi_z9):
        omega = omega_module(trivial_z9, chi_z9, 3)
        x = (omega.module.mats[1] - np.eye(3, dtype=np.int64)) % 3
        report = filtration_order(FpMatrix(3, x))
        assert report.uniserial
        assert report.length == 3


class TestComplex:
    @pytest.mark.parametrize("n", range(1, 10))
    def test_cyclic_group_cohomology(self, n):
        module = FpModule.trivial(FiniteGroup.cyclic(n), 3)
        expected = 1 if n % 3 == 0 else 0
        cx = cochain_complex(module)
        assert cx.h1_dim() == expected
        assert cx.h2_dim() == expected

    def test_sign_twist_kills_cohomology(self):
        module = FpModule.from_generator_matrices(FiniteGroup.cyclic(2), 3, [[[-1]]])
        assert cochain_complex(module).h1_dim() == 0
        assert cochain_complex(module).h2_dim() == 0

    def test_elementary_abelian_dimensions(self, trivial_z3_squared):
        cx = cochain_complex(trivial_z3_squared)
        assert cx.h1_dim() == 2
        assert cx.h2_dim() == 3
        assert cx.h1().dim == 2

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=20, deadline=None)
    def test_differentials_compose_to_zero(self, seed):
        rng = np.random.default_rng(seed)
        module = FpModule.from_generator_matrices(FiniteGroup.cyclic(6), 3, [[[0, 1], [1, 0]]])
        assert d1(d0(rng.integers(0, 3, 2), module)).is_zero()
        c = Cochain1(module, rng.integers(0, 3, (6, 2)))
        assert not d2(d1(c)).any()

    def test_cup_of_projections(self, trivial_z3_squared, proj_second):
        first = Cochain1.from_scalars(trivial_z3_squared, np.arange(9) // 3)
        assert not CohomologyClass(cup(first, proj_second)).is_zero()
        assert CohomologyClass(cup(first, first)).is_zero()

    def test_cup_square_of_character_vanishes(self, trivial_z9):
        chi = Cochain1.from_scalars(trivial_z9, np.arange(9) % 3)
        assert CohomologyClass(cup(chi, chi)).is_zero()

    def test_h2_budget_leaves_the_rank_test_available(self, trivial_z9, monkeypatch):
        from IwasawaLambda.config import settings as app_settings

        monkeypatch.setattr(app_settings, "max_h2_order", 8)
        with pytest.raises(BudgetError) as e:
            cochain_complex(trivial_z9).h2()
        assert e.value.context["cap"] == 8
        assert "CohomologyClass.is_zero" in str(e.value)
        chi = Cochain1.from_scalars(trivial_z9, np.arange(9) % 3)
        assert CohomologyClass(cup(chi, chi)).is_zero()

    def test_cochains_on_different_modules_differ(self, z3):
        a = Cochain1.zero(FpModule.trivial(z3, 3))
        b = Cochain1.zero(FpModule.trivial(z3, 3))
        assert a != b
        assert a == Cochain1.zero(a.module)


class TestBockstein:
    def test_first_bockstein_detects_a_cup_product(self, trivial_z3_squared, chi_first):
        assert min_nonvanishing_psi(trivial_z3_squared, chi_first, 1) == 1
        assert min_nonvanishing_psi(trivial_z3_squared, chi_first, 1, exhaustive=True) == 1

    def test_cyclic_group_of_order_nine(self, trivial_z9, z9):
        chi = CharacterChi.from_generator_values(z9, 3, 1, [1])
        assert min_nonvanishing_psi(trivial_z9, chi, 2) is None

    def test_scan_modes_agree(self, trivial_z9, chi_z9):
        assert min_nonvanishing_psi(trivial_z9, chi_z9, 2) == min_nonvanishing_psi(
            trivial_z9, chi_z9, 2, exhaustive=True
        )

    def test_scan_range(self, trivial_z9, chi_z9):
        with pytest.raises(PreconditionError) as e:
            min_nonvanishing_psi(trivial_z9, chi_z9, 9)
        assert e.value.code == "TRUNCATION_RANGE"

    @pytest.mark.parametrize("fixture_base, fixture_chi, n", [
        ("trivial_z9", "chi_z9", 1),
        ("trivial_z9", "chi_z9", 2),
        ("trivial_z9", "chi_z9", 3),
        ("trivial_z3_squared", "chi_first", 1),
        ("trivial_z3_squared", "chi_first", 2),
    ])
    def test_direct_and_cup_formulas_agree(self, request, rng, fixture_base, fixture_chi, n):
        base, chi = request.getfixturevalue(fixture_base), request.getfixturevalue(fixture_chi)
        omega = omega_module(base, chi, n)
        basis = np.array(cochain_complex(omega.module).cocycles1)
        for _ in range(10):
            f = Cochain1.from_vector(omega.module, rng.integers(0, 3, len(basis)) @ basis)
            direct = bockstein_direct(f, omega)
            formula = bockstein_formula(psi_components(f, omega), chi, base)
            assert direct.equals(formula)

    def test_lift_exists_when_bockstein_vanishes(self, trivial_z9, chi_z9):
        omega = omega_module(trivial_z9, chi_z9, 1)
        f = Cochain1(omega.module, (np.arange(9) % 3).reshape(-1, 1))
        lifted = lift_one_level(f, omega)
        assert lifted is not None
        assert np.array_equal(lifted.values[:, :1], f.values)
        assert lifts_by_solve(f, omega) is not None

    def test_no_lift_when_bockstein_is_nonzero(self, trivial_z3_squared, chi_first, proj_second):
        omega = omega_module(trivial_z3_squared, chi_first, 1)
        f = Cochain1(omega.module, proj_second.values)
        assert lift_one_level(f, omega) is None
        assert lifts_by_solve(f, omega) is None

    def test_vanishing_bockstein_is_exactly_liftability(self, rng):
        seen = set()
        setups = standard_setups(3)
        for k in range(50):
            setup = setups[k % len(setups)]
            n = int(rng.integers(1, min(2, setup.chi.modulus - 1) + 1))
            omega = omega_module(setup.base, setup.chi, n)
            if k % 2:
                upper = omega_module(setup.base, setup.chi, n + 1)
                basis = np.array(cochain_complex(upper.module).cocycles1)
                full = Cochain1.from_vector(upper.module, rng.integers(0, 3, len(basis)) @ basis)
                f = Cochain1(omega.module, full.values[:, : omega.dim])
            else:
                basis = np.array(cochain_complex(omega.module).cocycles1)
                f = Cochain1.from_vector(omega.module, rng.integers(0, 3, len(basis)) @ basis)
            vanishes = bockstein_direct(f, omega).is_zero()
            stepped = lift_one_level(f, omega)
            solved = lifts_by_solve(f, omega)
            assert vanishes == (stepped is not None) == (solved is not None)
            for lifted in (stepped, solved):
                if lifted is not None:
                    assert np.array_equal(lifted.values[:, : omega.dim], f.values)
            if k % 2:
                assert vanishes
            seen.add(vanishes)
        assert seen == {True, False}

    def test_independence_of_representative(self, trivial_z9, chi_z9):
        assert reduce_independence_check(trivial_z9, chi_z9, 1)
        assert reduce_independence_check(trivial_z9, chi_z9, 2, samples=10, seed=7)

    def test_independence_needs_lower_maps_to_vanish(self, trivial_z3_squared, chi_first):
        with pytest.raises(PreconditionError) as e:
            reduce_independence_check(trivial_z3_squared, chi_first, 2, samples=2)
        assert e.value.code == "HYPOTHESIS_FAILED"

    def test_bockstein_needs_a_cocycle(self, trivial_z9, chi_z9):
        omega = omega_module(trivial_z9, chi_z9, 1)
        f = Cochain1(omega.module, np.array([[0], [1], [0], [0], [0], [0], [0], [0], [0]]))
        with pytest.raises(PreconditionError) as e:
            bockstein_direct(f, omega)
        assert e.value.code == "NOT_A_COCYCLE"


class TestInduction:
    def test_shapiro_dimensions(self, trivial_z3_squared, trivial_z9):
        assert shapiro_check(trivial_z3_squared, [0, 1, 2])
        assert shapiro_check(trivial_z9, [0, 3, 6], degrees=(1,))

    def test_subgroup_must_be_closed(self, trivial_z3_squared):
        with pytest.raises(PreconditionError) as e:
            shapiro_check(trivial_z3_squared, [0, 1])
        assert e.value.code == "STRUCTURE_MISMATCH"

    def test_norm_image_in_cyclic_group(self, trivial_z9):
        psi = Cochain1.from_scalars(trivial_z9, np.arange(9) % 3)
        assert norm_image_check(psi, [0, 3, 6])

    @pytest.mark.parametrize("scalars, expected", [(np.arange(9) // 3, False), (np.zeros(9), True)])
    def test_norm_image_in_elementary_group(self, trivial_z3_squared, scalars, expected):
        psi = Cochain1.from_scalars(trivial_z3_squared, scalars)
        assert norm_image_check(psi, [0, 1, 2]) is expected


class TestEquivariance:
    @pytest.mark.parametrize("n", [1, 2])
    def test_bockstein_commutes_with_delta(self, z2_z9, sign_z2_z9, n):
        chi_values = [j % 3 for j in range(9)]
        assert equivariance_check(z2_z9, range(9), [0, 3, 6], sign_z2_z9, chi_values, 1, n)

    @pytest.mark.parametrize("omega, coeffs", [((1, 1), [41, 41]), ((1, -1), [41, 40])])
    def test_idempotent_coefficients(self, omega, coeffs):
        eps = epsilon_idempotent(FiniteGroup.cyclic(2), omega, 3, 4)
        assert [int(c) for c in eps.coeffs] == coeffs

    def test_idempotent_needs_prime_to_p_order(self):
        with pytest.raises(PreconditionError) as e:
            epsilon_idempotent(FiniteGroup.cyclic(3), (1, 1, 1), 3, 4)
        assert e.value.code == "P_DIVIDES_DELTA"

    @pytest.mark.parametrize("order, p", [(2, 3), (2, 5), (4, 5), (3, 7), (6, 7)])
    def test_idempotent_identities(self, order, p):
        assert all(idempotent_identities(FiniteGroup.cyclic(order), p, 4).values())


class TestFiltration:
    def test_jordan_block_is_uniserial(self):
        report = filtration_order(FpMatrix(3, [[0, 0, 0], [1, 0, 0], [0, 1, 0]]))
        assert report.ranks == (3, 2, 1, 0)
        assert report.graded == (1, 1, 1)
        assert report.uniserial
        assert report.order == 27

    def test_zero_action_is_not_uniserial(self):
        report = filtration_order(FpMatrix.zeros(5, 2, 2))
        assert report.graded == (2,)
        assert not report.uniserial

    def test_non_nilpotent_action(self):
        with pytest.raises(PreconditionError) as e:
            filtration_order(FpMatrix.identity(3, 2))
        assert e.value.code == "HYPOTHESIS_FAILED"

    def test_kummer_dimensions_split(self):
        dims = kummer_dimensions(-11, 3)
        assert (dims.s_count, dims.mu_p, dims.h1, dims.h2, dims.brauer) == (2, 0, 2, 1, 1)

    def test_kummer_dimensions_with_roots_of_unity(self):
        dims = kummer_dimensions(-3, 3)
        assert (dims.s_count, dims.mu_p, dims.h1, dims.h2) == (1, 1, 2, 0)

    @pytest.mark.parametrize("d, p", [(-11, 3), (-3, 3), (-23, 3), (-31, 3), (-47, 5), (-7, 5), (-4, 3)])
    def test_euler_characteristic(self, d, p):
        assert kummer_dimensions(d, p).euler_characteristic == -1
