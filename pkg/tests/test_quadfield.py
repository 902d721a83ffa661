import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.ntheory import sqrt_mod

from IwasawaLambda.errors import BudgetError, PreconditionError
from IwasawaLambda.quadfield import (
    QuadElement,
    QuadField,
    QuadForm,
    QuadIdeal,
    SplitType,
    class_number,
    class_number_dirichlet,
    embed,
    gold_test,
    ideal_pow_generator,
    is_fundamental,
    kronecker,
    nonsplit_lambda2_test,
    prime_above,
    principal_generator,
    reduced_forms,
    split_type,
)
from IwasawaLambda.quadfield.forms import classes_of_order_dividing, require_fundamental
from IwasawaLambda.quadfield.ideals import unit_group


@pytest.mark.parametrize("d, expected", [(-3, True), (-4, True), (-8, True), (-7, True), (-12, False),
                                         (-16, False), (-20, True), (-5, False), (1, False)])
def test_is_fundamental(d, expected):
    assert is_fundamental(d) is expected


def test_require_fundamental():
    with pytest.raises(PreconditionError) as e:
        require_fundamental(-12)
    assert e.value.code == "NOT_FUNDAMENTAL"


@pytest.mark.parametrize("d, w", [(-3, 6), (-4, 4), (-7, 2)])
def test_roots_of_unity(d, w):
    assert QuadField(d).w == w


def test_reduced_forms_examples():
    assert reduced_forms(-3) == [QuadForm(1, 1, 1)]
    assert reduced_forms(-11) == [QuadForm(1, 1, 3)]
    assert set(reduced_forms(-23)) == {QuadForm(1, 1, 6), QuadForm(2, 1, 3), QuadForm(2, -1, 3)}


@pytest.mark.parametrize("d, h", [(-3, 1), (-4, 1), (-11, 1), (-23, 3), (-31, 3), (-47, 5), (-163, 1)])
def test_class_numbers(d, h):
    assert class_number_dirichlet(d) == h
    assert class_number(d) == h


def test_class_number_oracles_agree():
    discs = [d for d in range(-499, -4) if is_fundamental(d)]
    assert len(discs) > 100
    for d in discs:
        assert len(reduced_forms(d)) == class_number_dirichlet(d), d


@given(st.integers(3, 2000).map(lambda n: -n).filter(is_fundamental))
@settings(max_examples=60, deadline=None)
def test_composition_is_a_group_law(d):
    forms = reduced_forms(d)
    h = len(forms)
    for f in forms[:4]:
        assert (f**h).is_identity()
        assert (f * f.inverse()).is_identity()
        assert (f * QuadForm.identity(d)) == f.reduced()


def test_order_three_class():
    f = QuadForm(2, 1, 3)
    assert f.order() == 3
    assert (f * QuadForm(2, -1, 3)).is_identity()
    assert len(classes_of_order_dividing(-23, 3)) == 3


@pytest.mark.parametrize("d, p, kind", [(-11, 3, SplitType.SPLIT), (-3, 3, SplitType.RAMIFIED),
                                        (-7, 5, SplitType.INERT), (-31, 3, SplitType.INERT)])
def test_split_type(d, p, kind):
    assert split_type(d, p) == kind


@pytest.mark.parametrize("d, k, expected", [(-7, 2, 1), (-11, 2, -1), (-4, 2, 0), (-7, 5, -1)])
def test_kronecker(d, k, expected):
    assert kronecker(d, k) == expected


def test_element_arithmetic():
    a = QuadElement(-11, 1, 1, 2)
    assert a.norm() == 3
    assert a.trace() == 1
    assert (a * a.conj()) == QuadElement.from_int(-11, 3)
    assert QuadElement(-11, 2, 4, 2) == QuadElement(-11, 1, 2, 1)
    assert QuadElement.from_json(-11, a.to_json()) == a
    assert QuadElement.from_uv(-11, *a.uv()) == a
    with pytest.raises(ValueError):
        QuadElement(-11, 1, 2, 2)


@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20))
def test_norm_is_multiplicative(u1, v1, u2, v2):
    a, b = QuadElement.from_uv(-23, u1, v1), QuadElement.from_uv(-23, u2, v2)
    assert (a * b).norm() == a.norm() * b.norm()


def test_prime_above_examples():
    p0, p0_tilde = prime_above(-11, 3)
    assert p0 == QuadIdeal(-11, 3, 1)
    assert p0_tilde == QuadIdeal(-11, 3, -1)
    assert p0 * p0_tilde == QuadIdeal(-11, 1, 1, 3)
    assert prime_above(-23, 3)[0] == QuadIdeal(-23, 3, 1)
    with pytest.raises(PreconditionError) as e:
        prime_above(-7, 5)
    assert e.value.code == "NOT_SPLIT"


def test_ideal_generators():
    p0, _ = prime_above(-11, 3)
    alpha = ideal_pow_generator(-11, p0, 1)
    assert alpha == QuadElement(-11, 1, 1, 2)
    assert alpha.norm() == 3

    q0, _ = prime_above(-4, 5)
    beta = ideal_pow_generator(-4, q0, 1)
    assert beta.norm() == 5
    assert q0.contains(beta)


def test_generator_of_cube_of_order_three_prime():
    p0 = QuadIdeal(-23, 2, 1)
    alpha = principal_generator(p0**3)
    assert alpha.norm() == 8
    assert (p0**3).contains(alpha)


def test_generator_budget():
    p0, _ = prime_above(-11, 3)
    with pytest.raises(BudgetError):
        ideal_pow_generator(-11, p0, 5, budget=100)


def test_generator_of_a_large_prime_power():
    p0, _ = prime_above(-479, 7)
    h = class_number(-479)
    alpha = ideal_pow_generator(-479, p0, h, budget=10**40)
    assert alpha.norm() == 7**h
    assert (p0**h).contains(alpha)
    assert alpha.y >= 0


@pytest.mark.parametrize("d, count", [(-3, 6), (-4, 4), (-7, 2), (-8, 2), (-479, 2)])
def test_unit_group(d, count):
    units = unit_group(d)
    assert len(units) == count
    assert all(u.norm() == 1 for u in units)
    assert QuadElement.from_int(d, 1) in units


def test_non_principal_ideal():
    p0 = QuadIdeal(-23, 2, 1)
    with pytest.raises(PreconditionError) as e:
        principal_generator(p0)
    assert e.value.code == "NOT_PRINCIPAL"


def test_embed_examples():
    alpha = QuadElement(-11, 1, 1, 2)
    assert embed(alpha, -11, 3, 4, 0).value == 16
    assert embed(QuadElement.from_int(-11, 1), -11, 3, 4, 1).value == 1
    assert embed(QuadElement(-11, 0, 1, 1), -11, 3, 4, 0).value == 31
    assert embed(QuadElement(-11, 0, 1, 1), -11, 3, 4, 1).value == 81 - 31


def test_gold_test_d_minus_11():
    report = gold_test(-11, 3, 6)
    assert report.h_k == 1
    assert report.alpha == QuadElement(-11, 1, 1, 2)
    assert report.s_count == 2
    assert report.lambda_ge_2 is False
    assert report.lambda_ge_2 == (pow(report.alpha_embed.value, 2, 9) == 1)
    assert report.to_dict()["disc"] == "-11"


@pytest.mark.parametrize("d, p, code", [(-23, 3, "PRECONDITION_P_DIVIDES_H"), (-7, 5, "NOT_SPLIT")])
def test_gold_test_preconditions(d, p, code):
    with pytest.raises(PreconditionError) as e:
        gold_test(d, p)
    assert e.value.code == code


def test_gold_test_precision():
    with pytest.raises(PreconditionError) as e:
        gold_test(-11, 3, 2)
    assert e.value.code == "PRECISION_TOO_LOW"


def _alpha_mod_p_squared_at_unit_root(alpha, p):
    """α mod p² at the embedding where α is a p-adic unit, found from the square roots of D mod p²."""
    modulus = p * p
    inv_den = pow(alpha.den, -1, modulus)
    values = [(alpha.x + alpha.y * s) * inv_den % modulus for s in sqrt_mod(alpha.disc, modulus, all_roots=True)]
    units = [v for v in values if v % p]
    assert len(units) == 1
    return units[0]


def test_gold_verdict_matches_power_oracle():
    cases = [(d, p) for d in range(-499, -4) if is_fundamental(d) for p in (3, 5, 7)
             if split_type(d, p) == SplitType.SPLIT and class_number(d) % p != 0]
    assert len(cases) > 60
    for d, p in cases:
        report = gold_test(d, p, 4, budget=10**40)
        assert report.alpha.norm() == p**report.h_k
        v = _alpha_mod_p_squared_at_unit_root(report.alpha, p)
        assert report.lambda_ge_2 == (pow(v, p - 1, p * p) == 1), (d, p)


def test_nonsplit_criterion_is_experimental():
    report = nonsplit_lambda2_test(-31, 3, 6)
    assert report.experimental
    assert report.s_count == 1
    assert report.split_type == SplitType.INERT
    assert report.h_k == 3
    assert report.lambda_ge_2 is True
    assert report.alpha.norm() % 3 != 0


def test_nonsplit_rejects_split_and_trivial_torsion():
    with pytest.raises(PreconditionError) as e:
        nonsplit_lambda2_test(-11, 3)
    assert e.value.code == "NOT_SPLIT"
    with pytest.raises(PreconditionError) as e:
        nonsplit_lambda2_test(-7, 5)
    assert e.value.code == "NO_ORDER_P_CLASS"
