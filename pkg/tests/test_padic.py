import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from IwasawaLambda.errors import PreconditionError
from IwasawaLambda.padic import (
    PadicInt,
    gold_criteria,
    gold_local_test,
    hensel_sqrt,
    log_normalized,
    padic_log,
    principal_part,
    teichmuller,
)


def units(p: int, prec: int):
    return st.integers(1, p**prec - 1).filter(lambda v: v % p).map(lambda v: PadicInt(p, prec, v))


@pytest.mark.parametrize("d, p, prec, expected", [(1, 3, 4, 1), (-11, 3, 4, 31)])
def test_hensel_examples(d, p, prec, expected):
    assert hensel_sqrt(d, p, prec).value == expected


@pytest.mark.parametrize("d, p", [(2, 3), (6, 3), (2, 5)])
def test_hensel_rejects_non_residues(d, p):
    with pytest.raises(PreconditionError) as e:
        hensel_sqrt(d, p, 2)
    assert e.value.code == "NOT_A_RESIDUE"


@given(st.sampled_from([3, 5, 7, 11]), st.integers(-500, 500), st.integers(1, 8))
@settings(max_examples=100, deadline=None)
def test_hensel_root_squares_to_d(p, d, prec):
    if d % p == 0 or pow(d % p, (p - 1) // 2, p) != 1:
        return
    t = hensel_sqrt(d, p, prec)
    assert (t.value * t.value - d) % p**prec == 0


def test_arithmetic_and_precision():
    a = PadicInt(3, 4, 5)
    b = PadicInt(3, 2, 7)
    assert (a + b).prec == 2
    assert (a * a.inverse()).value == 1
    assert (a**-1).value == a.inverse().value
    assert PadicInt(3, 4, 18).valuation() == 2
    assert PadicInt(3, 4, 1).congruent(PadicInt(3, 4, 10), 2)
    with pytest.raises(PreconditionError):
        a + PadicInt(5, 4, 1)


def test_inverse_of_non_unit():
    with pytest.raises(PreconditionError) as e:
        PadicInt(3, 4, 6).inverse()
    assert e.value.code == "NOT_A_UNIT"


@pytest.mark.parametrize("p, prec, u, expected", [(3, 3, 1, 0), (3, 3, 4, 21), (5, 4, 1, 0)])
def test_log_examples(p, prec, u, expected):
    assert padic_log(PadicInt(p, prec, u)).value == expected


def test_log_of_non_unit():
    with pytest.raises(PreconditionError) as e:
        padic_log(PadicInt(3, 4, 3))
    assert e.value.code == "NOT_A_UNIT"


@given(units(5, 6), units(5, 6))
@settings(max_examples=100, deadline=None)
def test_log_is_a_homomorphism(u, v):
    assert padic_log(u * v).value == (padic_log(u) + padic_log(v)).value


@given(st.sampled_from([3, 5, 7]).flatmap(lambda p: units(p, 5)))
@settings(max_examples=100, deadline=None)
def test_log_is_divisible_by_p(u):
    assert padic_log(u).value % u.p == 0


def test_log_normalized_of_generator_is_one():
    assert log_normalized(PadicInt(3, 6, 4)).value == 1


def test_teichmuller_examples():
    t = teichmuller(PadicInt(5, 3, 2))
    assert pow(t.value, 4, 125) == 1
    assert t.value % 5 == 2
    assert teichmuller(PadicInt(7, 3, 6)).value == 7**3 - 1
    assert teichmuller(PadicInt(3, 5, 1)).value == 1


@given(st.sampled_from([3, 5, 7]).flatmap(lambda p: units(p, 4)))
@settings(max_examples=100, deadline=None)
def test_teichmuller_decomposition(u):
    omega = teichmuller(u)
    assert pow(omega.value, u.p - 1, u.modulus) == 1
    assert omega.value % u.p == u.value % u.p
    assert principal_part(u).value % u.p == 1
    assert (omega * principal_part(u)).value == u.value


@pytest.mark.parametrize("value, expected", [(1, True), (4, False), (10, True)])
def test_gold_local_examples(value, expected):
    assert gold_local_test(PadicInt(3, 4, value)) is expected


def test_gold_local_needs_precision():
    with pytest.raises(PreconditionError) as e:
        gold_local_test(PadicInt(3, 2, 1))
    assert e.value.code == "PRECISION_TOO_LOW"


def test_gold_criteria_agree_on_all_units_mod_81():
    for v in range(1, 81):
        if v % 3:
            by_log, by_power = gold_criteria(PadicInt(3, 4, v))
            assert by_log == by_power


@given(st.sampled_from([5, 7]).flatmap(lambda p: units(p, 4)))
@settings(max_examples=500, deadline=None)
def test_gold_criteria_agree_sampled(u):
    by_log, by_power = gold_criteria(u)
    assert by_log == by_power


@given(st.sampled_from([3, 5, 7]).flatmap(lambda p: st.tuples(units(p, 5), units(p, 5))))
@settings(max_examples=100, deadline=None)
def test_gold_verdict_ignores_roots_of_unity(pair):
    u, v = pair
    zeta = teichmuller(v)
    assert gold_local_test(u) == gold_local_test(u * zeta)
    assert gold_local_test(u) == gold_local_test(-u)
