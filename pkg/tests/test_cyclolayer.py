import json

import pytest

from IwasawaLambda.cyclolayer import (
    BetaCertificate,
    K1Element,
    a_product,
    build_period_field,
    eta_element,
    factor_rational_prime,
    group_ring_identity,
    lemma_a_identities,
    relative_norm,
    sigma_apply,
    valuation,
    verify_certificate,
)
from IwasawaLambda.demo import _random_beta
from IwasawaLambda.errors import CertificateError, PreconditionError
from IwasawaLambda.quadfield import QuadElement

C = QuadElement(-11, 1, 1, 2)


@pytest.fixture
def field3():
    return build_period_field(3)


def constant_beta(field, c=C):
    return K1Element.from_quad(field, [c, QuadElement.from_int(-11, 0), QuadElement.from_int(-11, 0)])


def test_period_polynomial_for_three(field3):
    assert field3.min_poly == (1, 0, -3, 1)
    assert field3.degree == 3


@pytest.mark.parametrize("p", [4, 9, 2])
def test_period_field_rejects_non_odd_primes(p):
    with pytest.raises(ValueError):
        build_period_field(p)


def test_period_field_degree_cap():
    with pytest.raises(PreconditionError) as e:
        build_period_field(17)
    assert e.value.code == "DEGREE_CAP_EXCEEDED"


def test_eta_has_unit_norm_over_the_periods(field3):
    eta0 = K1Element.from_rational_vector(field3, -3, field3.eta(0))
    assert relative_norm(eta0) == QuadElement.from_int(-3, -1)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_cyclotomic_norm_is_p(p):
    assert relative_norm(eta_element(p)) == QuadElement.from_int(-3, p)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_sigma_has_order_p(p):
    eta = eta_element(p)
    assert sigma_apply(eta, p) == eta
    assert sigma_apply(eta, 1) != eta


@pytest.mark.parametrize("p, n", [(p, n) for p in (3, 5, 7, 11, 13) for n in range(1, p)])
def test_group_ring_identity(p, n):
    assert group_ring_identity(p, n)


def test_group_ring_identity_order_range():
    with pytest.raises(PreconditionError) as e:
        group_ring_identity(3, 3)
    assert e.value.code == "ORDER_OUT_OF_RANGE"


def test_products_of_constants(field3):
    beta = K1Element.constant(field3, C)
    assert a_product(beta, 1) == K1Element.constant(field3, C**3)


@pytest.mark.parametrize("p", [3, 5])
def test_norm_identities_hold(p):
    beta = eta_element(p) + K1Element.one(build_period_field(p), -3) * 2
    assert all(lemma_a_identities(beta).values())


@pytest.mark.parametrize("p, disc", [(3, -11), (5, -3)])
def test_norm_identities_hold_on_random_elements(p, disc, rng):
    field = build_period_field(p)
    for _ in range(25):
        beta = _random_beta(field, disc, rng)
        assert all(lemma_a_identities(beta).values())


def test_relative_norm_is_multiplicative(field3, rng):
    for _ in range(100):
        x, y = _random_beta(field3, -11, rng), _random_beta(field3, -11, rng)
        assert relative_norm(x * y) == relative_norm(x) * relative_norm(y)


def test_multiplication_commutes_with_sigma(field3):
    x = K1Element.from_rational_vector(field3, -11, [1, 2, -1]) + K1Element.constant(field3, C)
    y = K1Element.from_rational_vector(field3, -11, [0, 1, 3])
    assert (x * y).sigma() == x.sigma() * y.sigma()
    assert (x * y) == (y * x)
    assert (x**3) == x * x * x


def test_norm_of_zero_is_rejected(field3):
    with pytest.raises(PreconditionError):
        relative_norm(K1Element.zero(field3, -11))


def test_prime_two_in_first_layer(field3):
    primes = factor_rational_prime(field3, -11, 2)
    assert sum(pr.e * pr.f for pr in primes) == 6
    two = K1Element.constant(field3, QuadElement.from_int(-11, 2))
    assert all(valuation(two, pr) == 1 for pr in primes)
    assert all(valuation(K1Element.one(field3, -11), pr) == 0 for pr in primes)


@pytest.mark.parametrize("disc, q", [(-11, 11), (-8, 2), (-4, 2), (-7, 7)])
def test_ramified_prime_of_k_in_first_layer(field3, disc, q):
    primes = factor_rational_prime(field3, disc, q)
    assert all(pr.e == 2 for pr in primes)
    assert sum(pr.e * pr.f for pr in primes) == 6
    assert all(valuation(pr.uniformizer, pr) == 1 for pr in primes)


def certificate(alpha1, beta_const=C):
    field = build_period_field(3)
    return BetaCertificate(disc=-11, p=3, beta=constant_beta(field, beta_const), alpha1=alpha1, alpha=C**3)


def test_synthetic_certificate_passes():
    report = verify_certificate(certificate(QuadElement.from_int(-11, 1)), prec=6)
    assert report.lambda_ge_3 is True
    assert report.lambda_ge_2 is None
    assert report.alpha_source == "override"
    assert report.checked_primes == []
    assert report.norm_sign == 1


def test_synthetic_certificate_refutes():
    report = verify_certificate(certificate(C), prec=6)
    assert report.lambda_ge_3 is False


def test_certificate_valuation_failure():
    with pytest.raises(CertificateError) as e:
        verify_certificate(certificate(QuadElement.from_int(-11, 2)), prec=6)
    assert e.value.code == "VALUATION_FAIL"
    assert e.value.exit_code == 4


def test_tampered_beta_fails_norm_check():
    with pytest.raises(CertificateError) as e:
        verify_certificate(certificate(QuadElement.from_int(-11, 1), beta_const=C + QuadElement.from_int(-11, 1)))
    assert e.value.code == "NORM_MISMATCH"


def test_random_certificates_accept_and_reject_a_perturbation(field3, rng):
    one = QuadElement.from_int(-11, 1)
    for _ in range(20):
        c = QuadElement.from_uv(-11, int(rng.integers(1, 4)), int(rng.integers(0, 3)))
        beta = K1Element.constant(field3, c) * _random_beta(field3, -11, rng) ** 3
        alpha = relative_norm(beta)
        report = verify_certificate(BetaCertificate(disc=-11, p=3, beta=beta, alpha1=one, alpha=alpha), prec=6)
        assert report.norm_sign == 1
        assert report.alpha_source == "override"

        data = beta.data.copy()
        data[int(rng.integers(0, 2)), int(rng.integers(0, 3))] += 1
        tampered = BetaCertificate(disc=-11, p=3, beta=K1Element(field3, -11, data), alpha1=one, alpha=alpha)
        with pytest.raises(CertificateError) as e:
            verify_certificate(tampered, prec=6)
        assert e.value.code == "NORM_MISMATCH"


def test_certificate_json(tmp_path):
    cert = certificate(QuadElement.from_int(-11, 1))
    path = tmp_path / "cert.json"
    path.write_text(json.dumps(cert.to_json()), encoding="utf-8")
    loaded = BetaCertificate.load(path)
    assert loaded.beta == cert.beta
    assert loaded.alpha == cert.alpha
    assert loaded.alpha1 == cert.alpha1


@pytest.mark.parametrize(
    "mutate",
    [
        lambda data: data | {"gamma": "1"},
        lambda data: {k: v for k, v in data.items() if k != "beta"},
        lambda data: data | {"beta": data["beta"][:2]},
        lambda data: data | {"alpha1": ["1", "x", "1"]},
    ],
)
def test_malformed_certificates(mutate):
    data = mutate(certificate(QuadElement.from_int(-11, 1)).to_json())
    with pytest.raises(CertificateError) as e:
        BetaCertificate.from_json(data)
    assert e.value.code == "MALFORMED_CERTIFICATE"


def test_unreadable_certificate(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{", encoding="utf-8")
    with pytest.raises(CertificateError):
        BetaCertificate.load(path)
