from IwasawaLambda.cyclolayer.certificate import (
    BetaCertificate,
    CertificateReport,
    PrimeOfK1,
    factor_rational_prime,
    valuation,
    verify_certificate,
)
from IwasawaLambda.cyclolayer.k1 import (
    K1Element,
    a_product,
    absolute_norm,
    eta_element,
    group_ring_identity,
    k1_add,
    k1_mul,
    lemma_a_identities,
    relative_norm,
    sigma_apply,
    step4_products,
)
from IwasawaLambda.cyclolayer.periods import PeriodField, build_period_field, smallest_primitive_root

__all__ = [
    "BetaCertificate",
    "CertificateReport",
    "K1Element",
    "PeriodField",
    "PrimeOfK1",
    "a_product",
    "absolute_norm",
    "build_period_field",
    "eta_element",
    "factor_rational_prime",
    "group_ring_identity",
    "k1_add",
    "k1_mul",
    "lemma_a_identities",
    "relative_norm",
    "sigma_apply",
    "smallest_primitive_root",
    "step4_products",
    "valuation",
    "verify_certificate",
]
