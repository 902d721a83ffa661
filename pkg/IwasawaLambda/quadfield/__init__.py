from IwasawaLambda.quadfield.forms import (
    QuadField,
    QuadForm,
    SplitType,
    class_number_dirichlet,
    is_fundamental,
    kronecker,
    reduced_forms,
    split_type,
)
from IwasawaLambda.quadfield.gold import GoldReport, class_number, gold_test, nonsplit_lambda2_test
from IwasawaLambda.quadfield.ideals import (
    QuadElement,
    QuadIdeal,
    completion_root,
    embed,
    ideal_pow_generator,
    prime_above,
    principal_generator,
)

__all__ = [
    "GoldReport",
    "QuadElement",
    "QuadField",
    "QuadForm",
    "QuadIdeal",
    "SplitType",
    "class_number",
    "class_number_dirichlet",
    "completion_root",
    "embed",
    "gold_test",
    "ideal_pow_generator",
    "is_fundamental",
    "kronecker",
    "nonsplit_lambda2_test",
    "prime_above",
    "principal_generator",
    "reduced_forms",
    "split_type",
]
