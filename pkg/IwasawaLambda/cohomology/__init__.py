from IwasawaLambda.cohomology.bockstein import (
    bockstein_direct,
    bockstein_formula,
    lift_one_level,
    lifts_by_solve,
    min_nonvanishing_psi,
    psi_components,
    psi_vanishes,
    reduce_independence_check,
)
from IwasawaLambda.cohomology.complex import (
    Cochain1,
    Cochain2,
    CochainComplex,
    CohomologyBasis,
    CohomologyClass,
    cochain_complex,
    cup,
    d0,
    d1,
    d2,
    h1,
    h2,
)
from IwasawaLambda.cohomology.equivariance import (
    IdempotentEpsilon,
    delta_characters,
    epsilon_idempotent,
    equivariance_check,
    idempotent_identities,
)
from IwasawaLambda.cohomology.filtration import FiltrationReport, KummerDimensions, filtration_order, kummer_dimensions
from IwasawaLambda.cohomology.group import FiniteGroup
from IwasawaLambda.cohomology.induced import corestriction, induced_module, norm_image_check, shapiro_check
from IwasawaLambda.cohomology.module import CharacterChi, FpModule, OmegaModule, is_equivariant, omega_module

__all__ = [
    "CharacterChi",
    "Cochain1",
    "Cochain2",
    "CochainComplex",
    "CohomologyBasis",
    "CohomologyClass",
    "FiltrationReport",
    "FiniteGroup",
    "FpModule",
    "IdempotentEpsilon",
    "KummerDimensions",
    "OmegaModule",
    "bockstein_direct",
    "bockstein_formula",
    "cochain_complex",
    "corestriction",
    "cup",
    "d0",
    "d1",
    "d2",
    "delta_characters",
    "epsilon_idempotent",
    "equivariance_check",
    "filtration_order",
    "h1",
    "h2",
    "idempotent_identities",
    "induced_module",
    "is_equivariant",
    "kummer_dimensions",
    "lift_one_level",
    "lifts_by_solve",
    "min_nonvanishing_psi",
    "norm_image_check",
    "omega_module",
    "psi_components",
    "psi_vanishes",
    "reduce_independence_check",
    "shapiro_check",
]
