from IwasawaLambda.massey.defining_system import (
    DefiningSystem,
    LiftedSystem,
    MasseyResult,
    all_proper_systems,
    block_compose,
    extend_proper,
    lift_search,
    massey_cocycle_check,
    massey_value,
    proper_psis,
    proper_system,
    random_proper_system,
)
from IwasawaLambda.massey.unipotent import MnGroup, UnipotentMatrix, build_Mn, quotient_map

__all__ = [
    "DefiningSystem",
    "LiftedSystem",
    "MasseyResult",
    "MnGroup",
    "UnipotentMatrix",
    "all_proper_systems",
    "block_compose",
    "build_Mn",
    "extend_proper",
    "lift_search",
    "massey_cocycle_check",
    "massey_value",
    "proper_psis",
    "proper_system",
    "quotient_map",
    "random_proper_system",
]
