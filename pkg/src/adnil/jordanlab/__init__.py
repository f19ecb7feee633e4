"""Linear and quadratic Jordan algebras."""

from .generic import PolyVec
from .ja import (
    JaData,
    ja_algebra,
    ja_construct,
    ja_data,
    kprime_ideal_test,
    divided_ad_chain_check,
    sandwich_image_product_check,
    quadratic_exchange_check,
    sandwich_from_azd,
)
from .linear import FGGResult, LinearJordanAlgebra, fgg_quotient, verify_linear_jordan
from .quadratic import (
    AXIOMS,
    FunctionQJA,
    JordanReport,
    QuadraticJordanAlgebra,
    TableQJA,
    annihilator_of_Q,
    azd_check,
    azd_powers,
    azd_pushforward,
    construct_model,
    from_tables,
    hermitian_algebra,
    homotope,
    jordan_power,
    plus_algebra,
    power_associativity_witness,
    power_identity_holds,
    quadratic_form_algebra,
    sym_bound_check,
    sym_identity,
    verify_quadratic_jordan,
    zero_algebra,
)
