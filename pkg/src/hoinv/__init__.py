"""Higher-order invariants: exact filtrations, tempered combs, second-order modular forms."""

__version__ = "0.1.0"

from hoinv.comb import (
    DeltaComb,
    GaussRational,
    PolyExpSum,
    annihilation_order,
    antidifference,
    comb_to_polyexp,
    fourier_to_comb,
    gaussian_pairing_check,
    shift_difference,
)
from hoinv.invariants import (
    ActionSpec,
    Filtration,
    PresentationSpec,
    dimension_bound_check,
    graded_dimensions,
    hom_space,
    invariants_filtration,
    order_lowering_map,
    restriction_check,
)
from hoinv.linalg import RationalMatrix, Subspace, exact_kernel
from hoinv.modular import (
    Mobius,
    QExpansion,
    eta11_qexp,
    graded_dimension,
    integral_qexp,
    period_integral,
    second_order_residual,
    slash_eval,
)
