"""Matrix-level norms on coordinate spaces and certified supremum-norm bounds."""

from .errors import (
    DegenerateInputError,
    InconsistencyError,
    InvalidInputError,
    MatnormError,
)
from .linalg import (
    SvdResult,
    assemble_blocks,
    block_scalar_action,
    direct_sum,
    dual_witness,
    operator_norm,
    random_contraction,
    random_unitary,
    singular_values,
    split_blocks,
    svd,
    trace_norm,
    trace_pairing,
)
from .spaces import (
    AxiomReport,
    Couple,
    LeveledElement,
    MatricialSpace,
    PConvexityReport,
    basis_element,
    c_max,
    c_min,
    check_axioms,
    check_p_convexity,
    concrete_operator_space,
    contractive_functional,
    coproduct_apply,
    element_direct_sum,
    functional_amplification,
    l1_component,
    l1_embed,
    l1_sum,
    pad,
    planted_fault_space,
    random_element,
    scalar_action,
    space_from_id,
)
from .correspondence import (
    PhiMap,
    amplified_image,
    canonical_identity,
    check_naturality,
    phi_amplified,
    phi_apply,
    phi_of,
    reconstruct,
)
from .optimizer import OptimizerConfig, optimize_couple, polar_ascent_step
from .hatspace import (
    ConvexityReport,
    NormBounds,
    SearchResult,
    TraceFunctionalReport,
    block_diag_lower,
    convexity_violation,
    couple_value,
    default_catalog,
    hat_bounds,
    hat_lower_bound,
    hat_upper_bound,
    l1_functional_check,
    random_couple,
    search_lower_bound,
    structured_couples,
)

__version__ = "0.1.0"
