"""Finite-dimensional laboratory for tensor norms on products of normed spaces.

The package computes certified or estimated values of the classical tensor
norms (injective, projective, and the summing-type interpolations between
them) on explicit finite-dimensional weighted ell_p spaces, together with
the matching ideal norms of multilinear maps, and ships verification suites
that re-check the defining inequalities of those norms numerically.

Everything is deterministic: every search takes a seed, and identical
inputs with identical seeds reproduce results bit for bit.
"""

from .evaluators import (
    evaluator_for,
    make_beta_evaluator,
    make_epsilon_evaluator,
    make_pi_evaluator,
    make_sigma_evaluator,
)
from .ideals import (
    LinConfig,
    Linearization,
    MultilinearMap,
    SmConfig,
    compose,
    finite_type_map,
    linearization_norm,
    one_adjunction,
    one_adjunction_inverse,
    property_B_check,
    random_map,
    si_p_norm,
    sm_pq_norm,
    sup_argmax,
    sup_norm,
    vector_scalar_bridge,
    vector_scalar_bridge_inverse,
)
from .injective import (
    BudgetError,
    EpsilonConfig,
    epsilon_argmax,
    epsilon_bruteforce,
    epsilon_estimate,
    multilinear_sup,
    operator_norm,
)
from .projective import (
    PiConfig,
    pi_dual_certificate,
    pi_estimate,
    pi_lower,
    pi_matrix_oracle,
    pi_upper,
    strip_unit_factors,
)
from .serialize import (
    SerializationError,
    canonical_json,
    config_hash,
    estimate_to_json,
    decomposition_from_json,
    decomposition_to_json,
    jsonable,
    load_input,
    map_from_json,
    map_to_json,
    report_csv,
    report_json,
    space_from_json,
    space_to_json,
    tensor_from_json,
    tensor_to_json,
)
from .sigma import (
    BetaConfig,
    BetaResult,
    ModulusResult,
    SigmaConfig,
    SigmaDualConfig,
    SigmaDualResult,
    SigmaResult,
    beta_p_upper,
    family_modulus_p,
    family_strong_norm,
    sigma_p_dual,
    sigma_p_upper,
)
from .spaces import (
    INF,
    Functional,
    NormedSpace,
    SpaceError,
    UnsupportedNormError,
    Vector,
    scalar_space,
)
from .tensors import (
    Decomposition,
    DecompositionTerm,
    NormEstimate,
    Tensor,
    TensorNormEvaluator,
    TensorSpace,
    apply_operators,
    flatten_scalar,
    random_decomposition,
    random_tensor,
    unflatten_scalar,
)
from .verify import (
    SMOOTHNESS_TOLERANCES,
    Report,
    check_bidual_consistency,
    check_crossnorm,
    check_metric_mapping,
    check_representation,
    check_smoothness,
    witness_search_nonsmooth,
)

__version__ = "0.1.0"

__all__ = [
    "INF",
    "BetaConfig",
    "BetaResult",
    "BudgetError",
    "Decomposition",
    "DecompositionTerm",
    "EpsilonConfig",
    "Functional",
    "LinConfig",
    "Linearization",
    "MultilinearMap",
    "NormEstimate",
    "NormedSpace",
    "PiConfig",
    "Report",
    "SMOOTHNESS_TOLERANCES",
    "SerializationError",
    "ModulusResult",
    "SigmaConfig",
    "SigmaDualConfig",
    "SigmaDualResult",
    "SigmaResult",
    "SmConfig",
    "SpaceError",
    "Tensor",
    "TensorNormEvaluator",
    "TensorSpace",
    "UnsupportedNormError",
    "Vector",
    "apply_operators",
    "beta_p_upper",
    "check_bidual_consistency",
    "check_crossnorm",
    "check_metric_mapping",
    "check_representation",
    "check_smoothness",
    "compose",
    "canonical_json",
    "config_hash",
    "decomposition_from_json",
    "decomposition_to_json",
    "epsilon_argmax",
    "epsilon_bruteforce",
    "epsilon_estimate",
    "estimate_to_json",
    "evaluator_for",
    "family_modulus_p",
    "family_strong_norm",
    "finite_type_map",
    "flatten_scalar",
    "jsonable",
    "linearization_norm",
    "load_input",
    "make_beta_evaluator",
    "make_epsilon_evaluator",
    "make_pi_evaluator",
    "make_sigma_evaluator",
    "map_from_json",
    "map_to_json",
    "multilinear_sup",
    "one_adjunction",
    "one_adjunction_inverse",
    "operator_norm",
    "pi_dual_certificate",
    "pi_estimate",
    "pi_lower",
    "pi_matrix_oracle",
    "pi_upper",
    "property_B_check",
    "random_decomposition",
    "random_map",
    "random_tensor",
    "report_csv",
    "report_json",
    "scalar_space",
    "si_p_norm",
    "sigma_p_dual",
    "sigma_p_upper",
    "sm_pq_norm",
    "space_from_json",
    "space_to_json",
    "strip_unit_factors",
    "sup_argmax",
    "sup_norm",
    "tensor_from_json",
    "tensor_to_json",
    "unflatten_scalar",
    "vector_scalar_bridge",
    "vector_scalar_bridge_inverse",
    "witness_search_nonsmooth",
]
