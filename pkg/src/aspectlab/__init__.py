"""Bell experiments, generalized Aspect POVMs, joint existence and contextual hidden variables."""

__version__ = "0.1.0"

from .distributions import (
    CHSH_SETTINGS,
    OBSERVABLES,
    PAIRS,
    BivariateDistribution,
    ExperimentQuartet,
    QuadrivariateDistribution,
    Settings,
)
from .hidden import (
    HiddenVariableSpace,
    MonteCarlo,
    QuasiObjectivisticModel,
    hv_chsh,
    hv_product_joint,
    hv_quartet,
    sawtooth_model,
)
from .inequalities import (
    InconsistentQuartetError,
    bchs_all_variants,
    bchs_value,
    bchs_variants,
    bell_lhs,
    finite_ensemble_chsh,
    quartet_bell_lhs,
)
from .joint import fine_equivalence, joint_exists, product_joint
from .macro import (
    MacrostateModel,
    attempt_quad_construction,
    context_independent_model,
    contextual_values_demo,
    macro_quartet,
    quantum_target_model,
)
from .povm import (
    ArmConfig,
    ExperimentConfig,
    arm_probabilities,
    arm_povm,
    pair_povm,
    quad_probabilities,
    standard_aspect_quartet,
)
from .quantum import DensityMatrix, bell_state, correlation, polarization_projectors, projective_bivariate
from .relax import RelaxationParams, crossing_window, relaxation_sweep

__all__ = [
    "CHSH_SETTINGS",
    "OBSERVABLES",
    "PAIRS",
    "ArmConfig",
    "BivariateDistribution",
    "DensityMatrix",
    "ExperimentConfig",
    "ExperimentQuartet",
    "HiddenVariableSpace",
    "InconsistentQuartetError",
    "MacrostateModel",
    "MonteCarlo",
    "QuadrivariateDistribution",
    "QuasiObjectivisticModel",
    "RelaxationParams",
    "Settings",
    "arm_povm",
    "arm_probabilities",
    "attempt_quad_construction",
    "bchs_all_variants",
    "bchs_value",
    "bchs_variants",
    "bell_lhs",
    "bell_state",
    "context_independent_model",
    "contextual_values_demo",
    "correlation",
    "crossing_window",
    "fine_equivalence",
    "finite_ensemble_chsh",
    "hv_chsh",
    "hv_product_joint",
    "hv_quartet",
    "joint_exists",
    "macro_quartet",
    "pair_povm",
    "polarization_projectors",
    "product_joint",
    "projective_bivariate",
    "quad_probabilities",
    "quantum_target_model",
    "quartet_bell_lhs",
    "relaxation_sweep",
    "sawtooth_model",
    "standard_aspect_quartet",
]
