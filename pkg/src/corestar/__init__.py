"""corestar: exact formal deformations of polynomial and group-twisted
polynomial algebras, built order by order through a contracting-homotopy
recurrence and checked against closed-form references."""

from .errors import ValidationError, CostLimitExceeded
from .poly import Polynomial, ParseError, parse_poly, serialize_poly
from .groups import (MatrixGroup, close_group, ReflectionData, reflection_scan,
                     ClassFunction, validate_class_function)
from .coresolution import (Context, bullet, diff_d, homotopy_h, sigma_proj,
                           expand_group_kernel, check_invariant_central,
                           e_from_poly, a_part, element_to_str)
from .hochschild import (Cochain, evaluate, evaluate_split,
                         multiplication_cochain, compose_circle,
                         gerstenhaber_bracket, hochschild_delta,
                         cochain_d, cochain_h)
from .deformation import (DeformationState, StarResult, validate_seed,
                          run_recurrence, star, mc_residual,
                          deformed_closedness)
from .presets import (PresetConfig, Preset, parse_config, build_preset,
                      standard_pi, auto_cutoff, reference_mu1, run_preset,
                      star_drive, moyal_star_coefficient)

__all__ = [
    "ValidationError", "CostLimitExceeded",
    "Polynomial", "ParseError", "parse_poly", "serialize_poly",
    "MatrixGroup", "close_group", "ReflectionData", "reflection_scan",
    "ClassFunction", "validate_class_function",
    "Context", "bullet", "diff_d", "homotopy_h", "sigma_proj",
    "expand_group_kernel", "check_invariant_central",
    "e_from_poly", "a_part", "element_to_str",
    "Cochain", "evaluate", "evaluate_split", "multiplication_cochain",
    "compose_circle", "gerstenhaber_bracket", "hochschild_delta",
    "cochain_d", "cochain_h",
    "DeformationState", "StarResult", "validate_seed", "run_recurrence",
    "star", "mc_residual", "deformed_closedness",
    "PresetConfig", "Preset", "parse_config", "build_preset", "standard_pi",
    "auto_cutoff", "reference_mu1", "run_preset", "star_drive",
    "moyal_star_coefficient",
]

__version__ = "0.1.0"
