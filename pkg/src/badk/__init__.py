"""badk: heights, diagonal flows and Schmidt games over number fields."""

from ._kernels import backend as kernel_backend
from .balls import Ball, CBall
from .diophantine import (ApproximationWitness, BadReport, approx_quality,
                          bad_constant_estimate, dani_check, dani_time)
from .latticeflow import (FlowSpec, GroupElement, ModuleVector, SystoleResult,
                          conjugated_unipotent, flow_element, height,
                          kspan_equal, module_vector, point_ks,
                          restriction_matrix, shortest_vectors, sup_norm,
                          systole, trajectory_profile, unipotent,
                          unit_renormalize)
from .numberfield import (AlgebraicInteger, FieldError, MinimalPolynomial,
                          NumberField, Place, field_from_config, parse_field,
                          pell_fundamental_unit)
from .precision import (MAX_PRECISION, PrecisionError, get_precision,
                        set_precision, with_escalation, working_precision)

__version__ = "0.1.0"

__all__ = [
    "kernel_backend", "Ball", "CBall", "ApproximationWitness", "BadReport",
    "approx_quality", "bad_constant_estimate", "dani_check", "dani_time",
    "FlowSpec", "GroupElement", "ModuleVector", "SystoleResult",
    "conjugated_unipotent", "flow_element", "height", "kspan_equal",
    "module_vector", "point_ks", "restriction_matrix", "shortest_vectors",
    "sup_norm", "systole", "trajectory_profile", "unipotent",
    "unit_renormalize", "AlgebraicInteger", "FieldError", "MinimalPolynomial",
    "NumberField", "Place", "field_from_config", "parse_field",
    "pell_fundamental_unit", "MAX_PRECISION", "PrecisionError",
    "get_precision", "set_precision", "with_escalation", "working_precision",
    "__version__",
]
