"""Extension of functions, pseudometrics and metrics from a subset X of a finite metric space Y to all of Y."""
from .covers import MeshCoverFamily, build_mesh_cover
from .dugundji import InnerCover, WeightedCover, build_inner_cover
from .group import GroupAction, average_A, extend_invariant_I, validate_group
from .hm import CoverElement, StepFunction, XPoint, canonical_step, integrate_pair, refine_pair
from .kernels import BACKEND
from .operators import (
    DiagVariant,
    ExtensionContext,
    ExtensionResult,
    compute_Tn,
    dstar,
    eval_E,
    extend_S_family,
    extend_T,
    stabilization_index,
    tail_value,
)
from .space import (
    FiniteMetricSpace,
    Instance,
    InstanceError,
    SubsetSpec,
    dist_to_subset,
    instance_from_dict,
    load_instance,
    load_space,
    nearest_in_subset,
)
from .verify import CheckReport, check_metric_axioms, run_invariant_suite

__version__ = "0.1.0"

__all__ = [
    "MeshCoverFamily",
    "build_mesh_cover",
    "InnerCover",
    "WeightedCover",
    "build_inner_cover",
    "GroupAction",
    "average_A",
    "extend_invariant_I",
    "validate_group",
    "CoverElement",
    "StepFunction",
    "XPoint",
    "canonical_step",
    "integrate_pair",
    "refine_pair",
    "BACKEND",
    "DiagVariant",
    "ExtensionContext",
    "ExtensionResult",
    "compute_Tn",
    "dstar",
    "eval_E",
    "extend_S_family",
    "extend_T",
    "stabilization_index",
    "tail_value",
    "FiniteMetricSpace",
    "Instance",
    "InstanceError",
    "SubsetSpec",
    "dist_to_subset",
    "instance_from_dict",
    "load_instance",
    "load_space",
    "nearest_in_subset",
    "CheckReport",
    "check_metric_axioms",
    "run_invariant_suite",
]
