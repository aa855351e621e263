"""Finite block-permutation actions, the weak metric and the approximation tools."""
from . import perm
from .action import ActionError, FiniteAction
from .closure import (
    Parametrization,
    Witness,
    canonical_parametrization,
    centralizer_brute,
    good_approx_defect,
    weak_closure_witness,
)
from .extend import Extension, extend_finite_action, relations_hold, restriction_is_lift
from .lnk import ProbeResult, build_Lnk, density_probe, enumerate_Lnk, sample_Lnk
from .metric import (
    DEFAULT_LEVELS,
    BudgetError,
    LevelError,
    LevelSequence,
    MetricValue,
    metric_d,
    metric_dn,
    product_inequality_check,
)
from .presentation import Presentation, kernel_relations, smith_normal_form
from .rge import RelationData, RGEResult, relation_data_from_group, relation_guided_extension

__all__ = [
    "perm",
    "ActionError",
    "FiniteAction",
    "Parametrization",
    "Witness",
    "canonical_parametrization",
    "centralizer_brute",
    "good_approx_defect",
    "weak_closure_witness",
    "Extension",
    "extend_finite_action",
    "relations_hold",
    "restriction_is_lift",
    "ProbeResult",
    "build_Lnk",
    "density_probe",
    "enumerate_Lnk",
    "sample_Lnk",
    "DEFAULT_LEVELS",
    "BudgetError",
    "LevelError",
    "LevelSequence",
    "MetricValue",
    "metric_d",
    "metric_dn",
    "product_inequality_check",
    "Presentation",
    "kernel_relations",
    "smith_normal_form",
    "RelationData",
    "RGEResult",
    "relation_data_from_group",
    "relation_guided_extension",
]
