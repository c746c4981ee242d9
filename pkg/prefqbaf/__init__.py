from .bsef import ExtractionConfig, GapWeights, assign_distances, extract_qbaf, nu1, nu2
from .core import DecisionModel
from .exceptions import PrefqbafError
from .framework import (
    BipolarFramework,
    ScoreAssignment,
    running_example,
    topological_order,
    validate_for_decisions,
)
from .preferences import PreferenceOrdering, parse_dsl, render
from .semantics import SemanticsKind, StrengthAssignment, decide, evaluate
from .version import VERSION

__version__ = VERSION
__all__ = [
    "BipolarFramework",
    "DecisionModel",
    "ExtractionConfig",
    "GapWeights",
    "PreferenceOrdering",
    "PrefqbafError",
    "ScoreAssignment",
    "SemanticsKind",
    "StrengthAssignment",
    "assign_distances",
    "decide",
    "evaluate",
    "extract_qbaf",
    "nu1",
    "nu2",
    "parse_dsl",
    "render",
    "running_example",
    "topological_order",
    "validate_for_decisions",
]
