"""Concept combination in weighted binary spaces and a language game over dimension weights."""

from .combination import (
    CompositeConcept,
    CompoundConcept,
    WeightVector,
    binary_oracle,
    composite_membership,
    compound_membership,
    flatten_compound,
    weighted_hamming,
)
from .errors import ConfigError, InputError, LabelSemError, ResourceError, UnsupportedStructureError
from .experiments import ExperimentConfig, RunRecord, run_sweep, summarize
from .game import (
    Agent,
    Assertion,
    ElementDistribution,
    GameWorld,
    assertion_value,
    best_assertion,
    listener_update,
    population_stats,
    positive_region_probability,
    predicted_fixed_point,
)
from .semantics import Label, Sign, SignedLabel, ThresholdDistribution, appropriateness, signed_membership

__version__ = "0.1.0"

__all__ = [
    "Agent",
    "Assertion",
    "CompositeConcept",
    "CompoundConcept",
    "ConfigError",
    "ElementDistribution",
    "ExperimentConfig",
    "GameWorld",
    "InputError",
    "Label",
    "LabelSemError",
    "ResourceError",
    "RunRecord",
    "Sign",
    "SignedLabel",
    "ThresholdDistribution",
    "UnsupportedStructureError",
    "WeightVector",
    "appropriateness",
    "assertion_value",
    "best_assertion",
    "binary_oracle",
    "composite_membership",
    "compound_membership",
    "flatten_compound",
    "listener_update",
    "population_stats",
    "positive_region_probability",
    "predicted_fixed_point",
    "run_sweep",
    "signed_membership",
    "summarize",
    "weighted_hamming",
]
