"""Fully dynamic monotone submodular maximization under a cardinality constraint."""

__version__ = "0.1.0"

from .baselines import RandomK, SieveStreaming
from .dynamic_core import CoreParams, DynamicStructure
from .errors import (
    ConfigError,
    DuplicateElementError,
    InstanceTooLargeError,
    MissingElementError,
    UnknownElementError,
)
from .meta import GuessEnsemble
from .oracle import (
    CountingOracle,
    CoverageFunction,
    Graph,
    ModularFunction,
    SetFunction,
    coverage_value,
)
from .peeling import estimate_mean, estimator_plan, peel
from .reference import ExactResult, brute_force_opt, greedy
from .simplified import SimplifiedStructure

__all__ = [
    "ConfigError",
    "CoreParams",
    "CountingOracle",
    "CoverageFunction",
    "DuplicateElementError",
    "DynamicStructure",
    "ExactResult",
    "Graph",
    "GuessEnsemble",
    "InstanceTooLargeError",
    "MissingElementError",
    "ModularFunction",
    "RandomK",
    "SetFunction",
    "SieveStreaming",
    "SimplifiedStructure",
    "UnknownElementError",
    "brute_force_opt",
    "coverage_value",
    "estimate_mean",
    "estimator_plan",
    "greedy",
    "peel",
]
