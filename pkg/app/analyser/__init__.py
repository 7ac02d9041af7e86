from .heisenberg import conjugate_partition, heisenberg_analyser, shift_analyser
from .partition import Analyser, Partition, TimeLike, canonical_time, time_value, validate_partition
from .randomized import (
    RandomAnalyser,
    random_binary_splits,
    random_commuting_analyser,
    random_generic_analyser,
    random_state,
    random_state_in,
)
from .refinement import RefinementMap, analysers_equivalent, coarsen, compose, refine, validate_refinement
from .scenarios import SCENARIOS, ScenarioInfo, ScenarioInstance, list_scenarios, scenario

__all__ = [
    "Analyser",
    "Partition",
    "RandomAnalyser",
    "RefinementMap",
    "SCENARIOS",
    "ScenarioInfo",
    "ScenarioInstance",
    "TimeLike",
    "analysers_equivalent",
    "canonical_time",
    "coarsen",
    "compose",
    "conjugate_partition",
    "heisenberg_analyser",
    "list_scenarios",
    "random_binary_splits",
    "random_commuting_analyser",
    "random_generic_analyser",
    "random_state",
    "random_state_in",
    "refine",
    "scenario",
    "shift_analyser",
    "time_value",
    "validate_partition",
    "validate_refinement",
]
