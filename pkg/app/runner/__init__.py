from .loader import Materialized, load_scenario, materialize, parse_scenario_text
from .render import render_text
from .run_service import (
    EXIT_CHECK_FAILED,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    RunOptions,
    RunOutcome,
    run_scenario,
    write_outputs,
)

__all__ = [
    "EXIT_CHECK_FAILED",
    "EXIT_INPUT_ERROR",
    "EXIT_OK",
    "Materialized",
    "RunOptions",
    "RunOutcome",
    "load_scenario",
    "materialize",
    "parse_scenario_text",
    "render_text",
    "run_scenario",
    "write_outputs",
]
