"""Monotone cellular-automaton growth driven by Young-diagram zero-sets."""

__version__ = "0.1.0"

from .zeroset import (  # noqa: E402
    INF,
    Rule,
    ZeroSet,
    bootstrap,
    l_finite,
    l_infinite,
    line,
    parse_zeroset,
    perturbed_line,
    transpose,
    validate_rule,
)
from .grid import Boundary, Configuration  # noqa: E402
from .engine import BACKEND, Outcome, StopCondition, StopReason, run, step, step_naive  # noqa: E402
from .observables import (  # noqa: E402
    critical_length,
    final_density,
    first_occupation_time,
    spanning_probability,
)
from .harness import ExperimentConfig, run_experiment  # noqa: E402

__all__ = [
    "__version__", "INF", "Rule", "ZeroSet", "bootstrap", "l_finite", "l_infinite", "line",
    "parse_zeroset", "perturbed_line", "transpose", "validate_rule", "Boundary",
    "Configuration", "BACKEND", "Outcome", "StopCondition", "StopReason", "run", "step",
    "step_naive", "critical_length", "final_density", "first_occupation_time",
    "spanning_probability", "ExperimentConfig", "run_experiment",
]
