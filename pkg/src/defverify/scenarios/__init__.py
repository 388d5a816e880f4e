"""End-to-end suites (curve, surface), the scenario language and negative controls."""
from .common import MUTATIONS, ScenarioError
from .curve import run_curve_scenario
from .custom import run_custom
from .dsl import ScenarioSpec, parse_scenario, print_scenario
from .surface import run_surface_scenario

__all__ = [
    "MUTATIONS",
    "ScenarioError",
    "ScenarioSpec",
    "run_curve_scenario",
    "run_surface_scenario",
    "run_custom",
    "parse_scenario",
    "print_scenario",
]
