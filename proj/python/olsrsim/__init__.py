"""OLSR / EOLSR energy-aware routing simulator."""

import json

from ._core import (
    InvariantError,
    IoError,
    ScenarioError,
    __version__,
    best_path,
    load_scenario,
    preset,
    run_experiment,
    run_scenario,
    select_mprs,
    sign_test_p,
    validate_scenario,
)


def run(scenario, seed=1, inaccuracy_rows=False):
    """Like run_scenario, but also accepts a dict."""
    if not isinstance(scenario, str):
        scenario = json.dumps(scenario)
    return run_scenario(scenario, seed, inaccuracy_rows)


__all__ = [
    "InvariantError",
    "IoError",
    "ScenarioError",
    "__version__",
    "best_path",
    "load_scenario",
    "preset",
    "run",
    "run_experiment",
    "run_scenario",
    "select_mprs",
    "sign_test_p",
    "validate_scenario",
]
