"""Monte Carlo verification harness for class-(Sigma) submartingale identities.

The heavy lifting lives in the C++ extension ``sigmalab._core``; this package
adds a thin convenience layer on top of it.
"""

import json

from sigmalab._core import (
    default_config,
    dkw_threshold,
    doob_start_z,
    exact_doob_samples,
    ks_against_survival,
    run_experiment_json,
    scenario_names,
    simulate_functionals,
    survival_a_inf,
    survival_a_t,
    survival_max,
)

__all__ = [
    "default_config",
    "dkw_threshold",
    "doob_start_z",
    "exact_doob_samples",
    "ks_against_survival",
    "run_experiment",
    "run_experiment_json",
    "scenario_names",
    "simulate_functionals",
    "survival_a_inf",
    "survival_a_t",
    "survival_max",
]

__version__ = "0.1.0"


def run_experiment(scenario, overrides=None):
    """Run a verification scenario and return its report as a dict."""
    return json.loads(run_experiment_json(scenario, overrides or {}))
