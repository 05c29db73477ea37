"""Moving-average adaptive stochastic optimization."""

import json

from ._core import (
    effective_bounds,
    fit_rate,
    neumann_bias,
    problems,
    reddi_drift,
    scaler_steps,
    verify,
    verify_suites,
)
from . import _core

__all__ = [
    "effective_bounds",
    "fit_rate",
    "fixture",
    "neumann_bias",
    "problems",
    "reddi_drift",
    "run",
    "scaler_steps",
    "trajectory",
    "verify",
    "verify_suites",
]


def fixture(problem, seed=1):
    """Serialized problem instance as a dict."""
    return json.loads(_core.fixture_json(problem, seed))


def run(spec, jobs=1, write_files=False):
    """Run a spec dict over its seeds and return the summary."""
    return _core.run_json(json.dumps(spec), jobs, write_files)


def trajectory(spec, seed=0):
    """Logged metrics of one seed as numpy arrays."""
    return _core.trajectory_json(json.dumps(spec), seed)
