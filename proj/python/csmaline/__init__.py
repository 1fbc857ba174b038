"""Throughput, fairness and simulation of linear CSMA networks."""

import json

from ._csmaline import (
    ConvergenceFailure,
    EnumerationTooLarge,
    Error,
    InvalidArgument,
    InvalidConfig,
    InvalidRange,
    alpha_matching,
    avg_throughput,
    characteristic_roots,
    fair_rates,
    fair_throughput,
    oscillation_check,
    run_command,
    stability_threshold,
    throughput,
    z_sequence,
)
from ._csmaline import _simulate_json


def simulate(n, beta, **kwargs):
    """Run the simulator and return the report as a dict."""
    return json.loads(_simulate_json(n, beta, **kwargs))


__all__ = [
    "ConvergenceFailure",
    "EnumerationTooLarge",
    "Error",
    "InvalidArgument",
    "InvalidConfig",
    "InvalidRange",
    "alpha_matching",
    "avg_throughput",
    "characteristic_roots",
    "fair_rates",
    "fair_throughput",
    "oscillation_check",
    "run_command",
    "simulate",
    "stability_threshold",
    "throughput",
    "z_sequence",
]
