"""Characteristic-graph rates for distributed multi-function computation."""

import json as _json

from . import _core
from ._core import (
    ConvergenceError,
    DecodeError,
    Error,
    GuardError,
    ValidationError,
    binary_entropy,
    chromatic_entropy,
    diniz_parity_param,
    parity_param,
)

__all__ = [
    "ConvergenceError",
    "DecodeError",
    "Error",
    "GuardError",
    "ValidationError",
    "binary_entropy",
    "chromatic_entropy",
    "conditional_graph_entropy",
    "diniz_parity_param",
    "graph_entropy",
    "parity_param",
    "placement",
    "prop1_rate",
    "prop3_rate",
    "run_scenario",
    "scenario_rates",
    "simulate",
]


def placement(n, k, nr, kc=1, m=0):
    """Cyclic placement as a dict: Z (1-based datasets per server) and derived counts."""
    return _json.loads(_core.placement_json(n, k, nr, kc, m))


def graph_entropy(pmf, edges, tol=1e-9, restarts=8, seed=20240607):
    return _json.loads(_core.graph_entropy_json(list(pmf), list(edges), tol, restarts, seed))


def conditional_graph_entropy(pmf, edges, joint, tol=1e-9, restarts=8, seed=20240607):
    """joint[v][y] is P(X = v, Y = y); rows follow the vertex order."""
    return _json.loads(
        _core.conditional_graph_entropy_json(
            list(pmf), list(edges), [list(r) for r in joint], tol, restarts, seed
        )
    )


def prop1_rate(n, k, nr, kc):
    return _json.loads(_core.prop1_json(n, k, nr, kc))


def prop3_rate(n, k, nr, eps):
    return _json.loads(_core.prop3_json(n, k, nr, eps))


def scenario_rates(scenario, eps, param=0.0, n=0, k=0, nr=0, kc=1):
    """Closed-form rates for one point; scenario is s1, s2-iid, s2-table2,
    s2-diniz, s3 or multilinear. NaN comes back as None."""
    return _json.loads(_core.scenario_rates_json(scenario, eps, param, n, k, nr, kc))


def run_scenario(config):
    """Runs a scenario config (dict or JSON text). Returns (rows, csv_text)."""
    text = config if isinstance(config, str) else _json.dumps(config)
    rows, csv = _core.run_scenario_json(text)
    return _json.loads(rows), csv


def simulate(instance="s2", eps=0.5, blocklength=1, trials=100000, seed=20240607):
    return _json.loads(_core.simulate_json(instance, eps, blocklength, trials, seed))
