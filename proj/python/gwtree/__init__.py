"""Conditioned Galton-Watson trees, additive functionals and cut-off bounds.

Families are given as ``"indset"``, ``"matching"``, ``"domset"`` or a dict such as
``{"kind": "reduction", "reduction": "oldpath", "r": 2}``,
``{"kind": "fringe", "pattern": "2 0 0"}`` or ``{"kind": "outdeg", "R": [0]}``.
"""

import json as _json

from ._gwtree import (
    GwtError,
    Tree,
    enumerate_trees,
    exact_counts,
    reduce,
    sample_conditioned,
    sample_gw,
    sample_size_biased,
    size_possible,
)
from . import _gwtree

__all__ = [
    "GwtError",
    "Tree",
    "enumerate_trees",
    "evaluate",
    "exact_counts",
    "exact_expectation",
    "reduce",
    "run_experiment",
    "sample_conditioned",
    "sample_gw",
    "sample_size_biased",
    "size_possible",
    "tau_report",
]


def _family(family):
    return _json.dumps(family)


def evaluate(family, tree, tolls=False):
    """F(tree) for a family; with ``tolls=True`` also the per-node tolls."""
    return _gwtree._evaluate(_family(family), tree, tolls)


def tau_report(family, tree, M, dom_constant=1.0):
    """Cut-off bound report for indset, matching, domset or a reduction."""
    return _gwtree._tau_report(_family(family), tree, M, dom_constant)


def exact_expectation(family, n, dist="geometric", pmf=()):
    """(E f(T_n), E F(T_n)) by enumeration, n <= 12."""
    return _gwtree._exact_expectation(_family(family), n, dist, list(pmf))


def run_experiment(config):
    """Runs an experiment config (dict or JSON text).

    Returns the parsed summary with the raw replicate values under ``"F"``,
    keyed by tree size.
    """
    text = config if isinstance(config, str) else _json.dumps(config)
    res = _gwtree._run_experiment(text)
    summary = _json.loads(res["summary_json"])
    summary["F"] = {n: values for n, values in res["F"]}
    return summary
