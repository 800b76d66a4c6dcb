"""Python access to the percept library.

Profiles and intervention grids are passed as JSON text, reports come
back as dicts.
"""

import json

from ._core import (
    Error,
    ValidationError,
    check_conjunction,
    factorization,
    kl_divergence,
    normalize_profile,
    run,
    sample,
    wasserstein2,
)
from . import _core


def _text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def compare(a, b, grid=None, metric="w2", ridge=1e-9, agg="max", epsilon=0.01):
    g = None if grid is None else _text(grid)
    return json.loads(_core.compare_json(_text(a), _text(b), g, metric, ridge, agg, epsilon))


def consistency(profile, tau=None, tol=1e-9, omega="equal-split", grid=None):
    g = None if grid is None else _text(grid)
    return json.loads(_core.consistency_json(_text(profile), tau, tol, omega, g))


__all__ = [
    "Error",
    "ValidationError",
    "check_conjunction",
    "compare",
    "consistency",
    "factorization",
    "kl_divergence",
    "normalize_profile",
    "run",
    "sample",
    "wasserstein2",
]
