"""Python bindings for the Witt-group recipe calculator."""

import json

from . import _core
from ._core import REPORT_SCHEMA, WittError

__all__ = [
    "REPORT_SCHEMA",
    "WittError",
    "run",
    "grassmannian_recipe",
    "verify_koszul",
    "koszul_pushforward",
    "symmetric_cone_of_divisor",
]


def run(*args):
    """Run the command-line front end in-process; returns (exit_code, stdout, stderr)."""
    return _core.run([str(a) for a in args])


def grassmannian_recipe(d, n, lambda_row, omega_iota=1, twist=1, degree=0, fold_degrees=False):
    return json.loads(_core.grassmannian_recipe(d, n, lambda_row, omega_iota, twist, degree, fold_degrees))


def verify_koszul(ring, t, form):
    return json.loads(_core.verify_koszul(ring, t, form))


def koszul_pushforward(ring, t):
    return json.loads(_core.koszul_pushforward(ring, t))


def symmetric_cone_of_divisor(ring, t):
    return json.loads(_core.symmetric_cone_of_divisor(ring, t))
