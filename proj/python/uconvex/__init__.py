"""Uniform convexity toolkit for phi-paranormed spaces."""

import json

from ._uconvex import (
    DomainError,
    Generator,
    InvalidArgument,
    OverflowError,
    Paranorm,
    ParseError,
    RouteUnavailable,
    UconvexError,
    delta_closed_form,
    delta_implicit,
    exp_plane_delta0,
    exp_plane_modulus,
    run_cli,
)
from . import _uconvex

__all__ = [
    "DomainError",
    "Generator",
    "InvalidArgument",
    "OverflowError",
    "Paranorm",
    "ParseError",
    "RouteUnavailable",
    "UconvexError",
    "certify",
    "check",
    "delta_closed_form",
    "delta_implicit",
    "empirical_modulus",
    "exp_plane_delta0",
    "exp_plane_modulus",
    "run_cli",
]


def _gen(g):
    return Generator.from_spec(g) if isinstance(g, str) else g


def check(condition, generator, grid=""):
    """Report of one condition as a dict (verdict, margin, witness, ...)."""
    return json.loads(_uconvex.check_json(condition, _gen(generator), grid))


def certify(generator, weights, grid=""):
    return json.loads(_uconvex.certify_json(_gen(generator), list(weights), grid))


def empirical_modulus(paranorm, r, eps, samples=20000, seed=1):
    return json.loads(_uconvex.empirical_modulus(paranorm, r, eps, samples, seed))
