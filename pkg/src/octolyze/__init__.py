"""Octagon abstract domain and a forward static analyzer built on it."""

from .analyzer import AssertReport, InvariantMap, analyze, check_asserts
from .dbm import Dbm, NegativeCycleError
from .lang import ParseError, parse, pretty
from .octagon import Kind, Octagon, OctConstraint, from_constraints, strong_closure, to_constraints
from .transfer import Env, assign, entails, guard, interval_eval

__all__ = [
    "AssertReport",
    "Dbm",
    "Env",
    "InvariantMap",
    "Kind",
    "NegativeCycleError",
    "OctConstraint",
    "Octagon",
    "ParseError",
    "analyze",
    "assign",
    "check_asserts",
    "entails",
    "from_constraints",
    "guard",
    "interval_eval",
    "parse",
    "pretty",
    "strong_closure",
    "to_constraints",
]
