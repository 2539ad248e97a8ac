"""Canonical bases and Kazhdan-Lusztig tables for involution modules of Hecke algebras."""

from .coxeter import CoxeterSystem, GroupElement, ReflectionRep, build_system
from .errors import (
    InconsistentBar,
    InvariantError,
    NotDivisible,
    RecurrenceInconsistent,
    RelationViolated,
    TheoremMismatch,
)
from .laurent import LaurentPoly

__all__ = [
    "CoxeterSystem",
    "GroupElement",
    "ReflectionRep",
    "build_system",
    "LaurentPoly",
    "InvariantError",
    "NotDivisible",
    "InconsistentBar",
    "RecurrenceInconsistent",
    "TheoremMismatch",
    "RelationViolated",
]

__version__ = "0.1.0"
