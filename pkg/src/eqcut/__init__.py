"""Equality-language MinCSP classification, gadget reductions, and
parameterized cut solvers."""

from .classify import Verdict, classify_language
from .cutgraph import CutGraph, RequestList, TripleSet
from .instances import Assignment, Constraint, CostReport, MinCspInstance, brute_force_cost
from .relations import EqLanguage, EqRelation, canonicalize, refines
from .singleton import ExpansionVerdict, SingletonExpansion, classify_expansion

__all__ = [
    "Assignment",
    "Constraint",
    "CostReport",
    "CutGraph",
    "EqLanguage",
    "EqRelation",
    "ExpansionVerdict",
    "MinCspInstance",
    "RequestList",
    "SingletonExpansion",
    "TripleSet",
    "Verdict",
    "brute_force_cost",
    "canonicalize",
    "classify_expansion",
    "classify_language",
    "refines",
]
