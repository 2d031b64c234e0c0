"""Complexity classification of finite equality constraint languages."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .relations import (
    EqLanguage,
    EqRelation,
    essential_projection,
    is_conjunctive,
    is_horn,
    is_negative,
    is_neq3,
    is_split,
    is_strictly_negative,
)

CSP_P = "P"
CSP_NP_HARD = "NP-hard"
PARAM_FPT = "FPT"
PARAM_W1 = "W[1]-hard"
PARAM_HS = "HittingSet-hard"
APPROX_POLY = "poly-const"
APPROX_FPT = "fpt-const"
APPROX_HS = "HittingSet-hard"
APPROX_TRIVIAL = "trivial"


class ImproperRelationError(ValueError):
    pass


@dataclass(frozen=True)
class Verdict:
    csp: str
    mincsp_classical: str
    parameterized: str
    approx: str
    witness: Optional[tuple[str, str]] = None

    def as_dict(self) -> dict:
        return {
            "csp": self.csp,
            "mincsp_classical": self.mincsp_classical,
            "parameterized": self.parameterized,
            "approx": self.approx,
            "witness": list(self.witness) if self.witness else None,
        }


@dataclass(frozen=True)
class RelationFlags:
    name: str
    constant: bool
    horn: bool
    negative: bool
    strictly_negative: bool
    conjunctive: bool
    split: bool
    neq3: bool
    redundant: tuple[int, ...]


def relation_flags(rel: EqRelation) -> RelationFlags:
    """Classification flags; split/NEQ3 are judged on the essential projection."""
    ess, kept = essential_projection(rel)
    redundant = tuple(i for i in range(1, rel.arity + 1) if i not in kept)
    return RelationFlags(
        name=rel.name,
        constant=rel.is_constant(),
        horn=is_horn(rel),
        negative=is_negative(rel),
        strictly_negative=is_strictly_negative(rel),
        conjunctive=is_conjunctive(rel),
        split=is_split(ess),
        neq3=is_neq3(ess),
        redundant=redundant,
    )


def classify_language(lang: EqLanguage, with_eq_neq: bool = False) -> Verdict:
    """Decision tree over the fragment flags of the language's relations.

    Improper relations are rejected outright.  With with_eq_neq=True, binary
    equality and disequality are added to the language before classifying.
    """
    if with_eq_neq:
        lang = lang.with_eq_neq()
    if len(lang) == 0:
        return Verdict(CSP_P, CSP_P, PARAM_FPT, APPROX_TRIVIAL)
    for rel in lang:
        if not rel.is_proper():
            raise ImproperRelationError(
                f"relation {rel.name!r} is {'empty' if rel.is_empty() else 'complete'}")
    flags = [relation_flags(r) for r in lang]

    all_constant = all(f.constant for f in flags)
    all_sneg = all(f.strictly_negative for f in flags)
    all_horn = all(f.horn for f in flags)
    all_negative = all(f.negative for f in flags)

    if all_constant or all_sneg:
        reason = "constant" if all_constant else "strictly-negative"
        return Verdict(CSP_P, CSP_P, PARAM_FPT, APPROX_TRIVIAL,
                       witness=(flags[0].name, reason))

    if not all_horn:
        bad = next(f for f in flags if not f.horn)
        return Verdict(CSP_NP_HARD, CSP_NP_HARD, PARAM_HS, APPROX_HS,
                       witness=(bad.name, "not-horn"))

    # Horn, neither constant nor strictly negative: the language implements
    # both equality and disequality and MinCSP is NP-hard.
    if not all_negative:
        bad = next(f for f in flags if not f.negative)
        return Verdict(CSP_P, CSP_NP_HARD, PARAM_HS, APPROX_HS,
                       witness=(bad.name, "horn-not-negative"))

    hard = next((f for f in flags if not (f.split or f.neq3)), None)
    if hard is not None:
        return Verdict(CSP_P, CSP_NP_HARD, PARAM_W1, APPROX_FPT,
                       witness=(hard.name, "negative-not-split-not-neq3"))

    return Verdict(CSP_P, CSP_NP_HARD, PARAM_FPT, APPROX_FPT,
                   witness=None)
