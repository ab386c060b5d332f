"""Outcome of deciding a decorated equation.

A decided equation is either equivalent to a finite set of pure strong
equations, or to the maximal pure theory (``inconsistent``), or to the
empty set of pure equations (``empty domain``).  ``direct`` records
whether an inconsistency was the top-level clash or surfaced while
reducing produced sub-equations; the distinction only affects reporting.
"""

from __future__ import annotations

from dataclasses import dataclass

from .semantics import FiniteModel, sem_holds
from .terms import Equation, oriented

PURE_EQS = "pure_eqs"
INCONSISTENT = "inconsistent"
EMPTY_DOMAIN = "empty_domain"


@dataclass(frozen=True)
class PureReduction:
    kind: str
    equations: frozenset = frozenset()
    direct: bool = True

    def __post_init__(self) -> None:
        if self.kind not in (PURE_EQS, INCONSISTENT, EMPTY_DOMAIN):
            raise ValueError(f"bad reduction kind {self.kind!r}")

    @property
    def is_inconsistent(self) -> bool:
        return self.kind == INCONSISTENT

    @property
    def is_empty_domain(self) -> bool:
        return self.kind == EMPTY_DOMAIN

    def sorted_equations(self) -> list[Equation]:
        return sorted(self.equations, key=str)


def pure_eqs(equations) -> PureReduction:
    """Build a pure-equation set, dropping members whose two sides are
    structurally identical (they hold by reflexivity)."""
    kept = frozenset(
        oriented(eq) for eq in equations if eq.lhs != eq.rhs
    )
    return PureReduction(PURE_EQS, kept)


def inconsistent(direct: bool = True) -> PureReduction:
    return PureReduction(INCONSISTENT, frozenset(), direct)


def empty_domain() -> PureReduction:
    return PureReduction(EMPTY_DOMAIN)


def combine(parts) -> PureReduction:
    """Union of reductions: inconsistency absorbs, empty domains are
    neutral."""
    eqs: set = set()
    for part in parts:
        if part.is_inconsistent:
            return inconsistent(direct=False)
        if part.is_empty_domain:
            continue
        eqs.update(part.equations)
    return PureReduction(PURE_EQS, frozenset(eqs))


def holds_in_model(red: PureReduction, m: FiniteModel) -> bool:
    """A reduction holds when all its pure equations do; an inconsistency
    never holds and an empty domain always does."""
    if red.is_inconsistent:
        return False
    if red.is_empty_domain:
        return True
    return all(sem_holds(e, m) for e in red.equations)
