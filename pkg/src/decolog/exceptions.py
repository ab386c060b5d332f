"""Programmer-level exception logic: canonical forms and the decision
procedure reducing decorated equations to pure equations.

Every term is provably equal either to a pure term or to a thrown pure
parameter (``throw . u``).  The normalizer scans for the rightmost effect
atom and rewrites with the propagate / try rules; the decider then splits
on the canonical shapes of both sides.
"""

from __future__ import annotations

from dataclasses import dataclass

from .reduction import (
    PureReduction,
    empty_domain,
    holds_in_model,
    inconsistent,
    pure_eqs,
)
from .semantics import FiniteModel
from .terms import (
    EMPTY,
    Copa,
    DecoError,
    Equation,
    FamilyError,
    Gen,
    ObjType,
    Signature,
    Term,
    Throw,
    TryCatch,
    atom_term,
    compose,
    identity,
    validate_term,
)

PURE_FORM = "pure"
THROWN_FORM = "thrown"


@dataclass(frozen=True)
class CanonicalExc:
    """Canonical shape of an exception-logic term: a pure term, or
    ``throw[cod] . pure``."""

    kind: str
    pure: Term
    cod: ObjType

    def __post_init__(self) -> None:
        if self.pure.grade != 0:
            raise DecoError("canonical forms carry pure residues only")


def reify_exc(c: CanonicalExc, param: ObjType) -> Term:
    if c.kind == PURE_FORM:
        return c.pure
    return compose(atom_term(Throw(param, c.cod)), c.pure)


def _split_first_effect(t: Term):
    """Write t as rest . op . prefix with the prefix pure and op the first
    effect atom in application order (the rightmost in composition
    notation)."""
    for i, atom in enumerate(t.body):
        if atom.grade >= 1:
            prefix = Term(t.dom, atom.dom, t.body[:i])
            rest = Term(atom.cod, t.cod, t.body[i + 1 :])
            return prefix, atom, rest
    raise DecoError("term is pure, nothing to split")


def normalize_exc(t: Term, sig: Signature) -> CanonicalExc:
    """Canonical form, provably equal to ``t`` in the exception logic."""
    validate_term(t, sig, "exc")
    return _normalize_exc(t, sig)


def _normalize_exc(t: Term, sig: Signature) -> CanonicalExc:
    if t.dom == EMPTY:
        # every term out of the empty type equals the unique copa
        canon = identity(EMPTY) if t.cod == EMPTY else atom_term(Copa(t.cod))
        return CanonicalExc(PURE_FORM, canon, t.cod)
    if t.grade == 0:
        return CanonicalExc(PURE_FORM, t, t.cod)
    prefix, op, rest = _split_first_effect(t)
    if isinstance(op, Throw):
        # rest . throw . prefix == throw[cod] . prefix by propagation
        return CanonicalExc(THROWN_FORM, prefix, t.cod)
    if isinstance(op, TryCatch):
        inner = _normalize_exc(op.body, sig)
        if inner.kind == PURE_FORM:
            # pure code inside try never triggers the handler
            return _normalize_exc(compose(rest, inner.pure, prefix), sig)
        # the body throws: run the handler on the thrown parameter
        return _normalize_exc(compose(rest, op.handler, inner.pure, prefix), sig)
    if isinstance(op, Gen):
        raise DecoError(
            f"cannot canonicalize the opaque effectful generator {op.name!r}"
        )
    raise FamilyError(f"atom {op!r} is not part of the exception logic")


def emptiness_map(sig: Signature, model: FiniteModel | None = None) -> dict:
    """Which object types denote empty sets.  The empty type always does;
    user types only when a model block declares a zero carrier."""
    out = {EMPTY: True}
    for t in sig.obj_types():
        if t == EMPTY:
            continue
        out[t] = bool(model) and model.size(t) == 0
    if sig.param is not None and out.get(sig.param):
        raise DecoError("the parameter type must be non-empty")
    return out


def decide_exc(eq: Equation, sig: Signature, emptiness: dict) -> PureReduction:
    """Reduce a strong exception equation to pure equations, or detect the
    thrown-vs-pure clash (equivalent to the maximal pure theory), or the
    empty-domain case (equivalent to no pure equations at all)."""
    if eq.weak:
        raise FamilyError("the exception logic has no weak equations")
    try:
        empty = emptiness[eq.lhs.dom]
    except KeyError:
        raise DecoError(f"emptiness of {eq.lhs.dom} is unknown")
    if empty:
        return empty_domain()
    c1 = normalize_exc(eq.lhs, sig)
    c2 = normalize_exc(eq.rhs, sig)
    if c1.kind == c2.kind:
        return pure_eqs([Equation(c1.pure, c2.pure)])
    return inconsistent(direct=True)


def check_exc(eq: Equation, sig: Signature, m: FiniteModel) -> bool:
    """Decide, then evaluate the produced pure equations in the model."""
    red = decide_exc(eq, sig, emptiness_map(sig, m))
    return holds_in_model(red, m)
