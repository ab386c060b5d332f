"""Decorated logic for a single storage location: lookup/update, weak and
strong equations, canonical forms and the decision procedure.

Canonical shapes (duals of the core exception ones):

* ``pure``      a pure term;
* ``accessor``  ``v . lookup . pa[X]`` with ``v`` pure (``v . lookup``
  when the domain is the unit type);
* ``modifier``  ``u . lookup . update . a`` with ``u`` pure out of the
  value type and ``a`` a canonical accessor into it.

Deciding an equation with a pure side needs an inhabitation witness, a
declared constant, for the domain type.
"""

from __future__ import annotations

from dataclasses import dataclass

from .reduction import (
    PureReduction,
    combine,
    empty_domain,
    holds_in_model,
    pure_eqs,
)
from .semantics import FiniteModel
from .terms import (
    UNIT,
    Const,
    DecoError,
    Equation,
    FamilyError,
    Gen,
    Lookup,
    ObjType,
    Pa,
    STRONG,
    Signature,
    Term,
    Update,
    atom_term,
    compose,
    identity,
    validate_term,
)

PURE_FORM = "pure"
ACCESSOR_FORM = "accessor"
MODIFIER_FORM = "modifier"


@dataclass(frozen=True)
class CanonicalState:
    kind: str
    pure: Term
    dom: ObjType
    acc: Term | None = None

    def __post_init__(self) -> None:
        if self.pure.grade != 0:
            raise DecoError("canonical forms carry pure residues only")
        if (self.kind == MODIFIER_FORM) != (self.acc is not None):
            raise DecoError("modifier forms and only modifier forms embed an accessor")
        if self.acc is not None and self.acc.grade > 1:
            raise DecoError("the embedded term of a modifier form must be an accessor")


def _accessor_term(v: Term, dom: ObjType, sig: Signature) -> Term:
    t = compose(v, atom_term(Lookup(sig.value)))
    if dom == UNIT:
        return t
    return compose(t, atom_term(Pa(dom)))


def reify_state(c: CanonicalState, sig: Signature) -> Term:
    if c.kind == PURE_FORM:
        return c.pure
    if c.kind == ACCESSOR_FORM:
        return _accessor_term(c.pure, c.dom, sig)
    return compose(
        c.pure,
        atom_term(Lookup(sig.value)),
        atom_term(Update(sig.value)),
        c.acc,
    )


def _split_last_effect(t: Term):
    """Write t as suffix . op . before with the suffix pure and op the
    last effect atom in application order (the leftmost in composition
    notation)."""
    for i in range(len(t.body) - 1, -1, -1):
        atom = t.body[i]
        if atom.grade >= 1:
            before = Term(t.dom, atom.dom, t.body[:i])
            suffix = Term(atom.cod, t.cod, t.body[i + 1 :])
            return before, atom, suffix
    raise DecoError("term is pure, nothing to split")


def normalize_state_acc(t: Term, sig: Signature) -> CanonicalState:
    """Canonical form of an accessor (grade at most 1): pure or accessor."""
    if t.grade > 1:
        raise DecoError("normalize_state_acc expects a term of grade at most 1")
    if t.cod == UNIT:
        # every accessor into the unit type drops its argument
        canon = identity(UNIT) if t.dom == UNIT else atom_term(Pa(t.dom))
        return CanonicalState(PURE_FORM, canon, t.dom)
    if t.grade == 0:
        if t.dom == UNIT:
            # a pure map out of the unit type also reads as an accessor
            return CanonicalState(
                ACCESSOR_FORM, compose(t, atom_term(Pa(sig.value))), t.dom
            )
        return CanonicalState(PURE_FORM, t, t.dom)
    before, op, suffix = _split_last_effect(t)
    if isinstance(op, Lookup):
        # t == suffix . lookup . before and before into the unit type is pa
        return CanonicalState(ACCESSOR_FORM, suffix, t.dom)
    if isinstance(op, Gen):
        raise DecoError(
            f"cannot canonicalize the opaque effectful generator {op.name!r}"
        )
    raise DecoError(f"unexpected effect atom {op!r} in an accessor")


def normalize_state(t: Term, sig: Signature) -> CanonicalState:
    """Canonical form, provably equal to ``t`` in the state theory."""
    validate_term(t, sig, "states")
    return _normalize_state(t, sig)


def _modifier_form(pure: Term, acc: Term, dom: ObjType, sig: Signature) -> CanonicalState:
    """Assemble a modifier form, collapsing ``u . lookup . update .
    (lookup . pa)`` to the accessor ``u . lookup . pa`` (writing back the
    value just read does not change the state)."""
    shapes = ((Lookup(sig.value),), (Pa(dom), Lookup(sig.value)))
    if acc.body in shapes:
        return normalize_state_acc(_accessor_term(pure, dom, sig), sig)
    return CanonicalState(MODIFIER_FORM, pure, dom, acc)


def _normalize_state(t: Term, sig: Signature) -> CanonicalState:
    if t.grade <= 1:
        return normalize_state_acc(t, sig)
    before, op, suffix = _split_last_effect(t)
    if isinstance(op, Lookup):
        inner = _normalize_state(before, sig)
        if inner.kind != MODIFIER_FORM:
            raise DecoError("expected a modifier to the right of the last lookup")
        return _modifier_form(suffix, inner.acc, t.dom, sig)
    if isinstance(op, Update):
        # the pure suffix out of the unit type factors through lookup
        w = compose(suffix, atom_term(Pa(sig.value)))
        if before.grade <= 1:
            a = reify_state(normalize_state_acc(before, sig), sig)
            return _modifier_form(w, a, t.dom, sig)
        inner = _normalize_state(before, sig)
        a = reify_state(
            normalize_state_acc(compose(inner.pure, inner.acc), sig), sig
        )
        return _modifier_form(w, a, t.dom, sig)
    if isinstance(op, Gen):
        raise DecoError(
            f"cannot canonicalize the opaque effectful generator {op.name!r}"
        )
    raise FamilyError(f"atom {op!r} is not part of the state logic")


# ---------------------------------------------------------------------------
# Decision procedure.
# ---------------------------------------------------------------------------


def inhabitation_map(sig: Signature, model: FiniteModel | None = None) -> dict:
    """Witness constants per type: the first declared constant of each
    type, in declaration order; None marks a type with an empty carrier."""
    out: dict[ObjType, Term | None] = {UNIT: identity(UNIT)}
    for tname in sig.types:
        t = ObjType("base", tname)
        if model is not None and model.size(t) == 0:
            out[t] = None
            continue
        for cname, const in sig.consts.items():
            if const.cod == t:
                out[t] = atom_term(Const(cname, t))
                break
    return out


def modifier_level_equations(
    c1: CanonicalState, c2: CanonicalState, weak: bool, sig: Signature
) -> list[Equation]:
    """Reduce an equation with at least one modifier side to strong
    equations between accessors."""
    if c1.kind != MODIFIER_FORM:
        c1, c2 = c2, c1
    u1, a1 = c1.pure, c1.acc
    if c2.kind == MODIFIER_FORM:
        u2, a2 = c2.pure, c2.acc
        eqs = [Equation(compose(u1, a1), compose(u2, a2), STRONG)]
        if not weak:
            eqs.append(Equation(a1, a2, STRONG))
        return eqs
    other = reify_state(c2, sig)
    eqs = [Equation(compose(u1, a1), other, STRONG)]
    if not weak:
        # the modifier side must also write back exactly what it read
        eqs.append(Equation(a1, _accessor_term(identity(sig.value), c1.dom, sig), STRONG))
    return eqs


def decide_state(eq: Equation, sig: Signature, inhab: dict) -> PureReduction:
    """Reduce a state equation (weak or strong) to pure equations."""
    dom = eq.lhs.dom
    if dom in inhab and inhab[dom] is None:
        return empty_domain()
    c1 = normalize_state(eq.lhs, sig)
    c2 = normalize_state(eq.rhs, sig)
    if c1.kind == MODIFIER_FORM or c2.kind == MODIFIER_FORM:
        subs = modifier_level_equations(c1, c2, eq.weak, sig)
        return combine(decide_state(sub, sig, inhab) for sub in subs)
    # accessors and pure terms; weak and strong coincide on them
    if c1.kind == c2.kind:
        return pure_eqs([Equation(c1.pure, c2.pure)])
    if c1.kind != ACCESSOR_FORM:
        c1, c2 = c2, c1
    # accessor vs pure: both behaviours must ignore the observed value
    k = inhab.get(dom)
    if k is None:
        raise DecoError(
            f"no inhabitation witness for type {dom}; declare a constant of it"
        )
    v1, v2 = c1.pure, c2.pure
    probe = compose(v2, k)
    return pure_eqs(
        [
            Equation(v1, compose(probe, atom_term(Pa(sig.value)))),
            Equation(v2, compose(probe, _pa_or_id(dom))),
        ]
    )


def _pa_or_id(dom: ObjType) -> Term:
    return identity(UNIT) if dom == UNIT else atom_term(Pa(dom))


def check_state(eq: Equation, sig: Signature, m: FiniteModel) -> bool:
    red = decide_state(eq, sig, inhabitation_map(sig, m))
    return holds_in_model(red, m)
