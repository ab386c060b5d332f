"""Core exception logic: tag/untag, weak and strong equations, canonical
forms for propagators and catchers, and the equation decision procedure.

Canonical shapes:

* ``pure``     a pure term;
* ``tagged``   ``copa[Y] . tag . v`` with ``v`` pure (``tag . v`` when the
  codomain is the empty type);
* ``catcher``  ``a . untag . tag . u`` with ``a`` a canonical propagator
  out of the parameter type and ``u`` pure.

``TRY``/``CATCH`` are extension atoms defined only by their equations;
they are eliminated up front: ``CATCH`` is expanded where it sits as the
continuation of a ``TRY``, and each ``TRY(a, k)`` is replaced by the
unique propagator weakly equal to ``k . a``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .reduction import (
    PureReduction,
    combine,
    empty_domain,
    holds_in_model,
    inconsistent,
    pure_eqs,
)
from .semantics import FiniteModel
from .terms import (
    EMPTY,
    STRONG,
    CatchCore,
    Copa,
    DecoError,
    Equation,
    FamilyError,
    Gen,
    ObjType,
    Signature,
    Tag,
    Term,
    TryCore,
    Untag,
    atom_term,
    compose,
    identity,
    validate_term,
)

PURE_FORM = "pure"
TAG_FORM = "tagged"
CATCHER_FORM = "catcher"


@dataclass(frozen=True)
class CanonicalCore:
    kind: str
    pure: Term
    cod: ObjType
    prop: Term | None = None

    def __post_init__(self) -> None:
        if self.pure.grade != 0:
            raise DecoError("canonical forms carry pure residues only")
        if (self.kind == CATCHER_FORM) != (self.prop is not None):
            raise DecoError("catcher forms and only catcher forms embed a propagator")
        if self.prop is not None and self.prop.grade > 1:
            raise DecoError("the embedded term of a catcher form must be a propagator")


def _tagged_term(v: Term, cod: ObjType, sig: Signature) -> Term:
    t = compose(atom_term(Tag(sig.param)), v)
    if cod == EMPTY:
        return t
    return compose(atom_term(Copa(cod)), t)


def reify_core(c: CanonicalCore, sig: Signature) -> Term:
    if c.kind == PURE_FORM:
        return c.pure
    if c.kind == TAG_FORM:
        return _tagged_term(c.pure, c.cod, sig)
    return compose(
        c.prop,
        atom_term(Untag(sig.param)),
        atom_term(Tag(sig.param)),
        c.pure,
    )


def _split_first_effect(t: Term):
    for i, atom in enumerate(t.body):
        if atom.grade >= 1:
            prefix = Term(t.dom, atom.dom, t.body[:i])
            rest = Term(atom.cod, t.cod, t.body[i + 1 :])
            return prefix, atom, rest
    raise DecoError("term is pure, nothing to split")


def normalize_core_prop(t: Term, sig: Signature) -> CanonicalCore:
    """Canonical form of a propagator (grade at most 1): pure or tagged."""
    if t.grade > 1:
        raise DecoError("normalize_core_prop expects a term of grade at most 1")
    if t.dom == EMPTY:
        # the unique propagator out of the empty type
        canon = identity(EMPTY) if t.cod == EMPTY else atom_term(Copa(t.cod))
        return CanonicalCore(PURE_FORM, canon, t.cod)
    if t.grade == 0:
        if t.cod == EMPTY:
            # a pure map into the empty type factors through tag
            return CanonicalCore(TAG_FORM, compose(atom_term(Copa(sig.param)), t), t.cod)
        return CanonicalCore(PURE_FORM, t, t.cod)
    prefix, op, _rest = _split_first_effect(t)
    if isinstance(op, Tag):
        # t == rest . tag . prefix and rest out of the empty type is copa
        return CanonicalCore(TAG_FORM, prefix, t.cod)
    if isinstance(op, Gen):
        raise DecoError(
            f"cannot canonicalize the opaque effectful generator {op.name!r}"
        )
    raise DecoError(f"unexpected effect atom {op!r} in a core propagator")


def eliminate_handlers(t: Term, sig: Signature) -> Term:
    """Replace every TRY atom by a plain tag/untag propagator using the
    defining equations.  A CATCH surviving outside a TRY continuation has
    no canonical form in the core language and is rejected."""
    body: list = []
    for atom in t.body:
        if isinstance(atom, TryCore):
            body.extend(_resolve_try(atom, sig).body)
        elif isinstance(atom, CatchCore):
            raise DecoError(
                "CATCH outside the continuation slot of a TRY has no canonical form"
            )
        else:
            body.append(atom)
    return Term(t.dom, t.cod, tuple(body))


def _resolve_try(atom: TryCore, sig: Signature) -> Term:
    a = eliminate_handlers(atom.body, sig)
    k = atom.continuation
    if len(k.body) == 1 and isinstance(k.body[0], CatchCore):
        # expand the CATCH first: on a pure body nothing is caught, on a
        # thrown body the handler runs on the recovered parameter
        b = eliminate_handlers(k.body[0].handler, sig)
        ca = normalize_core_prop(a, sig)
        if ca.kind == PURE_FORM:
            return ca.pure
        return compose(b, ca.pure)
    k = eliminate_handlers(k, sig)
    canon = _normalize_core(compose(k, a), sig)
    if canon.kind == CATCHER_FORM:
        # TRY is the unique propagator weakly equal to its continuation
        # applied to its body
        return compose(canon.prop, canon.pure)
    return reify_core(canon, sig)


def normalize_core(t: Term, sig: Signature) -> CanonicalCore:
    """Canonical form, provably equal to ``t`` in the core theory."""
    validate_term(t, sig, "excore")
    return _normalize_core(eliminate_handlers(t, sig), sig)


def _catcher_form(prop: Term, pure: Term, cod: ObjType, sig: Signature) -> CanonicalCore:
    """Assemble a catcher form, collapsing ``(copa . tag) . untag . tag . u``
    to the propagator ``copa . tag . u`` (the fundamental strong equation
    makes tag . untag the identity of the empty type)."""
    shapes = ((Tag(sig.param),), (Tag(sig.param), Copa(cod)))
    if prop.body in shapes:
        return normalize_core_prop(_tagged_term(pure, cod, sig), sig)
    return CanonicalCore(CATCHER_FORM, pure, cod, prop)


def _normalize_core(t: Term, sig: Signature) -> CanonicalCore:
    if t.grade <= 1:
        return normalize_core_prop(t, sig)
    prefix, op, rest = _split_first_effect(t)
    if isinstance(op, Tag):
        inner = _normalize_core(rest, sig)
        if inner.kind != CATCHER_FORM:
            # cannot happen: rest carries the grade-2 atom
            raise DecoError("expected a catcher to the left of the first tag")
        return _catcher_form(inner.prop, prefix, t.cod, sig)
    if isinstance(op, Untag):
        # prefix is a pure map into the empty type, so it equals
        # tag . (copa . prefix)
        w = compose(atom_term(Copa(sig.param)), prefix)
        if rest.grade <= 1:
            a = reify_core(normalize_core_prop(rest, sig), sig)
            return _catcher_form(a, w, t.cod, sig)
        inner = _normalize_core(rest, sig)
        a = reify_core(normalize_core_prop(compose(inner.prop, inner.pure), sig), sig)
        return _catcher_form(a, w, t.cod, sig)
    if isinstance(op, Gen):
        raise DecoError(
            f"cannot canonicalize the opaque effectful generator {op.name!r}"
        )
    raise FamilyError(f"atom {op!r} is not part of the core exception logic")


# ---------------------------------------------------------------------------
# Decision procedure.
# ---------------------------------------------------------------------------


def catcher_level_equations(
    c1: CanonicalCore, c2: CanonicalCore, weak: bool, sig: Signature
) -> list[Equation]:
    """Reduce an equation with at least one catcher side to strong
    equations between propagators."""
    if c1.kind != CATCHER_FORM:
        c1, c2 = c2, c1
    a1, u1 = c1.prop, c1.pure
    if c2.kind == CATCHER_FORM:
        a2, u2 = c2.prop, c2.pure
        eqs = [Equation(compose(a1, u1), compose(a2, u2), STRONG)]
        if not weak:
            eqs.append(Equation(a1, a2, STRONG))
        return eqs
    other = reify_core(c2, sig)
    eqs = [Equation(compose(a1, u1), other, STRONG)]
    if not weak:
        # the catcher side must also do nothing more than re-throw
        eqs.append(Equation(a1, _tagged_term(identity(sig.param), c1.cod, sig), STRONG))
    return eqs


def decide_core(eq: Equation, sig: Signature, emptiness: dict) -> PureReduction:
    """Reduce a core equation (weak or strong) to pure equations."""
    try:
        empty = emptiness[eq.lhs.dom]
    except KeyError:
        raise DecoError(f"emptiness of {eq.lhs.dom} is unknown")
    c1 = normalize_core(eq.lhs, sig)
    c2 = normalize_core(eq.rhs, sig)
    catchers = c1.kind == CATCHER_FORM or c2.kind == CATCHER_FORM
    if empty and (eq.weak or not catchers):
        return empty_domain()
    if catchers:
        subs = catcher_level_equations(c1, c2, eq.weak, sig)
        return combine(decide_core(sub, sig, emptiness) for sub in subs)
    # both sides are propagators; weak and strong coincide on them
    if c1.kind == c2.kind:
        return pure_eqs([Equation(c1.pure, c2.pure)])
    return inconsistent(direct=True)


def check_core(eq: Equation, sig: Signature, m: FiniteModel) -> bool:
    from .exceptions import emptiness_map

    red = decide_core(eq, sig, emptiness_map(sig, m))
    return holds_in_model(red, m)
