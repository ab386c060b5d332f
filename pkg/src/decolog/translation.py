"""Translation of the programmer-level exception language into the core
language, and its correctness harness.

``throw[Y]`` becomes ``copa[Y] . tag``; ``try (a) catch (b)`` becomes
``TRY(a', CATCH(b'))`` on the translated pieces; pure atoms are left
alone.  The harness checks that deciding and evaluating commute with the
translation, and replays the images of the five programmer-level rules as
facts the core decider proves on its own.
"""

from __future__ import annotations

from dataclasses import dataclass

from .excore import check_core, decide_core
from .exceptions import check_exc, emptiness_map
from .reduction import PureReduction
from .semantics import FiniteModel, eval_term, sem_holds
from .terms import (
    STRONG,
    CatchCore,
    Copa,
    Equation,
    Signature,
    Tag,
    Term,
    Throw,
    TryCatch,
    TryCore,
    atom_term,
    compose,
    validate_term,
)
from .universe import enumerate_terms


def core_signature(sig: Signature) -> Signature:
    """The same signature read in the core language."""
    if sig.family == "excore":
        return sig
    return Signature(
        name=sig.name,
        family="excore",
        types=sig.types,
        ops=dict(sig.ops),
        consts=dict(sig.consts),
        param=sig.param,
        value=sig.value,
    )


def core_model(m: FiniteModel) -> FiniteModel:
    """The same interpretation read over the core signature."""
    if m.sig.family == "excore":
        return m
    return FiniteModel(
        core_signature(m.sig),
        dict(m.sizes),
        dict(m.op_tables),
        dict(m.const_vals),
        dict(m.names),
    )


def translate(t: Term) -> Term:
    """Structurally recursive translation; preserves dom/cod and maps
    grade-1 terms to grade-at-most-1 terms."""
    body: list = []
    for atom in t.body:
        if isinstance(atom, Throw):
            body.append(Tag(atom.param))
            body.append(Copa(atom.cod))
        elif isinstance(atom, TryCatch):
            handler = atom_term(CatchCore(translate(atom.handler)))
            body.append(TryCore(translate(atom.body), handler))
        else:
            body.append(atom)
    return Term(t.dom, t.cod, tuple(body))


def translate_equation(eq: Equation) -> Equation:
    return Equation(translate(eq.lhs), translate(eq.rhs), eq.strength)


@dataclass(frozen=True)
class TranslationReport:
    decisions_agree: bool
    semantics_agree: bool
    rule_images_hold: bool

    @property
    def ok(self) -> bool:
        return self.decisions_agree and self.semantics_agree and self.rule_images_hold


def _trivial(red: PureReduction) -> bool:
    """A reduction that holds in the free pure theory."""
    return not red.is_inconsistent and not red.equations


def rule_image_checks(sig: Signature, size: int = 2) -> list[tuple[str, Equation, bool]]:
    """Replay the translated programmer-level rules as facts decided by
    the core procedure.  Each entry is (rule name, core equation, proved)."""
    core_sig = core_signature(sig)
    empt = emptiness_map(core_sig)
    tag = atom_term(Tag(sig.param))

    def thrown(cod, v=None):
        t = compose(atom_term(Copa(cod)), tag)
        return t if v is None else compose(t, v)

    checks: list[tuple[str, Equation, bool]] = []

    def note(name, eq, expect=None):
        if expect is None:
            expect = _trivial(decide_core(eq, core_sig, empt))
        checks.append((name, eq, expect))

    propagators = [
        t
        for t in enumerate_terms(core_sig, size, family="excore", handlers=False)
        if t.grade <= 1
    ]
    pures = [t for t in propagators if t.grade == 0]

    for a in propagators:
        # image of (propagate): post-composition cannot alter a throw
        note("propagate", Equation(compose(a, thrown(a.dom)), thrown(a.cod), STRONG))

    for u1 in pures:
        for u2 in pures:
            if (u1.dom, u1.cod) != (u2.dom, u2.cod) or u1.cod != sig.param:
                continue
            # image of (recover): thrown parameters are recoverable, so the
            # image equation reduces exactly as the parameter equation does
            img = Equation(thrown(sig.param, u1), thrown(sig.param, u2), STRONG)
            r_img = decide_core(img, core_sig, empt)
            r_par = decide_core(Equation(u1, u2, STRONG), core_sig, empt)
            same = r_img.kind == r_par.kind and r_img.equations == r_par.equations
            note("recover", img, same)

    handlers = [b for b in propagators if b.dom == sig.param]
    for b in handlers:
        catch = atom_term(CatchCore(b))
        for u in pures:
            if u.cod == b.cod:
                # image of (try0): pure code never triggers the handler
                note("try0", Equation(atom_term(TryCore(u, catch)), u, STRONG))
            if u.cod == sig.param:
                # image of (try1): a thrown parameter reaches the handler
                lhs = atom_term(TryCore(thrown(b.cod, u), catch))
                note("try1", Equation(lhs, compose(b, u), STRONG))
        for a1 in propagators:
            if a1.cod != b.cod:
                continue
            for a2 in propagators:
                if a2 is a1 or (a2.dom, a2.cod) != (a1.dom, a1.cod):
                    continue
                if not _trivial(decide_core(Equation(a1, a2, STRONG), core_sig, empt)):
                    continue
                # image of (try): provably equal bodies give equal blocks
                img = Equation(
                    atom_term(TryCore(a1, catch)),
                    atom_term(TryCore(a2, catch)),
                    STRONG,
                )
                note("try", img)
    return checks


def verify_translation(
    eq: Equation, sig: Signature, models: list[FiniteModel]
) -> TranslationReport:
    """Correctness of the translation on one equation: the two deciders
    agree model by model, the two denotations coincide, and the rule
    images are derivable on the core side."""
    validate_term(eq.lhs, sig, "exc")
    validate_term(eq.rhs, sig, "exc")
    core_sig = core_signature(sig)
    core_eq = translate_equation(eq)

    decisions = True
    semantics = True
    for m in models:
        cm = core_model(m)
        if check_exc(eq, sig, m) != check_core(core_eq, core_sig, cm):
            decisions = False
        for side, core_side in ((eq.lhs, core_eq.lhs), (eq.rhs, core_eq.rhs)):
            if eval_term(side, m) != eval_term(core_side, cm):
                semantics = False
        if sem_holds(eq, m) != sem_holds(core_eq, cm):
            semantics = False

    images = all(ok for _, _, ok in rule_image_checks(sig))
    return TranslationReport(decisions, semantics, images)


__all__ = [
    "TranslationReport",
    "core_model",
    "core_signature",
    "rule_image_checks",
    "translate",
    "translate_equation",
    "verify_translation",
]
