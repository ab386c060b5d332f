"""Object types, decorated atoms, terms and equations shared by every logic.

A term is a flattened composition chain: ``body`` stores atoms in
application order (first-applied first), so ``body = (f, g)`` is the
composite ``g . f``.  The empty chain is the identity.  Effect grades are
integers: 0 is pure, 1 may raise/read (propagator or accessor), 2 may
recover/write (catcher or modifier).
"""

from __future__ import annotations

from dataclasses import dataclass

FAMILIES = ("exc", "excore", "states")

GRADE_NAMES = {
    "exc": {0: "pure", 1: "propagator", 2: "catcher"},
    "excore": {0: "pure", 1: "propagator", 2: "catcher"},
    "states": {0: "pure", 1: "accessor", 2: "modifier"},
}


class DecoError(Exception):
    """Base error for the decorated-logic kernel."""


class TermTypeError(DecoError):
    """Composition of atoms whose object types do not line up."""


class FamilyError(DecoError):
    """An atom that is not part of the logic family being used."""


@dataclass(frozen=True, order=True)
class ObjType:
    kind: str  # "base" | "empty" | "unit"
    name: str = ""

    def __str__(self) -> str:
        if self.kind == "empty":
            return "0"
        if self.kind == "unit":
            return "1"
        return self.name


EMPTY = ObjType("empty")
UNIT = ObjType("unit")


def base(name: str) -> ObjType:
    return ObjType("base", name)


# ---------------------------------------------------------------------------
# Atoms.  Each atom knows its own dom/cod/grade; structured atoms carry
# subterms because the try rules rewrite under the try context.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Gen:
    """A declared generator; grade 0 (pure) or 1 (effectful, opaque)."""

    name: str
    dom: ObjType
    cod: ObjType
    grade: int = 0


@dataclass(frozen=True)
class Const:
    """A declared constant 1 -> T."""

    name: str
    cod: ObjType

    @property
    def dom(self) -> ObjType:
        return UNIT

    @property
    def grade(self) -> int:
        return 0


@dataclass(frozen=True)
class Copa:
    """The unique map out of the empty type, written copa[Y]."""

    cod: ObjType

    @property
    def dom(self) -> ObjType:
        return EMPTY

    @property
    def grade(self) -> int:
        return 0


@dataclass(frozen=True)
class Pa:
    """The map into the unit type that drops its argument, written pa[X]."""

    dom: ObjType

    @property
    def cod(self) -> ObjType:
        return UNIT

    @property
    def grade(self) -> int:
        return 0


@dataclass(frozen=True)
class Throw:
    """Raise an exception carrying a parameter, pretending any result type."""

    param: ObjType
    cod: ObjType

    @property
    def dom(self) -> ObjType:
        return self.param

    @property
    def grade(self) -> int:
        return 1


@dataclass(frozen=True)
class Tag:
    """Encapsulate a parameter into an exception (core language)."""

    param: ObjType

    @property
    def dom(self) -> ObjType:
        return self.param

    @property
    def cod(self) -> ObjType:
        return EMPTY

    @property
    def grade(self) -> int:
        return 1


@dataclass(frozen=True)
class Untag:
    """Recover the parameter from an exception (core language)."""

    param: ObjType

    @property
    def dom(self) -> ObjType:
        return EMPTY

    @property
    def cod(self) -> ObjType:
        return self.param

    @property
    def grade(self) -> int:
        return 2


@dataclass(frozen=True)
class Lookup:
    """Read the value stored at the single location."""

    value: ObjType

    @property
    def dom(self) -> ObjType:
        return UNIT

    @property
    def cod(self) -> ObjType:
        return self.value

    @property
    def grade(self) -> int:
        return 1


@dataclass(frozen=True)
class Update:
    """Write a value to the single location."""

    value: ObjType

    @property
    def dom(self) -> ObjType:
        return self.value

    @property
    def cod(self) -> ObjType:
        return UNIT

    @property
    def grade(self) -> int:
        return 2


@dataclass(frozen=True)
class TryCatch:
    """Programmer-level handler block: run body, recover with handler."""

    body: "Term"
    handler: "Term"

    def __post_init__(self) -> None:
        if self.handler.cod != self.body.cod:
            raise TermTypeError(
                f"catch handler returns {self.handler.cod}, "
                f"try body returns {self.body.cod}"
            )
        if self.body.grade > 1 or self.handler.grade > 1:
            raise TermTypeError("try/catch arguments must have grade at most 1")

    @property
    def dom(self) -> ObjType:
        return self.body.dom

    @property
    def cod(self) -> ObjType:
        return self.body.cod

    @property
    def grade(self) -> int:
        return 1


@dataclass(frozen=True)
class TryCore:
    """Core-level block TRY(a, k): behaves as k . a on non-exceptional
    arguments but always propagates exceptional ones."""

    body: "Term"
    continuation: "Term"

    def __post_init__(self) -> None:
        k = self.continuation
        if k.dom != self.body.cod or k.cod != self.body.cod:
            raise TermTypeError(
                f"TRY continuation must be an endo-term on {self.body.cod}"
            )
        if self.body.grade > 1:
            raise TermTypeError("TRY body must have grade at most 1")

    @property
    def dom(self) -> ObjType:
        return self.body.dom

    @property
    def cod(self) -> ObjType:
        return self.body.cod

    @property
    def grade(self) -> int:
        return 1


@dataclass(frozen=True)
class CatchCore:
    """Core-level handler CATCH(b): identity on values, runs b on the
    recovered parameter of an exceptional argument."""

    handler: "Term"

    def __post_init__(self) -> None:
        if self.handler.grade > 1:
            raise TermTypeError("CATCH handler must have grade at most 1")

    @property
    def dom(self) -> ObjType:
        return self.handler.cod

    @property
    def cod(self) -> ObjType:
        return self.handler.cod

    @property
    def grade(self) -> int:
        return 2


Atom = (
    Gen
    | Const
    | Copa
    | Pa
    | Throw
    | Tag
    | Untag
    | Lookup
    | Update
    | TryCatch
    | TryCore
    | CatchCore
)

_ATOM_FAMILIES = {
    Gen: frozenset(FAMILIES),
    Const: frozenset(FAMILIES),
    Copa: frozenset({"exc", "excore"}),
    Pa: frozenset({"states"}),
    Throw: frozenset({"exc"}),
    TryCatch: frozenset({"exc"}),
    Tag: frozenset({"excore"}),
    Untag: frozenset({"excore"}),
    TryCore: frozenset({"excore"}),
    CatchCore: frozenset({"excore"}),
    Lookup: frozenset({"states"}),
    Update: frozenset({"states"}),
}


def atom_size(atom: Atom) -> int:
    if isinstance(atom, TryCatch):
        return 1 + atom.body.size + atom.handler.size
    if isinstance(atom, TryCore):
        return 1 + atom.body.size + atom.continuation.size
    if isinstance(atom, CatchCore):
        return 1 + atom.handler.size
    return 1


# ---------------------------------------------------------------------------
# Terms and equations.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Term:
    dom: ObjType
    cod: ObjType
    body: tuple = ()

    def __post_init__(self) -> None:
        at = self.dom
        for atom in self.body:
            if atom.dom != at:
                raise TermTypeError(
                    f"cannot compose: expected an atom from {at}, "
                    f"got {format_atom(atom)} : {atom.dom} -> {atom.cod}"
                )
            at = atom.cod
        if at != self.cod:
            raise TermTypeError(
                f"term declared {self.dom} -> {self.cod} but chain ends at {at}"
            )

    @property
    def grade(self) -> int:
        return max((a.grade for a in self.body), default=0)

    @property
    def size(self) -> int:
        return sum(atom_size(a) for a in self.body)

    def __str__(self) -> str:
        return format_term(self)


def identity(t: ObjType) -> Term:
    return Term(t, t, ())


def atom_term(atom: Atom) -> Term:
    return Term(atom.dom, atom.cod, (atom,))


def compose(*terms: Term) -> Term:
    """Compose terms written in application order g . f as compose(g, f)."""
    if not terms:
        raise ValueError("compose needs at least one term")
    rightmost = terms[-1]
    body: tuple = ()
    at = rightmost.dom
    for t in reversed(terms):
        if t.dom != at:
            raise TermTypeError(f"cannot compose {t.dom} -> {t.cod} after {at}")
        body = body + t.body
        at = t.cod
    return Term(rightmost.dom, at, body)


def decoration_of(t: Term) -> int:
    """Effect grade of a composite: the max of its atoms' grades."""
    return t.grade


STRONG = "strong"
WEAK = "weak"


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term
    strength: str = STRONG

    def __post_init__(self) -> None:
        if self.strength not in (STRONG, WEAK):
            raise ValueError(f"unknown equation strength {self.strength!r}")
        if self.lhs.dom != self.rhs.dom or self.lhs.cod != self.rhs.cod:
            raise TermTypeError(
                f"equation sides are not parallel: "
                f"{self.lhs.dom} -> {self.lhs.cod} vs {self.rhs.dom} -> {self.rhs.cod}"
            )

    @property
    def weak(self) -> bool:
        return self.strength == WEAK

    def __str__(self) -> str:
        op = "~~" if self.weak else "=="
        return f"{format_term(self.lhs)} {op} {format_term(self.rhs)}"


def term_key(t: Term):
    return (t.size, format_term(t))


def oriented(eq: Equation) -> Equation:
    """Order the sides deterministically; equations are symmetric."""
    if term_key(eq.lhs) <= term_key(eq.rhs):
        return eq
    return Equation(eq.rhs, eq.lhs, eq.strength)


# ---------------------------------------------------------------------------
# Signatures.
# ---------------------------------------------------------------------------


@dataclass
class Signature:
    name: str
    family: str
    types: tuple[str, ...] = ()
    ops: dict = None
    consts: dict = None
    param: ObjType | None = None
    value: ObjType | None = None

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise FamilyError(f"unknown logic family {self.family!r}")
        self.ops = dict(self.ops or {})
        self.consts = dict(self.consts or {})
        if self.family in ("exc", "excore") and self.param is None:
            raise DecoError(f"signature {self.name}: exception logics need a param type")
        if self.family == "states" and self.value is None:
            raise DecoError(f"signature {self.name}: the state logic needs a value type")

    def obj_types(self) -> list[ObjType]:
        out = [EMPTY, UNIT] if self.family in ("exc", "excore") else [UNIT]
        out.extend(base(n) for n in self.types)
        return out

    def resolve_type(self, token: str) -> ObjType:
        if token == "0":
            return EMPTY
        if token == "1":
            return UNIT
        if token == "P":
            if self.param is None:
                raise DecoError("no param type declared")
            return self.param
        if token == "V":
            if self.value is None:
                raise DecoError("no value type declared")
            return self.value
        if token in self.types:
            return base(token)
        raise DecoError(f"unknown type {token!r} in signature {self.name}")


def validate_term(t: Term, sig: Signature, family: str | None = None) -> None:
    """Check every atom is legal for the logic family and the signature."""
    fam = family or sig.family
    if fam not in FAMILIES:
        raise FamilyError(f"unknown logic family {fam!r}")
    for atom in t.body:
        allowed = _ATOM_FAMILIES[type(atom)]
        if fam not in allowed:
            raise FamilyError(
                f"atom {format_atom(atom)} is not part of the {fam} logic"
            )
        if isinstance(atom, Gen):
            declared = sig.ops.get(atom.name)
            if declared != atom:
                raise DecoError(f"generator {atom.name!r} not declared in {sig.name}")
        elif isinstance(atom, Const):
            if sig.consts.get(atom.name) != atom:
                raise DecoError(f"constant {atom.name!r} not declared in {sig.name}")
        elif isinstance(atom, (Throw, Tag, Untag)):
            if atom.param != sig.param:
                raise DecoError(
                    f"atom {format_atom(atom)} uses param {atom.param}, "
                    f"signature binds P = {sig.param}"
                )
        elif isinstance(atom, (Lookup, Update)):
            if atom.value != sig.value:
                raise DecoError(
                    f"atom {format_atom(atom)} uses value {atom.value}, "
                    f"signature binds V = {sig.value}"
                )
        elif isinstance(atom, TryCatch):
            validate_term(atom.body, sig, fam)
            validate_term(atom.handler, sig, fam)
            if atom.handler.dom != sig.param:
                raise DecoError("catch handler must take the parameter type")
        elif isinstance(atom, TryCore):
            validate_term(atom.body, sig, fam)
            validate_term(atom.continuation, sig, fam)
        elif isinstance(atom, CatchCore):
            validate_term(atom.handler, sig, fam)
            if atom.handler.dom != sig.param:
                raise DecoError("CATCH handler must take the parameter type")


# ---------------------------------------------------------------------------
# Printing.  parse(print(t)) must reproduce t exactly.
# ---------------------------------------------------------------------------


def format_atom(atom: Atom) -> str:
    if isinstance(atom, (Gen, Const)):
        return atom.name
    if isinstance(atom, Copa):
        return f"copa[{atom.cod}]"
    if isinstance(atom, Pa):
        return f"pa[{atom.dom}]"
    if isinstance(atom, Throw):
        return f"throw[{atom.cod}]"
    if isinstance(atom, Tag):
        return "tag"
    if isinstance(atom, Untag):
        return "untag"
    if isinstance(atom, Lookup):
        return "lookup"
    if isinstance(atom, Update):
        return "update"
    if isinstance(atom, TryCatch):
        return f"try ({format_term(atom.body)}) catch ({format_term(atom.handler)})"
    if isinstance(atom, TryCore):
        return f"TRY({format_term(atom.body)}, {format_term(atom.continuation)})"
    if isinstance(atom, CatchCore):
        return f"CATCH({format_term(atom.handler)})"
    raise TypeError(f"not an atom: {atom!r}")


def format_term(t: Term) -> str:
    if not t.body:
        return f"id[{t.dom}]"
    return " . ".join(format_atom(a) for a in reversed(t.body))


def format_equation(eq: Equation) -> str:
    return str(eq)
