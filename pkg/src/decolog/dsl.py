"""Text DSL: signatures with optional model blocks, named terms and checks.

One definition per line, ``#`` starts a comment.  ``parse`` accepts a bare
term or a ``lhs == rhs`` / ``lhs ~~ rhs`` equation; ``parse_document``
accepts a whole file.  Printing a term and reparsing it yields an equal
term.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .terms import (
    EMPTY,
    STRONG,
    UNIT,
    WEAK,
    CatchCore,
    Const,
    Copa,
    DecoError,
    Equation,
    Gen,
    Lookup,
    ObjType,
    Pa,
    Signature,
    Tag,
    Term,
    Throw,
    TryCatch,
    TryCore,
    Untag,
    Update,
    atom_term,
    base,
    compose,
    identity,
    validate_term,
)
from . import semantics

RESERVED = {
    "id", "copa", "pa", "throw", "tag", "untag", "lookup", "update",
    "try", "catch", "TRY", "CATCH", "signature", "type", "param", "value",
    "op", "const", "model", "term", "check", "pure", "acc", "logic", "x",
}


class ParseError(DecoError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, INT, PUNCT, EOF
    text: str
    line: int
    col: int


_PUNCT2 = ("->", "==", "~~", "//")
_PUNCT1 = "{}()[];,=.!%+-*/:"


def _lex(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col, i = 1, 1, 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        two = text[i : i + 2]
        if two in _PUNCT2:
            tokens.append(Token("PUNCT", two, line, col))
            i += 2
            col += 2
            continue
        if ch.isdigit():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "INT" if word.isdigit() else "NAME"
            tokens.append(Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("NAME", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in _PUNCT1:
            tokens.append(Token("PUNCT", ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("EOF", "", line, col))
    return tokens


@dataclass
class Document:
    signature: Signature | None = None
    models: list = field(default_factory=list)
    terms: dict[str, Term] = field(default_factory=dict)
    checks: list[Equation] = field(default_factory=list)


class _Parser:
    def __init__(self, text: str):
        self.tokens = _lex(text)
        self.pos = 0

    # -- token plumbing ----------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.line, tok.col)

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text:
            raise ParseError(
                f"expected {text!r}, found {tok.text!r}", tok.line, tok.col
            )
        return tok

    def expect_name(self) -> Token:
        tok = self.next()
        if tok.kind != "NAME":
            raise ParseError(f"expected a name, found {tok.text!r}", tok.line, tok.col)
        return tok

    def at(self, text: str) -> bool:
        return self.peek().text == text

    # -- documents ---------------------------------------------------------

    def document(self) -> Document:
        doc = Document()
        model_specs = []
        while self.peek().kind != "EOF":
            tok = self.peek()
            if tok.text == "signature":
                if doc.signature is not None:
                    raise self.fail("only one signature per file")
                doc.signature, model_specs = self.signature()
            elif tok.text == "term":
                self.termdef(doc)
            elif tok.text == "check":
                self.checkdef(doc)
            else:
                raise self.fail(f"expected a definition, found {tok.text!r}")
        if doc.signature is not None:
            for spec in model_specs:
                doc.models.append(semantics.model_from_spec(doc.signature, spec))
        return doc

    def signature(self):
        self.expect("signature")
        name = self.expect_name().text
        self.expect("{")
        types: list[str] = []
        ops: dict[str, Gen] = {}
        consts: dict[str, Const] = {}
        param_name = value_name = None
        family = None
        model_specs = []

        def resolve(token: Token):
            if token.text == "0":
                return EMPTY
            if token.text == "1":
                return UNIT
            if token.text == "P":
                if param_name is None:
                    raise ParseError("P used before param declaration", token.line, token.col)
                return base(param_name)
            if token.text == "V":
                if value_name is None:
                    raise ParseError("V used before value declaration", token.line, token.col)
                return base(value_name)
            if token.text in types:
                return base(token.text)
            raise ParseError(f"unknown type {token.text!r}", token.line, token.col)

        while not self.at("}"):
            tok = self.peek()
            if tok.text == "logic":
                self.next()
                fam = self.next().text
                if fam not in ("exc", "excore", "states"):
                    raise self.fail(f"unknown logic family {fam!r}")
                family = fam
                self.expect(";")
            elif tok.text == "type":
                self.next()
                tname = self.expect_name().text
                if tname in types:
                    raise self.fail(f"duplicate type {tname!r}")
                types.append(tname)
                self.expect(";")
            elif tok.text == "param":
                self.next()
                self.expect("P")
                self.expect("=")
                t = self.expect_name().text
                if t not in types:
                    raise self.fail(f"param must name a declared type, got {t!r}")
                param_name = t
                self.expect(";")
            elif tok.text == "value":
                self.next()
                self.expect("V")
                self.expect("=")
                t = self.expect_name().text
                if t not in types:
                    raise self.fail(f"value must name a declared type, got {t!r}")
                value_name = t
                self.expect(";")
            elif tok.text == "op":
                self.next()
                oname = self.expect_name().text
                if oname in RESERVED:
                    raise self.fail(f"{oname!r} is reserved")
                self.expect(":")
                dom = resolve(self.next())
                self.expect("->")
                cod = resolve(self.next())
                kind = self.next().text
                if kind not in ("pure", "acc"):
                    raise self.fail("op kind must be pure or acc")
                ops[oname] = Gen(oname, dom, cod, 0 if kind == "pure" else 1)
                self.expect(";")
            elif tok.text == "const":
                self.next()
                cname = self.expect_name().text
                if cname in RESERVED:
                    raise self.fail(f"{cname!r} is reserved")
                self.expect(":")
                cod = resolve(self.next())
                consts[cname] = Const(cname, cod)
                self.expect(";")
            elif tok.text == "model":
                model_specs.append(self.model_block())
            else:
                raise self.fail(f"unexpected {tok.text!r} in signature body")
        self.expect("}")

        if family is None:
            family = "states" if value_name is not None else "exc"
        sig = Signature(
            name=name,
            family=family,
            types=tuple(types),
            ops=ops,
            consts=consts,
            param=base(param_name) if param_name else None,
            value=base(value_name) if value_name else None,
        )
        return sig, model_specs

    def model_block(self):
        self.expect("model")
        self.expect("{")
        carriers: dict[str, list[str]] = {}
        interps: dict[str, object] = {}
        while not self.at("}"):
            head = self.next()
            if self.at("("):
                # op interpretation with explicit argument: f(x) = table or expr
                self.expect("(")
                self.expect("x")
                self.expect(")")
                self.expect("=")
                interps[head.text] = self.table_or_expr()
            elif self.at("="):
                self.expect("=")
                if self.at("{"):
                    onward = self.tokens[self.pos + 2]
                    if onward.text in (",", "}"):
                        # carrier list: T = {a, b, c};
                        carriers[head.text] = self.carrier_list()
                    else:
                        interps[head.text] = self.table_or_expr()
                elif self.peek().kind == "NAME" and self.peek().text != "x":
                    # constant bound to a named element
                    interps[head.text] = semantics.ElemSpec(self.next().text)
                else:
                    interps[head.text] = self.table_or_expr()
            else:
                raise self.fail(f"unexpected {self.peek().text!r} in model block")
            self.expect(";")
        self.expect("}")
        return semantics.ModelSpec(carriers=carriers, interps=interps)

    def carrier_list(self) -> list[str]:
        self.expect("{")
        elems = []
        while True:
            tok = self.next()
            if tok.kind not in ("NAME", "INT"):
                raise ParseError("expected an element name", tok.line, tok.col)
            elems.append(tok.text)
            if self.at(","):
                self.next()
                continue
            break
        self.expect("}")
        return elems

    def table_or_expr(self):
        if self.at("{"):
            return self.table()
        return self.arith_expr()

    def table(self):
        self.expect("{")
        rows = []
        while True:
            key = self.table_key()
            self.expect("->")
            rows.append((key, self.table_value()))
            if self.at(","):
                self.next()
                continue
            break
        self.expect("}")
        return semantics.TableSpec(tuple(rows))

    def table_key(self):
        if self.at("("):
            self.next()
            a = self.next().text
            self.expect(",")
            b = self.next().text
            self.expect(")")
            return (a, b)
        return self.next().text

    def table_value(self):
        if self.at("!"):
            self.next()
            return ("!", self.next().text)
        if self.at("("):
            self.next()
            a = self.next().text
            self.expect(",")
            b = self.next().text
            self.expect(")")
            return (a, b)
        return self.next().text

    # -- arithmetic expressions over x (model interpretations) -------------

    def arith_expr(self):
        node = self._additive()
        return semantics.ExprSpec(node)

    def _additive(self):
        node = self._multiplicative()
        while self.peek().text in ("+", "-"):
            op = self.next().text
            node = (op, node, self._multiplicative())
        return node

    def _multiplicative(self):
        node = self._unary()
        while self.peek().text in ("*", "%", "//"):
            op = self.next().text
            node = (op, node, self._unary())
        return node

    def _unary(self):
        if self.at("-"):
            self.next()
            return ("neg", self._unary())
        tok = self.next()
        if tok.kind == "INT":
            return ("int", int(tok.text))
        if tok.text == "x":
            return ("x",)
        if tok.text == "(":
            node = self._additive()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {tok.text!r} in expression", tok.line, tok.col)

    # -- terms and checks ---------------------------------------------------

    def termdef(self, doc: Document) -> None:
        if doc.signature is None:
            raise self.fail("term definition before signature")
        self.expect("term")
        name = self.expect_name().text
        self.expect(":")
        dom = doc.signature.resolve_type(self.next().text)
        self.expect("->")
        cod = doc.signature.resolve_type(self.next().text)
        self.expect("=")
        t = self.term_expr(doc.signature, doc.terms)
        self.expect(";")
        if (t.dom, t.cod) != (dom, cod):
            raise self.fail(
                f"term {name!r} declared {dom} -> {cod} but has type {t.dom} -> {t.cod}"
            )
        doc.terms[name] = t

    def checkdef(self, doc: Document) -> None:
        if doc.signature is None:
            raise self.fail("check before signature")
        self.expect("check")
        lhs = self.term_expr(doc.signature, doc.terms)
        op = self.next()
        if op.text not in ("==", "~~"):
            raise ParseError("expected == or ~~", op.line, op.col)
        rhs = self.term_expr(doc.signature, doc.terms)
        self.expect(";")
        strength = STRONG if op.text == "==" else WEAK
        try:
            eq = Equation(lhs, rhs, strength)
        except DecoError as exc:
            raise ParseError(str(exc), op.line, op.col) from exc
        doc.checks.append(eq)

    def term_expr(self, sig: Signature, named: dict[str, Term]) -> Term:
        factors = [self.term_factor(sig, named)]
        while self.at("."):
            self.next()
            factors.append(self.term_factor(sig, named))
        try:
            return compose(*factors)
        except DecoError as exc:
            raise self.fail(str(exc)) from exc

    def term_factor(self, sig: Signature, named: dict[str, Term]) -> Term:
        tok = self.next()
        text = tok.text

        def bracket_type() -> "ObjType":
            self.expect("[")
            t = sig.resolve_type(self.next().text)
            self.expect("]")
            return t

        try:
            if text == "id":
                return identity(bracket_type())
            if text == "copa":
                return atom_term(Copa(bracket_type()))
            if text == "pa":
                return atom_term(Pa(bracket_type()))
            if text == "throw":
                if sig.param is None:
                    raise self.fail("throw needs a param type")
                return atom_term(Throw(sig.param, bracket_type()))
            if text == "tag":
                return atom_term(Tag(sig.param))
            if text == "untag":
                return atom_term(Untag(sig.param))
            if text == "lookup":
                return atom_term(Lookup(sig.value))
            if text == "update":
                return atom_term(Update(sig.value))
            if text == "try":
                self.expect("(")
                body = self.term_expr(sig, named)
                self.expect(")")
                self.expect("catch")
                self.expect("(")
                handler = self.term_expr(sig, named)
                self.expect(")")
                return atom_term(TryCatch(body, handler))
            if text == "TRY":
                self.expect("(")
                body = self.term_expr(sig, named)
                self.expect(",")
                cont = self.term_expr(sig, named)
                self.expect(")")
                return atom_term(TryCore(body, cont))
            if text == "CATCH":
                self.expect("(")
                handler = self.term_expr(sig, named)
                self.expect(")")
                return atom_term(CatchCore(handler))
        except DecoError as exc:
            raise ParseError(str(exc), tok.line, tok.col) from exc

        if text in sig.ops:
            return atom_term(sig.ops[text])
        if text in sig.consts:
            return atom_term(sig.consts[text])
        if text in named:
            return named[text]
        raise ParseError(f"unknown term atom {text!r}", tok.line, tok.col)


def parse_document(text: str) -> Document:
    return _Parser(text).document()


def parse(text: str, sig: Signature, named: dict[str, Term] | None = None):
    """Parse a bare term, or an equation when ``==`` / ``~~`` is present.

    The result is type checked and validated against the signature's
    logic family.
    """
    parser = _Parser(text)
    lhs = parser.term_expr(sig, named or {})
    tok = parser.peek()
    if tok.text in ("==", "~~"):
        parser.next()
        rhs = parser.term_expr(sig, named or {})
        if parser.peek().kind != "EOF":
            raise parser.fail("trailing input after equation")
        strength = STRONG if tok.text == "==" else WEAK
        try:
            eq = Equation(lhs, rhs, strength)
        except DecoError as exc:
            raise ParseError(str(exc), tok.line, tok.col) from exc
        validate_term(lhs, sig)
        validate_term(rhs, sig)
        return eq
    if tok.kind != "EOF":
        raise parser.fail("trailing input after term")
    validate_term(lhs, sig)
    return lhs


def default_signature(family: str) -> Signature:
    """A one-type signature for command-line snippets without a file."""
    if family == "states":
        return Signature("default", "states", types=("N",), value=base("N"))
    return Signature("default", family, types=("N",), param=base("N"))
