"""Proof kernel and decision engine for decorated equational logics.

The package covers the programmer-level and core exception logics, the
single-location state logic, their finite-set semantic oracle, the
translation between the two exception languages, and a bounded
theory-closure engine used for relative-completeness sweeps.
"""

from .terms import (
    EMPTY,
    STRONG,
    UNIT,
    WEAK,
    DecoError,
    Equation,
    FamilyError,
    ObjType,
    Signature,
    Term,
    TermTypeError,
    base,
    compose,
    decoration_of,
    format_term,
    identity,
)
from .dsl import ParseError, default_signature, parse, parse_document
from .semantics import FiniteModel, enumerate_models, eval_term, sem_holds

__all__ = [
    "EMPTY",
    "STRONG",
    "UNIT",
    "WEAK",
    "DecoError",
    "Equation",
    "FamilyError",
    "FiniteModel",
    "ObjType",
    "ParseError",
    "Signature",
    "Term",
    "TermTypeError",
    "base",
    "compose",
    "decoration_of",
    "default_signature",
    "enumerate_models",
    "eval_term",
    "format_term",
    "identity",
    "parse",
    "parse_document",
    "sem_holds",
]
