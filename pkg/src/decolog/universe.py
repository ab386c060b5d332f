"""Exhaustive enumeration of well-formed terms and equations up to a size
bound.

Size counts atoms, with handler blocks weighing one plus the sizes of
their subterms.  Enumeration order is deterministic: terms are sorted by
size and printed form.
"""

from __future__ import annotations

import itertools

from .terms import (
    EMPTY,
    STRONG,
    UNIT,
    WEAK,
    Const,
    Copa,
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
    Untag,
    Update,
    atom_size,
    term_key,
)


def simple_atoms(sig: Signature, family: str, pure_only: bool = False) -> list:
    """Unstructured atoms available over a signature, handlers excluded."""
    atoms: list = []
    for name in sorted(sig.ops):
        op = sig.ops[name]
        if pure_only and op.grade > 0:
            continue
        atoms.append(op)
    for name in sorted(sig.consts):
        atoms.append(sig.consts[name])
    types = sig.obj_types()
    if family in ("exc", "excore"):
        for t in types:
            atoms.append(Copa(t))
    if family == "states":
        for t in types:
            atoms.append(Pa(t))
    if pure_only:
        return atoms
    if family == "exc":
        for t in types:
            atoms.append(Throw(sig.param, t))
    elif family == "excore":
        atoms.append(Tag(sig.param))
        atoms.append(Untag(sig.param))
    elif family == "states":
        atoms.append(Lookup(sig.value))
        atoms.append(Update(sig.value))
    return atoms


class TermEnumerator:
    """Memoized enumeration of all terms between given types."""

    def __init__(
        self,
        sig: Signature,
        family: str | None = None,
        pure_only: bool = False,
        handlers: bool = True,
        include_empty: bool = True,
    ):
        self.sig = sig
        self.family = family or sig.family
        self.pure_only = pure_only
        self.handlers = handlers and self.family == "exc" and not pure_only
        self.types = [
            t
            for t in sig.obj_types()
            if include_empty or t != EMPTY
        ]
        self._atoms_from: dict[ObjType, list] = {t: [] for t in self.types}
        for atom in simple_atoms(sig, self.family, pure_only):
            if atom.dom in self._atoms_from and atom.cod in self._atoms_from:
                self._atoms_from[atom.dom].append(atom)
        self._memo: dict = {}

    def terms(self, dom: ObjType, cod: ObjType, max_size: int) -> list[Term]:
        """All terms dom -> cod of size at most max_size."""
        bodies = self._bodies(dom, cod, max_size)
        out = [Term(dom, cod, b) for b in bodies]
        out.sort(key=term_key)
        return out

    def all_terms(self, max_size: int) -> list[Term]:
        out = []
        for dom in self.types:
            for cod in self.types:
                out.extend(self.terms(dom, cod, max_size))
        out.sort(key=lambda t: (str(t.dom), str(t.cod)) + term_key(t))
        return out

    def _bodies(self, dom: ObjType, cod: ObjType, budget: int):
        key = (dom, cod, budget)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        results: list[tuple] = []
        if dom == cod:
            results.append(())
        if budget >= 1:
            for atom in self._first_atoms(dom, cod, budget):
                cost = atom_size(atom)
                for rest in self._bodies(atom.cod, cod, budget - cost):
                    results.append((atom,) + rest)
        seen = set()
        unique = []
        for b in results:
            if b not in seen:
                seen.add(b)
                unique.append(b)
        self._memo[key] = unique
        return unique

    def _first_atoms(self, dom: ObjType, cod: ObjType, budget: int):
        for atom in self._atoms_from[dom]:
            yield atom
        if self.handlers:
            yield from self._try_atoms(dom, budget)

    def _try_atoms(self, dom: ObjType, budget: int):
        # try (a : dom -> Z) catch (b : P -> Z), costing 1 + |a| + |b|
        if budget < 3:
            return
        for mid in self.types:
            for asize in range(1, budget - 1):
                for body_t in self.terms(dom, mid, asize):
                    if body_t.size != asize or body_t.grade > 1:
                        continue
                    hbudget = budget - 1 - asize
                    for handler in self.terms(self.sig.param, mid, hbudget):
                        if handler.grade > 1:
                            continue
                        yield TryCatch(body_t, handler)


def enumerate_terms(
    sig: Signature,
    max_size: int,
    dom: ObjType | None = None,
    cod: ObjType | None = None,
    family: str | None = None,
    pure_only: bool = False,
    handlers: bool = True,
    include_empty: bool = True,
) -> list[Term]:
    enum = TermEnumerator(sig, family, pure_only, handlers, include_empty)
    if dom is not None and cod is not None:
        return enum.terms(dom, cod, max_size)
    return enum.all_terms(max_size)


def enumerate_equations(
    sig: Signature,
    max_size: int,
    family: str | None = None,
    pure_only: bool = False,
    handlers: bool = True,
    include_empty: bool = True,
    reflexive: bool = True,
) -> list[Equation]:
    """Every equation between enumerated parallel terms, unordered pairs,
    both strengths where the family has them."""
    family = family or sig.family
    enum = TermEnumerator(sig, family, pure_only, handlers, include_empty)
    strengths = [STRONG]
    if not pure_only and family in ("excore", "states"):
        strengths = [STRONG, WEAK]
    out = []
    for dom in enum.types:
        for cod in enum.types:
            ts = enum.terms(dom, cod, max_size)
            for i, lhs in enumerate(ts):
                start = i if reflexive else i + 1
                for rhs in ts[start:]:
                    for strength in strengths:
                        out.append(Equation(lhs, rhs, strength))
    return out


def random_terms(
    sig: Signature,
    count: int,
    max_size: int,
    seed: int,
    family: str | None = None,
    handlers: bool = True,
) -> list[Term]:
    """Seeded random sample of well-formed terms, used by round-trip
    tests.  Draws uniformly from the bounded enumeration."""
    import random

    pool = enumerate_terms(sig, max_size, family=family, handlers=handlers)
    rng = random.Random(seed)
    return [pool[rng.randrange(len(pool))] for _ in range(count)]


def parallel_pairs(terms: list[Term]):
    by_hom: dict = {}
    for t in terms:
        by_hom.setdefault((t.dom, t.cod), []).append(t)
    for hom in sorted(by_hom, key=str):
        group = by_hom[hom]
        for a, b in itertools.combinations_with_replacement(group, 2):
            yield a, b
