"""Finite-set denotational semantics, the independent oracle.

Exception-family terms denote total functions on ``X + E`` where ``E`` is a
tagged copy of the parameter carrier (there is a single exception name, so
tagging is a bijection and is fixed to the identity).  State-family terms
denote total functions ``S x X -> S x Y`` with ``S`` the value carrier and
``lookup`` the identity.

Denotations are plain dicts from input keys to output keys:

* exceptions: keys ``("v", i)`` for carrier elements and ``("e", j)`` for
  exceptions;
* states: keys ``(s, x)`` and values ``(s', y)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .terms import (
    EMPTY,
    UNIT,
    CatchCore,
    Const,
    Copa,
    DecoError,
    Equation,
    FamilyError,
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
    validate_term,
)


@dataclass(frozen=True)
class TableSpec:
    rows: tuple


@dataclass(frozen=True)
class ExprSpec:
    node: tuple


@dataclass(frozen=True)
class ElemSpec:
    name: str


@dataclass(frozen=True)
class ModelSpec:
    carriers: dict
    interps: dict


def _eval_expr(node: tuple, x: int | None) -> int:
    match node:
        case ("int", v):
            return v
        case ("x",):
            if x is None:
                raise DecoError("expression uses x but the symbol takes no argument")
            return x
        case ("neg", a):
            return -_eval_expr(a, x)
        case ("+", a, b):
            return _eval_expr(a, x) + _eval_expr(b, x)
        case ("-", a, b):
            return _eval_expr(a, x) - _eval_expr(b, x)
        case ("*", a, b):
            return _eval_expr(a, x) * _eval_expr(b, x)
        case ("%", a, b):
            return _eval_expr(a, x) % _eval_expr(b, x)
        case ("//", a, b):
            return _eval_expr(a, x) // _eval_expr(b, x)
    raise DecoError(f"bad expression node {node!r}")


@dataclass
class FiniteModel:
    sig: Signature
    sizes: dict[ObjType, int]
    op_tables: dict[str, tuple]
    const_vals: dict[str, int]
    names: dict[ObjType, tuple] = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)

    def size(self, t: ObjType) -> int:
        if t == EMPTY:
            return 0
        if t == UNIT:
            return 1
        return self.sizes[t]

    def elem_name(self, t: ObjType, i: int) -> str:
        if t == UNIT:
            return "*"
        names = self.names.get(t)
        return names[i] if names else str(i)

    @property
    def family(self) -> str:
        return self.sig.family

    @property
    def exceptions(self) -> int:
        """Size of E, the tagged copy of the parameter carrier."""
        return self.size(self.sig.param)

    @property
    def states(self) -> int:
        return self.size(self.sig.value)

    def describe(self) -> str:
        parts = [f"|{t}|={n}" for t, n in sorted(self.sizes.items())]
        for name in sorted(self.op_tables):
            parts.append(f"{name}={self.op_tables[name]}")
        for name in sorted(self.const_vals):
            parts.append(f"{name}={self.const_vals[name]}")
        return " ".join(parts)


def input_keys(t: ObjType, m: FiniteModel) -> list:
    if m.family in ("exc", "excore"):
        keys = [("v", i) for i in range(m.size(t))]
        keys.extend(("e", j) for j in range(m.exceptions))
        return keys
    return [(s, x) for s in range(m.states) for x in range(m.size(t))]


def _gen_table(m: FiniteModel, atom: Gen) -> tuple:
    try:
        return m.op_tables[atom.name]
    except KeyError:
        raise DecoError(f"model has no interpretation for generator {atom.name!r}")


def _atom_map_exc(atom, m: FiniteModel):
    """Value-part action of an exception-family atom; exceptions propagate
    unless the atom is a catcher."""
    e_count = m.exceptions
    out: dict = {("e", j): ("e", j) for j in range(e_count)}
    if isinstance(atom, Gen):
        table = _gen_table(m, atom)
        if atom.grade == 0:
            for x in range(m.size(atom.dom)):
                out[("v", x)] = ("v", table[x])
        else:
            for x in range(m.size(atom.dom)):
                out[("v", x)] = table[x]
    elif isinstance(atom, Const):
        try:
            val = m.const_vals[atom.name]
        except KeyError:
            raise DecoError(f"model has no interpretation for constant {atom.name!r}")
        out[("v", 0)] = ("v", val)
    elif isinstance(atom, Copa):
        pass
    elif isinstance(atom, (Throw, Tag)):
        for p in range(m.size(atom.dom)):
            out[("v", p)] = ("e", p)
    elif isinstance(atom, Untag):
        for j in range(e_count):
            out[("e", j)] = ("v", j)
    elif isinstance(atom, TryCatch):
        da = eval_term(atom.body, m)
        db = eval_term(atom.handler, m)
        for x in range(m.size(atom.dom)):
            r = da[("v", x)]
            out[("v", x)] = r if r[0] == "v" else db[("v", r[1])]
    elif isinstance(atom, TryCore):
        da = eval_term(atom.body, m)
        dk = eval_term(atom.continuation, m)
        for x in range(m.size(atom.dom)):
            out[("v", x)] = dk[da[("v", x)]]
    elif isinstance(atom, CatchCore):
        db = eval_term(atom.handler, m)
        for y in range(m.size(atom.dom)):
            out[("v", y)] = ("v", y)
        for j in range(e_count):
            out[("e", j)] = db[("v", j)]
    else:
        raise FamilyError(f"atom {atom!r} has no exception semantics")
    return out


def _atom_map_states(atom, m: FiniteModel):
    out: dict = {}
    s_count = m.states
    if isinstance(atom, Gen):
        table = _gen_table(m, atom)
        if atom.grade == 0:
            for s in range(s_count):
                for x in range(m.size(atom.dom)):
                    out[(s, x)] = (s, table[x])
        else:
            for s in range(s_count):
                for x in range(m.size(atom.dom)):
                    out[(s, x)] = (s, table[s][x])
    elif isinstance(atom, Const):
        try:
            val = m.const_vals[atom.name]
        except KeyError:
            raise DecoError(f"model has no interpretation for constant {atom.name!r}")
        for s in range(s_count):
            out[(s, 0)] = (s, val)
    elif isinstance(atom, Pa):
        for s in range(s_count):
            for x in range(m.size(atom.dom)):
                out[(s, x)] = (s, 0)
    elif isinstance(atom, Lookup):
        for s in range(s_count):
            out[(s, 0)] = (s, s)
    elif isinstance(atom, Update):
        for s in range(s_count):
            for v in range(s_count):
                out[(s, v)] = (v, 0)
    else:
        raise FamilyError(f"atom {atom!r} has no state semantics")
    return out


def eval_term(t: Term, m: FiniteModel):
    """Compositional denotation of a term in a finite model."""
    key = (t.dom, t.cod, t.body)
    cached = m._cache.get(key)
    if cached is not None:
        return cached
    if m.family in ("exc", "excore"):
        atom_maps = [_atom_map_exc(a, m) for a in t.body]
    else:
        atom_maps = [_atom_map_states(a, m) for a in t.body]
    denot = {}
    for k in input_keys(t.dom, m):
        out = k
        for amap in atom_maps:
            out = amap[out]
        denot[k] = out
    m._cache[key] = denot
    return denot


def compose_denotations(d2: dict, d1: dict) -> dict:
    return {k: d2[v] for k, v in d1.items()}


def denot_key(d: dict) -> tuple:
    return tuple(sorted(d.items()))


def sem_holds(eq: Equation, m: FiniteModel) -> bool:
    """Strong equations compare full denotations; weak ones only the
    non-exceptional inputs (values returned, for states)."""
    if eq.weak and m.family == "exc":
        raise FamilyError("the programmer-level exception logic has no weak equations")
    d1 = eval_term(eq.lhs, m)
    d2 = eval_term(eq.rhs, m)
    if not eq.weak:
        return d1 == d2
    if m.family == "excore":
        return all(d1[k] == d2[k] for k in d1 if k[0] == "v")
    return all(d1[k][1] == d2[k][1] for k in d1)


# ---------------------------------------------------------------------------
# Model enumeration.
# ---------------------------------------------------------------------------


def enumerate_models(
    sig: Signature,
    carrier_max: int = 2,
    bounds: dict[str, int] | None = None,
    empty_types: frozenset[str] | tuple = (),
):
    """Yield every interpretation over every carrier assignment within
    bounds.  Raw enumeration, no dedup; the stream is finite and its order
    is deterministic."""
    bounds = dict(bounds or {})
    type_names = sorted(sig.types)
    for t in type_names:
        bounds.setdefault(t, carrier_max)
    for special in (sig.param, sig.value):
        if special is not None and (
            bounds.get(special.name, carrier_max) < 1 or special.name in empty_types
        ):
            raise DecoError(
                f"type {special.name} must be non-empty but its bound is zero"
            )

    ranges = []
    for t in type_names:
        if t in empty_types:
            ranges.append([0])
        else:
            if bounds[t] < 1:
                raise DecoError(f"bound of zero for type {t} used as a non-empty domain")
            ranges.append(range(1, bounds[t] + 1))

    op_names = sorted(sig.ops)
    const_names = sorted(sig.consts)

    for assignment in itertools.product(*ranges):
        sizes = {base_t: n for base_t, n in zip(map_to_obj(type_names), assignment)}
        model_stub = FiniteModel(sig, sizes, {}, {})

        def interps_for(op: Gen):
            nd, nc = model_stub.size(op.dom), model_stub.size(op.cod)
            if sig.family in ("exc", "excore") and op.grade == 1:
                outs = [("v", i) for i in range(nc)]
                outs += [("e", j) for j in range(model_stub.exceptions)]
                return itertools.product(outs, repeat=nd)
            if sig.family == "states" and op.grade == 1:
                s_count = model_stub.states
                flat = itertools.product(range(nc), repeat=s_count * nd)
                return (
                    tuple(tab[s * nd : (s + 1) * nd] for s in range(s_count))
                    for tab in flat
                )
            return itertools.product(range(nc), repeat=nd)

        op_choices = [interps_for(sig.ops[name]) for name in op_names]
        const_choices = [range(model_stub.size(sig.consts[c].cod)) for c in const_names]
        for combo in itertools.product(*op_choices, *const_choices):
            tables = dict(zip(op_names, combo[: len(op_names)]))
            consts = dict(zip(const_names, combo[len(op_names) :]))
            yield FiniteModel(sig, dict(sizes), tables, consts)


def map_to_obj(names: list[str]) -> list[ObjType]:
    return [ObjType("base", n) for n in names]


def model_from_spec(sig: Signature, spec: ModelSpec) -> FiniteModel:
    sizes: dict[ObjType, int] = {}
    names: dict[ObjType, tuple] = {}
    index: dict[str, dict[str, int]] = {}
    for tname in sig.types:
        elems = spec.carriers.get(tname)
        if elems is None:
            raise DecoError(f"model block gives no carrier for type {tname}")
        t = ObjType("base", tname)
        sizes[t] = len(elems)
        names[t] = tuple(elems)
        index[tname] = {e: i for i, e in enumerate(elems)}

    def elem_id(t: ObjType, name: str) -> int:
        if t == UNIT:
            return 0
        try:
            return index[t.name][name]
        except KeyError:
            raise DecoError(f"{name!r} is not an element of {t}")

    model = FiniteModel(sig, sizes, {}, {}, names)

    def out_value(op: Gen, raw):
        if isinstance(raw, tuple) and raw and raw[0] == "!":
            if not (sig.family in ("exc", "excore") and op.grade == 1):
                raise DecoError("exceptional outputs only make sense for acc ops")
            return ("e", elem_id(sig.param, raw[1]))
        if sig.family in ("exc", "excore") and op.grade == 1:
            return ("v", elem_id(op.cod, raw))
        return elem_id(op.cod, raw)

    for oname, op in sig.ops.items():
        interp = spec.interps.get(oname)
        if interp is None:
            raise DecoError(f"model block gives no interpretation for op {oname}")
        nd = model.size(op.dom)
        if sig.family == "states" and op.grade == 1:
            if not isinstance(interp, TableSpec):
                raise DecoError(f"acc op {oname} needs a (state, input) table")
            rows = {}
            for key, val in interp.rows:
                if not isinstance(key, tuple):
                    raise DecoError(f"acc op {oname} table keys must be (state, input)")
                s = elem_id(sig.value, key[0])
                x = elem_id(op.dom, key[1])
                rows[(s, x)] = elem_id(op.cod, val)
            table = tuple(
                tuple(rows.get((s, x)) for x in range(nd)) for s in range(model.states)
            )
            if any(v is None for row in table for v in row):
                raise DecoError(f"acc op {oname} table is not total")
            model.op_tables[oname] = table
            continue
        if isinstance(interp, TableSpec):
            rows = {}
            for key, val in interp.rows:
                rows[elem_id(op.dom, key)] = out_value(op, val)
            table = tuple(rows.get(x) for x in range(nd))
            if any(v is None for v in table):
                raise DecoError(f"op {oname} table is not total over {op.dom}")
        elif isinstance(interp, ExprSpec):
            table = []
            for x in range(nd):
                xname = model.elem_name(op.dom, x)
                if not xname.lstrip("-").isdigit():
                    raise DecoError(
                        f"op {oname}: expression interpretation needs numeric elements"
                    )
                result = str(_eval_expr(interp.node, int(xname)))
                table.append(out_value(op, result))
            table = tuple(table)
        else:
            raise DecoError(f"bad interpretation for op {oname}")
        model.op_tables[oname] = table

    for cname, const in sig.consts.items():
        interp = spec.interps.get(cname)
        if interp is None:
            raise DecoError(f"model block gives no interpretation for const {cname}")
        if isinstance(interp, ElemSpec):
            model.const_vals[cname] = elem_id(const.cod, interp.name)
        elif isinstance(interp, ExprSpec):
            val = str(_eval_expr(interp.node, None))
            model.const_vals[cname] = elem_id(const.cod, val)
        else:
            raise DecoError(f"bad interpretation for const {cname}")

    return model


# ---------------------------------------------------------------------------
# Denotation dumps for the CLI.
# ---------------------------------------------------------------------------


def denotation_rows(t: Term, m: FiniteModel) -> list[str]:
    """Function table as text lines sorted by input id; exceptional inputs
    and outputs are prefixed with ``!``."""
    validate_term(t, m.sig)
    d = eval_term(t, m)
    rows = []
    if m.family in ("exc", "excore"):
        def fmt(key, t_of):
            if key[0] == "v":
                return m.elem_name(t_of, key[1])
            return "!" + m.elem_name(m.sig.param, key[1])

        for k in sorted(d, key=lambda k: (k[0] != "v", k[1])):
            rows.append(f"{fmt(k, t.dom)} -> {fmt(d[k], t.cod)}")
    else:
        for (s, x), (s2, y) in sorted(d.items()):
            rows.append(
                f"{m.elem_name(m.sig.value, s)},{m.elem_name(t.dom, x)}"
                f" -> {m.elem_name(m.sig.value, s2)},{m.elem_name(t.cod, y)}"
            )
    return rows
