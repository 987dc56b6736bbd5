"""Finite interpretations: validation, the structure file format, enumeration
and seeded random generation.

Structure files are line oriented, with ``#`` comments::

    domain: a b
    const c = a
    pred p/2 = { (a,b) (b,a) }
    func f/1 = { (a)->b (b)->a }
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from .errors import (
    ArityError,
    BudgetExceededError,
    EmptyDomainError,
    MissingSymbolError,
    OutOfDomainError,
    ParseError,
    PartialFunctionError,
    UnknownSymbolError,
)
from .relations import FunctionTable, Relation
from .rng import XorShift64Star
from .syntax import Signature

_ELEMENT = re.compile(r"[A-Za-z0-9_]+\Z")
DEFAULT_INTERPRETATION_BUDGET = 10**7


@dataclass(frozen=True)
class Interpretation:
    """An interpretation of ``signature`` over a nonempty ``universe``.

    Predicates map to relations indexed by ``0..n-1``, functions to total
    function tables over ``0..n-1``; both have the universe as domain.
    """

    signature: Signature
    universe: frozenset
    consts: dict = field(default_factory=dict)
    preds: dict = field(default_factory=dict)
    funcs: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "universe", frozenset(self.universe))
        validate(self)

    def __hash__(self):
        return hash(
            (
                self.signature,
                self.universe,
                tuple(sorted(self.consts.items())),
                tuple(sorted(self.preds.items())),
                tuple(sorted(self.funcs.items())),
            )
        )

    def dump(self) -> str:
        """Render in the structure file format; ``load`` reads it back."""
        lines = ["domain: " + " ".join(sorted(self.universe))]
        for name in sorted(self.consts):
            lines.append(f"const {name} = {self.consts[name]}")
        for name in sorted(self.preds):
            rel = self.preds[name]
            rows = " ".join(f"({','.join(row)})" for row in sorted(rel.content))
            body = f"{{ {rows} }}" if rows else "{ }"
            lines.append(f"pred {name}/{len(rel.index)} = {body}")
        for name in sorted(self.funcs):
            table = self.funcs[name]
            rows = " ".join(f"({','.join(row)})->{v}" for row, v in table.rows())
            lines.append(f"func {name}/{len(table.index)} = {{ {rows} }}")
        return "\n".join(lines) + "\n"


def validate(interp: Interpretation) -> None:
    sig, universe = interp.signature, interp.universe
    if not universe:
        raise EmptyDomainError("universe must be nonempty")
    for e in universe:
        if not isinstance(e, str) or not _ELEMENT.match(e):
            raise ParseError(f"invalid element identifier {e!r}")
    for kind, declared, given in (
        ("constant", sig.constants, interp.consts),
        ("predicate", sig.predicates, interp.preds),
        ("function", sig.functions, interp.funcs),
    ):
        missing = set(declared) - set(given)
        if missing:
            raise MissingSymbolError(f"no interpretation for {kind} {sorted(missing)}")
        extra = set(given) - set(declared)
        if extra:
            raise UnknownSymbolError(f"{kind} {sorted(extra)} not in signature")
    for name, value in interp.consts.items():
        if value not in universe:
            raise OutOfDomainError(f"constant {name} = {value!r} outside the universe")
    for name, rel in interp.preds.items():
        n = sig.predicates[name]
        if rel.index != tuple(range(n)):
            raise ArityError(f"predicate {name}/{n} interpreted with index {list(rel.index)}")
        if rel.domain != universe:
            raise OutOfDomainError(f"predicate {name} has a domain other than the universe")
    for name, table in interp.funcs.items():
        n = sig.functions[name]
        if table.index != tuple(range(n)):
            raise ArityError(f"function {name}/{n} interpreted with index {list(table.index)}")
        if table.domain != universe:
            raise OutOfDomainError(f"function {name} has a domain other than the universe")


# -- file format -------------------------------------------------------------

_DOMAIN = re.compile(r"domain\s*:\s*(.*)\Z", re.S)
_CONST = re.compile(r"const\s+(\w+)\s*=\s*(\w+)\Z")
_TABLE = re.compile(r"(pred|func)\s+(\w+)\s*/\s*(\d+)\s*=\s*\{(.*)\}\Z", re.S)
_PRED_ROW = re.compile(r"\s*\(([^()]*)\)")
_FUNC_ROW = re.compile(r"\s*\(([^()]*)\)\s*->\s*([A-Za-z0-9_]+)")


def _statements(src: str):
    """Yield ``(line number, statement)``; a ``{`` block may span lines."""
    pending, start = [], 0
    for lineno, raw in enumerate(src.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not pending:
            start = lineno
        pending.append(line)
        text = " ".join(pending)
        if text.count("{") > text.count("}"):
            continue
        pending = []
        yield start, text
    if pending:
        raise ParseError(f"line {start}: unterminated '{{'")


def _cells(text: str, lineno: int) -> tuple:
    text = text.strip()
    if not text:
        return ()
    cells = tuple(c.strip() for c in text.split(","))
    for c in cells:
        if not _ELEMENT.match(c):
            raise ParseError(f"line {lineno}: bad element {c!r}")
    return cells


def _rows(body: str, pattern, lineno: int):
    out, pos = [], 0
    body = body.rstrip()
    while pos < len(body):
        m = pattern.match(body, pos)
        if not m:
            raise ParseError(f"line {lineno}: cannot read {body[pos:].strip()!r}")
        out.append(m)
        pos = m.end()
    return out


def load(src: str, sig: Signature | None = None) -> Interpretation:
    """Parse and validate a structure file.

    Without ``sig`` the signature is read off the declarations in the file.
    """
    universe = None
    consts, preds, funcs = {}, {}, {}
    arities = {}
    for lineno, stmt in _statements(src):
        if m := _DOMAIN.match(stmt):
            if universe is not None:
                raise ParseError(f"line {lineno}: domain given twice")
            universe = [e for e in re.split(r"[\s,]+", m[1].strip()) if e]
            for e in universe:
                if not _ELEMENT.match(e):
                    raise ParseError(f"line {lineno}: bad element {e!r}")
            continue
        if m := _CONST.match(stmt):
            name = m[1]
            if name in consts or name in arities:
                raise ParseError(f"line {lineno}: {name} given twice")
            consts[name] = (m[2], lineno)
            continue
        if m := _TABLE.match(stmt):
            kind, name, n = m[1], m[2], int(m[3])
            if name in consts or name in arities:
                raise ParseError(f"line {lineno}: {name} given twice")
            arities[name] = (kind, n)
            if kind == "pred":
                rows = [_cells(r[1], lineno) for r in _rows(m[4], _PRED_ROW, lineno)]
                preds[name] = (n, rows, lineno)
            else:
                rows = [
                    (_cells(r[1], lineno), r[2]) for r in _rows(m[4], _FUNC_ROW, lineno)
                ]
                funcs[name] = (n, rows, lineno)
            continue
        raise ParseError(f"line {lineno}: cannot parse {stmt!r}")
    if universe is None:
        raise ParseError("missing 'domain:' line")
    if not universe:
        raise EmptyDomainError("universe must be nonempty")

    if sig is None:
        sig = Signature(
            frozenset(consts),
            {k: v[0] for k, v in preds.items()},
            {k: v[0] for k, v in funcs.items()},
        )
    else:
        for name in consts:
            if name not in sig.constants:
                raise UnknownSymbolError(f"constant {name} not in signature")
        for name, (kind, n) in arities.items():
            table = sig.predicates if kind == "pred" else sig.functions
            if name not in table:
                raise UnknownSymbolError(f"{kind} {name} not in signature")
            if table[name] != n:
                raise ArityError(f"{name} declared /{table[name]} but file says /{n}")

    dom = frozenset(universe)
    const_map = {}
    for name, (value, lineno) in consts.items():
        if value not in dom:
            raise OutOfDomainError(f"line {lineno}: {value!r} not in domain")
        const_map[name] = value
    pred_map = {}
    for name, (n, rows, lineno) in preds.items():
        for row in rows:
            if len(row) != n:
                raise ArityError(f"line {lineno}: row {row} has wrong arity for {name}/{n}")
            for v in row:
                if v not in dom:
                    raise OutOfDomainError(f"line {lineno}: {v!r} not in domain")
        pred_map[name] = Relation(tuple(range(n)), dom, rows)
    func_map = {}
    for name, (n, rows, lineno) in funcs.items():
        graph = {}
        for args, value in rows:
            if len(args) != n:
                raise ArityError(f"line {lineno}: row {args} has wrong arity for {name}/{n}")
            for v in args + (value,):
                if v not in dom:
                    raise OutOfDomainError(f"line {lineno}: {v!r} not in domain")
            if args in graph:
                raise PartialFunctionError(f"line {lineno}: {name}{args} given twice")
            graph[args] = value
        if len(graph) != len(dom) ** n:
            raise PartialFunctionError(
                f"line {lineno}: {name}/{n} has {len(graph)} rows, needs {len(dom) ** n}"
            )
        func_map[name] = FunctionTable(tuple(range(n)), dom, graph)
    return Interpretation(sig, dom, const_map, pred_map, func_map)


# -- enumeration -------------------------------------------------------------


def _universe(domain) -> list[str]:
    if isinstance(domain, int):
        return [f"e{i}" for i in range(domain)]
    if isinstance(domain, Interpretation):
        return sorted(domain.universe)
    return sorted(set(domain))


def enumerate_assignments(variables, domain):
    """All assignments ``variables -> domain`` in canonical order, as dicts.

    ``domain`` may be an element collection or an :class:`Interpretation`.
    """
    names = sorted(set(variables))
    for values in itertools.product(_universe(domain), repeat=len(names)):
        yield dict(zip(names, values))


def count_interpretations(sig: Signature, size: int) -> int:
    count = size ** len(sig.constants)
    for n in sig.predicates.values():
        count *= 2 ** (size**n)
    for n in sig.functions.values():
        count *= size ** (size**n)
    return count


def enumerate_interpretations(sig: Signature, domain, budget: int = DEFAULT_INTERPRETATION_BUDGET):
    """Every interpretation of ``sig`` over ``domain`` exactly once.

    Order: constants, then predicates, then functions, each by name; subsets
    by bitmask over canonically ordered rows; function tables by value
    vector in lexicographic order.
    """
    elems = _universe(domain)
    if not elems:
        raise EmptyDomainError("universe must be nonempty")
    total = count_interpretations(sig, len(elems))
    if total > budget:
        raise BudgetExceededError(f"{total} interpretations exceed budget {budget}")
    dom = frozenset(elems)
    const_names = sorted(sig.constants)
    pred_names = sorted(sig.predicates)
    func_names = sorted(sig.functions)

    choices = [elems for _ in const_names]
    for name in pred_names:
        n = sig.predicates[name]
        rows = list(itertools.product(elems, repeat=n))
        choices.append(
            [
                Relation._trusted(
                    tuple(range(n)), dom, [r for i, r in enumerate(rows) if mask >> i & 1]
                )
                for mask in range(2 ** len(rows))
            ]
        )
    for name in func_names:
        n = sig.functions[name]
        rows = list(itertools.product(elems, repeat=n))
        choices.append(
            [
                FunctionTable._trusted(tuple(range(n)), dom, dict(zip(rows, values)))
                for values in itertools.product(elems, repeat=len(rows))
            ]
        )
    k, m = len(const_names), len(pred_names)
    for combo in itertools.product(*choices):
        yield Interpretation(
            sig,
            dom,
            dict(zip(const_names, combo[:k])),
            dict(zip(pred_names, combo[k : k + m])),
            dict(zip(func_names, combo[k + m :])),
        )


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int
    max_universe: int
    signature: Signature

    def __post_init__(self):
        if self.max_universe < 1:
            raise ValueError("max_universe must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def random_interpretation(cfg: GeneratorConfig, rng: XorShift64Star | None = None) -> Interpretation:
    """Deterministic for a fixed seed; pass ``rng`` to continue an existing stream."""
    rng = rng or XorShift64Star(cfg.seed)
    sig = cfg.signature
    elems = [f"e{i}" for i in range(1 + rng.below(cfg.max_universe))]
    dom = frozenset(elems)
    consts = {name: rng.choice(elems) for name in sorted(sig.constants)}
    preds = {}
    for name in sorted(sig.predicates):
        n = sig.predicates[name]
        rows = [r for r in itertools.product(elems, repeat=n) if rng.coin()]
        preds[name] = Relation._trusted(tuple(range(n)), dom, rows)
    funcs = {}
    for name in sorted(sig.functions):
        n = sig.functions[name]
        graph = {r: rng.choice(elems) for r in itertools.product(elems, repeat=n)}
        funcs[name] = FunctionTable._trusted(tuple(range(n)), dom, graph)
    return Interpretation(sig, dom, consts, preds, funcs)

