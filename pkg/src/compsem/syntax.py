"""Signatures, terms and formulas of first-order logic with function symbols.

Concrete syntax::

    formula := quant | disj
    quant   := ("exists" | "forall") var+ "." formula
    disj    := conj ("|" conj)*
    conj    := neg ("&" neg)*
    neg     := "!" neg | "(" formula ")" | atom
    atom    := ident "(" [term ("," term)*] ")"
    term    := ident ["(" term ("," term)* ")"]

Identifiers match ``[a-z][a-z0-9_]*``.  Constants, functions and predicates
must be declared in the :class:`Signature`; any other identifier in term
position is a variable.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Union

from .errors import ArityError, ParseError, UnknownSymbolError

KEYWORDS = frozenset({"exists", "forall"})
_IDENT = re.compile(r"[a-z][a-z0-9_]*\Z")


@dataclass(frozen=True)
class Signature:
    constants: frozenset = frozenset()
    predicates: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "constants", frozenset(self.constants))
        object.__setattr__(self, "predicates", dict(self.predicates))
        object.__setattr__(self, "functions", dict(self.functions))
        names = list(self.constants) + list(self.predicates) + list(self.functions)
        for name in names:
            if not _IDENT.match(name) or name in KEYWORDS:
                raise ParseError(f"invalid symbol name {name!r}")
        if len(set(names)) != len(names):
            raise ParseError("constant, predicate and function names must be disjoint")
        for name, n in self.predicates.items():
            if n < 0:
                raise ArityError(f"predicate {name} has negative arity")
        for name, n in self.functions.items():
            if n < 1:
                raise ArityError(f"function {name} must have positive arity")

    def __hash__(self):
        return hash(
            (
                self.constants,
                tuple(sorted(self.predicates.items())),
                tuple(sorted(self.functions.items())),
            )
        )

    @classmethod
    def parse(cls, text: str) -> "Signature":
        """Read ``"const c d; func f/1 g/2; pred p/2 q/1"`` (``;`` or newlines)."""
        consts, preds, funcs = set(), {}, {}
        for raw in re.split(r"[;\n]", text):
            clause = raw.split("#", 1)[0].strip()
            if not clause:
                continue
            kind, *items = clause.replace(",", " ").split()
            if kind == "const":
                consts.update(items)
                continue
            if kind not in ("func", "pred"):
                raise ParseError(f"unknown signature clause {kind!r}")
            table = funcs if kind == "func" else preds
            for item in items:
                m = re.fullmatch(r"([a-z][a-z0-9_]*)/(\d+)", item)
                if not m:
                    raise ParseError(f"expected name/arity, got {item!r}")
                if m[1] in table:
                    raise ParseError(f"{m[1]} declared twice")
                table[m[1]] = int(m[2])
        return cls(consts, preds, funcs)

    def render(self) -> str:
        parts = []
        if self.constants:
            parts.append("const " + " ".join(sorted(self.constants)))
        if self.functions:
            parts.append(
                "func " + " ".join(f"{k}/{v}" for k, v in sorted(self.functions.items()))
            )
        if self.predicates:
            parts.append(
                "pred " + " ".join(f"{k}/{v}" for k, v in sorted(self.predicates.items()))
            )
        return "; ".join(parts)

    def restricted(self, constants=(), functions=(), predicates=()) -> "Signature":
        """The sub-signature keeping only the named symbols."""
        return Signature(
            frozenset(constants) & self.constants,
            {k: v for k, v in self.predicates.items() if k in set(predicates)},
            {k: v for k, v in self.functions.items() if k in set(functions)},
        )


# -- abstract syntax ---------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


Term = Union[Var, Const, App]


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


def _check_binder(vars_):
    vars_ = tuple(vars_)
    if not vars_:
        raise ValueError("quantifier needs at least one variable")
    if len(set(vars_)) != len(vars_):
        raise ValueError(f"duplicate quantified variable in {vars_}")
    return vars_


@dataclass(frozen=True)
class Exists:
    vars: tuple
    body: "Formula"

    def __post_init__(self):
        object.__setattr__(self, "vars", _check_binder(self.vars))


@dataclass(frozen=True)
class Forall:
    vars: tuple
    body: "Formula"

    def __post_init__(self):
        object.__setattr__(self, "vars", _check_binder(self.vars))


Formula = Union[Atom, Not, And, Or, Exists, Forall]
Quantifier = (Exists, Forall)


# -- variable analysis -------------------------------------------------------


@lru_cache(maxsize=None)
def term_vars(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Const):
        return frozenset()
    return frozenset().union(*(term_vars(a) for a in t.args))


def tuple_vars(ts) -> frozenset:
    return frozenset().union(*(term_vars(t) for t in ts))


@lru_cache(maxsize=None)
def free_vars(f: Formula) -> frozenset:
    if isinstance(f, Atom):
        return tuple_vars(f.args)
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or)):
        return free_vars(f.left) | free_vars(f.right)
    return free_vars(f.body) - set(f.vars)


def depth(f: Formula) -> int:
    if isinstance(f, Atom):
        return 0
    if isinstance(f, (And, Or)):
        return 1 + max(depth(f.left), depth(f.right))
    return 1 + depth(f.body)


def subterms(x):
    """All terms occurring in a formula or term, outermost first."""
    if isinstance(x, (Var, Const)):
        yield x
    elif isinstance(x, App):
        yield x
        for a in x.args:
            yield from subterms(a)
    elif isinstance(x, Atom):
        for a in x.args:
            yield from subterms(a)
    elif isinstance(x, (And, Or)):
        yield from subterms(x.left)
        yield from subterms(x.right)
    else:
        yield from subterms(x.body)


def symbols(x) -> tuple[set, set, set]:
    """``(constants, functions, predicates)`` occurring in a formula or term."""
    consts, funcs, preds = set(), set(), set()

    def walk(y):
        if isinstance(y, Const):
            consts.add(y.name)
        elif isinstance(y, App):
            funcs.add(y.fn)
            for a in y.args:
                walk(a)
        elif isinstance(y, Atom):
            preds.add(y.pred)
            for a in y.args:
                walk(a)
        elif isinstance(y, (And, Or)):
            walk(y.left)
            walk(y.right)
        elif isinstance(y, (Not, Exists, Forall)):
            walk(y.body)

    walk(x)
    return consts, funcs, preds


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([a-z][a-z0-9_]*)|([().,!&|]))")


def _tokenize(src: str):
    tokens = []
    pos = 0
    while True:
        m = _TOKEN.match(src, pos)
        if not m:
            rest = src[pos:]
            stripped = rest.lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}", len(src) - len(stripped))
        if m[1]:
            tokens.append(("ident", m[1], m.start(1)))
        else:
            tokens.append((m[2], m[2], m.start(2)))
        pos = m.end()
    tokens.append(("eof", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str, sig: Signature):
        self.sig = sig
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            want = "identifier" if kind == "ident" else repr(kind)
            got = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ParseError(f"expected {want}, got {got}", tok[2])
        self.i += 1
        return tok

    def done(self):
        tok = self.peek()
        if tok[0] != "eof":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])

    def formula(self):
        tok = self.peek()
        if tok[0] == "ident" and tok[1] in KEYWORDS:
            self.take()
            names = []
            while self.peek()[0] == "ident":
                name, offset = self.take()[1:]
                if name in KEYWORDS or self._declared(name):
                    raise ParseError(f"{name!r} cannot be a bound variable", offset)
                if name in names:
                    raise ParseError(f"variable {name!r} bound twice", offset)
                names.append(name)
            if not names:
                raise ParseError("expected a variable after quantifier", self.peek()[2])
            self.take(".")
            body = self.formula()
            return (Exists if tok[1] == "exists" else Forall)(tuple(names), body)
        return self.disj()

    def disj(self):
        f = self.conj()
        while self.peek()[0] == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.neg()
        while self.peek()[0] == "&":
            self.take()
            f = And(f, self.neg())
        return f

    def neg(self):
        tok = self.peek()
        if tok[0] == "!":
            self.take()
            return Not(self.neg())
        if tok[0] == "(":
            self.take()
            f = self.formula()
            self.take(")")
            return f
        return self.atom()

    def atom(self):
        kind, name, offset = self.take("ident")
        if name in KEYWORDS:
            raise ParseError("quantified formula must be parenthesized here", offset)
        if name not in self.sig.predicates:
            raise UnknownSymbolError(f"unknown predicate {name!r} at offset {offset}")
        self.take("(")
        args = []
        if self.peek()[0] != ")":
            args.append(self.term())
            while self.peek()[0] == ",":
                self.take()
                args.append(self.term())
        self.take(")")
        if len(args) != self.sig.predicates[name]:
            raise ArityError(
                f"predicate {name} expects {self.sig.predicates[name]} arguments, "
                f"got {len(args)} (at offset {offset})"
            )
        return Atom(name, tuple(args))

    def _declared(self, name):
        s = self.sig
        return name in s.constants or name in s.functions or name in s.predicates

    def term(self):
        kind, name, offset = self.take("ident")
        if name in KEYWORDS:
            raise ParseError(f"keyword {name!r} in term position", offset)
        if name in self.sig.predicates:
            raise UnknownSymbolError(f"predicate {name!r} used as a term at offset {offset}")
        if self.peek()[0] == "(":
            if name not in self.sig.functions:
                raise UnknownSymbolError(f"unknown function {name!r} at offset {offset}")
            self.take("(")
            args = [self.term()]
            while self.peek()[0] == ",":
                self.take()
                args.append(self.term())
            self.take(")")
            if len(args) != self.sig.functions[name]:
                raise ArityError(
                    f"function {name} expects {self.sig.functions[name]} arguments, "
                    f"got {len(args)} (at offset {offset})"
                )
            return App(name, tuple(args))
        if name in self.sig.functions:
            raise ArityError(f"function {name} applied to no arguments at offset {offset}")
        if name in self.sig.constants:
            return Const(name)
        return Var(name)


def parse_formula(src: str, sig: Signature) -> Formula:
    p = _Parser(src, sig)
    f = p.formula()
    p.done()
    return f


def parse_term(src: str, sig: Signature) -> Term:
    p = _Parser(src, sig)
    t = p.term()
    p.done()
    return t


# -- printing ----------------------------------------------------------------


def show_term(t: Term) -> str:
    if isinstance(t, App):
        return f"{t.fn}({', '.join(show_term(a) for a in t.args)})"
    return t.name


def _wrap(s):
    return f"({s})"


def show(x) -> str:
    """Render a formula or term with minimal parentheses."""
    if isinstance(x, (Var, Const, App)):
        return show_term(x)
    if isinstance(x, Atom):
        return f"{x.pred}({', '.join(show_term(a) for a in x.args)})"
    if isinstance(x, Not):
        body = show(x.body)
        return "!" + (_wrap(body) if isinstance(x.body, (And, Or) + Quantifier) else body)
    if isinstance(x, And):
        left, right = show(x.left), show(x.right)
        if isinstance(x.left, (Or,) + Quantifier):
            left = _wrap(left)
        if isinstance(x.right, (And, Or) + Quantifier):
            right = _wrap(right)
        return f"{left} & {right}"
    if isinstance(x, Or):
        left, right = show(x.left), show(x.right)
        if isinstance(x.left, Quantifier):
            left = _wrap(left)
        if isinstance(x.right, (Or,) + Quantifier):
            right = _wrap(right)
        return f"{left} | {right}"
    kw = "exists" if isinstance(x, Exists) else "forall"
    return f"{kw} {' '.join(x.vars)}. {show(x.body)}"


# -- random generation -------------------------------------------------------


def random_term(rng, sig: Signature, variables, depth: int) -> Term:
    leaves = [Var(v) for v in variables] + [Const(c) for c in sorted(sig.constants)]
    funcs = sorted(sig.functions.items())
    if depth <= 0 or not funcs or rng.below(3) != 0:
        return rng.choice(leaves)
    name, n = rng.choice(funcs)
    return App(name, tuple(random_term(rng, sig, variables, depth - 1) for _ in range(n)))


def random_formula(rng, sig: Signature, variables, depth: int, term_depth: int = 1) -> Formula:
    """A random formula of depth at most ``depth`` over the given variable pool."""
    variables = list(variables)
    choice = 0 if depth <= 0 else rng.below(6)
    if choice == 0:
        name, n = rng.choice(sorted(sig.predicates.items()))
        return Atom(name, tuple(random_term(rng, sig, variables, term_depth) for _ in range(n)))
    if choice == 1:
        return Not(random_formula(rng, sig, variables, depth - 1, term_depth))
    if choice in (2, 3):
        cls = And if choice == 2 else Or
        return cls(
            random_formula(rng, sig, variables, depth - 1, term_depth),
            random_formula(rng, sig, variables, depth - 1, term_depth),
        )
    pool = list(variables)
    bound = []
    for _ in range(1 + rng.below(len(pool))):
        bound.append(pool.pop(rng.below(len(pool))))
    cls = Exists if choice == 4 else Forall
    return cls(tuple(bound), random_formula(rng, sig, variables, depth - 1, term_depth))
