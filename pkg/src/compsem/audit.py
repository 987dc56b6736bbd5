"""Claim-by-claim checks of the algebraic identities, with replayable witnesses.

Every checker evaluates both sides of its identity exactly as written,
including compositions with full function spaces, so a FAIL verdict means
the identity as stated is violated on the reported instance.  Instances
come either from an exhaustive sweep within size caps or from a seeded
random stream; both are deterministic.
"""
from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field

from . import __version__
from .compositional import canonical_enumeration, comp_denote_atom
from .direct import denote_formula, denote_term, denote_tuple
from .errors import BudgetExceededError, ClaimShapeError, ParseError, VersionMismatchError
from .relations import (
    FunctionTable,
    Relation,
    bowtie,
    complement,
    compose,
    compose_single,
    cylinder,
    function_space,
    intersection,
    inverse_set_extension,
    is_subset,
    oplus,
    project,
    render,
    set_extension,
    union,
)
from .rng import XorShift64Star
from .structures import (
    GeneratorConfig,
    Interpretation,
    enumerate_interpretations,
    load,
    random_interpretation,
)
from .syntax import (
    And,
    App,
    Atom,
    Const,
    Exists,
    Forall,
    Not,
    Or,
    Signature,
    Var,
    free_vars,
    parse_formula,
    parse_term,
    random_formula,
    random_term,
    show,
    show_term,
    symbols,
    tuple_vars,
)

TOOL_VERSION = __version__
AUDIT_SIGNATURE = Signature.parse("const c; func f/1 g/2; pred p/2 q/1 r/0")
ELEMENTS = "abcdefghijklmnopqrstuvwxyz"

# Operands of depth <= 2 for the connective claims; one more connective
# keeps every audited formula within depth 3.
ATOM_POOL = (
    "r()",
    "q(x)",
    "q(y)",
    "q(c)",
    "p(x, y)",
    "p(y, x)",
    "p(x, x)",
    "q(f(x))",
    "p(f(y), c)",
)
COMPOUND_POOL = (
    "!q(x)",
    "p(x, y) & q(y)",
    "q(x) | !q(y)",
    "exists y. p(x, y)",
    "forall x. p(x, x)",
    "exists x. q(x) & q(f(x))",
    "forall y. p(x, y) | q(y)",
    "!(exists x y. p(x, y))",
)
TERM_POOL = ("x", "y", "c", "f(x)")


@dataclass(frozen=True)
class Caps:
    max_universe: int = 2
    variables: tuple = ("x", "y")
    max_arity: int = 2
    depth: int = 3


RANDOM_CAPS = Caps(max_universe=3, variables=("x", "y", "z"))


@dataclass(frozen=True)
class Outcome:
    ok: bool
    lhs: str
    rhs: str


# -- instance enumeration helpers --------------------------------------------


def _elements(size: int) -> list[str]:
    return list(ELEMENTS[:size])


def _subsets(items):
    items = list(items)
    for mask in range(2 ** len(items)):
        yield frozenset(x for i, x in enumerate(items) if mask >> i & 1)


def _relations(index: tuple, dom: list[str]):
    rows = list(itertools.product(dom, repeat=len(index)))
    for chosen in _subsets(rows):
        yield Relation(index, dom, chosen)


def _label_sets(pool):
    for k in range(len(pool) + 1):
        yield from itertools.combinations(pool, k)


def _random_subset(rng, items):
    return frozenset(x for x in items if rng.coin())


def _random_relation(rng, index, dom):
    return Relation(index, dom, _random_subset(rng, itertools.product(dom, repeat=len(index))))


def _random_labels(rng, pool):
    return tuple(v for v in pool if rng.coin())


_interp_cache: dict = {}


def _interpretations(x, caps: Caps):
    """All interpretations of the symbols occurring in ``x``, sizes 1..max."""
    consts, funcs, preds = symbols(x)
    sub = AUDIT_SIGNATURE.restricted(consts, funcs, preds)
    for size in range(1, caps.max_universe + 1):
        key = (sub, size)
        if key not in _interp_cache:
            _interp_cache[key] = list(enumerate_interpretations(sub, _elements(size)))
        yield from _interp_cache[key]


def _random_interp(rng, caps: Caps) -> Interpretation:
    cfg = GeneratorConfig(rng.next_u64(), caps.max_universe, AUDIT_SIGNATURE)
    return random_interpretation(cfg)


def _fmt_set(s) -> str:
    def cell(x):
        return "(" + ",".join(x) + ")" if isinstance(x, tuple) else str(x)

    return "{" + " ".join(sorted(cell(x) for x in s)) + "}"


def _pool(texts):
    return [parse_formula(t, AUDIT_SIGNATURE) for t in texts]


def _operands():
    return _pool(ATOM_POOL + COMPOUND_POOL)


def _random_operand(rng, caps):
    return random_formula(rng, AUDIT_SIGNATURE, caps.variables, caps.depth - 1)


# -- claims -------------------------------------------------------------------


class Claim:
    """One audited identity: instance sources plus a literal two-sided check."""

    id = ""
    statement = ""
    space = ""
    shape: tuple = ()

    def exhaustive(self, caps: Caps):
        raise NotImplementedError

    def random(self, rng, caps: Caps) -> dict:
        raise NotImplementedError

    def check(self, inst: dict) -> Outcome:
        raise NotImplementedError

    def run_check(self, inst: dict) -> Outcome:
        if set(inst) != set(self.shape):
            raise ClaimShapeError(
                f"{self.id} expects instance fields {sorted(self.shape)}, got {sorted(inst)}"
            )
        return self.check(inst)


class L1a(Claim):
    id = "L1a"
    statement = "s ⊆ f⁻¹(f(s)) for every f ∈ S→T and s ⊆ S"
    space = "f: D^n→D, n ≤ arity cap; every s ⊆ D^n"
    shape = ("f", "s")

    def exhaustive(self, caps):
        for size in range(1, caps.max_universe + 1):
            dom = _elements(size)
            for n in range(1, caps.max_arity + 1):
                rows = list(itertools.product(dom, repeat=n))
                for values in itertools.product(dom, repeat=len(rows)):
                    f = FunctionTable(tuple(range(n)), dom, dict(zip(rows, values)))
                    for s in _subsets(rows):
                        yield {"f": f, "s": s}

    def random(self, rng, caps):
        dom = _elements(1 + rng.below(caps.max_universe))
        n = 1 + rng.below(caps.max_arity)
        rows = list(itertools.product(dom, repeat=n))
        f = FunctionTable(tuple(range(n)), dom, {r: rng.choice(dom) for r in rows})
        return {"f": f, "s": _random_subset(rng, rows)}

    def check(self, inst):
        f, s = inst["f"], inst["s"]
        back = inverse_set_extension(f, set_extension(f, s))
        return Outcome(s <= back, _fmt_set(s), _fmt_set(back))


class L1b(Claim):
    id = "L1b"
    statement = "t = f(f⁻¹(t)) for every f ∈ S→T and t ⊆ T"
    space = "f: D^n→D, n ≤ arity cap; every t ⊆ D"
    shape = ("f", "t")

    def exhaustive(self, caps):
        for size in range(1, caps.max_universe + 1):
            dom = _elements(size)
            for n in range(1, caps.max_arity + 1):
                rows = list(itertools.product(dom, repeat=n))
                for values in itertools.product(dom, repeat=len(rows)):
                    f = FunctionTable(tuple(range(n)), dom, dict(zip(rows, values)))
                    for t in _subsets(dom):
                        yield {"f": f, "t": t}

    def random(self, rng, caps):
        dom = _elements(1 + rng.below(caps.max_universe))
        n = 1 + rng.below(caps.max_arity)
        rows = list(itertools.product(dom, repeat=n))
        f = FunctionTable(tuple(range(n)), dom, {r: rng.choice(dom) for r in rows})
        return {"f": f, "t": _random_subset(rng, dom)}

    def check(self, inst):
        f, t = inst["f"], inst["t"]
        image = set_extension(f, inverse_set_extension(f, t))
        return Outcome(t == image, _fmt_set(t), _fmt_set(image))


class L2(Claim):
    id = "L2"
    statement = "R0 ⋈ R1 = ρ_I(R0) ∩ ρ_I(R1) and R0 ⊕ R1 = ρ_I(R0) ∪ ρ_I(R1), I = I0 ∪ I1"
    space = "all pairs of relations over index sets ⊆ the variable pool"
    shape = ("r0", "r1")

    def exhaustive(self, caps):
        for size in range(1, caps.max_universe + 1):
            dom = _elements(size)
            rels = [
                r for idx in _label_sets(caps.variables) for r in _relations(idx, dom)
            ]
            for r0 in rels:
                for r1 in rels:
                    yield {"r0": r0, "r1": r1}

    def random(self, rng, caps):
        dom = _elements(1 + rng.below(caps.max_universe))
        return {
            "r0": _random_relation(rng, _random_labels(rng, caps.variables), dom),
            "r1": _random_relation(rng, _random_labels(rng, caps.variables), dom),
        }

    def check(self, inst):
        r0, r1 = inst["r0"], inst["r1"]
        idx = r0.index + r1.index
        c0, c1 = cylinder(r0, idx), cylinder(r1, idx)
        lhs, rhs = bowtie(r0, r1), intersection(c0, c1)
        if lhs != rhs:
            return Outcome(False, render(lhs), render(rhs))
        lhs, rhs = oplus(r0, r1), union(c0, c1)
        return Outcome(lhs == rhs, render(lhs), render(rhs))


class L3a(Claim):
    id = "L3a"
    statement = "⟨I',D,C⟩ = π_I'(ρ_I(⟨I',D,C⟩)) for I' ⊆ I"
    space = "I ⊆ variable pool, I' ⊆ I, every C ⊆ I'→D"
    shape = ("r", "labels")

    def exhaustive(self, caps):
        for size in range(1, caps.max_universe + 1):
            dom = _elements(size)
            for big in _label_sets(caps.variables):
                for small in _label_sets(big):
                    for r in _relations(small, dom):
                        yield {"r": r, "labels": big}

    def random(self, rng, caps):
        dom = _elements(1 + rng.below(caps.max_universe))
        big = _random_labels(rng, caps.variables)
        return {"r": _random_relation(rng, _random_labels(rng, big), dom), "labels": big}

    def check(self, inst):
        r, big = inst["r"], inst["labels"]
        back = project(cylinder(r, big), r.index)
        return Outcome(r == back, render(r), render(back))


class L3b(Claim):
    id = "L3b"
    statement = "⟨I,D,C⟩ ⊆ ρ_I(π_I'(⟨I,D,C⟩)) for I' ⊆ I"
    space = "I ⊆ variable pool, I' ⊆ I, every C ⊆ I→D"
    shape = ("r", "labels")

    def exhaustive(self, caps):
        for size in range(1, caps.max_universe + 1):
            dom = _elements(size)
            for big in _label_sets(caps.variables):
                for r in _relations(big, dom):
                    for small in _label_sets(big):
                        yield {"r": r, "labels": small}

    def random(self, rng, caps):
        dom = _elements(1 + rng.below(caps.max_universe))
        big = _random_labels(rng, caps.variables)
        return {"r": _random_relation(rng, big, dom), "labels": _random_labels(rng, big)}

    def check(self, inst):
        r, small = inst["r"], inst["labels"]
        back = cylinder(project(r, small), r.index)
        return Outcome(is_subset(r, back), render(r), render(back))


def _space(s: int, t: int) -> Relation:
    """The function space ``s -> t`` for natural numbers, elements named by digits."""
    return function_space(range(s), [str(i) for i in range(t)])


class L4a(Claim):
    id = "L4a"
    statement = "S→S = (S→T) ▷ (T→S)"
    space = "S = {0..s-1}, T = {0..t-1}, 1 ≤ s ≤ cap, 0 ≤ t ≤ cap"
    shape = ("s", "t")

    def exhaustive(self, caps):
        for s in range(1, caps.max_universe + 1):
            for t in range(0, caps.max_universe + 1):
                yield {"s": s, "t": t}

    def random(self, rng, caps):
        return {"s": 1 + rng.below(caps.max_universe), "t": rng.below(caps.max_universe + 1)}

    def check(self, inst):
        s, t = inst["s"], inst["t"]
        if s < 1 or t < 0:
            raise ClaimShapeError("L4a needs s >= 1 and t >= 0")
        lhs = _space(s, s)
        rhs = compose(_space(s, t), _space(t, s))
        return Outcome(lhs == rhs, render(lhs), render(rhs))


class L4b(Claim):
    id = "L4b"
    statement = "S→T = (S→S) ▷ (S→T) = (S→T) ▷ (T→T)"
    space = "S = {0..s-1}, T = {0..t-1}, 1 ≤ s, t ≤ cap"
    shape = ("s", "t")

    def exhaustive(self, caps):
        for s in range(1, caps.max_universe + 1):
            for t in range(1, caps.max_universe + 1):
                yield {"s": s, "t": t}

    def random(self, rng, caps):
        return {"s": 1 + rng.below(caps.max_universe), "t": 1 + rng.below(caps.max_universe)}

    def check(self, inst):
        s, t = inst["s"], inst["t"]
        if s < 1 or t < 1:
            raise ClaimShapeError("L4b needs s, t >= 1")
        lhs = _space(s, t)
        for rhs in (compose(_space(s, s), _space(s, t)), compose(_space(s, t), _space(t, t))):
            if lhs != rhs:
                return Outcome(False, render(lhs), render(rhs))
        return Outcome(True, render(lhs), render(lhs))


class _Binary(Claim):
    shape = ("f0", "f1", "interp")
    space = "operand pairs from the bundled depth-≤2 pool; every interpretation of their symbols"

    def exhaustive(self, caps):
        ops = _operands()
        for f0 in ops:
            for f1 in ops:
                for interp in _interpretations(And(f0, f1), caps):
                    yield {"f0": f0, "f1": f1, "interp": interp}

    def random(self, rng, caps):
        f0 = _random_operand(rng, caps)
        f1 = _random_operand(rng, caps)
        return {"f0": f0, "f1": f1, "interp": _random_interp(rng, caps)}


class T1a(_Binary):
    id = "T1a"
    statement = "M(F0 ∧ F1) = M(F0) ⋈ M(F1)"

    def check(self, inst):
        f0, f1, i = inst["f0"], inst["f1"], inst["interp"]
        lhs = denote_formula(And(f0, f1), i)
        rhs = bowtie(denote_formula(f0, i), denote_formula(f1, i))
        return Outcome(lhs == rhs, render(lhs), render(rhs))


class T1b(_Binary):
    id = "T1b"
    statement = "M(F0 ∨ F1) = M(F0) ⊕ M(F1)"

    def check(self, inst):
        f0, f1, i = inst["f0"], inst["f1"], inst["interp"]
        lhs = denote_formula(Or(f0, f1), i)
        rhs = oplus(denote_formula(f0, i), denote_formula(f1, i))
        return Outcome(lhs == rhs, render(lhs), render(rhs))


class TypoT1(_Binary):
    id = "TypoT1"
    statement = "M(F0 ∧ F1) = M(F0) ⋈ M(F0) and M(F0 ∨ F1) = M(F0) ⊕ M(F0)"

    def check(self, inst):
        f0, f1, i = inst["f0"], inst["f1"], inst["interp"]
        m0 = denote_formula(f0, i)
        for node, op in ((And(f0, f1), bowtie), (Or(f0, f1), oplus)):
            lhs, rhs = denote_formula(node, i), op(m0, m0)
            if lhs != rhs:
                return Outcome(False, render(lhs), render(rhs))
        return Outcome(True, "", "")


class T1c(Claim):
    id = "T1c"
    statement = "M(¬F) = M(F)~"
    space = "operands from the bundled depth-≤2 pool; every interpretation of their symbols"
    shape = ("f", "interp")

    def exhaustive(self, caps):
        for f in _operands():
            for interp in _interpretations(f, caps):
                yield {"f": f, "interp": interp}

    def random(self, rng, caps):
        return {"f": _random_operand(rng, caps), "interp": _random_interp(rng, caps)}

    def check(self, inst):
        f, i = inst["f"], inst["interp"]
        lhs = denote_formula(Not(f), i)
        rhs = complement(denote_formula(f, i))
        return Outcome(lhs == rhs, render(lhs), render(rhs))


class T2(Claim):
    id = "T2"
    statement = "M(∃V'.F) = π_{V∖V'} M(F) for nonempty V' ⊆ V = free(F)"
    space = "operands from the bundled pool, every nonempty V' ⊆ free(F); every interpretation"
    shape = ("f", "bound", "interp")

    def exhaustive(self, caps):
        for f in _operands():
            fv = sorted(free_vars(f))
            for bound in _label_sets(fv):
                if not bound:
                    continue
                for interp in _interpretations(f, caps):
                    yield {"f": f, "bound": bound, "interp": interp}

    def random(self, rng, caps):
        f = _random_operand(rng, caps)
        while not free_vars(f):
            f = _random_operand(rng, caps)
        fv = sorted(free_vars(f))
        bound = tuple(v for v in fv if rng.coin()) or (rng.choice(fv),)
        return {"f": f, "bound": bound, "interp": _random_interp(rng, caps)}

    def check(self, inst):
        f, bound, i = inst["f"], inst["bound"], inst["interp"]
        lhs = denote_formula(Exists(tuple(bound), f), i)
        m = denote_formula(f, i)
        rhs = project(m, [v for v in m.index if v not in bound])
        return Outcome(lhs == rhs, render(lhs), render(rhs))


def _atom_instances(caps, distinct_vars=False, sorted_vars=False, arities=None):
    terms = [parse_term(t, AUDIT_SIGNATURE) for t in TERM_POOL]
    for pred, n in sorted(AUDIT_SIGNATURE.predicates.items()):
        if n > caps.max_arity or (arities is not None and n not in arities):
            continue
        if distinct_vars:
            choices = (
                [tuple(Var(v) for v in combo) for combo in itertools.combinations(caps.variables, n)]
                if sorted_vars
                else [
                    tuple(Var(v) for v in combo)
                    for combo in itertools.permutations(caps.variables, n)
                ]
            )
        else:
            choices = list(itertools.product(terms, repeat=n))
        for args in choices:
            atom = Atom(pred, args)
            for interp in _interpretations(atom, caps):
                yield {"atom": atom, "interp": interp}


def _random_atom(rng, caps, distinct_vars=False, sorted_vars=False, min_arity=1):
    preds = [(k, v) for k, v in sorted(AUDIT_SIGNATURE.predicates.items()) if v >= min_arity]
    pred, n = rng.choice(preds)
    if distinct_vars:
        pool = list(caps.variables)
        picked = [pool.pop(rng.below(len(pool))) for _ in range(n)]
        if sorted_vars:
            picked.sort()
        args = tuple(Var(v) for v in picked)
    else:
        args = tuple(random_term(rng, AUDIT_SIGNATURE, caps.variables, 1) for _ in range(n))
    return {"atom": Atom(pred, args), "interp": _random_interp(rng, caps)}


def _numerals(n: int) -> list[str]:
    return [str(i) for i in range(n)]


class T3(Claim):
    id = "T3"
    statement = "M(p(t0,…,tn-1)) = (V→n) ▷ (I(p) ∩ M(t0,…,tn-1))"
    space = "p of arity 1..cap, arguments from {x, y, c, f(x)}; every interpretation"
    shape = ("atom", "interp")

    def exhaustive(self, caps):
        yield from _atom_instances(caps, arities=range(1, caps.max_arity + 1))

    def random(self, rng, caps):
        return _random_atom(rng, caps)

    def check(self, inst):
        atom, i = inst["atom"], inst["interp"]
        n = len(atom.args)
        lhs = denote_formula(atom, i)
        inner = intersection(i.preds[atom.pred], denote_tuple(atom.args, i))
        rhs = compose(function_space(tuple_vars(atom.args), _numerals(n)), inner)
        return Outcome(lhs == rhs, render(lhs), render(rhs))


class T4(Claim):
    id = "T4"
    statement = "(n→V) ▷ M(p(t0,…,tn-1)) = I(p) ∩ M(t0,…,tn-1)"
    space = "p of arity 1..cap, arguments from {x, y, c, f(x)}; every interpretation"
    shape = ("atom", "interp")

    def exhaustive(self, caps):
        yield from _atom_instances(caps, arities=range(1, caps.max_arity + 1))

    def random(self, rng, caps):
        return _random_atom(rng, caps)

    def check(self, inst):
        atom, i = inst["atom"], inst["interp"]
        n = len(atom.args)
        lhs = compose(
            function_space(range(n), sorted(tuple_vars(atom.args))), denote_formula(atom, i)
        )
        rhs = intersection(i.preds[atom.pred], denote_tuple(atom.args, i))
        return Outcome(lhs == rhs, render(lhs), render(rhs))


class C1(Claim):
    id = "C1"
    statement = "(n→{x0,…,xn-1}) ▷ M(p(x0,…,xn-1)) = I(p), xi distinct"
    space = "p of arity 1..cap applied to distinct pool variables; every interpretation"
    shape = ("atom", "interp")

    def exhaustive(self, caps):
        yield from _atom_instances(caps, distinct_vars=True, arities=range(1, caps.max_arity + 1))

    def random(self, rng, caps):
        return _random_atom(rng, caps, distinct_vars=True)

    def check(self, inst):
        atom, i = inst["atom"], inst["interp"]
        names = [a.name for a in atom.args if isinstance(a, Var)]
        if len(names) != len(atom.args) or len(set(names)) != len(names):
            raise ClaimShapeError("C1 needs distinct variable arguments")
        lhs = compose(function_space(range(len(names)), names), denote_formula(atom, i))
        rhs = i.preds[atom.pred]
        return Outcome(lhs == rhs, render(lhs), render(rhs))


class C1canon(Claim):
    id = "C1canon"
    statement = "e ▷ M(p(x0,…,xn-1)) = I(p) with e the sorted enumeration i ↦ xi"
    space = "p of every arity ≤ cap applied to sorted distinct pool variables; every interpretation"
    shape = ("atom", "interp")

    def exhaustive(self, caps):
        yield from _atom_instances(caps, distinct_vars=True, sorted_vars=True)

    def random(self, rng, caps):
        return _random_atom(rng, caps, distinct_vars=True, sorted_vars=True, min_arity=0)

    def check(self, inst):
        atom, i = inst["atom"], inst["interp"]
        names = [a.name for a in atom.args if isinstance(a, Var)]
        if len(names) != len(atom.args) or names != sorted(set(names)):
            raise ClaimShapeError("C1canon needs sorted distinct variable arguments")
        lhs = compose_single(canonical_enumeration(names), comp_denote_atom(atom.pred, atom.args, i))
        rhs = i.preds[atom.pred]
        return Outcome(lhs == rhs, render(lhs), render(rhs))


def _triangle(term: App, interp: Interpretation, search_all: bool) -> Outcome:
    """Check the term triangle for every assignment.

    With ``search_all`` every ``x in n -> V`` is tried; otherwise only the
    map ``x(i) = t_i`` (arguments must then be variables).
    """
    n = len(term.args)
    whole = denote_term(term, interp)
    args_rel = denote_tuple(term.args, interp)
    table = interp.funcs[term.fn]
    vs = whole.index
    if search_all:
        candidates = [dict(enumerate(c)) for c in itertools.product(vs, repeat=n)]
    else:
        candidates = [{k: a.name for k, a in enumerate(term.args)}]
    for row, value in whole.rows():
        alpha = dict(zip(vs, row))
        found = False
        for x in candidates:
            d = tuple(alpha[x[k]] for k in range(n))
            if d in args_rel.content and table.graph[d] == value:
                found = True
                break
        if not found:
            shown = ",".join(f"{v}={alpha[v]}" for v in vs)
            tried = "none" if not candidates else f"{len(candidates)} maps x"
            return Outcome(
                False,
                f"M(t)(alpha)={value} at alpha=({shown})",
                f"no x in n→V matches ({tried} tried)",
            )
    return Outcome(True, "", "")


class T5flat(Claim):
    id = "T5flat"
    statement = "∀α ∃x∈(n→V): M(f(t0,…,tn-1))(α) = (I(f)↓M(t0,…,tn-1))(x▷α), every ti a variable"
    space = "f applied to pool variables (x(i) = ti checked); every interpretation and assignment"
    shape = ("term", "interp")

    def exhaustive(self, caps):
        for fn, n in sorted(AUDIT_SIGNATURE.functions.items()):
            if n > caps.max_arity:
                continue
            for combo in itertools.product(caps.variables, repeat=n):
                term = App(fn, tuple(Var(v) for v in combo))
                for interp in _interpretations(term, caps):
                    yield {"term": term, "interp": interp}

    def random(self, rng, caps):
        fn, n = rng.choice(sorted(AUDIT_SIGNATURE.functions.items()))
        term = App(fn, tuple(Var(rng.choice(caps.variables)) for _ in range(n)))
        return {"term": term, "interp": _random_interp(rng, caps)}

    def check(self, inst):
        term = inst["term"]
        if not isinstance(term, App) or not all(isinstance(a, Var) for a in term.args):
            raise ClaimShapeError("T5flat needs an application to variables")
        return _triangle(term, inst["interp"], search_all=False)


class T5nested(Claim):
    id = "T5nested"
    statement = "∀α ∃x∈(n→V): M(f(t0,…,tn-1))(α) = (I(f)↓M(t0,…,tn-1))(x▷α), some ti not a variable"
    space = "f applied to arguments from {x, y, c, f(x)}, not all variables; all x searched"
    shape = ("term", "interp")

    def exhaustive(self, caps):
        terms = [parse_term(t, AUDIT_SIGNATURE) for t in TERM_POOL]
        for fn, n in sorted(AUDIT_SIGNATURE.functions.items()):
            if n > caps.max_arity:
                continue
            for args in itertools.product(terms, repeat=n):
                if all(isinstance(a, Var) for a in args):
                    continue
                term = App(fn, args)
                for interp in _interpretations(term, caps):
                    yield {"term": term, "interp": interp}

    def random(self, rng, caps):
        fn, n = rng.choice(sorted(AUDIT_SIGNATURE.functions.items()))
        while True:
            args = tuple(random_term(rng, AUDIT_SIGNATURE, caps.variables, 1) for _ in range(n))
            if not all(isinstance(a, Var) for a in args):
                break
        return {"term": App(fn, args), "interp": _random_interp(rng, caps)}

    def check(self, inst):
        term = inst["term"]
        if not isinstance(term, App):
            raise ClaimShapeError("T5nested needs a function application")
        return _triangle(term, inst["interp"], search_all=True)


CLAIMS = {
    c.id: c
    for c in (
        L1a(), L1b(), L2(), L3a(), L3b(), L4a(), L4b(),
        T1a(), T1b(), T1c(), T2(), T3(), T4(), C1(), C1canon(),
        T5flat(), T5nested(), TypoT1(),
    )
}
CLAIM_IDS = tuple(CLAIMS)


def parse_claims(text: str) -> list[str]:
    if text.strip() == "all":
        return list(CLAIM_IDS)
    ids = [s.strip() for s in text.split(",") if s.strip()]
    unknown = [s for s in ids if s not in CLAIMS]
    if unknown:
        raise ParseError(f"unknown claim id(s): {', '.join(unknown)}")
    return ids


# -- witness codec -------------------------------------------------------------


def encode(v):
    if isinstance(v, Relation):
        return {"relation": {"index": list(v.index), "domain": sorted(v.domain),
                             "rows": [list(r) for r in sorted(v.content)]}}
    if isinstance(v, FunctionTable):
        return {"function": {"index": list(v.index), "domain": sorted(v.domain),
                             "graph": [[list(r), x] for r, x in v.rows()]}}
    if isinstance(v, Interpretation):
        return {"structure": v.dump(), "signature": v.signature.render()}
    if isinstance(v, (Var, Const, App)):
        return {"term": show_term(v)}
    if isinstance(v, (Atom, Not, And, Or, Exists, Forall)):
        return {"formula": show(v)}
    if isinstance(v, frozenset):
        return {"set": sorted((encode(x) for x in v), key=lambda x: json.dumps(x, sort_keys=True))}
    if isinstance(v, tuple):
        return {"tuple": [encode(x) for x in v]}
    if isinstance(v, (str, int)):
        return v
    raise TypeError(f"cannot encode {type(v).__name__}")


def decode(v):
    if not isinstance(v, dict):
        return v
    (tag,) = [k for k in v if k != "signature"] or ["?"]
    body = v[tag]
    if tag == "relation":
        return Relation(tuple(body["index"]), body["domain"], [tuple(r) for r in body["rows"]])
    if tag == "function":
        return FunctionTable(tuple(body["index"]), body["domain"],
                             {tuple(r): x for r, x in body["graph"]})
    if tag == "structure":
        return load(body, Signature.parse(v["signature"]))
    if tag == "term":
        return parse_term(body, AUDIT_SIGNATURE)
    if tag == "formula":
        return parse_formula(body, AUDIT_SIGNATURE)
    if tag == "set":
        return frozenset(decode(x) for x in body)
    if tag == "tuple":
        return tuple(decode(x) for x in body)
    raise ParseError(f"unknown witness tag {tag!r}")


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def make_witness(claim: Claim, inst: dict, outcome: Outcome) -> str:
    return _dumps(
        {
            "version": TOOL_VERSION,
            "claim": claim.id,
            "instance": {k: encode(v) for k, v in inst.items()},
            "lhs": outcome.lhs,
            "rhs": outcome.rhs,
        }
    )


def replay(witness) -> str:
    """Re-check a stored witness: ``"FAIL"`` if it still violates its claim,
    ``"STALE"`` if both sides now agree."""
    data = json.loads(witness) if isinstance(witness, str) else witness
    if data.get("version") != TOOL_VERSION:
        raise VersionMismatchError(
            f"witness from version {data.get('version')!r}, this is {TOOL_VERSION}"
        )
    claim = CLAIMS.get(data.get("claim"))
    if claim is None:
        raise ClaimShapeError(f"unknown claim {data.get('claim')!r}")
    inst = {k: decode(v) for k, v in data["instance"].items()}
    return "STALE" if claim.run_check(inst).ok else "FAIL"


# -- running -------------------------------------------------------------------


@dataclass
class ClaimResult:
    claim: str
    mode: str
    count: int
    seed: int
    verdict: str
    witness: str | None = None
    violations: int | None = None
    wall_time: float = field(default=0.0, compare=False)

    def line(self) -> str:
        parts = [
            f"CLAIM {self.claim}",
            f"MODE {self.mode}",
            f"N {self.count}",
            f"SEED {self.seed}",
            f"VERDICT {self.verdict}",
        ]
        if self.violations is not None:
            parts.append(f"VIOLATIONS {self.violations}")
        if self.witness is not None:
            parts.append(f"WITNESS {self.witness}")
        return "\t".join(parts)


@dataclass
class AuditReport:
    results: list

    def render(self) -> str:
        return "".join(r.line() + "\n" for r in self.results)

    @property
    def failed(self) -> bool:
        return any(r.verdict == "FAIL" for r in self.results)

    def __getitem__(self, claim_id: str) -> ClaimResult:
        for r in self.results:
            if r.claim == claim_id:
                return r
        raise KeyError(claim_id)


def parse_report(text: str) -> AuditReport:
    results = []
    for line in text.splitlines():
        if not line.strip():
            continue
        fields = dict(part.split(" ", 1) for part in line.split("\t"))
        results.append(
            ClaimResult(
                fields["CLAIM"],
                fields["MODE"],
                int(fields["N"]),
                int(fields["SEED"]),
                fields["VERDICT"],
                fields.get("WITNESS"),
                int(fields["VIOLATIONS"]) if "VIOLATIONS" in fields else None,
            )
        )
    return AuditReport(results)


def claim_seed(seed: int, claim_id: str) -> int:
    return seed ^ CLAIM_IDS.index(claim_id)


def run_claim(claim_id: str, mode: str, budget: int, seed: int,
              caps: Caps | None = None, count_all: bool = False) -> ClaimResult:
    if budget < 1:
        raise ValueError("budget must be at least 1")
    claim = CLAIMS[claim_id]
    start = time.perf_counter()
    if mode == "exhaustive":
        caps = caps or Caps()
        instances = claim.exhaustive(caps)
    elif mode == "random":
        caps = caps or RANDOM_CAPS
        rng = XorShift64Star(claim_seed(seed, claim_id))
        instances = (claim.random(rng, caps) for _ in range(budget))
    else:
        raise ValueError(f"unknown mode {mode!r}")

    count, violations, witness = 0, 0, None
    for inst in instances:
        count += 1
        if count > budget:
            raise BudgetExceededError(f"{claim_id}: exhaustive sweep exceeds budget {budget}")
        outcome = claim.run_check(inst)
        if not outcome.ok:
            violations += 1
            if witness is None:
                witness = make_witness(claim, inst, outcome)
            if not count_all:
                break
    return ClaimResult(
        claim_id,
        mode,
        count,
        seed,
        "FAIL" if violations else "PASS",
        witness,
        violations if count_all else None,
        time.perf_counter() - start,
    )


def run_audit(claims, mode: str = "exhaustive", budget: int = 10**6, seed: int = 0,
              caps: Caps | None = None, count_all: bool = False) -> AuditReport:
    """Run the given claims in canonical order."""
    wanted = set(claims)
    unknown = wanted - set(CLAIM_IDS)
    if unknown:
        raise ParseError(f"unknown claim id(s): {', '.join(sorted(unknown))}")
    return AuditReport(
        [
            run_claim(cid, mode, budget, seed, caps, count_all)
            for cid in CLAIM_IDS
            if cid in wanted
        ]
    )


# -- findings ------------------------------------------------------------------


def findings_markdown(report: AuditReport) -> str:
    """Human-readable summary of a report; a pure function of its content."""
    out = [
        "# Audit findings",
        "",
        "Generated by `compsem audit`; do not edit by hand.",
        "Each claim is an identity checked literally on every instance of its",
        "space (exhaustive mode) or on seeded random draws (random mode).",
        "",
        "| Claim | Identity | Mode | Instances | Seed | Verdict |",
        "|---|---|---|---|---|---|",
    ]
    for r in report.results:
        claim = CLAIMS[r.claim]
        verdict = r.verdict if r.violations is None else f"{r.verdict} ({r.violations} violations)"
        out.append(
            f"| {r.claim} | {claim.statement} | {r.mode} | {r.count} | {r.seed} | {verdict} |"
        )
    out += ["", "## Instance spaces", ""]
    for r in report.results:
        out.append(f"- **{r.claim}**: {CLAIMS[r.claim].space}")
    failures = [r for r in report.results if r.witness]
    if failures:
        out += ["", "## Counterexamples", ""]
    for r in failures:
        w = json.loads(r.witness)
        out += [f"### {r.claim}", "", f"Identity: {CLAIMS[r.claim].statement}", "", "Instance:", ""]
        for key, value in sorted(w["instance"].items()):
            out += [f"- `{key}`:", "", "```", _describe(decode(value)), "```", ""]
        out += ["Left side:", "", "```", w["lhs"], "```", "", "Right side:", "",
                "```", w["rhs"], "```", ""]
    return "\n".join(out).rstrip("\n") + "\n"


def _describe(v) -> str:
    if isinstance(v, Relation):
        return f"index {list(v.index)}, domain {sorted(v.domain)}\n{render(v)}"
    if isinstance(v, FunctionTable):
        return v.render()
    if isinstance(v, Interpretation):
        return v.dump().rstrip("\n")
    if isinstance(v, (Var, Const, App)):
        return show_term(v)
    if isinstance(v, frozenset):
        return _fmt_set(v)
    if isinstance(v, tuple):
        return "(" + ", ".join(str(x) for x in v) + ")"
    if isinstance(v, (str, int)):
        return str(v)
    return show(v)
