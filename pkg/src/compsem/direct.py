"""Textbook satisfaction semantics, used as the trusted oracle.

Every denotation here is computed by brute force: enumerate the assignments,
evaluate each one directly.  Nothing is memoized.
"""
from __future__ import annotations

from .errors import BudgetExceededError, UnboundVariableError
from .relations import FunctionTable, Relation, restrict
from .structures import Interpretation, enumerate_assignments
from .syntax import And, App, Atom, Const, Exists, Forall, Not, Or, Var, free_vars, term_vars

DEFAULT_BUDGET = 10**6

# A term's denotation is an explicit function table over its variables.
DenotationFunction = FunctionTable


def _check_budget(interp: Interpretation, n_vars: int, budget: int):
    count = len(interp.universe) ** n_vars
    if count > budget:
        raise BudgetExceededError(f"{count} assignments exceed budget {budget}")


def eval_term(t, interp: Interpretation, alpha) -> str:
    if isinstance(t, Const):
        return interp.consts[t.name]
    if isinstance(t, Var):
        try:
            return alpha[t.name]
        except KeyError:
            raise UnboundVariableError(f"variable {t.name} is unbound") from None
    args = tuple(eval_term(a, interp, alpha) for a in t.args)
    return interp.funcs[t.fn].graph[args]


def eval_tuple(ts, interp: Interpretation, alpha) -> tuple:
    return tuple(eval_term(t, interp, alpha) for t in ts)


def satisfies(f, interp: Interpretation, alpha, budget: int = DEFAULT_BUDGET) -> bool:
    if isinstance(f, Atom):
        return eval_tuple(f.args, interp, alpha) in interp.preds[f.pred].content
    if isinstance(f, Not):
        return not satisfies(f.body, interp, alpha, budget)
    if isinstance(f, (And, Or)):
        for v in free_vars(f):
            if v not in alpha:
                raise UnboundVariableError(f"variable {v} is unbound")
        left = satisfies(f.left, interp, restrict(alpha, free_vars(f.left)), budget)
        if isinstance(f, And) and not left:
            return False
        if isinstance(f, Or) and left:
            return True
        return satisfies(f.right, interp, restrict(alpha, free_vars(f.right)), budget)
    # Quantifiers extend alpha over the bound variables; bound names shadow.
    _check_budget(interp, len(f.vars), budget)
    for extension in enumerate_assignments(f.vars, interp):
        extended = dict(alpha)
        extended.update(extension)
        holds = satisfies(f.body, interp, extended, budget)
        if isinstance(f, Exists) and holds:
            return True
        if isinstance(f, Forall) and not holds:
            return False
    return isinstance(f, Forall)


def denote_formula(f, interp: Interpretation, budget: int = DEFAULT_BUDGET) -> Relation:
    """``<free_vars(f), D, {alpha | alpha satisfies f}>``."""
    fv = free_vars(f)
    _check_budget(interp, len(fv), budget)
    return Relation(
        tuple(sorted(fv)),
        interp.universe,
        [a for a in enumerate_assignments(fv, interp) if satisfies(f, interp, a, budget)],
    )


def denote_term(t, interp: Interpretation, budget: int = DEFAULT_BUDGET) -> DenotationFunction:
    """The function ``alpha -> value of t under alpha`` over ``term_vars(t) -> D``."""
    vs = sorted(term_vars(t))
    _check_budget(interp, len(vs), budget)
    return FunctionTable(
        tuple(vs),
        interp.universe,
        {
            tuple(a[v] for v in vs): eval_term(t, interp, a)
            for a in enumerate_assignments(vs, interp)
        },
    )


def denote_tuple(ts, interp: Interpretation, budget: int = DEFAULT_BUDGET) -> Relation:
    """The range of ``alpha -> eval_tuple(ts, alpha)`` as a relation over ``0..n-1``."""
    vs = frozenset().union(*(term_vars(t) for t in ts))
    _check_budget(interp, len(vs), budget)
    return Relation(
        tuple(range(len(ts))),
        interp.universe,
        {eval_tuple(ts, interp, a) for a in enumerate_assignments(vs, interp)},
    )
