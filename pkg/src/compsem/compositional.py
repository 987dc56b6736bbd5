"""Bottom-up denotations built only from relation algebra.

Connectives map to relation operations (``&`` to bowtie, ``|`` to oplus,
``!`` to complement, ``exists`` to projection).  Only the leaves consult the
interpretation: an atom's denotation is the preimage of the predicate's
relation under the tuple-denotation map of its arguments, and an
application's denotation post-composes the function table with that map.

This module never calls into :mod:`compsem.direct`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ArityError
from .relations import (
    FunctionTable,
    Relation,
    bowtie,
    canonical_labels,
    complement,
    inverse_set_extension,
    oplus,
    project,
    set_extension,
)
from .structures import Interpretation
from .syntax import And, Atom, Const, Exists, Forall, Not, Or, Var


@dataclass(frozen=True)
class TupleDenotationMap:
    """``alpha -> (t_0(alpha), ..., t_{n-1}(alpha))`` over ``index -> domain``.

    ``graph`` keys are assignment rows aligned with ``index``; values are
    positional ``n``-tuples.
    """

    index: tuple
    arity: int
    domain: frozenset
    graph: dict

    def __hash__(self):
        return hash((self.index, self.arity, self.domain, frozenset(self.graph.items())))

    def __call__(self, alpha) -> tuple:
        return self.graph[tuple(alpha[v] for v in self.index)]

    def relation(self) -> Relation:
        """The range of the map, a relation over ``0..n-1``."""
        return Relation._trusted(
            tuple(range(self.arity)), self.domain, set_extension(self, self.graph)
        )


def _pair(children: list[FunctionTable], domain: frozenset) -> TupleDenotationMap:
    # Each child is consulted at the restriction of alpha to its own variables.
    index = canonical_labels(v for child in children for v in child.index)
    picks = [[index.index(v) for v in child.index] for child in children]
    graph = {}
    for row in itertools.product(sorted(domain), repeat=len(index)):
        graph[row] = tuple(
            child.graph[tuple(row[i] for i in pick)] for child, pick in zip(children, picks)
        )
    return TupleDenotationMap(index, len(children), domain, graph)


def comp_denote_term(t, interp: Interpretation) -> FunctionTable:
    dom = interp.universe
    if isinstance(t, Var):
        return FunctionTable._trusted((t.name,), dom, {(d,): d for d in dom})
    if isinstance(t, Const):
        return FunctionTable._trusted((), dom, {(): interp.consts[t.name]})
    tmap, _ = comp_denote_tuple(t.args, interp)
    table = interp.funcs[t.fn]
    return FunctionTable._trusted(
        tmap.index, dom, {row: table.graph[value] for row, value in tmap.graph.items()}
    )


def comp_denote_tuple(ts, interp: Interpretation) -> tuple[TupleDenotationMap, Relation]:
    tmap = _pair([comp_denote_term(t, interp) for t in ts], interp.universe)
    return tmap, tmap.relation()


def comp_denote_atom(pred: str, ts, interp: Interpretation) -> Relation:
    n = interp.signature.predicates.get(pred)
    if n is None or n != len(ts):
        raise ArityError(f"predicate {pred} does not take {len(ts)} arguments")
    tmap, _ = comp_denote_tuple(ts, interp)
    rows = inverse_set_extension(tmap, interp.preds[pred].content)
    return Relation._trusted(tmap.index, interp.universe, rows)


def comp_denote(f, interp: Interpretation) -> Relation:
    if isinstance(f, Atom):
        return comp_denote_atom(f.pred, f.args, interp)
    if isinstance(f, Not):
        return complement(comp_denote(f.body, interp))
    if isinstance(f, And):
        return bowtie(comp_denote(f.left, interp), comp_denote(f.right, interp))
    if isinstance(f, Or):
        return oplus(comp_denote(f.left, interp), comp_denote(f.right, interp))
    body = comp_denote(f.body, interp)
    keep = [v for v in body.index if v not in f.vars]
    if isinstance(f, Exists):
        return project(body, keep)
    assert isinstance(f, Forall)
    return complement(project(complement(body), keep))


def canonical_enumeration(variables) -> dict[int, str]:
    """The injective listing ``i -> i-th variable`` in sorted order."""
    return dict(enumerate(sorted(set(variables))))
