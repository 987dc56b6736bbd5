"""Variable-indexed finite relations.

A :class:`Relation` is a triple ``(index, domain, content)``: ``index`` is a
finite set of labels, ``domain`` a finite set of element identifiers, and
``content`` a set of total maps ``index -> domain``.  Labels are either
variable names (``"x"``, ``"y1"``) or natural numbers; a single index set never
mixes the two kinds.

Internally every tuple is stored as a positional row aligned with the
canonical (sorted) order of the index set, so content is a ``frozenset`` of
plain Python tuples.  Equality compares index, domain *and* content.
"""
from __future__ import annotations

import itertools
import re
from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from typing import Union

from .errors import (
    CompositionError,
    DomainMismatchError,
    EmptyDomainError,
    OutOfDomainError,
    PartialFunctionError,
    RestrictionError,
    TypeMismatchError,
)

Label = Union[str, int]
Row = tuple

_NAME = re.compile(r"[a-z][a-z0-9_]*\Z")


def canonical_labels(labels: Iterable[Label]) -> tuple[Label, ...]:
    """Deduplicate and sort labels; reject malformed or mixed label sets."""
    seen = set()
    for label in labels:
        if isinstance(label, bool):
            raise TypeMismatchError(f"invalid label {label!r}")
        if isinstance(label, int):
            if label < 0:
                raise TypeMismatchError(f"negative label {label}")
        elif isinstance(label, str):
            if not _NAME.match(label):
                raise TypeMismatchError(f"invalid label {label!r}")
        else:
            raise TypeMismatchError(f"invalid label {label!r}")
        seen.add(label)
    kinds = {type(label) for label in seen}
    if len(kinds) > 1:
        raise TypeMismatchError("index set mixes variable names and numeric labels")
    return tuple(sorted(seen))


def _row(t, index: tuple) -> Row:
    """Coerce a mapping (or an already aligned sequence) to a positional row."""
    if isinstance(t, Mapping):
        if set(t) != set(index):
            raise RestrictionError(
                f"tuple defined on {sorted(t, key=str)} but index set is {list(index)}"
            )
        return tuple(t[label] for label in index)
    row = tuple(t)
    if len(row) != len(index):
        raise RestrictionError(f"row {row} does not fit index set {list(index)}")
    return row


@dataclass(frozen=True)
class Relation:
    """A relation ``<index, domain, content>``.

    ``content`` may hold mappings from labels to elements, or positional rows
    aligned with the order in which ``index`` was given.  After construction
    ``index`` is canonically sorted and ``content`` is a frozenset of rows
    aligned with it.
    """

    index: tuple
    domain: frozenset
    content: frozenset

    def __post_init__(self):
        given = tuple(self.index)
        index = canonical_labels(given)
        if len(index) != len(given):
            raise TypeMismatchError(f"duplicate labels in {given}")
        domain = frozenset(self.domain)
        for e in domain:
            if not isinstance(e, str):
                raise TypeMismatchError(f"element identifiers are strings, got {e!r}")
        perm = [given.index(label) for label in index]
        rows = set()
        for t in self.content:
            if isinstance(t, Mapping):
                row = _row(t, index)
            else:
                raw = _row(t, given)
                row = tuple(raw[i] for i in perm)
            for v in row:
                if v not in domain:
                    raise OutOfDomainError(f"value {v!r} not in domain {sorted(domain)}")
            rows.add(row)
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "content", frozenset(rows))

    @classmethod
    def _trusted(cls, index: tuple, domain: frozenset, content) -> "Relation":
        # Skips validation; callers guarantee canonical index and aligned rows.
        obj = object.__new__(cls)
        object.__setattr__(obj, "index", index)
        object.__setattr__(obj, "domain", domain)
        object.__setattr__(obj, "content", frozenset(content))
        return obj

    def tuples(self):
        """Iterate content as ``dict`` tuples in canonical order."""
        for row in sorted(self.content):
            yield dict(zip(self.index, row))

    def __contains__(self, t) -> bool:
        try:
            return _row(t, self.index) in self.content
        except RestrictionError:
            return False

    def __len__(self) -> int:
        return len(self.content)

    def __str__(self) -> str:
        return render(self)


def render(r: Relation) -> str:
    """Bit-exact table rendering used by the CLI and the golden tests."""
    if not r.index:
        return "true" if r.content else "false"
    header = " | ".join(str(label) for label in r.index)
    lines = [header, "-" * len(header)]
    lines.extend(" | ".join(row) for row in sorted(r.content))
    return "\n".join(lines)


def restrict(t: Mapping, sub: Iterable[Label]) -> dict:
    """The restriction of tuple ``t`` to the labels ``sub``."""
    sub = list(sub)
    missing = [label for label in sub if label not in t]
    if missing:
        raise RestrictionError(f"labels {missing} not in tuple's index set")
    return {label: t[label] for label in sub}


def _space(index: tuple, domain: frozenset):
    return itertools.product(sorted(domain), repeat=len(index))


def function_space(index: Iterable[Label], domain: Iterable[str]) -> Relation:
    """All of ``index -> domain``.

    Unlike :func:`full_relation` an empty domain is accepted: with a nonempty
    index set the space is then empty, with an empty one it holds the single
    empty function.
    """
    index = canonical_labels(index)
    domain = frozenset(domain)
    return Relation._trusted(index, domain, _space(index, domain))


def full_relation(index: Iterable[Label], domain: Iterable[str]) -> Relation:
    index = canonical_labels(index)
    domain = frozenset(domain)
    if not domain:
        raise EmptyDomainError("domain must be nonempty")
    return function_space(index, domain)


def _same_domain(r0: Relation, r1: Relation):
    if r0.domain != r1.domain:
        raise DomainMismatchError(
            f"domains differ: {sorted(r0.domain)} vs {sorted(r1.domain)}"
        )


def _positions(index: tuple, sub: tuple) -> list[int]:
    pos = {label: i for i, label in enumerate(index)}
    return [pos[label] for label in sub]


def bowtie(r0: Relation, r1: Relation) -> Relation:
    """Tuples over ``I0 | I1`` whose restrictions lie in ``r0`` and in ``r1``."""
    _same_domain(r0, r1)
    index = canonical_labels(r0.index + r1.index)
    shared = tuple(label for label in r0.index if label in set(r1.index))
    key0 = _positions(r0.index, shared)
    key1 = _positions(r1.index, shared)
    pos0 = {label: i for i, label in enumerate(r0.index)}
    pos1 = {label: i for i, label in enumerate(r1.index)}
    pick = [(0, pos0[label]) if label in pos0 else (1, pos1[label]) for label in index]

    buckets = defaultdict(list)
    for row1 in r1.content:
        buckets[tuple(row1[i] for i in key1)].append(row1)
    out = set()
    for row0 in r0.content:
        for row1 in buckets.get(tuple(row0[i] for i in key0), ()):
            pair = (row0, row1)
            out.add(tuple(pair[side][i] for side, i in pick))
    return Relation._trusted(index, r0.domain, out)


def oplus(r0: Relation, r1: Relation) -> Relation:
    """Tuples over ``I0 | I1`` whose restriction lies in ``r0`` or in ``r1``."""
    _same_domain(r0, r1)
    index = canonical_labels(r0.index + r1.index)
    sel0 = _positions(index, r0.index)
    sel1 = _positions(index, r1.index)
    out = [
        row
        for row in _space(index, r0.domain)
        if tuple(row[i] for i in sel0) in r0.content
        or tuple(row[i] for i in sel1) in r1.content
    ]
    return Relation._trusted(index, r0.domain, out)


def complement(r: Relation) -> Relation:
    return Relation._trusted(
        r.index, r.domain, (row for row in _space(r.index, r.domain) if row not in r.content)
    )


def _same_type(r0: Relation, r1: Relation):
    if r0.index != r1.index or r0.domain != r1.domain:
        raise TypeMismatchError(
            f"relations differ in type: {list(r0.index)}/{sorted(r0.domain)} "
            f"vs {list(r1.index)}/{sorted(r1.domain)}"
        )


def intersection(r0: Relation, r1: Relation) -> Relation:
    _same_type(r0, r1)
    return Relation._trusted(r0.index, r0.domain, r0.content & r1.content)


def union(r0: Relation, r1: Relation) -> Relation:
    _same_type(r0, r1)
    return Relation._trusted(r0.index, r0.domain, r0.content | r1.content)


def difference(r0: Relation, r1: Relation) -> Relation:
    _same_type(r0, r1)
    return Relation._trusted(r0.index, r0.domain, r0.content - r1.content)


def is_subset(r0: Relation, r1: Relation) -> bool:
    _same_type(r0, r1)
    return r0.content <= r1.content


_SET_OPS = {
    "∩": intersection,
    "&": intersection,
    "∪": union,
    "|": union,
    "\\": difference,
    "-": difference,
    "⊆": is_subset,
    "<=": is_subset,
}


def set_op(kind: str, r0: Relation, r1: Relation):
    """Content-wise set operation on two relations of identical type."""
    try:
        op = _SET_OPS[kind]
    except KeyError:
        raise ValueError(f"unknown set operation {kind!r}") from None
    return op(r0, r1)


def project(r: Relation, sub: Iterable[Label]) -> Relation:
    sub = canonical_labels(sub)
    extra = set(sub) - set(r.index)
    if extra:
        raise RestrictionError(f"cannot project onto {sorted(extra, key=str)}: not in index set")
    sel = _positions(r.index, sub)
    return Relation._trusted(sub, r.domain, {tuple(row[i] for i in sel) for row in r.content})


def cylinder(r: Relation, index: Iterable[Label]) -> Relation:
    """All tuples over ``index`` whose restriction to ``r.index`` lies in ``r``."""
    index = canonical_labels(index)
    missing = set(r.index) - set(index)
    if missing:
        raise RestrictionError(
            f"cylinder index set must contain {sorted(missing, key=str)}"
        )
    sel = _positions(index, r.index)
    out = [row for row in _space(index, r.domain) if tuple(row[i] for i in sel) in r.content]
    return Relation._trusted(index, r.domain, out)


def element_to_label(e: str, numeric: bool) -> Label | None:
    """Read an element identifier as a label; ``None`` if it cannot be one."""
    if numeric:
        if e.isdigit() and str(int(e)) == e:
            return int(e)
        return None
    return e if _NAME.match(e) else None


def label_to_element(label: Label) -> str:
    return str(label)


def compose(r0: Relation, r1: Relation) -> Relation:
    """``<S,T,C0> |> <T,U,C1> = <S,U,{d0 |> d1}>`` with ``(d0 |> d1)(s) = d1(d0(s))``.

    The elements of ``r0.domain`` must name labels of ``r1.index``; numeric
    labels are written as their decimal strings on the element side.
    """
    numeric = bool(r1.index) and isinstance(r1.index[0], int)
    pos1 = {label: i for i, label in enumerate(r1.index)}
    slot = {}
    for e in r0.domain:
        label = element_to_label(e, numeric)
        if label not in pos1:
            raise CompositionError(
                f"element {e!r} of the left relation is not a label of {list(r1.index)}"
            )
        slot[e] = pos1[label]
    out = {
        tuple(row1[slot[v]] for v in row0) for row0 in r0.content for row1 in r1.content
    }
    return Relation._trusted(r0.index, r1.domain, out)


def compose_single(left, right, target: Iterable[str] | None = None) -> Relation:
    """Compose a relation with a single tuple on either side.

    ``compose_single(g, R)`` is ``g |> R`` where ``g`` maps labels to labels of
    ``R.index``.  ``compose_single(R, g)`` is ``R |> g`` where ``g`` maps every
    element of ``R.domain`` into ``target`` (default: the image of ``g``).
    """
    if isinstance(left, Mapping):
        g, r = left, right
        targets = frozenset(label_to_element(label) for label in r.index)
        row = {k: label_to_element(v) for k, v in g.items()}
        bad = [v for v in row.values() if v not in targets]
        if bad:
            raise CompositionError(f"{bad} are not labels of {list(r.index)}")
        return compose(Relation(tuple(row), targets, [row]), r)
    if not isinstance(right, Mapping):
        raise TypeError("compose_single needs a mapping on one side")
    r, g = left, right
    missing = [e for e in r.domain if e not in g]
    if missing:
        raise CompositionError(f"tuple undefined at {sorted(missing)}")
    numeric = all(e.isdigit() for e in r.domain) and bool(r.domain)
    labels = {}
    for e in r.domain:
        label = element_to_label(e, numeric)
        if label is None:
            raise CompositionError(f"element {e!r} cannot serve as a label")
        labels[label] = g[e]
    target = frozenset(target) if target is not None else frozenset(labels.values())
    return compose(r, Relation(tuple(labels), target, [labels]))


@dataclass(frozen=True)
class FunctionTable:
    """An explicit total function ``(index -> domain) -> domain``.

    ``graph`` maps positional source rows (aligned with the canonical order
    of ``index``) to element identifiers.
    """

    index: tuple
    domain: frozenset
    graph: Mapping

    def __post_init__(self):
        given = tuple(self.index)
        index = canonical_labels(given)
        perm = [given.index(label) for label in index]
        domain = frozenset(self.domain)
        graph = {}
        for key, value in dict(self.graph).items():
            if isinstance(key, Mapping):
                row = _row(key, index)
            else:
                raw = _row(key, given)
                row = tuple(raw[i] for i in perm)
            for v in row + (value,):
                if v not in domain:
                    raise OutOfDomainError(f"value {v!r} not in domain {sorted(domain)}")
            if row in graph and graph[row] != value:
                raise PartialFunctionError(f"conflicting values at {row}")
            graph[row] = value
        expected = len(domain) ** len(index)
        if len(graph) != expected:
            raise PartialFunctionError(
                f"function table has {len(graph)} rows, expected {expected}"
            )
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "graph", graph)

    @classmethod
    def _trusted(cls, index: tuple, domain: frozenset, graph: dict) -> "FunctionTable":
        obj = object.__new__(cls)
        object.__setattr__(obj, "index", index)
        object.__setattr__(obj, "domain", domain)
        object.__setattr__(obj, "graph", graph)
        return obj

    def __hash__(self):
        return hash((self.index, self.domain, frozenset(self.graph.items())))

    def __call__(self, arg) -> str:
        row = _row(arg, self.index)
        try:
            return self.graph[row]
        except KeyError:
            raise RestrictionError(f"{row} is outside the function's source") from None

    def rows(self):
        """``(source row, value)`` pairs in canonical order."""
        return sorted(self.graph.items())

    def render(self) -> str:
        return "\n".join(f"({','.join(row)})->{value}" for row, value in self.rows())


def set_extension(f, s: Iterable) -> frozenset:
    """Image ``{f(x) | x in s}``; ``f`` is anything with ``index`` and ``graph``."""
    out = set()
    for x in s:
        row = _row(x, f.index)
        if row not in f.graph:
            raise RestrictionError(f"{row} is outside the function's source")
        out.add(f.graph[row])
    return frozenset(out)


def inverse_set_extension(f, t: Iterable) -> frozenset:
    """Preimage ``{x | f(x) in t}`` as a set of source rows."""
    t = frozenset(t)
    return frozenset(x for x, v in f.graph.items() if v in t)
