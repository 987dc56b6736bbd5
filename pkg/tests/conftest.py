import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from compsem.relations import FunctionTable, Relation  # noqa: E402

settings.register_profile(
    "repo", derandomize=True, max_examples=150, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

ELEMS = "abc"
LABELS = ("x", "y", "z")


@st.composite
def domains(draw, max_size=3):
    return list(ELEMS[: draw(st.integers(1, max_size))])


@st.composite
def label_sets(draw, pool=LABELS):
    return tuple(sorted(draw(st.sets(st.sampled_from(pool)))))


@st.composite
def relations_on(draw, index, dom):
    import itertools

    rows = list(itertools.product(dom, repeat=len(index)))
    return Relation(index, dom, draw(st.sets(st.sampled_from(rows))) if rows else [])


@st.composite
def relations(draw, dom=None, index=None):
    dom = dom if dom is not None else draw(domains())
    index = index if index is not None else draw(label_sets())
    return draw(relations_on(index, dom))


@st.composite
def function_tables(draw, arity=None, dom=None):
    import itertools

    dom = dom if dom is not None else draw(domains())
    n = arity if arity is not None else draw(st.integers(1, 2))
    rows = list(itertools.product(dom, repeat=n))
    return FunctionTable(tuple(range(n)), dom, {r: draw(st.sampled_from(dom)) for r in rows})


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
