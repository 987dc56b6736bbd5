import pytest
from hypothesis import given
from hypothesis import strategies as st

from compsem.errors import ArityError, ParseError, UnknownSymbolError
from compsem.rng import XorShift64Star
from compsem.syntax import (
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
    depth,
    free_vars,
    parse_formula,
    parse_term,
    random_formula,
    show,
    show_term,
    term_vars,
)

SIG = Signature.parse("const c; func f/1 g/2; pred p/2 q/1 r/1 s/0")


def test_signature_parse_and_render():
    sig = Signature.parse("# comment\nconst c d\nfunc f/1\npred p/2 q/0\n")
    assert sig.constants == {"c", "d"}
    assert sig.functions == {"f": 1}
    assert sig.predicates == {"p": 2, "q": 0}
    assert Signature.parse(sig.render()) == sig


def test_signature_invariants():
    with pytest.raises(ParseError):
        Signature.parse("const f; func f/1")
    with pytest.raises(ArityError):
        Signature.parse("func f/0")


def test_parse_atom_with_terms():
    sig = Signature.parse("const c; func f/1; pred p/2")
    assert parse_formula("p(f(x),c)", sig) == Atom("p", (App("f", (Var("x"),)), Const("c")))


def test_parse_quantifier_scope():
    got = parse_formula("exists x y. p(x,y) & q(y)", SIG)
    assert got == Exists(("x", "y"), And(Atom("p", (Var("x"), Var("y"))), Atom("q", (Var("y"),))))


def test_parse_error_offset():
    with pytest.raises(ParseError) as e:
        parse_formula("p(x", SIG)
    assert e.value.offset == 3


@pytest.mark.parametrize(
    "src, err",
    [
        ("zz(x)", UnknownSymbolError),
        ("p(x)", ArityError),
        ("q(f)", ArityError),
        ("q(h(x))", UnknownSymbolError),
        ("q(f(x, y))", ArityError),
        ("exists c. q(c)", ParseError),
        ("exists . q(x)", ParseError),
        ("q(x) &", ParseError),
        ("q(x) q(y)", ParseError),
        ("!exists x. q(x)", ParseError),
        ("q(X)", ParseError),
    ],
)
def test_parse_errors(src, err):
    with pytest.raises(err):
        parse_formula(src, SIG)


def test_precedence_and_associativity():
    a, b, c = (Atom("q", (Var(v),)) for v in "xyz")
    assert parse_formula("q(x) | q(y) & q(z)", SIG) == Or(a, And(b, c))
    assert parse_formula("q(x) & q(y) & q(z)", SIG) == And(And(a, b), c)
    assert parse_formula("!q(x) & q(y)", SIG) == And(Not(a), b)
    assert parse_formula("forall x. q(x) | q(y)", SIG) == Forall(("x",), Or(a, b))


def test_whitespace_insensitive():
    assert parse_formula(" exists  x .q( x )", SIG) == parse_formula("exists x. q(x)", SIG)


def test_free_and_term_vars():
    assert free_vars(parse_formula("exists x. p(x,y)", SIG)) == {"y"}
    assert term_vars(parse_term("g(f(x), c)", SIG)) == {"x"}
    assert free_vars(parse_formula("s()", SIG)) == frozenset()


def test_printer():
    p, q = Atom("q", (Var("x"),)), Atom("r", (Var("y"),))
    assert show(And(p, Not(q))) == "q(x) & !r(y)"
    assert show(Exists(("x",), p)) == "exists x. q(x)"
    assert show(And(Or(p, Atom("q", (Var("x"),))), Atom("r", (Var("x"),)))) == "(q(x) | q(x)) & r(x)"
    assert show(Not(Exists(("x",), p))) == "!(exists x. q(x))"
    assert show_term(App("g", (App("f", (Var("x"),)), Const("c")))) == "g(f(x), c)"
    assert show(Atom("s", ())) == "s()"


def test_quantifier_lists_validated():
    with pytest.raises(ValueError):
        Exists((), Atom("s", ()))
    with pytest.raises(ValueError):
        Forall(("x", "x"), Atom("s", ()))


def test_depth():
    assert depth(parse_formula("q(x)", SIG)) == 0
    assert depth(parse_formula("!(q(x) & (exists y. r(y)))", SIG)) == 3


@given(st.integers(0, 2**64 - 1), st.integers(0, 4))
def test_round_trip(seed, d):
    f = random_formula(XorShift64Star(seed), SIG, ("x", "y", "z"), d, term_depth=2)
    assert parse_formula(show(f), SIG) == f
    assert depth(f) <= d


@given(st.integers(0, 2**64 - 1))
def test_free_vars_compositional(seed):
    rng = XorShift64Star(seed)
    f0 = random_formula(rng, SIG, ("x", "y"), 2)
    f1 = random_formula(rng, SIG, ("y", "z"), 2)
    assert free_vars(And(f0, f1)) == free_vars(f0) | free_vars(f1)
    assert free_vars(Exists(("y",), f0)) == free_vars(f0) - {"y"}
