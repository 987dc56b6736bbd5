import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from compsem import audit
from compsem.audit import (
    AUDIT_SIGNATURE,
    CLAIM_IDS,
    CLAIMS,
    Caps,
    claim_seed,
    decode,
    encode,
    findings_markdown,
    make_witness,
    parse_claims,
    parse_report,
    replay,
    run_audit,
    run_claim,
)
from compsem.errors import BudgetExceededError, ClaimShapeError, ParseError, VersionMismatchError
from compsem.relations import FunctionTable, Relation
from compsem.rng import XorShift64Star
from compsem.structures import load
from compsem.syntax import App, Const, Var, parse_formula, parse_term

D = ["a", "b"]
R0 = Relation(("x", "y"), D, [("a", "b"), ("b", "a")])
R1 = Relation(("y", "z"), D, [("a", "a"), ("b", "a")])


def interp(src):
    return load(src, None)


def check(cid, **inst):
    return CLAIMS[cid].run_check(inst)


def test_every_id_has_one_checker():
    assert CLAIM_IDS == (
        "L1a", "L1b", "L2", "L3a", "L3b", "L4a", "L4b", "T1a", "T1b", "T1c", "T2",
        "T3", "T4", "C1", "C1canon", "T5flat", "T5nested", "TypoT1",
    )
    assert all(CLAIMS[c].id == c for c in CLAIM_IDS)


def test_spec_examples():
    assert check("L2", r0=R0, r1=R1).ok
    i = load("domain: a b\npred p/1 = { (a) }\npred q/1 = { (b) }\n")
    f = lambda s: parse_formula(s, i.signature)  # noqa: E731
    assert CLAIMS["T1a"].check({"f0": f("p(x)"), "f1": f("q(y)"), "interp": i}).ok
    # [DERIVED] f misses a, so f(f^-1({a,b})) = {b}
    g = FunctionTable((0,), D, {("a",): "b", ("b",): "b"})
    out = check("L1b", f=g, t=frozenset(D))
    assert not out.ok
    assert (out.lhs, out.rhs) == ("{a b}", "{b}")


def test_shape_mismatch():
    with pytest.raises(ClaimShapeError):
        check("L2", r0=R0)
    with pytest.raises(ClaimShapeError):
        check("T5flat", term=parse_term("f(c)", AUDIT_SIGNATURE),
              interp=interp("domain: a\nconst c = a\nfunc f/1 = { (a)->a }\n"))


def test_function_space_identities_by_hand():
    # [DERIVED] 1 -> 0 is empty, so the composition is empty while 1 -> 1 is not
    assert not check("L4a", s=1, t=0).ok
    assert check("L4a", s=1, t=1).ok
    assert check("L4b", s=2, t=1).ok


def test_full_space_atom_claims_by_hand():
    # [DERIVED] (V -> 2) contains the map x,y |-> 0, which pulls (a,b) back to x=y=a
    i = interp("domain: a b\npred p/2 = { (a,b) }\n")
    atom = parse_formula("p(x, y)", i.signature)
    for cid in ("T3", "T4", "C1"):
        out = check(cid, atom=atom, interp=i)
        assert not out.ok, cid
    assert check("C1canon", atom=atom, interp=i).ok


def test_nested_triangle_without_variables():
    # [DERIVED] f(c) has no variables, so n -> V is empty and no x exists
    i = interp("domain: a\nconst c = a\nfunc f/1 = { (a)->a }\n")
    assert not check("T5nested", term=parse_term("f(c)", i.signature), interp=i).ok
    assert check("T5flat", term=App("f", (Var("x"),)), interp=i).ok


def test_typo_variant_differs_from_intended():
    i = interp("domain: a\npred q/1 = { }\npred r/0 = { }\n")
    f0, f1 = parse_formula("r()", i.signature), parse_formula("q(x)", i.signature)
    inst = {"f0": f0, "f1": f1, "interp": i}
    assert CLAIMS["T1a"].check(inst).ok
    assert not CLAIMS["TypoT1"].check(inst).ok


def test_relied_upon_claims_exhaustive():
    report = run_audit(["L1a", "L2", "L3a", "L3b", "T1c", "T2", "T5flat", "C1canon"])
    assert [r.verdict for r in report.results] == ["PASS"] * 8


def test_connective_claims_exhaustive_at_size_one():
    report = run_audit(["T1a", "T1b"], caps=Caps(max_universe=1))
    assert [r.verdict for r in report.results] == ["PASS", "PASS"]


def test_random_mode_deterministic():
    a = run_audit(["L1a", "L2", "L3a", "L3b"], "random", 1000, 42)
    b = run_audit(["L1a", "L2", "L3a", "L3b"], "random", 1000, 42)
    assert a.render() == b.render()
    assert all(r.verdict == "PASS" and r.count == 1000 for r in a.results)


def test_seed_derivation():
    assert claim_seed(42, "L1a") == 42
    assert claim_seed(42, "L2") == 42 ^ 2
    assert run_claim("L2", "random", 3, 42).seed == 42


def test_budget_and_modes():
    with pytest.raises(BudgetExceededError):
        run_claim("L2", "exhaustive", 10, 0)
    with pytest.raises(ValueError):
        run_claim("L2", "random", 0, 0)
    with pytest.raises(ValueError):
        run_claim("L2", "sideways", 10, 0)
    with pytest.raises(ParseError):
        parse_claims("T1a,T9")
    assert parse_claims("all") == list(CLAIM_IDS)


def test_count_all_violations():
    r = run_claim("L1b", "exhaustive", 10**6, 0, count_all=True)
    first = run_claim("L1b", "exhaustive", 10**6, 0)
    assert r.violations > 1 and r.witness == first.witness
    assert "VIOLATIONS" in r.line() and "VIOLATIONS" not in first.line()


def test_replay():
    report = run_audit(["L1b", "L4a", "T3", "T5nested", "TypoT1"])
    for r in report.results:
        assert r.verdict == "FAIL"
        assert replay(r.witness) == "FAIL"
    w = json.loads(report["L1b"].witness)
    w["instance"]["t"] = {"set": []}
    assert replay(json.dumps(w)) == "STALE"
    w["version"] = "0.0.0"
    with pytest.raises(VersionMismatchError):
        replay(w)


def test_report_format_round_trip():
    report = run_audit(["L1b", "L2"])
    text = report.render()
    first = text.splitlines()[0].split("\t")
    assert first[:5] == ["CLAIM L1b", "MODE exhaustive", f"N {report['L1b'].count}", "SEED 0", "VERDICT FAIL"]
    assert first[5].startswith("WITNESS {")
    assert parse_report(text).render() == text


def test_findings_are_a_function_of_the_report():
    report = run_audit(["L1b", "L2"])
    md = findings_markdown(report)
    assert md == findings_markdown(parse_report(report.render()))
    assert "| L2 |" in md and "### L1b" in md


@pytest.mark.parametrize("cid", CLAIM_IDS)
def test_witness_codec_round_trip(cid):
    claim = CLAIMS[cid]
    rng = XorShift64Star(11)
    for _ in range(5):
        inst = claim.random(rng, audit.RANDOM_CAPS)
        back = {k: decode(json.loads(json.dumps(encode(v)))) for k, v in inst.items()}
        assert back == inst
        assert claim.run_check(back) == claim.run_check(inst)


@given(st.integers(0, 2**64 - 1))
def test_random_witnesses_replay(seed):
    for cid in ("L1b", "L4a", "C1"):
        claim = CLAIMS[cid]
        inst = claim.random(XorShift64Star(seed), audit.RANDOM_CAPS)
        out = claim.run_check(inst)
        expected = "STALE" if out.ok else "FAIL"
        assert replay(make_witness(claim, inst, out)) == expected


def test_encode_rejects_unknown():
    with pytest.raises(TypeError):
        encode(3.5)
    assert encode(Const("c")) == {"term": "c"}
