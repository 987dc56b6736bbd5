"""Command-line front end.

Exit codes: 0 success or agreement, 1 input error, 2 budget exceeded,
3 engine disagreement or a FAIL verdict present.  Tables go to stdout,
diagnostics and timings to stderr, reports to files.
"""
from __future__ import annotations

import argparse
import os
import sys
import time
from importlib import resources

from . import audit
from .compositional import comp_denote, comp_denote_term
from .direct import DEFAULT_BUDGET, denote_formula, denote_term
from .errors import BudgetExceededError, CompsemError
from .relations import render
from .rng import XorShift64Star
from .structures import GeneratorConfig, enumerate_interpretations, load, random_interpretation
from .syntax import App, Signature, parse_formula, parse_term, show, show_term, subterms

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_DISAGREE = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _bundled(name: str) -> str:
    return resources.files("compsem").joinpath("data", name).read_text(encoding="utf-8")


def _signature(arg: str | None) -> Signature:
    if arg is None:
        return Signature.parse(_bundled("signature.txt"))
    return Signature.parse(_read(arg) if os.path.isfile(arg) else arg)


def read_corpus(text: str, sig: Signature) -> list:
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_formula(line, sig))
    return out


def _format_term_table(table) -> str:
    return "\n".join(f"({','.join(row)})->{value}" for row, value in table.rows())


# -- subcommands ---------------------------------------------------------------


def cmd_parse(args) -> int:
    sig = _signature(args.signature)
    if args.term is not None:
        print(show_term(parse_term(args.term, sig)))
    else:
        print(show(parse_formula(args.formula, sig)))
    return EXIT_OK


def cmd_eval(args) -> int:
    interp = load(_read(args.structure))
    f = parse_formula(args.formula, interp.signature)
    if args.engine == "direct":
        print(render(denote_formula(f, interp, args.budget)))
        return EXIT_OK
    if args.engine == "comp":
        print(render(comp_denote(f, interp)))
        return EXIT_OK
    direct = denote_formula(f, interp, args.budget)
    comp = comp_denote(f, interp)
    if direct == comp:
        print(render(direct))
        print("ENGINES AGREE")
        return EXIT_OK
    print("direct:")
    print(render(direct))
    print("compositional:")
    print(render(comp))
    print("ENGINES DISAGREE")
    return EXIT_DISAGREE


def cmd_eval_term(args) -> int:
    interp = load(_read(args.structure))
    t = parse_term(args.term, interp.signature)
    print(_format_term_table(denote_term(t, interp, args.budget)))
    return EXIT_OK


def check_pair(f, interp, budget: int = DEFAULT_BUDGET):
    """First engine mismatch for a formula and every term inside it, or None."""
    direct, comp = denote_formula(f, interp, budget), comp_denote(f, interp)
    if direct != comp:
        return show(f), render(direct), render(comp)
    for t in subterms(f):
        if isinstance(t, App):
            dt, ct = denote_term(t, interp, budget), comp_denote_term(t, interp)
            if dt != ct:
                return show_term(t), _format_term_table(dt), _format_term_table(ct)
    return None


def cmd_check_equiv(args) -> int:
    sig = _signature(args.signature)
    corpus_text = _read(args.corpus) if args.corpus else _bundled("corpus.txt")
    corpus = read_corpus(corpus_text, sig)
    if not corpus:
        raise InputError("corpus is empty")
    if args.exhaustive:
        interps = (
            i
            for size in range(1, args.max_universe + 1)
            for i in enumerate_interpretations(sig, size, args.budget)
        )
    else:
        rng = XorShift64Star(args.seed)
        cfg = GeneratorConfig(args.seed, args.max_universe, sig)
        interps = (random_interpretation(cfg, rng) for _ in range(args.trials))
    pairs = 0
    for interp in interps:
        for f in corpus:
            pairs += 1
            bad = check_pair(f, interp, args.budget)
            if bad:
                what, d, c = bad
                print(f"MISMATCH on {what}")
                print("structure:")
                print(interp.dump(), end="")
                print("direct:")
                print(d)
                print("compositional:")
                print(c)
                print("ENGINES DISAGREE")
                return EXIT_DISAGREE
    print(f"checked {pairs} formula-interpretation pairs over {len(corpus)} formulas")
    print("ENGINES AGREE")
    return EXIT_OK


def _write(path: str, text: str):
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as e:
        raise InputError(f"cannot write {path}: {e.strerror}") from None


def cmd_audit(args) -> int:
    if args.replay:
        report = audit.parse_report(_read(args.replay))
        failed = False
        for r in report.results:
            if r.witness is None:
                continue
            verdict = audit.replay(r.witness)
            failed |= verdict == "FAIL"
            print(f"CLAIM {r.claim}\tREPLAY {verdict}")
        return EXIT_DISAGREE if failed else EXIT_OK

    claims = audit.parse_claims(args.claims)
    budget = args.budget or (1000 if args.mode == "random" else 10**6)
    base = audit.Caps() if args.mode == "exhaustive" else audit.RANDOM_CAPS
    caps = base if args.max_universe is None else audit.Caps(
        args.max_universe, base.variables, base.max_arity, base.depth
    )
    results = []
    for cid in [c for c in audit.CLAIM_IDS if c in claims]:
        r = audit.run_claim(cid, args.mode, budget, args.seed, caps, args.all)
        print(f"{cid}: {r.verdict} after {r.count} instances in {r.wall_time:.2f}s", file=sys.stderr)
        results.append(r)
    report = audit.AuditReport(results)
    text = report.render()
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    findings = args.findings
    if findings is None and args.out:
        findings = os.path.join(os.path.dirname(os.path.abspath(args.out)), "FINDINGS.md")
    if findings:
        _write(findings, audit.findings_markdown(report))
    return EXIT_DISAGREE if report.failed else EXIT_OK


# -- wiring --------------------------------------------------------------------


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


class _Parser(argparse.ArgumentParser):
    # Usage errors are input errors; argparse's default status 2 means budget here.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="compsem",
        description="Direct and compositional denotations of first-order formulas.",
    )
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("parse", help="parse and pretty-print a formula or term")
    sp.add_argument("--signature", help="signature text or file (default: bundled)")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--formula")
    g.add_argument("--term")
    sp.set_defaults(run=cmd_parse)

    sp = sub.add_parser("eval", help="denotation of a formula in a structure")
    sp.add_argument("--structure", required=True)
    sp.add_argument("--formula", required=True)
    sp.add_argument("--engine", choices=("direct", "comp", "both"), default="both")
    sp.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    sp.set_defaults(run=cmd_eval)

    sp = sub.add_parser("eval-term", help="denotation of a term in a structure")
    sp.add_argument("--structure", required=True)
    sp.add_argument("--term", required=True)
    sp.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    sp.set_defaults(run=cmd_eval_term)

    sp = sub.add_parser("check-equiv", help="compare both engines over a corpus")
    sp.add_argument("--signature", help="signature text or file (default: bundled)")
    sp.add_argument("--corpus", help="one formula per line (default: bundled)")
    sp.add_argument("--exhaustive", action="store_true")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=_positive, default=100)
    sp.add_argument("--max-universe", type=_positive, default=2)
    sp.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    sp.set_defaults(run=cmd_check_equiv)

    sp = sub.add_parser("audit", help="check the algebraic identities")
    sp.add_argument("--claims", default="all", help="comma-separated ids or 'all'")
    sp.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    sp.add_argument("--budget", type=_positive)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="report file (default: stdout)")
    sp.add_argument("--findings", help="findings file (default: FINDINGS.md next to --out)")
    sp.add_argument("--max-universe", type=_positive)
    sp.add_argument("--all", action="store_true", help="count every violation")
    sp.add_argument("--replay", metavar="REPORT", help="re-check the witnesses in a report")
    sp.set_defaults(run=cmd_audit)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code
    start = time.perf_counter()
    try:
        code = args.run(args)
    except BudgetExceededError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (CompsemError, InputError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    print(f"time: {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
