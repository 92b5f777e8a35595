"""Command line front end.

Exit codes for ``reverse``:
  0 = every request succeeded (matched and verified when asked)
  1 = some output still contains rev
  2 = parse, sort or reference error
  3 = rule admission failure, expected-formula mismatch or failed verification
  4 = fuel exhausted or rewrite cycle
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .engine import DEFAULT_FUEL, canon_assoc, fuel_from_env, reverse_fact
from .errors import (
    AdmissionError, CycleDetected, FuelExhausted, ParseError, SortError, TheoryError,
    UninterpretedSymbol,
)
from .oracle import check_closure, check_transport, format_valuation, gen_formula
from .rules import DEFAULT_RULES_TEXT, RuleSet, admit_all, admit_rule, default_ruleset
from .semantics import DomainParams
from .syntax import format_formula
from .terms import alpha_equal
from .theory import LemmaDecl, ReversedDecl, RuleDecl, parse_theory

SCHEMA = "revsym/1"

EXIT_OK, EXIT_RESIDUAL, EXIT_INPUT, EXIT_REJECTED, EXIT_FUEL = 0, 1, 2, 3, 4


def _read(path):
    return Path(path).read_text(encoding="utf-8")


def _fail_input(err) -> int:
    print(f"error: {err}", file=sys.stderr)
    return EXIT_INPUT


def build_ruleset(theory, rules_text=None, *, defaults=True) -> RuleSet:
    """Defaults, then the --rules file, then the theory's own rules."""
    base = default_ruleset() if defaults else RuleSet(())
    extra = []
    sig = theory.signature
    if rules_text is not None:
        rules_theory = parse_theory(rules_text, sig)
        for d in rules_theory.decls:
            if not isinstance(d, RuleDecl):
                raise ParseError("a rules file may only contain rule and symbol declarations", d.line, 1)
        sig = rules_theory.signature
        extra += rules_theory.rules
    extra += theory.rules
    return admit_all(extra, base, sig)


def _verify(f, g, params):
    try:
        transport = check_transport(f, g, params)
        closure = check_closure(f, g, params)
    except UninterpretedSymbol as e:
        skipped = {"pass": None, "skipped": str(e)}
        return {"transport": skipped, "closure": skipped}, True
    return {"transport": transport.to_json(), "closure": closure.to_json()}, transport.passed and closure.passed


def run_reverse(args) -> int:
    try:
        theory = parse_theory(_read(args.file))
        rules_text = _read(args.rules) if args.rules else None
        rules = build_ruleset(theory, rules_text, defaults=not args.no_defaults)
    except (ParseError, SortError, TheoryError, OSError) as e:
        return _fail_input(e)
    except AdmissionError as e:
        cex = f" (counterexample {format_valuation(e.counterexample)})" if e.counterexample else ""
        print(f"error: {e}{cex}", file=sys.stderr)
        return EXIT_REJECTED

    try:
        fuel = args.fuel if args.fuel is not None else fuel_from_env(DEFAULT_FUEL)
    except ValueError as e:
        return _fail_input(e)
    params = DomainParams(k=args.alphabet, L=args.maxlen)
    known = {d.name: d.formula for d in theory.decls if isinstance(d, LemmaDecl)}
    entries = []
    worst = set()
    for req in theory.requests:
        entry, codes, output = _reverse_one(req, known, rules, args, fuel, params)
        if output is not None:
            known[req.name] = output
        entries.append(entry)
        worst |= codes
        _print_entry(entry)

    code = next((c for c in (EXIT_FUEL, EXIT_REJECTED, EXIT_RESIDUAL) if c in worst), EXIT_OK)
    if args.json:
        report = {
            "schema": SCHEMA,
            "file": str(args.file),
            "options": {
                "rules": args.rules,
                "defaults": not args.no_defaults,
                "assoc_canon": args.assoc_canon,
                "verify": args.verify,
                "bounds": params.describe() if args.verify else None,
                "fuel": fuel,
            },
            "rule_names": rules.names,
            "results": entries,
            "exit_code": code,
        }
        Path(args.json).write_text(json.dumps(report, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return code


def _reverse_one(req: ReversedDecl, known, rules, args, fuel, params):
    source = known[req.source]
    entry = {
        "name": req.name,
        "source": req.source,
        "input": format_formula(source),
        "output": None,
        "status": "ok",
        "residual_count": 0,
        "residual_positions": [],
        "fuel_used": 0,
        "expected": None,
        "verdicts": None,
    }
    codes = set()
    try:
        report = reverse_fact(source, rules, assoc_canon=args.assoc_canon, fuel=fuel)
    except FuelExhausted as e:
        entry.update(status="fuel_exhausted", fuel_used=e.fuel, last_formula=format_formula(e.formula))
        return entry, {EXIT_FUEL}, None
    except CycleDetected as e:
        entry.update(status="cycle", fuel_used=e.step, last_formula=format_formula(e.formula))
        return entry, {EXIT_FUEL}, None

    out = report.output
    entry.update(
        output=format_formula(out),
        residual_count=report.residual_rev_count,
        residual_positions=report.residuals_json(),
        fuel_used=report.fuel_used,
    )
    problems = []
    if report.residual_rev_count:
        problems.append("residual")
        codes.add(EXIT_RESIDUAL)
    if req.expected is not None:
        want = canon_assoc(req.expected) if args.assoc_canon else req.expected
        matched = alpha_equal(out, want)
        entry["expected"] = {"formula": format_formula(req.expected), "match": matched}
        if not matched:
            problems.append("mismatch")
            codes.add(EXIT_REJECTED)
    if args.verify:
        verdicts, ok = _verify(source, out, params)
        entry["verdicts"] = verdicts
        if not ok:
            problems.append("verification_failed")
            codes.add(EXIT_REJECTED)
    if problems:
        entry["status"] = "+".join(problems)
    return entry, codes, out


def _print_entry(entry):
    if entry["status"] in ("fuel_exhausted", "cycle"):
        print(f"{entry['name']}: no normal form")
        print(f"  error: {entry['status'].replace('_', ' ')} after {entry['fuel_used']} rewrites")
        print(f"  last formula: {entry['last_formula']}")
        return
    print(f"{entry['name']}: {entry['output']}")
    if entry["expected"] is not None:
        print("  expected: " + ("match" if entry["expected"]["match"] else
                                 "MISMATCH, wanted " + entry["expected"]["formula"]))
    for pos in entry["residual_positions"]:
        path = ".".join(map(str, pos["path"]))
        print(f"  residual rev at {path}: {pos['term']}")
    if entry["verdicts"] is not None:
        for kind, v in entry["verdicts"].items():
            if v["pass"] is None:
                print(f"  verify {kind}: skipped ({v['skipped']})")
            elif v["pass"]:
                print(f"  verify {kind}: pass ({v['checked']} valuations)")
            else:
                cex = ", ".join(f"{k}={v2}" for k, v2 in v["counterexample"].items())
                print(f"  verify {kind}: FAIL at {cex}")


def run_check(args) -> int:
    try:
        theory = parse_theory(_read(args.file))
    except (ParseError, SortError, TheoryError, OSError) as e:
        return _fail_input(e)
    for d in theory.decls:
        if isinstance(d, (LemmaDecl, ReversedDecl)):
            return _fail_input(ParseError("a rules file may only contain rule and symbol declarations", d.line, 1))
    params = DomainParams(k=args.alphabet, L=args.maxlen)
    rejected = 0
    for rule in theory.rules:
        v = admit_rule(rule, params, theory.signature)
        if v.passed:
            print(f"ok    {rule.name} ({v.checked_count} valuations)")
        else:
            rejected += 1
            cex = f"; counterexample {format_valuation(v.counterexample)}" if v.counterexample else ""
            print(f"FAIL  {rule.name}: {v.reason}{cex}")
    print(f"{len(theory.rules)} rule(s) checked, {rejected} rejected "
          f"(alphabet {params.k}, maxlen {params.L})")
    return EXIT_REJECTED if rejected else EXIT_OK


def run_gen(args) -> int:
    for i in range(args.count):
        seed = args.seed + i
        f = gen_formula(args.depth, seed)
        print(f'lemma gen_{seed}: "{format_formula(f)}"')
        print(f"reversed gen_{seed}")
    return EXIT_OK


def run_default_rules(args) -> int:
    sys.stdout.write(DEFAULT_RULES_TEXT)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="revsym", description="Produce reversal-symmetric counterparts of list facts.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("reverse", help="reverse the lemmas requested in a theory file")
    r.add_argument("file")
    r.add_argument("--rules", help="extra rules file")
    r.add_argument("--no-defaults", action="store_true", help="do not load the builtin rules")
    r.add_argument("--assoc-canon", action="store_true", help="right-associate appends in the output")
    r.add_argument("--verify", action="store_true", help="check each output exhaustively")
    r.add_argument("--alphabet", type=int, default=2, metavar="K")
    r.add_argument("--maxlen", type=int, default=3, metavar="L")
    r.add_argument("--json", metavar="PATH", help="write a JSON report")
    r.add_argument("--fuel", type=int, help=f"rewrite step limit (default {DEFAULT_FUEL}, or $REVSYM_FUEL)")
    r.set_defaults(func=run_reverse)

    c = sub.add_parser("check-rules", help="vet every rule in a file")
    c.add_argument("file")
    c.add_argument("--alphabet", type=int, default=2, metavar="K")
    c.add_argument("--maxlen", type=int, default=4, metavar="L")
    c.set_defaults(func=run_check)

    g = sub.add_parser("gen", help="emit generated lemmas as a theory file")
    g.add_argument("--depth", type=int, default=3)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--count", type=int, default=10)
    g.set_defaults(func=run_gen)

    d = sub.add_parser("default-rules", help="print the builtin rule catalogue")
    d.set_defaults(func=run_default_rules)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "fuel", None) is not None and args.fuel <= 0:
        return _fail_input("--fuel must be positive")
    for name in ("alphabet", "maxlen"):
        value = getattr(args, name, None)
        if value is not None and value < (1 if name == "alphabet" else 0):
            return _fail_input(f"--{name} is out of range")
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
