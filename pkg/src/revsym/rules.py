"""Reversal rules: oriented equations that eliminate ``rev`` images.

A rule's left side must mention ``rev``; admission additionally vets every
rule exhaustively against the builtin semantics within small bounds.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .errors import AdmissionError, ParseError, SortError, UninterpretedSymbol
from .oracle import Verdict, enumerate_valuations, ordered_vars
from .semantics import DomainParams, builtin_signature, compile_formula, compile_term
from .syntax import format_node, parse_equation, split_equation
from .terms import App, Eq, Signature, Var, check_sorts, count_symbol, free_vars, sort_of

VETTING_PARAMS = DomainParams(k=2, L=4)


@dataclass(frozen=True)
class Rule:
    name: str
    lhs: object   # Term, or Eq for rules over equality atoms
    rhs: object
    origin: str = "user"

    @property
    def sort(self):
        return sort_of(self.lhs)

    def __str__(self):
        return f"rule {self.name}: {format_rule_side(self.lhs)} == {format_rule_side(self.rhs)}"


def format_rule_side(side) -> str:
    s = format_node(side)
    return f"({s})" if isinstance(side, Eq) else s


@dataclass(frozen=True)
class RuleSet:
    rules: tuple = ()
    params: DomainParams = field(default=VETTING_PARAMS, compare=False)

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def __contains__(self, name):
        return any(r.name == name for r in self.rules)

    @property
    def names(self):
        return [r.name for r in self.rules]

    def get(self, name) -> Rule:
        for r in self.rules:
            if r.name == name:
                return r
        raise KeyError(name)

    def without(self, *names) -> "RuleSet":
        missing = set(names) - set(self.names)
        if missing:
            raise KeyError(", ".join(sorted(missing)))
        return RuleSet(tuple(r for r in self.rules if r.name not in names), self.params)

    def added(self, rules: Iterable[Rule]) -> "RuleSet":
        out = list(self.rules)
        for r in rules:
            if r.name in {x.name for x in out}:
                raise AdmissionError(r.name, "duplicate rule name")
            out.append(r)
        return RuleSet(tuple(out), self.params)

    def to_text(self) -> str:
        return "".join(f"{r}\n" for r in self.rules)


# Order matters: the normalizer tries rules first to last.
DEFAULT_RULES_TEXT = """\
rule rev_rev: rev (rev x) == x
rule rev_append: rev x @ rev y == rev (y @ x)
rule rev_eq: (rev x = rev y) == (x = y)
rule rev_is_nil: (rev x = []) == (x = [])
rule nil_is_rev: ([] = rev x) == ([] = x)
rule cons_rev: a # rev x == rev (x @ [a])
rule prefix_rev: prefix (rev x) (rev y) == suffix x y
rule suffix_rev: suffix (rev x) (rev y) == prefix x y
rule hd_rev: hd (rev x) == last x
rule last_rev: last (rev x) == hd x
rule length_rev: length (rev x) == length x
rule lq_to_rq: right_quotient (rev v) (rev u) == rev (left_quotient u v)
rule rq_to_lq: left_quotient (rev u) (rev v) == rev (right_quotient v u)
rule rev_nil: rev [] == []
"""

_RULE_RE = re.compile(r"rule\s+([A-Za-z_][A-Za-z0-9_']*)\s*:", re.DOTALL)


def parse_rule(text: str, sig: Signature = None, *, line: int = 1, extend=False):
    """Parse one ``rule NAME: LHS == RHS`` declaration.

    Returns ``(rule, new_symbols)``; ``new_symbols`` is empty unless ``extend``.
    """
    sig = sig if sig is not None else builtin_signature()
    m = _RULE_RE.match(text)
    if m is None:
        raise ParseError("expected 'rule NAME: LHS == RHS'", line, 1)
    body = text[m.end():]
    col = m.end() + 1
    lhs, rhs, rline, rcol = split_equation(body, line, col)
    l, r, new = parse_equation(lhs, rhs, sig, extend=extend, lhs_pos=(line, col), rhs_pos=(rline, rcol))
    return Rule(m.group(1), l, r), new


def parse_rules(text: str, sig: Signature = None, origin: str = "user") -> list[Rule]:
    """Parse a rules file: one rule per line, ``#`` comments at line start."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        rule, _ = parse_rule(stripped, sig, line=lineno)
        out.append(Rule(rule.name, rule.lhs, rule.rhs, origin))
    return out


def structural_problem(rule: Rule, sig: Signature = None) -> Optional[str]:
    """Return why ``rule`` violates the shape requirements, or None."""
    sig = sig if sig is not None else builtin_signature()
    lhs, rhs = rule.lhs, rule.rhs
    try:
        check_sorts(Eq(lhs, rhs) if not isinstance(lhs, Eq) else lhs, sig)
        if isinstance(rhs, Eq):
            check_sorts(rhs, sig)
    except SortError as e:
        return f"sort: {e}"
    if sort_of(lhs) != sort_of(rhs):
        return f"sort: sides have sorts {sort_of(lhs).value} and {sort_of(rhs).value}"
    if isinstance(rhs, Eq) and not isinstance(lhs, Eq):
        return "shape: an equality right side needs an equality left side"
    if count_symbol(lhs, "rev") == 0:
        return "orientation: no rev on the left side"
    extra = free_vars(rhs) - free_vars(lhs)
    if extra:
        names = ", ".join(sorted(v.name for v in extra))
        return f"variables: right side introduces {names}"
    return None


def too_general(rule: Rule) -> bool:
    lhs = rule.lhs
    return isinstance(lhs, Var) or (
        isinstance(lhs, App) and lhs.symbol == "rev" and isinstance(lhs.args[0], Var)
    )


def _compile_side(side, p):
    return compile_formula(side, p) if isinstance(side, Eq) else compile_term(side, p)


def admit_rule(rule: Rule, p: DomainParams = VETTING_PARAMS, sig: Signature = None) -> Verdict:
    """Structural checks, then exhaustive pointwise equality of both sides.

    A sound rule whose left side is a bare ``rev x`` is still rejected, after
    the soundness check so that unsound ones report a counterexample.
    """
    problem = structural_problem(rule, sig)
    if problem is not None:
        return Verdict(False, None, 0, problem, p)
    try:
        left, right = _compile_side(rule.lhs, p), _compile_side(rule.rhs, p)
    except UninterpretedSymbol as e:
        return Verdict(False, None, 0, f"soundness: cannot vet {e}", p)
    vs = ordered_vars(free_vars(rule.lhs))
    count = 0
    for sigma in enumerate_valuations(vs, p):
        count += 1
        env = {v.name: x for v, x in sigma.items()}
        a, b = left(env), right(env)
        if a != b:
            return Verdict(False, sigma, count, "soundness: sides differ", p)
    if too_general(rule):
        return Verdict(False, None, count, "shape: left side would match every term", p)
    return Verdict(True, None, count, None, p)


def _checked(rules, p, sig):
    for r in rules:
        v = admit_rule(r, p, sig)
        if not v.passed:
            raise AdmissionError(r.name, v.reason, v.counterexample)
    return rules


def default_ruleset(p: DomainParams = VETTING_PARAMS) -> RuleSet:
    rules = parse_rules(DEFAULT_RULES_TEXT, builtin_signature(), origin="builtin")
    return RuleSet(tuple(rules), p)


def load_ruleset(text: str, sig: Signature = None, p: DomainParams = VETTING_PARAMS,
                 *, defaults: bool = True) -> RuleSet:
    """Parse and admit user rules, appended after the defaults unless disabled."""
    sig = sig if sig is not None else builtin_signature()
    base = default_ruleset(p) if defaults else RuleSet((), p)
    return base.added(_checked(parse_rules(text, sig), p, sig))


def admit_all(rules: Iterable[Rule], base: RuleSet, sig: Signature = None) -> RuleSet:
    return base.added(_checked(list(rules), base.params, sig))
