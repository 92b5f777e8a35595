import pytest

from revsym.errors import AdmissionError, ParseError, SortError
from revsym.oracle import format_valuation
from revsym.rules import (
    DEFAULT_RULES_TEXT, Rule, RuleSet, VETTING_PARAMS, admit_rule, default_ruleset,
    load_ruleset, parse_rule, parse_rules,
)
from revsym.semantics import DomainParams, builtin_signature
from revsym.syntax import parse_term
from revsym.terms import Eq, LIST, Var

DEFAULT_NAMES = [
    "rev_rev", "rev_append", "rev_eq", "rev_is_nil", "nil_is_rev", "cons_rev",
    "prefix_rev", "suffix_rev", "hd_rev", "last_rev", "length_rev", "lq_to_rq",
    "rq_to_lq", "rev_nil",
]


def rule(text):
    return parse_rule(text)[0]


def test_default_catalogue_order(defaults):
    assert defaults.names == DEFAULT_NAMES
    assert all(r.origin == "builtin" for r in defaults)


def test_default_contains_prefix_and_quotient_rules(defaults):
    assert defaults.get("prefix_rev").lhs == parse_term("prefix (rev x) (rev y)")
    assert defaults.get("lq_to_rq").rhs == parse_term("rev (left_quotient u v)")


def test_equality_rules_have_eq_sides(defaults):
    for name in ("rev_eq", "rev_is_nil", "nil_is_rev"):
        r = defaults.get(name)
        assert isinstance(r.lhs, Eq) and isinstance(r.rhs, Eq)


@pytest.mark.parametrize("name", DEFAULT_NAMES)
def test_every_default_rule_is_admitted(defaults, name):
    v = admit_rule(defaults.get(name), VETTING_PARAMS)
    assert v.passed, v.reason


def test_vetting_counts(defaults):
    # 31 lists of length <= 4 over {0,1}
    assert admit_rule(defaults.get("rev_rev")).checked_count == 31
    assert admit_rule(defaults.get("rev_append")).checked_count == 31 ** 2
    assert admit_rule(defaults.get("cons_rev")).checked_count == 2 * 31
    assert admit_rule(defaults.get("rev_nil")).checked_count == 1


def test_default_text_round_trips(defaults):
    assert defaults.to_text() == DEFAULT_RULES_TEXT


@pytest.mark.parametrize("name", ["prefix_rev", "suffix_rev", "hd_rev", "last_rev", "length_rev"])
def test_swapped_rules_fail_orientation(defaults, name):
    r = defaults.get(name)
    v = admit_rule(Rule(r.name, r.rhs, r.lhs))
    assert not v.passed and v.reason.startswith("orientation")


@pytest.mark.parametrize("name", ["lq_to_rq", "rq_to_lq"])
def test_swapped_quotient_rules_keep_rev_on_the_left(defaults, name):
    r = defaults.get(name)
    assert admit_rule(Rule(r.name, r.rhs, r.lhs)).passed


def test_bogus_hd_rule_counterexample():
    v = admit_rule(rule("rule bogus: hd (rev x) == hd x"))
    assert not v.passed
    assert v.counterexample == {Var("x", LIST): (0, 1)}
    assert format_valuation(v.counterexample) == "x=[0,1]"


def test_noelim_rejected_for_orientation():
    v = admit_rule(rule("rule noelim: suffix x y == prefix x y"))
    assert not v.passed and "no rev on the left side" in v.reason


def test_rev_identity_rejected_with_counterexample():
    v = admit_rule(rule("rule bad: rev x == x"))
    assert not v.passed and v.counterexample == {Var("x", LIST): (0, 1)}


def test_sound_but_too_general_rejected():
    v = admit_rule(rule("rule g: rev x == rev x"))
    assert not v.passed and v.reason.startswith("shape")


def test_rhs_may_not_introduce_variables():
    v = admit_rule(rule("rule extra: rev (rev x) == x @ y"))
    assert not v.passed and v.reason.startswith("variables")


def test_sort_mismatch_rejected():
    with pytest.raises(SortError):
        rule("rule s: length (rev x) == x")


def test_uninterpreted_rule_cannot_be_vetted():
    r, new = parse_rule("rule f: foo (rev x) == foo x", extend=True)
    assert "foo" in new
    v = admit_rule(r, sig=builtin_signature().extend(new))
    assert not v.passed and "cannot vet" in v.reason


def test_load_ruleset_appends_after_defaults():
    rs = load_ruleset("# mine\nrule snoc_rev: snoc (rev x) a == rev (a # x)\n")
    assert rs.names == DEFAULT_NAMES + ["snoc_rev"]
    assert rs.get("snoc_rev").origin == "user"
    assert load_ruleset("", defaults=False).names == []


def test_load_ruleset_rejects_bogus():
    with pytest.raises(AdmissionError) as e:
        load_ruleset("rule bogus: hd (rev x) == hd x\n")
    assert e.value.counterexample == {Var("x", LIST): (0, 1)}


def test_duplicate_names_rejected():
    with pytest.raises(AdmissionError):
        load_ruleset("rule hd_rev: hd (rev x) == last x\n")


def test_parse_errors_report_line():
    with pytest.raises(ParseError) as e:
        parse_rules("rule a: rev [] == []\nrule b: rev (rev x) = x\n")
    assert e.value.line == 2


def test_admission_is_deterministic():
    a = admit_rule(rule("rule bogus: hd (rev x) == hd x"), DomainParams(k=3, L=3))
    b = admit_rule(rule("rule bogus: hd (rev x) == hd x"), DomainParams(k=3, L=3))
    assert a == b


def test_without_and_added(defaults):
    smaller = defaults.without("hd_rev")
    assert "hd_rev" not in smaller and len(smaller) == 13
    with pytest.raises(KeyError):
        defaults.without("nope")
    assert smaller.added([defaults.get("hd_rev")]).names[-1] == "hd_rev"
    assert RuleSet().names == []
