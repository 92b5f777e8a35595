import json

import pytest

from revsym.cli import main
from revsym.engine import reverse_fact
from revsym.oracle import gen_formula
from revsym.rules import DEFAULT_RULES_TEXT
from revsym.syntax import parse_formula
from revsym.terms import alpha_equal
from revsym.theory import parse_theory

PREFIX = '''\
lemma prefix_prefix: "prefix u v ==> prefix u (v @ z)"
reversed prefix_prefix as suffix_appendI expecting "suffix u v ==> suffix u (z @ v)"
'''

EXAMPLE3 = '''\
# word lemma with an existential conclusion
lemma example3: "prefix u (p @ w @ q) ==> length p <= length u ==>
    length u <= length (p @ w) ==> EX r. u = p @ r /\\ prefix r w"
reversed example3 expecting "suffix u (q @ w @ p) ==> length p <= length u ==>
    length u <= length (w @ p) ==> EX r. u = r @ p /\\ suffix r w"
'''

QUOTIENT = '''\
lemma lqI: "u @ z = v ==> left_quotient u v = z"
reversed lqI as rqI expecting "z @ u = v ==> right_quotient v u = z"
'''


@pytest.fixture
def write(tmp_path):
    def _write(text, name="t.thy"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)
    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_prefix_pair_matches(write, capsys):
    code, out, _ = run(capsys, "reverse", write(PREFIX))
    assert code == 0
    assert out.splitlines() == ["suffix_appendI: suffix u v ==> suffix u (z @ v)", "  expected: match"]


def test_quotient_pair(write, capsys):
    code, out, _ = run(capsys, "reverse", write(QUOTIENT), "--verify")
    assert code == 0 and "rqI: z @ u = v ==> right_quotient v u = z" in out
    assert "verify transport: pass (3375 valuations)" in out


def test_example3_needs_canon(write, capsys):
    path = write(EXAMPLE3)
    assert run(capsys, "reverse", path, "--assoc-canon")[0] == 0
    code, out, _ = run(capsys, "reverse", path)
    assert code == 3 and "MISMATCH" in out


def test_uncatalogued_predicate_reports_residual(write, capsys, tmp_path):
    path = write('lemma odd: "foo u ==> prefix u v"\nreversed odd\n')
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "reverse", path, "--json", str(report), "--verify")
    assert code == 1
    assert "residual rev at 0.0.0: rev u" in out
    assert "verify transport: skipped" in out
    entry = json.loads(report.read_text())["results"][0]
    assert entry["name"] == "odd_reversed"
    assert entry["residual_positions"] == [{"path": [0, 0, 0], "term": "rev u"}]


def test_json_report_shape_and_determinism(write, capsys, tmp_path):
    path = write(PREFIX + QUOTIENT)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "reverse", path, "--verify", "--json", str(a))[0] == 0
    assert run(capsys, "reverse", path, "--verify", "--json", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    report = json.loads(a.read_text())
    assert report["schema"] == "revsym/1" and report["exit_code"] == 0
    assert list(report) == ["schema", "file", "options", "rule_names", "results", "exit_code"]
    first = report["results"][0]
    assert first["status"] == "ok" and first["expected"]["match"] is True
    assert first["verdicts"]["transport"]["pass"] is True
    assert first["verdicts"]["closure"]["bounds"] == {"alphabet": 2, "maxlen": 3, "maxnat": 6}


def test_printed_formulas_reparse(write, capsys, tmp_path):
    path = write(PREFIX + EXAMPLE3 + QUOTIENT)
    report = tmp_path / "r.json"
    run(capsys, "reverse", path, "--json", str(report))
    theory = parse_theory(open(path).read())
    internal = {d.name: d.formula for d in theory.lemmas}
    for entry in json.loads(report.read_text())["results"]:
        out = parse_formula(entry["output"])
        assert alpha_equal(out, reverse_fact(internal[entry["source"]]).output)
        assert alpha_equal(parse_formula(entry["input"]), internal[entry["source"]])


def test_reversed_names_can_be_reversed_again(write, capsys):
    text = PREFIX + 'reversed suffix_appendI as back expecting "prefix u v ==> prefix u (v @ z)"\n'
    assert run(capsys, "reverse", write(text))[0] == 0


@pytest.mark.parametrize("text", [
    'lemma a: "prefix u ==> u"\n',
    'lemma a: "u = u"\nreversed b\n',
    'lemma a: "u = u"\nlemma a: "v = v"\n',
    'lemma a: "u = u\n',
    'theorem a: "u = u"\n',
])
def test_input_errors_exit_2(write, capsys, text):
    code, _, err = run(capsys, "reverse", write(text))
    assert code == 2 and err.startswith("error:")


def test_missing_file_exit_2(capsys, tmp_path):
    assert run(capsys, "reverse", str(tmp_path / "none.thy"))[0] == 2


def test_rejected_theory_rule_exit_3(write, capsys):
    code, _, err = run(capsys, "reverse", write("rule bogus: hd (rev x) == hd x\n" + PREFIX))
    assert code == 3 and "x=[0,1]" in err


def test_extra_rules_file(write, capsys):
    rules = write("rule foo_rev: foo (rev x) == foo x\n", "r.rules")
    code, _, err = run(capsys, "reverse", write('lemma a: "foo u"\nreversed a\n'), "--rules", rules)
    assert code == 3 and "cannot vet" in err
    lemmas_in_rules = write('lemma a: "u = u"\n', "bad.rules")
    assert run(capsys, "reverse", write(PREFIX), "--rules", lemmas_in_rules)[0] == 2


def test_cycle_exit_4(write, capsys):
    text = 'rule unswap: rev (x @ y) == rev y @ rev x\nlemma a: "u = v @ w"\nreversed a\n'
    code, out, _ = run(capsys, "reverse", write(text))
    assert code == 4 and "error: cycle" in out and "last formula:" in out


def test_fuel_exit_4(write, capsys):
    text = 'rule grow: rev (rev x) == rev (rev (rev (rev x)))\nlemma a: "u = rev v"\nreversed a\n'
    code, out, _ = run(capsys, "reverse", write(text), "--no-defaults", "--fuel", "25")
    assert code == 4 and "fuel exhausted after 25 rewrites" in out


def test_fuel_from_environment(write, capsys, monkeypatch):
    path = write(PREFIX)
    monkeypatch.setenv("REVSYM_FUEL", "1")
    assert run(capsys, "reverse", path)[0] == 4
    assert run(capsys, "reverse", path, "--fuel", "100")[0] == 0
    monkeypatch.setenv("REVSYM_FUEL", "zero")
    assert run(capsys, "reverse", path)[0] == 2


def test_bad_numeric_flags(write, capsys):
    assert run(capsys, "reverse", write(PREFIX), "--fuel", "0")[0] == 2
    assert run(capsys, "reverse", write(PREFIX), "--alphabet", "0")[0] == 2


def test_check_rules(write, capsys):
    code, out, _ = run(capsys, "check-rules", write(DEFAULT_RULES_TEXT, "d.rules"))
    assert code == 0 and out.count("ok    ") == 14
    code, out, _ = run(capsys, "check-rules", write("rule bad: rev x == x\n", "b.rules"))
    assert code == 3 and "counterexample x=[0,1]" in out
    code, out, _ = run(capsys, "check-rules", write("", "e.rules"))
    assert code == 0 and out.startswith("0 rule(s) checked")


def test_default_rules_command(capsys):
    code, out, _ = run(capsys, "default-rules")
    assert code == 0 and out == DEFAULT_RULES_TEXT


def test_gen_emits_parseable_theory(capsys):
    code, out, _ = run(capsys, "gen", "--depth", "3", "--seed", "7", "--count", "5")
    assert code == 0
    theory = parse_theory(out)
    assert [d.formula for d in theory.lemmas] == [gen_formula(3, s) for s in range(7, 12)]
    assert len(theory.requests) == 5


def test_gen_output_reverses_and_verifies(capsys, write):
    _, out, _ = run(capsys, "gen", "--depth", "4", "--count", "20")
    code, report, _ = run(capsys, "reverse", write(out), "--verify")
    assert code in (0, 1)
    assert "FAIL" not in report
