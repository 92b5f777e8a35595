import pytest

from revsym.errors import ParseError, SortError
from revsym.syntax import parse_formula, parse_term
from revsym.terms import (
    BOOL, ELEM, LIST, NAT, App, Atom, Eq, Exists, Implies, Signature, Var, alpha_equal,
    check_sorts, free_vars, substitute,
)


def V(name, sort=LIST):
    return Var(name, sort)


def app(sym, *args, sort=LIST):
    return App(sym, args, sort)


def test_parse_prefix_prefix():
    f = parse_formula("prefix u v ==> prefix u (v @ z)")
    u, v, z = V("u"), V("v"), V("z")
    assert f == Implies(
        Atom(app("prefix", u, v, sort=BOOL)),
        Atom(app("prefix", u, app("append", v, z), sort=BOOL)),
    )


def test_parse_identity():
    assert parse_formula("u = u") == Eq(V("u"), V("u"))


def test_parse_hd_equation_is_elem_sorted():
    f = parse_formula("hd u = hd v")
    assert f == Eq(app("hd", V("u"), sort=ELEM), app("hd", V("v"), sort=ELEM))


def test_unannotated_free_variables_default_to_list():
    f = parse_formula("x = y")
    assert free_vars(f) == {V("x"), V("y")}


def test_inference_from_signature_positions():
    f = parse_formula("a # u = u /\\ length u <= n")
    assert free_vars(f) == {V("a", ELEM), V("u"), V("n", NAT)}


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as e:
        parse_formula("prefix u ==> ")
    assert (e.value.line, e.value.col) == (1, 14)
    with pytest.raises(ParseError) as e:
        parse_formula("u = v\n  /\\ ) ")
    assert e.value.line == 2


@pytest.mark.parametrize("text", [
    "prefix u",             # arity
    "hd u = u",             # elem vs list
    "length u <= hd v",     # nat vs elem
    "hd u ==> prefix u v",  # elem used as a formula
    "0 = 1",                # ambiguous numeral
    "foo u",                # unknown symbol
    "u u = u",              # variable applied
])
def test_sort_errors(text):
    with pytest.raises(SortError):
        parse_formula(text)


def test_substitute_instantiation():
    f = parse_formula("prefix u v")
    g = substitute(f, {"u": parse_term("rev u"), "v": parse_term("rev v")})
    assert g == parse_formula("prefix (rev u) (rev v)")


def test_substitute_avoids_capture():
    f = parse_formula("EX r. u = r")
    g = substitute(f, {"u": parse_term("rev r")})
    assert g == Exists("r'", LIST, Eq(app("rev", V("r")), V("r'")))


def test_substitute_preserves_binder_name_when_safe():
    g = substitute(parse_formula("EX r. u = r"), {"u": parse_term("rev u")})
    assert g == parse_formula("EX r. rev u = r")


def test_substitute_empty_is_identity():
    f = parse_formula("EX r. u = p @ r /\\ prefix r w")
    assert substitute(f, {}) is f


def test_substitute_respects_shadowing():
    f = parse_formula("prefix r w /\\ (EX r. r = w)")
    g = substitute(f, {"r": V("q")})
    assert g == parse_formula("prefix q w /\\ (EX r. r = w)")


def test_substitute_rejects_sort_mismatch():
    with pytest.raises(SortError):
        substitute(parse_formula("hd u = x:elem"), {V("x", ELEM): V("u")})
    with pytest.raises(SortError):
        substitute(parse_formula("hd u = x:elem"), {"x": V("u")})


def test_alpha_equal_bound_renaming():
    assert alpha_equal(parse_formula("EX r. prefix r w"), parse_formula("EX s. prefix s w"))
    assert not alpha_equal(parse_formula("EX r. prefix r w"), parse_formula("EX r. suffix r w"))


def test_alpha_equal_example3_prime_renamed():
    a = parse_formula("EX r. u = r @ q /\\ suffix r w")
    b = parse_formula("EX t. u = t @ q /\\ suffix t w")
    assert alpha_equal(a, a)
    assert alpha_equal(a, b)


def test_alpha_equal_distinguishes_free_from_bound():
    assert not alpha_equal(parse_formula("EX r. r = w"), parse_formula("EX w. w = w"))
    assert not alpha_equal(parse_formula("EX r. r = u"), parse_formula("EX s. s = v"))


def test_alpha_equal_binder_sorts_matter():
    assert not alpha_equal(parse_formula("EX x. x = x"), parse_formula("EX x:nat. x = x"))


def test_free_vars_examples():
    assert free_vars(parse_formula("prefix u (v @ z)")) == {V("u"), V("v"), V("z")}
    assert free_vars(parse_formula("EX r. u = p @ r")) == {V("u"), V("p")}
    assert free_vars(parse_formula("hd u = x:elem")) == {V("u"), V("x", ELEM)}


def test_check_sorts(sig):
    check_sorts(parse_formula("EX r. u = p @ r"), sig)
    with pytest.raises(SortError):
        check_sorts(Eq(V("u"), V("n", NAT)), sig)
    with pytest.raises(SortError):
        check_sorts(Atom(app("prefix", V("u"), sort=BOOL)), sig)
    with pytest.raises(SortError):
        check_sorts(Eq(V("u"), V("u", ELEM)), sig)


def test_signature_extension_only_adds(sig):
    ext = sig.extend({"foo": ((LIST,), BOOL)})
    assert "foo" in ext and "foo" not in sig
    with pytest.raises(SortError):
        ext.extend({"hd": ((LIST,), LIST)})
    assert ext.extend({"hd": ((LIST,), ELEM)}) == ext
    assert isinstance(ext, Signature)
