from hypothesis import given, settings, strategies as st

from revsym.engine import reverse_fact
from revsym.oracle import check_transport, enumerate_valuations, gen_formula
from revsym.semantics import DomainParams, eval_formula, eval_term
from revsym.syntax import format_formula, parse_formula
from revsym.terms import (
    LIST, App, Exists, Forall, Quant, Var, alpha_equal, free_vars, fresh_name, substitute,
)

SMALL = DomainParams(k=2, L=2)
NAMES = ("u", "v", "w", "r", "s")      # r and s collide with generated binders

list_terms = st.recursive(
    st.sampled_from([Var(n, LIST) for n in NAMES]) | st.just(App("nil", (), LIST)),
    lambda inner: st.one_of(
        st.builds(lambda a: App("rev", (a,), LIST), inner),
        st.builds(lambda a, b: App("append", (a, b), LIST), inner, inner),
    ),
    max_leaves=4,
)
formulas = st.builds(lambda d, s: gen_formula(d, s), st.integers(1, 4), st.integers(0, 10 ** 6))
names = st.sampled_from(["u", "v", "w"])


def rename_binders(f, depth=0):
    """Rename every binder to a fresh name, substituting in its body."""
    if isinstance(f, Quant):
        new = fresh_name(f"b{depth}", {v.name for v in free_vars(f)})
        body = substitute(f.body, {f.var: Var(new, f.sort)})
        return type(f)(new, f.sort, rename_binders(body, depth + 1))
    if isinstance(f, (Var, App)):
        return f
    kids = f.children
    return f.replace([rename_binders(c, depth) for c in kids]) if kids else f


@given(formulas)
def test_print_parse_round_trip(f):
    assert parse_formula(format_formula(f)) == f


@given(formulas)
def test_alpha_equal_reflexive_and_rename_invariant(f):
    g = rename_binders(f)
    assert alpha_equal(f, f)
    assert alpha_equal(f, g) and alpha_equal(g, f)


@given(formulas, names, list_terms)
def test_free_vars_after_substitution(f, x, t):
    var = Var(x, LIST)
    g = substitute(f, {var: t})
    fv = free_vars(f)
    want = (fv - {var}) | (free_vars(t) if var in fv else frozenset())
    assert free_vars(g) == want


@given(formulas, list_terms, list_terms)
def test_substitution_composes(f, s, t):
    x, y = Var("u", LIST), Var("v", LIST)
    seq = substitute(substitute(f, {x: s}), {y: t})
    sim = substitute(f, {x: substitute(s, {y: t}), y: t})
    assert alpha_equal(seq, sim)


@settings(max_examples=60, deadline=None)
@given(formulas, list_terms)
def test_substitution_lemma(f, t):
    x = Var("u", LIST)
    g = substitute(f, {x: t})
    vs = free_vars(f) | free_vars(t)
    for sigma in enumerate_valuations(vs, SMALL):
        shifted = sigma | {x: eval_term(t, sigma, SMALL)}
        assert eval_formula(g, sigma, SMALL) == eval_formula(f, shifted, SMALL)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10 ** 6), st.booleans())
def test_transport(depth, seed, partial):
    f = gen_formula(depth, seed, partial_under_binders=partial)
    rep = reverse_fact(f)
    assert check_transport(f, rep.output, SMALL).passed


@settings(max_examples=60, deadline=None)
@given(formulas)
def test_double_reversal(f):
    once = reverse_fact(f, assoc_canon=True).output
    twice = reverse_fact(once, assoc_canon=True).output
    assert all(
        eval_formula(twice, s, SMALL) == eval_formula(f, s, SMALL)
        for s in enumerate_valuations(free_vars(f), SMALL)
    )


def test_quantifier_classes_share_base():
    assert issubclass(Exists, Quant) and issubclass(Forall, Quant)
