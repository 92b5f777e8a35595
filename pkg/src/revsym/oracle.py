"""Exhaustive small-scope verification and a seeded formula generator."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .errors import SortError
from .semantics import DomainParams, builtin_signature, compile_formula, domain, rev_value
from .terms import (
    BOOL, ELEM, LIST, NAT, And, App, Atom, Eq, Exists, Forall, Implies, Not, Or,
    Sort, Var, free_vars,
)

Valuation = dict  # Var -> value


@dataclass(frozen=True)
class Verdict:
    passed: bool
    counterexample: Optional[dict] = None
    checked_count: int = 0
    reason: Optional[str] = None
    params: Optional[DomainParams] = field(default=None, compare=False)

    def __bool__(self):
        return self.passed

    def to_json(self):
        return {
            "pass": self.passed,
            "checked": self.checked_count,
            "counterexample": None if self.counterexample is None
            else valuation_to_json(self.counterexample),
            "reason": self.reason,
            "bounds": None if self.params is None else self.params.describe(),
        }


def ordered_vars(vars: Iterable[Var]) -> list[Var]:
    return sorted(vars, key=lambda v: (v.name, v.sort.value))


def enumerate_valuations(vars: Iterable[Var], p: DomainParams) -> Iterator[Valuation]:
    """Every valuation of ``vars``, the first variable (by name) varying slowest."""
    vs = ordered_vars(vars)
    for values in itertools.product(*(domain(v.sort, p) for v in vs)):
        yield dict(zip(vs, values))


def space_size(vars: Iterable[Var], p: DomainParams) -> int:
    n = 1
    for v in vars:
        n *= len(domain(v.sort, p))
    return n


def rev_valuation(sigma: Valuation) -> Valuation:
    return {v: rev_value(x) for v, x in sigma.items()}


def format_value(x):
    if isinstance(x, tuple):
        return "[" + ",".join(map(str, x)) + "]"
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


def format_valuation(sigma: Valuation) -> str:
    return ", ".join(f"{v.name}={format_value(x)}" for v, x in sigma.items())


def valuation_to_json(sigma: Valuation) -> dict:
    return {v.name: list(x) if isinstance(x, tuple) else x for v, x in sigma.items()}


def _joint_vars(f, g) -> list[Var]:
    vs = free_vars(f) | free_vars(g)
    by_name: dict[str, Sort] = {}
    for v in vs:
        if by_name.setdefault(v.name, v.sort) != v.sort:
            raise SortError(f"free variable {v.name} has different sorts in the two formulas")
    return ordered_vars(vs)


def _run(f, g, p):
    """Yield (sigma, f at sigma, g at rev sigma) over the joint valuation space."""
    vs = _joint_vars(f, g)
    cf, cg = compile_formula(f, p), compile_formula(g, p)
    names = [v.name for v in vs]
    env, renv = {}, {}
    for values in itertools.product(*(domain(v.sort, p) for v in vs)):
        for n, x in zip(names, values):
            env[n] = x
            renv[n] = x[::-1] if isinstance(x, tuple) else x
        yield vs, values, bool(cf(env)), bool(cg(renv))


def check_transport(f, g, p: DomainParams = DomainParams()) -> Verdict:
    """Pointwise check that ``f`` at every valuation agrees with ``g`` at its reversal."""
    count = 0
    vs = []
    for vs, values, a, b in _run(f, g, p):
        count += 1
        if a != b:
            return Verdict(False, dict(zip(vs, values)), count,
                           f"original is {a} but transformed is {not a} at the reversed valuation", p)
    return Verdict(True, None, count, None, p)


def check_closure(f, g, p: DomainParams = DomainParams()) -> Verdict:
    """Check that the bounded universal closures of ``f`` and ``g`` agree."""
    count = 0
    f_cex = g_cex = None
    for vs, values, a, b in _run(f, g, p):
        count += 1
        if not a and f_cex is None:
            f_cex = dict(zip(vs, values))
        if not b and g_cex is None:
            g_cex = dict(zip(vs, values))
    if (f_cex is None) == (g_cex is None):
        return Verdict(True, None, count, None, p)
    if f_cex is None:
        return Verdict(False, g_cex, count, "original holds everywhere, transformed fails here", p)
    return Verdict(False, f_cex, count, "transformed holds everywhere, original fails here", p)


# -- generator -----------------------------------------------------------------

LIST_POOL = ("u", "v", "w")
ELEM_POOL = ("a",)
NAT_POOL = ("n",)
BOUND_POOL = ("r", "s", "t")


class _Gen:
    def __init__(self, rng: random.Random, sig, partial_under_binders: bool):
        self.rng = rng
        self.sig = sig
        self.partial_under_binders = partial_under_binders

    def has(self, sym):
        return sym in self.sig

    def formula(self, depth, bound):
        r = self.rng
        if depth <= 1 or r.random() < 0.25:
            return self.atom(bound)
        kind = r.choice(("not", "and", "or", "imp", "imp", "ex", "all"))
        if kind in ("ex", "all") and len(bound) < len(BOUND_POOL):
            name = BOUND_POOL[len(bound)]
            body = self.formula(depth - 1, bound + (name,))
            return (Exists if kind == "ex" else Forall)(name, LIST, body)
        if kind == "not":
            return Not(self.formula(depth - 1, bound))
        cls = {"and": And, "or": Or, "imp": Implies}.get(kind, Implies)
        return cls(self.formula(depth - 1, bound), self.formula(depth - 1, bound))

    def atom(self, bound):
        r = self.rng
        options = ["prefix", "suffix", "eq_list", "eq_elem", "eq_nat", "leq"]
        kind = r.choice([o for o in options if self.has(o) or o.startswith("eq")])
        if kind in ("prefix", "suffix"):
            return Atom(App(kind, (self.list_term(2, bound), self.list_term(2, bound)), BOOL))
        if kind == "leq":
            return Atom(App("leq", (self.nat_term(bound), self.nat_term(bound)), BOOL))
        if kind == "eq_list":
            return Eq(self.list_term(2, bound), self.list_term(2, bound))
        if kind == "eq_elem":
            return Eq(self.elem_term(bound), self.elem_term(bound))
        return Eq(self.nat_term(bound), self.nat_term(bound))

    def partial_ok(self, bound):
        return self.partial_under_binders or not bound

    def list_var(self, bound):
        return Var(self.rng.choice(LIST_POOL + bound), LIST)

    def list_term(self, size, bound):
        r = self.rng
        if size <= 0 or r.random() < 0.4:
            return self.list_var(bound)
        choices = ["var", "nil", "cons", "append", "append", "rev", "snoc", "lit"]
        if self.partial_ok(bound):
            choices += ["left_quotient", "right_quotient"]
        kind = r.choice([c for c in choices if c in ("var", "lit") or self.has(c)])
        if kind == "var":
            return self.list_var(bound)
        if kind == "nil":
            return App("nil", (), LIST)
        if kind == "lit":
            t = App("nil", (), LIST)
            for _ in range(r.randint(1, 2)):
                t = App("cons", (App(str(r.randint(0, 1)), (), ELEM), t), LIST)
            return t
        if kind == "cons":
            return App("cons", (self.elem_term(bound, simple=True), self.list_term(size - 1, bound)), LIST)
        if kind == "snoc":
            return App("snoc", (self.list_term(size - 1, bound), self.elem_term(bound, simple=True)), LIST)
        if kind == "rev":
            return App("rev", (self.list_term(size - 1, bound),), LIST)
        return App(kind, (self.list_term(size - 1, bound), self.list_term(size - 1, bound)), LIST)

    def elem_term(self, bound, simple=False):
        r = self.rng
        choices = ["var", "lit"]
        if not simple and self.partial_ok(bound):
            choices += [s for s in ("hd", "last") if self.has(s)]
        kind = r.choice(choices)
        if kind == "var":
            return Var(r.choice(ELEM_POOL), ELEM)
        if kind == "lit":
            return App(str(r.randint(0, 1)), (), ELEM)
        return App(kind, (self.list_term(1, bound),), ELEM)

    def nat_term(self, bound):
        r = self.rng
        kind = r.choice(["var", "lit", "length", "length"] if self.has("length") else ["var", "lit"])
        if kind == "var":
            return Var(r.choice(NAT_POOL), NAT)
        if kind == "lit":
            return App(str(r.randint(0, 2)), (), NAT)
        return App("length", (self.list_term(1, bound),), NAT)


def gen_formula(depth: int, seed: int, sig=None, *, partial_under_binders: bool = False):
    """Deterministic well-sorted formula with connective nesting at most ``depth``.

    hd, last and the quotients appear only outside quantifiers unless
    ``partial_under_binders`` is set.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    sig = sig if sig is not None else builtin_signature()
    return _Gen(random.Random(seed), sig, partial_under_binders).formula(depth, ())
