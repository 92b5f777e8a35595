"""From a fact to its reversal-symmetric counterpart.

The pipeline: instantiate every free list variable ``x`` by ``rev x``,
push ``rev`` onto every list-bound variable, normalize with the reversal
rules (leftmost-innermost, first matching rule), and optionally
right-associate appends.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional

from .errors import CycleDetected, FuelExhausted
from .rules import Rule, RuleSet, default_ruleset
from .syntax import format_node
from .terms import (
    LIST, App, Atom, Eq, Quant, Var, free_vars, replace_at, subterm_at, substitute, walk,
)

DEFAULT_FUEL = 10_000


def fuel_from_env(default: int = DEFAULT_FUEL) -> int:
    raw = os.environ.get("REVSYM_FUEL")
    if raw is None or not raw.strip():
        return default
    value = int(raw)
    if value <= 0:
        raise ValueError("REVSYM_FUEL must be positive")
    return value


def rev(t):
    return App("rev", (t,), LIST)


@dataclass(frozen=True)
class Step:
    phase: str      # instantiate, transport, rewrite, canon
    label: str      # rule name or phase label
    path: tuple
    before: object
    after: object

    def to_json(self):
        return {
            "phase": self.phase,
            "label": self.label,
            "path": list(self.path),
            "before": format_node(self.before),
            "after": format_node(self.after),
        }


@dataclass
class ReversalReport:
    input: object
    output: object
    residual_positions: list = field(default_factory=list)
    steps: list = field(default_factory=list)
    fuel_used: int = 0

    @property
    def residual_rev_count(self) -> int:
        return len(self.residual_positions)

    @property
    def warnings(self) -> list[str]:
        return [
            f"residual rev at {'.'.join(map(str, p)) or '<root>'}: {format_node(subterm_at(self.output, p))}"
            for p in self.residual_positions
        ]

    def residuals_json(self):
        return [
            {"path": list(p), "term": format_node(subterm_at(self.output, p))}
            for p in self.residual_positions
        ]


# -- phases -------------------------------------------------------------------

def instantiate_list_vars(f):
    """Replace every free List variable ``x`` by ``rev x``."""
    return substitute(f, {v: rev(v) for v in free_vars(f) if v.sort == LIST})


def transport_binders(f):
    """Under each List binder ``x``, replace bound occurrences of ``x`` by ``rev x``.

    Sound because rev is a bijection on lists; the binder keeps its name.
    """
    if isinstance(f, Quant):
        body = transport_binders(f.body)
        if f.sort == LIST:
            body = substitute(body, {f.var: rev(Var(f.var, LIST))})
        return type(f)(f.var, f.sort, body)
    if isinstance(f, (Var, App)):
        return f
    kids = f.children
    return f.replace([transport_binders(c) for c in kids]) if kids else f


def canon_assoc(f):
    """Right-associate every append chain."""
    if isinstance(f, Var):
        return f
    if isinstance(f, App) and f.symbol == "append" and len(f.args) == 2:
        parts = [canon_assoc(x) for x in _append_operands(f)]
        out = parts[-1]
        for x in reversed(parts[:-1]):
            out = App("append", (x, out), f.sort)
        return out
    kids = f.children
    return f.replace([canon_assoc(c) for c in kids]) if kids else f


def _append_operands(t):
    if isinstance(t, App) and t.symbol == "append" and len(t.args) == 2:
        return _append_operands(t.args[0]) + _append_operands(t.args[1])
    return [t]


# -- matching and rewriting ----------------------------------------------------

def match(pattern, node, binding=None) -> Optional[dict]:
    """First-order syntactic matching; pattern variables bind by name."""
    binding = {} if binding is None else binding
    if isinstance(pattern, Var):
        if not isinstance(node, (Var, App)) or node.sort != pattern.sort:
            return None
        bound = binding.get(pattern.name)
        if bound is None:
            binding[pattern.name] = node
            return binding
        return binding if bound == node else None
    if type(pattern) is not type(node):
        return None
    if isinstance(pattern, App):
        if pattern.symbol != node.symbol or len(pattern.args) != len(node.args):
            return None
    for p, n in zip(pattern.children, node.children):
        if match(p, n, binding) is None:
            return None
    return binding


def _instantiate(pattern, binding):
    if isinstance(pattern, Var):
        return binding[pattern.name]
    kids = pattern.children
    return pattern.replace([_instantiate(k, binding) for k in kids]) if kids else pattern


def _literal_items(t):
    items = []
    while isinstance(t, App) and t.symbol == "cons" and len(t.args) == 2:
        items.append(t.args[0])
        t = t.args[1]
    if isinstance(t, App) and t.symbol == "nil" and not t.args:
        return items
    return None


def mirror_literal(t) -> Optional[App]:
    """``rev [a, b, c]`` to ``[c, b, a]`` for rev-free cons spines ending in nil."""
    if not (isinstance(t, App) and t.symbol == "rev" and len(t.args) == 1):
        return None
    items = _literal_items(t.args[0])
    if items is None or any(_mentions_rev(x) for x in items):
        return None
    out = App("nil", (), LIST)
    for x in items:
        out = App("cons", (x, out), LIST)
    return out


def _mentions_rev(node):
    return any(isinstance(n, App) and n.symbol == "rev" for _, n in walk(node))


MIRROR = "literal_mirror"


class _Index:
    def __init__(self, rules: RuleSet):
        self.term_rules: dict[str, list[Rule]] = {}
        self.eq_rules: list[Rule] = []
        for r in rules:
            if isinstance(r.lhs, Eq):
                self.eq_rules.append(r)
            elif isinstance(r.lhs, App):
                self.term_rules.setdefault(r.lhs.symbol, []).append(r)

    def rewrite_here(self, node):
        if isinstance(node, Eq):
            for r in self.eq_rules:
                b = match(r.lhs, node)
                if b is not None:
                    out = _instantiate(r.rhs, b)
                    return r.name, out if isinstance(out, Eq) else Atom(out)
            return None
        if isinstance(node, App):
            for r in self.term_rules.get(node.symbol, ()):
                if r.lhs.sort != node.sort:
                    continue
                b = match(r.lhs, node)
                if b is not None:
                    return r.name, _instantiate(r.rhs, b)
            mirrored = mirror_literal(node)
            if mirrored is not None:
                return MIRROR, mirrored
        return None

    def find(self, node, path=()):
        """Leftmost-innermost redex as (path, label, before, after), or None."""
        for i, child in enumerate(node.children):
            hit = self.find(child, path + (i,))
            if hit is not None:
                return hit
        here = self.rewrite_here(node)
        if here is None:
            return None
        label, after = here
        return path, label, node, after


def normalize(f, rules: RuleSet = None, fuel: int = DEFAULT_FUEL):
    """Rewrite to normal form; returns ``(formula, steps)``.

    Raises FuelExhausted after ``fuel`` rewrites and CycleDetected if a
    formula repeats.
    """
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    index = _Index(rules if rules is not None else default_ruleset())
    steps: list[Step] = []
    seen = {f}
    while True:
        hit = index.find(f)
        if hit is None:
            return f, steps
        if len(steps) >= fuel:
            raise FuelExhausted(f, fuel)
        path, label, before, after = hit
        f = replace_at(f, path, after)
        steps.append(Step("rewrite", label, path, before, after))
        if f in seen:
            raise CycleDetected(f, len(steps))
        seen.add(f)


def rev_positions(f) -> list[tuple]:
    return [p for p, n in walk(f) if isinstance(n, App) and n.symbol == "rev"]


def reverse_fact(f, rules: RuleSet = None, *, assoc_canon: bool = False,
                 fuel: int = DEFAULT_FUEL) -> ReversalReport:
    rules = rules if rules is not None else default_ruleset()
    steps = []
    g = instantiate_list_vars(f)
    if g != f:
        steps.append(Step("instantiate", "rev_instantiation", (), f, g))
    h = transport_binders(g)
    if h != g:
        steps.append(Step("transport", "binder_transport", (), g, h))
    out, rewrites = normalize(h, rules, fuel)
    steps.extend(rewrites)
    if assoc_canon:
        c = canon_assoc(out)
        if c != out:
            steps.append(Step("canon", "assoc_canon", (), out, c))
        out = c
    return ReversalReport(f, out, rev_positions(out), steps, len(rewrites))


def replay(start, steps) -> object:
    """Apply traced steps to ``start``; each step's ``before`` must be present."""
    f = start
    for s in steps:
        if subterm_at(f, s.path) != s.before:
            raise ValueError(f"step {s.label} does not apply at {s.path}")
        f = replace_at(f, s.path, s.after)
    return f
