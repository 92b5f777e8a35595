"""Builtin list vocabulary and its executable semantics over small domains.

Values are plain Python objects: a list value is a tuple of ints, elements
and naturals are ints, booleans are bools.  Quantifiers range over bounded
domains; intermediate values are never truncated.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Mapping

from .errors import UnboundVariable, UninterpretedSymbol
from .terms import (
    BOOL, ELEM, LIST, NAT, And, App, Atom, Eq, Exists, Forall, Implies, Not, Or,
    Signature, Sort, Var, is_literal_symbol,
)

CATALOGUE = {
    "nil": ((), LIST),
    "cons": ((ELEM, LIST), LIST),
    "snoc": ((LIST, ELEM), LIST),
    "append": ((LIST, LIST), LIST),
    "rev": ((LIST,), LIST),
    "hd": ((LIST,), ELEM),
    "last": ((LIST,), ELEM),
    "length": ((LIST,), NAT),
    "prefix": ((LIST, LIST), BOOL),
    "suffix": ((LIST, LIST), BOOL),
    "left_quotient": ((LIST, LIST), LIST),
    "right_quotient": ((LIST, LIST), LIST),
    "leq": ((NAT, NAT), BOOL),
}

# hd [] and last [] share this value, which keeps hd (rev xs) = last xs total
DEFAULT_ELEM = 0


def builtin_signature() -> Signature:
    return Signature(CATALOGUE)


@dataclass(frozen=True)
class DomainParams:
    """Small-scope bounds: alphabet size, max list length, max natural."""

    k: int = 2
    L: int = 3
    N: int | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("alphabet size k must be at least 1")
        if self.L < 0:
            raise ValueError("maximum list length L must be non-negative")
        if self.N is None:
            object.__setattr__(self, "N", 2 * self.L)
        elif self.N < 0:
            raise ValueError("maximum natural N must be non-negative")

    def describe(self):
        return {"alphabet": self.k, "maxlen": self.L, "maxnat": self.N}


@lru_cache(maxsize=None)
def list_domain(k: int, L: int) -> tuple:
    """All lists of length <= L over 0..k-1, shortest first, then lexicographic."""
    return tuple(
        w for n in range(L + 1) for w in itertools.product(range(k), repeat=n)
    )


def domain(sort: Sort, p: DomainParams) -> tuple:
    if sort is LIST:
        return list_domain(p.k, p.L)
    if sort is ELEM:
        return tuple(range(p.k))
    if sort is NAT:
        return tuple(range(p.N + 1))
    return (False, True)


def rev_value(v):
    if isinstance(v, tuple):
        return v[::-1]
    return v


# -- primitive operations -----------------------------------------------------

def _hd(xs):
    return xs[0] if xs else DEFAULT_ELEM


def _last(xs):
    return xs[-1] if xs else DEFAULT_ELEM


def _left_quotient(u, v):
    # total: the unique z with u @ z = v, or [] when u is not a prefix of v
    n = len(u)
    return v[n:] if v[:n] == u else ()


def _right_quotient(u, v):
    return _left_quotient(v[::-1], u[::-1])[::-1]


def _suffix(xs, ys):
    return len(xs) <= len(ys) and ys[len(ys) - len(xs):] == xs


PRIMITIVES: dict[str, Callable] = {
    "nil": lambda: (),
    "cons": lambda a, xs: (a,) + xs,
    "snoc": lambda xs, a: xs + (a,),
    "append": lambda xs, ys: xs + ys,
    "rev": lambda xs: xs[::-1],
    "hd": _hd,
    "last": _last,
    "length": len,
    "prefix": lambda xs, ys: ys[: len(xs)] == xs,
    "suffix": _suffix,
    "left_quotient": _left_quotient,
    "right_quotient": _right_quotient,
    "leq": lambda m, n: m <= n,
}


# -- compilation to closures ----------------------------------------------------
#
# Environments are dicts from variable name to value; quantifiers bind by
# mutating the dict and restoring the shadowed entry afterwards.

_MISSING = object()


def compile_term(t, p: DomainParams) -> Callable[[dict], object]:
    if isinstance(t, Var):
        name = t.name

        def var(env):
            try:
                return env[name]
            except KeyError:
                raise UnboundVariable(name) from None
        return var
    if isinstance(t, Eq):
        return compile_formula(t, p)
    sym = t.symbol
    if not t.args:
        if is_literal_symbol(sym):
            value = int(sym)
            return lambda env: value
        if sym == "nil":
            return lambda env: ()
        raise UninterpretedSymbol(sym)
    op = PRIMITIVES.get(sym)
    if op is None:
        raise UninterpretedSymbol(sym)
    subs = [compile_term(a, p) for a in t.args]
    if len(subs) == 1:
        (a,) = subs
        return lambda env: op(a(env))
    if len(subs) == 2:
        a, b = subs
        return lambda env: op(a(env), b(env))
    return lambda env: op(*(s(env) for s in subs))


def compile_formula(f, p: DomainParams) -> Callable[[dict], bool]:
    if isinstance(f, Atom):
        return compile_term(f.term, p)
    if isinstance(f, Eq):
        a, b = compile_term(f.lhs, p), compile_term(f.rhs, p)
        return lambda env: a(env) == b(env)
    if isinstance(f, Not):
        g = compile_formula(f.body, p)
        return lambda env: not g(env)
    if isinstance(f, And):
        a, b = compile_formula(f.left, p), compile_formula(f.right, p)
        return lambda env: a(env) and b(env)
    if isinstance(f, Or):
        a, b = compile_formula(f.left, p), compile_formula(f.right, p)
        return lambda env: a(env) or b(env)
    if isinstance(f, Implies):
        a, b = compile_formula(f.left, p), compile_formula(f.right, p)
        return lambda env: (not a(env)) or b(env)
    if isinstance(f, (Exists, Forall)):
        body = compile_formula(f.body, p)
        name, dom = f.var, domain(f.sort, p)
        want = isinstance(f, Exists)

        def quant(env):
            saved = env.get(name, _MISSING)
            try:
                for v in dom:
                    env[name] = v
                    if bool(body(env)) == want:
                        return want
                return not want
            finally:
                if saved is _MISSING:
                    del env[name]
                else:
                    env[name] = saved
        return quant
    raise TypeError(f"not a formula: {f!r}")


def env_of(valuation: Mapping) -> dict:
    """Name-keyed environment from a valuation keyed by ``Var`` or name."""
    return {(k.name if isinstance(k, Var) else k): v for k, v in valuation.items()}


def eval_term(t, valuation: Mapping, p: DomainParams = DomainParams()):
    return compile_term(t, p)(env_of(valuation))


def eval_formula(f, valuation: Mapping, p: DomainParams = DomainParams()) -> bool:
    return bool(compile_formula(f, p)(env_of(valuation)))
