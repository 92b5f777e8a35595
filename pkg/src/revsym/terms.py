"""Sorted first-order terms and formulas over the list vocabulary.

Everything here is immutable.  Variables are named; substitution renames a
binder only when a capture would otherwise happen, so user-visible bound
names survive every transformation that does not need to touch them.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

from .errors import SortError


class Sort(enum.Enum):
    ELEM = "elem"
    LIST = "list"
    NAT = "nat"
    BOOL = "bool"

    def __repr__(self):
        return f"Sort.{self.name}"


ELEM, LIST, NAT, BOOL = Sort.ELEM, Sort.LIST, Sort.NAT, Sort.BOOL


# -- terms -----------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str
    sort: Sort = LIST

    @property
    def children(self):
        return ()

    def __repr__(self):
        return f"Var({self.name!r}, {self.sort!r})"


@dataclass(frozen=True)
class App:
    symbol: str
    args: tuple = ()
    sort: Sort = LIST

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))

    @property
    def children(self):
        return self.args

    def replace(self, kids):
        return App(self.symbol, tuple(kids), self.sort)


Term = Union[Var, App]


def sort_of(t) -> Sort:
    """Sort of a term; Eq and the other formula nodes are Bool."""
    if isinstance(t, (Var, App)):
        return t.sort
    return BOOL


def is_literal_symbol(symbol: str) -> bool:
    return symbol.isdigit()


# -- formulas --------------------------------------------------------------

class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Atom(Formula):
    term: Term

    @property
    def children(self):
        return (self.term,)

    def replace(self, kids):
        (t,) = kids
        return Atom(t)


@dataclass(frozen=True)
class Eq(Formula):
    lhs: Term
    rhs: Term

    @property
    def children(self):
        return (self.lhs, self.rhs)

    def replace(self, kids):
        return Eq(*kids)


@dataclass(frozen=True)
class Not(Formula):
    body: Formula

    @property
    def children(self):
        return (self.body,)

    def replace(self, kids):
        (b,) = kids
        return Not(b)


@dataclass(frozen=True)
class _Binary(Formula):
    left: Formula
    right: Formula

    @property
    def children(self):
        return (self.left, self.right)

    def replace(self, kids):
        return type(self)(*kids)


class And(_Binary):
    pass


class Or(_Binary):
    pass


class Implies(_Binary):
    pass


@dataclass(frozen=True)
class _Quant(Formula):
    var: str
    sort: Sort
    body: Formula

    @property
    def children(self):
        return (self.body,)

    def replace(self, kids):
        (b,) = kids
        return type(self)(self.var, self.sort, b)


class Exists(_Quant):
    pass


class Forall(_Quant):
    pass


Quant = _Quant
Binary = _Binary
Node = Union[Term, Formula]


def implies(*parts):
    """Right-nested implication chain ``a ==> b ==> c``."""
    *prem, concl = parts
    for p in reversed(prem):
        concl = Implies(p, concl)
    return concl


# -- signature -------------------------------------------------------------

class Signature:
    """Map from symbol name to (argument sorts, result sort).

    Extensions may add new symbols but never redefine an existing one.
    """

    def __init__(self, entries=None):
        self._entries: dict[str, tuple[tuple[Sort, ...], Sort]] = {}
        for name, (args, res) in (entries or {}).items():
            self._entries[name] = (tuple(args), res)

    def __contains__(self, name):
        return name in self._entries

    def __getitem__(self, name):
        return self._entries[name]

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def get(self, name, default=None):
        return self._entries.get(name, default)

    def items(self):
        return self._entries.items()

    def extend(self, entries) -> "Signature":
        new = Signature(self._entries)
        for name, (args, res) in dict(entries).items():
            entry = (tuple(args), res)
            old = new._entries.get(name)
            if old is not None and old != entry:
                raise SortError(f"symbol {name!r} is already declared with a different signature")
            new._entries[name] = entry
        return new

    def __eq__(self, other):
        return isinstance(other, Signature) and self._entries == other._entries

    def __repr__(self):
        return f"Signature({len(self)} symbols)"


# -- traversal -------------------------------------------------------------

def subterm_at(node, path):
    for i in path:
        node = node.children[i]
    return node


def replace_at(node, path, new):
    if not path:
        return new
    i, rest = path[0], path[1:]
    kids = list(node.children)
    kids[i] = replace_at(kids[i], rest, new)
    return node.replace(kids)


def walk(node, path=()) -> Iterator[tuple[tuple, object]]:
    """Pre-order traversal yielding (path, node)."""
    yield path, node
    for i, child in enumerate(node.children):
        yield from walk(child, path + (i,))


def count_symbol(node, symbol: str) -> int:
    return sum(1 for _, n in walk(node) if isinstance(n, App) and n.symbol == symbol)


def bound_names(node) -> list[str]:
    return [n.var for _, n in walk(node) if isinstance(n, Quant)]


# -- free variables ----------------------------------------------------------

def free_vars(node) -> frozenset[Var]:
    """Variables with at least one free occurrence, as (name, sort) pairs."""
    out: set[Var] = set()
    _collect_free(node, frozenset(), out)
    return frozenset(out)


def _collect_free(node, bound, out):
    if isinstance(node, Var):
        if node.name not in bound:
            out.add(node)
    elif isinstance(node, Quant):
        _collect_free(node.body, bound | {node.var}, out)
    else:
        for c in node.children:
            _collect_free(c, bound, out)


def free_names(node) -> set[str]:
    return {v.name for v in free_vars(node)}


def fresh_name(base: str, avoid) -> str:
    name = base + "'"
    while name in avoid:
        name += "'"
    return name


# -- substitution ------------------------------------------------------------

def substitute(node, binding: Mapping[Union[str, Var], Term]):
    """Capture-avoiding simultaneous substitution.

    Keys may be variable names or ``Var`` objects; a ``Var`` key must have the
    same sort as its replacement.  Binders are renamed (by priming) only when a
    replacement term would otherwise be captured.
    """
    table: dict[str, Term] = {}
    for key, term in binding.items():
        if isinstance(key, Var):
            if key.sort != sort_of(term):
                raise SortError(
                    f"cannot substitute a {sort_of(term).value} term for {key.name}:{key.sort.value}"
                )
            key = key.name
        table[key] = term
    if not table:
        return node
    return _subst(node, table)


def _subst(node, table):
    if isinstance(node, Var):
        rep = table.get(node.name)
        if rep is None:
            return node
        if sort_of(rep) != node.sort:
            raise SortError(
                f"cannot substitute a {sort_of(rep).value} term for {node.name}:{node.sort.value}"
            )
        return rep
    if isinstance(node, Quant):
        body_free = free_names(node.body)
        live = {n: t for n, t in table.items() if n != node.var and n in body_free}
        if not live:
            return node
        var, body = node.var, node.body
        incoming = set()
        for t in live.values():
            incoming |= free_names(t)
        if var in incoming:
            avoid = incoming | body_free | set(live)
            new = fresh_name(var, avoid)
            body = _subst(body, {var: Var(new, node.sort)})
            var = new
        return type(node)(var, node.sort, _subst(body, live))
    kids = node.children
    if not kids:
        return node
    new_kids = [_subst(c, table) for c in kids]
    if all(a is b for a, b in zip(kids, new_kids)):
        return node
    return node.replace(new_kids)


# -- alpha equivalence -------------------------------------------------------

def alpha_equal(a, b) -> bool:
    """True iff ``a`` and ``b`` differ only by consistent renaming of bound variables."""
    return _aeq(a, b, {}, {}, 0)


def _aeq(a, b, env_a, env_b, depth):
    if type(a) is not type(b):
        return False
    if isinstance(a, Var):
        ia, ib = env_a.get(a.name), env_b.get(b.name)
        if ia is None and ib is None:
            return a.name == b.name and a.sort == b.sort
        return ia == ib and a.sort == b.sort
    if isinstance(a, App):
        return (
            a.symbol == b.symbol
            and a.sort == b.sort
            and len(a.args) == len(b.args)
            and all(_aeq(x, y, env_a, env_b, depth) for x, y in zip(a.args, b.args))
        )
    if isinstance(a, Quant):
        if a.sort != b.sort:
            return False
        return _aeq(
            a.body, b.body, {**env_a, a.var: depth}, {**env_b, b.var: depth}, depth + 1
        )
    return all(_aeq(x, y, env_a, env_b, depth) for x, y in zip(a.children, b.children))


# -- sort checking -------------------------------------------------------------

def check_sorts(node, sig: Signature) -> None:
    """Raise SortError unless ``node`` is well-sorted under ``sig``.

    Free variables must be used at a single sort throughout.
    """
    _check(node, sig, {}, {})


def _check(node, sig, scope, free):
    if isinstance(node, Var):
        want = scope.get(node.name)
        if want is None:
            want = free.setdefault(node.name, node.sort)
        if want != node.sort:
            raise SortError(f"variable {node.name} used at sorts {want.value} and {node.sort.value}")
        return node.sort
    if isinstance(node, App):
        if not node.args and is_literal_symbol(node.symbol):
            if node.sort not in (Sort.ELEM, Sort.NAT):
                raise SortError(f"numeral {node.symbol} cannot have sort {node.sort.value}")
            return node.sort
        entry = sig.get(node.symbol)
        if entry is None:
            raise SortError(f"unknown symbol {node.symbol!r}")
        arg_sorts, res = entry
        if len(arg_sorts) != len(node.args):
            raise SortError(f"{node.symbol} expects {len(arg_sorts)} argument(s), got {len(node.args)}")
        for a, want in zip(node.args, arg_sorts):
            got = _check(a, sig, scope, free)
            if got != want:
                raise SortError(f"argument of {node.symbol} has sort {got.value}, expected {want.value}")
        if res != node.sort:
            raise SortError(f"{node.symbol} returns {res.value}, node says {node.sort.value}")
        return res
    if isinstance(node, Eq):
        ls = _check(node.lhs, sig, scope, free)
        rs = _check(node.rhs, sig, scope, free)
        if ls != rs:
            raise SortError(f"equality between {ls.value} and {rs.value}")
        return Sort.BOOL
    if isinstance(node, Atom):
        if _check(node.term, sig, scope, free) != Sort.BOOL:
            raise SortError("atomic formula is not Bool-sorted")
        return Sort.BOOL
    if isinstance(node, Quant):
        _check(node.body, sig, {**scope, node.var: node.sort}, free)
        return Sort.BOOL
    for c in node.children:
        _check(c, sig, scope, free)
    return Sort.BOOL
