"""Concrete syntax: lexer, parser with sort inference, and printer.

Grammar, loosest binding first::

    EX x. P  /  ALL x. P      body extends as far right as possible
    P ==> Q                   right associative
    P \\/ Q,  P /\\ Q          right associative, /\\ binds tighter
    ~ P
    s = t,  s ~= t,  m <= n   non-associative
    x # xs,  xs @ ys          right associative, same level
    f a b                     prefix application
    x:elem  [a, b]  []  0  ( ... )

Free variables without an annotation default to sort List.  The printer
emits exactly this grammar and annotates every non-List variable once.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .errors import ParseError, SortError
from .terms import (
    BOOL, ELEM, LIST, NAT, And, App, Atom, Eq, Exists, Forall, Implies, Not, Or,
    Quant, Signature, Sort, Var, is_literal_symbol,
)

SORT_NAMES = {s.value: s for s in Sort}

_UNICODE = {
    "⟹": "==>", "⇒": "==>", "∧": "/\\", "∨": "\\/", "¬": "~",
    "≠": "~=", "≤": "<=", "∃": "EX", "∀": "ALL",
}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<op>==>|==|~=|<=|/\\|\\/|[~=@\#()\[\],.:])
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<uni>[⟹⇒∧∨¬≠≤∃∀])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str   # "op", "num", "ident", "kw", "eof"
    text: str
    line: int
    col: int
    offset: int


def tokenize(text: str, line: int = 1, col: int = 1) -> list[Token]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind == "nl":
            line, col = line + 1, 1
        elif kind == "ws":
            col += len(s)
        else:
            if kind == "uni":
                s = _UNICODE[s]
                kind = "kw" if s in ("EX", "ALL") else "op"
            elif kind == "ident" and s in ("EX", "ALL"):
                kind = "kw"
            toks.append(Token(kind, s, line, col, pos))
            col += len(m.group())
        pos = m.end()
    toks.append(Token("eof", "", line, col, pos))
    return toks


# -- raw syntax tree ----------------------------------------------------------

@dataclass
class RawNode:
    kind: str           # ident, num, nil, list, app, bin, not, quant
    pos: tuple
    name: str = ""
    ann: Optional[Sort] = None
    args: tuple = ()


_INFIX = {
    # op: (left binding power, right-hand rbp)
    "==>": (10, 9),
    "\\/": (20, 19),
    "/\\": (30, 29),
    "=": (40, 40),
    "~=": (40, 40),
    "<=": (40, 40),
    "@": (50, 49),
    "#": (50, 49),
}
_NOT_RBP = 35
_ATOM_START = {"(", "["}


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def advance(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text):
        t = self.tok
        if t.text != text or t.kind not in ("op",):
            raise ParseError(f"expected {text!r} but found {t.text or 'end of input'!r}", t.line, t.col)
        return self.advance()

    def error(self, msg, t=None):
        t = t or self.tok
        return ParseError(msg, t.line, t.col)

    def parse_all(self):
        node = self.expr(0)
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return node

    def expr(self, rbp):
        left = self.nud()
        while True:
            t = self.tok
            if t.kind != "op" or t.text not in _INFIX:
                break
            lbp, next_rbp = _INFIX[t.text]
            if lbp <= rbp:
                break
            self.advance()
            right = self.expr(next_rbp)
            if t.text in ("=", "~=", "<=") and self.tok.text in ("=", "~=", "<=") and self.tok.kind == "op":
                raise self.error(f"{self.tok.text!r} is non-associative; add parentheses")
            left = RawNode("bin", (t.line, t.col), t.text, args=(left, right))
        return left

    def nud(self):
        t = self.tok
        if t.kind == "kw":
            return self.quant()
        if t.kind == "op" and t.text == "~":
            self.advance()
            return RawNode("not", (t.line, t.col), args=(self.expr(_NOT_RBP),))
        head = self.atom()
        if head.kind == "ident" and head.ann is None:
            args = []
            while self.starts_atom():
                args.append(self.atom())
            if args:
                return RawNode("app", head.pos, head.name, args=tuple(args))
        return head

    def starts_atom(self):
        t = self.tok
        return t.kind in ("ident", "num") or (t.kind == "op" and t.text in _ATOM_START)

    def annotation(self):
        if self.tok.kind == "op" and self.tok.text == ":":
            self.advance()
            t = self.advance()
            if t.kind != "ident" or t.text not in SORT_NAMES:
                raise self.error(f"unknown sort {t.text!r}", t)
            return SORT_NAMES[t.text]
        return None

    def atom(self):
        t = self.tok
        if t.kind == "ident":
            self.advance()
            return RawNode("ident", (t.line, t.col), t.text, ann=self.annotation())
        if t.kind == "num":
            self.advance()
            return RawNode("num", (t.line, t.col), t.text, ann=self.annotation())
        if t.kind == "op" and t.text == "(":
            self.advance()
            inner = self.expr(0)
            self.expect(")")
            return inner
        if t.kind == "op" and t.text == "[":
            self.advance()
            if self.tok.kind == "op" and self.tok.text == "]":
                self.advance()
                return RawNode("nil", (t.line, t.col))
            items = [self.expr(0)]
            while self.tok.kind == "op" and self.tok.text == ",":
                self.advance()
                items.append(self.expr(0))
            self.expect("]")
            return RawNode("list", (t.line, t.col), args=tuple(items))
        raise self.error(f"unexpected {t.text or 'end of input'!r}")

    def quant(self):
        kw = self.advance()
        binders = []
        while self.tok.kind == "ident":
            b = self.advance()
            binders.append(((b.line, b.col), b.text, self.annotation()))
        if not binders:
            raise self.error(f"{kw.text} needs at least one bound variable")
        self.expect(".")
        body = self.expr(0)
        for pos, name, ann in reversed(binders):
            body = RawNode("quant", pos, name, ann=ann, args=(kw.text, body))
        return body


def parse_raw(text: str, line: int = 1, col: int = 1) -> RawNode:
    return _Parser(tokenize(text, line, col)).parse_all()


def split_equation(text: str, line: int = 1, col: int = 1):
    """Split ``LHS == RHS`` at the top-level ``==`` token.

    Returns ``(lhs_text, rhs_text, rhs_line, rhs_col)``.
    """
    toks = tokenize(text, line, col)
    depth = 0
    hits = []
    for i, t in enumerate(toks):
        if t.kind == "op" and t.text in "([":
            depth += 1
        elif t.kind == "op" and t.text in ")]":
            depth -= 1
        elif t.kind == "op" and t.text == "==" and depth == 0:
            hits.append(i)
    if len(hits) != 1:
        t = toks[hits[1]] if len(hits) > 1 else toks[-1]
        raise ParseError("a rule needs exactly one top-level '=='", t.line, t.col)
    sep = toks[hits[0]]
    return text[: sep.offset], text[sep.offset + 2:], sep.line, sep.col + 2


# -- sort inference ------------------------------------------------------------

class _Sorts:
    """Union-find over sort variables; roots may be bound to a concrete Sort."""

    def __init__(self):
        self.parent: list[int] = []
        self.value: list[Optional[Sort]] = []
        self.numeric: list[bool] = []

    def new(self, numeric=False):
        self.parent.append(len(self.parent))
        self.value.append(None)
        self.numeric.append(numeric)
        return len(self.parent) - 1

    def find(self, v):
        while self.parent[v] != v:
            self.parent[v] = self.parent[self.parent[v]]
            v = self.parent[v]
        return v

    def unify(self, a, b, pos):
        if isinstance(a, Sort):
            a, b = b, a
        if isinstance(a, Sort):
            if a != b:
                raise SortError(f"expected {b.value}, found {a.value}", *pos)
            return
        ra = self.find(a)
        if isinstance(b, Sort):
            self._bind(ra, b, pos)
            return
        rb = self.find(b)
        if ra == rb:
            return
        va, vb = self.value[ra], self.value[rb]
        if va is not None and vb is not None and va != vb:
            raise SortError(f"expected {va.value}, found {vb.value}", *pos)
        self.parent[rb] = ra
        self.numeric[ra] = self.numeric[ra] or self.numeric[rb]
        if va is None and vb is not None:
            self.value[ra] = None
            self._bind(ra, vb, pos)
        elif va is not None:
            self._check_numeric(ra, va, pos)

    def _bind(self, r, s, pos):
        cur = self.value[r]
        if cur is not None and cur != s:
            raise SortError(f"expected {s.value}, found {cur.value}", *pos)
        self._check_numeric(r, s, pos)
        self.value[r] = s

    def _check_numeric(self, r, s, pos):
        if self.numeric[r] and s not in (ELEM, NAT):
            raise SortError(f"a numeral cannot have sort {s.value}", *pos)

    def resolve(self, v, pos):
        if isinstance(v, Sort):
            return v
        r = self.find(v)
        if self.value[r] is not None:
            return self.value[r]
        if self.numeric[r]:
            raise SortError("ambiguous sort for numeral (annotate it as :elem or :nat)", *pos)
        return LIST


_TERM_OPS = {"@": "append", "#": "cons", "<=": "leq"}
_FORMULA_OPS = {"==>": Implies, "/\\": And, "\\/": Or}


class _Elaborator:
    def __init__(self, sig: Signature, extend: bool):
        self.sig = sig
        self.extend = extend
        self.sorts = _Sorts()
        self.free: dict[str, int] = {}
        self.unknown: dict[str, tuple[tuple[int, ...], int]] = {}

    # pass 1 builds an intermediate tree whose sorts are variables
    def formula(self, raw, scope):
        k = raw.kind
        if k == "bin" and raw.name in _FORMULA_OPS:
            a, b = raw.args
            return ("bin", raw.name, self.formula(a, scope), self.formula(b, scope))
        if k == "not":
            return ("not", self.formula(raw.args[0], scope))
        if k == "quant":
            kind, body = raw.args
            sv = self.sorts.new()
            if raw.ann is not None:
                self.sorts.unify(sv, raw.ann, raw.pos)
            if raw.name in self.sig:
                raise SortError(f"cannot bind {raw.name!r}: it is a function symbol", *raw.pos)
            return ("quant", kind, raw.name, sv, raw.pos, self.formula(body, {**scope, raw.name: sv}))
        if k == "bin" and raw.name in ("=", "~="):
            l, ls = self.term(raw.args[0], scope)
            r, rs = self.term(raw.args[1], scope)
            self.sorts.unify(ls, rs, raw.pos)
            eq = ("eq", l, r)
            return ("not", eq) if raw.name == "~=" else eq
        t, s = self.term(raw, scope)
        self.sorts.unify(s, BOOL, raw.pos)
        return ("atom", t)

    def term(self, raw, scope):
        k = raw.kind
        if k == "ident":
            return self._ident(raw, scope)
        if k == "num":
            sv = self.sorts.new(numeric=True)
            if raw.ann is not None:
                self.sorts.unify(sv, raw.ann, raw.pos)
            return ("app", raw.name, (), sv, raw.pos), sv
        if k == "nil":
            return ("app", "nil", (), LIST, raw.pos), LIST
        if k == "list":
            spine = ("app", "nil", (), LIST, raw.pos)
            for item in reversed(raw.args):
                h, hs = self.term(item, scope)
                self.sorts.unify(hs, ELEM, item.pos)
                spine = ("app", "cons", (h, spine), LIST, raw.pos)
            return spine, LIST
        if k == "bin" and raw.name in _TERM_OPS:
            return self._apply(_TERM_OPS[raw.name], list(raw.args), raw.pos, scope)
        if k == "app":
            if raw.name in scope or (raw.name in self.free and raw.name not in self.sig):
                raise SortError(f"variable {raw.name!r} cannot be applied to arguments", *raw.pos)
            return self._apply(raw.name, list(raw.args), raw.pos, scope)
        raise SortError("a formula appears where a term is expected", *raw.pos)

    def _ident(self, raw, scope):
        name = raw.name
        if name in scope:
            sv = scope[name]
        elif name in self.sig or name in self.unknown:
            return self._apply(name, [], raw.pos, scope)
        else:
            sv = self.free.get(name)
            if sv is None:
                sv = self.free[name] = self.sorts.new()
        if raw.ann is not None:
            self.sorts.unify(sv, raw.ann, raw.pos)
        return ("var", name, sv, raw.pos), sv

    def _apply(self, symbol, args, pos, scope):
        entry = self.sig.get(symbol)
        if entry is None:
            entry = self.unknown.get(symbol)
            if entry is None:
                if not self.extend:
                    raise SortError(f"unknown symbol {symbol!r}", *pos)
                if symbol in self.free:
                    raise SortError(f"{symbol!r} is used both as a variable and as a function", *pos)
                entry = self.unknown[symbol] = (tuple(self.sorts.new() for _ in args), self.sorts.new())
        arg_sorts, res = entry
        if len(arg_sorts) != len(args):
            raise SortError(
                f"{symbol} expects {len(arg_sorts)} argument(s), got {len(args)}", *pos
            )
        out = []
        for a, want in zip(args, arg_sorts):
            t, s = self.term(a, scope)
            self.sorts.unify(s, want, a.pos)
            out.append(t)
        return ("app", symbol, tuple(out), res, pos), res

    # pass 2 resolves sort variables into the final immutable tree
    def build(self, node):
        tag = node[0]
        if tag == "bin":
            cls = _FORMULA_OPS[node[1]]
            return cls(self.build(node[2]), self.build(node[3]))
        if tag == "not":
            return Not(self.build(node[1]))
        if tag == "quant":
            _, kind, name, sv, pos, body = node
            cls = Exists if kind == "EX" else Forall
            return cls(name, self.sorts.resolve(sv, pos), self.build(body))
        if tag == "eq":
            return Eq(self.build(node[1]), self.build(node[2]))
        if tag == "atom":
            return Atom(self.build(node[1]))
        if tag == "var":
            _, name, sv, pos = node
            return Var(name, self.sorts.resolve(sv, pos))
        _, symbol, args, sv, pos = node
        return App(symbol, tuple(self.build(a) for a in args), self.sorts.resolve(sv, pos))

    def new_symbols(self):
        out = {}
        for name, (args, res) in self.unknown.items():
            out[name] = (
                tuple(self.sorts.resolve(a, (None, None)) for a in args),
                self.sorts.resolve(res, (None, None)),
            )
        return out


def _default_sig():
    from .semantics import builtin_signature
    return builtin_signature()


def parse_formula_ext(text: str, sig: Signature = None, *, extend: bool = False,
                      line: int = 1, col: int = 1):
    """Parse a formula; with ``extend`` unknown symbols get inferred signatures.

    Returns ``(formula, new_symbols)``.
    """
    sig = sig if sig is not None else _default_sig()
    raw = parse_raw(text, line, col)
    el = _Elaborator(sig, extend)
    skeleton = el.formula(raw, {})
    return el.build(skeleton), el.new_symbols()


def parse_formula(text: str, sig: Signature = None):
    return parse_formula_ext(text, sig)[0]


def parse_term(text: str, sig: Signature = None):
    sig = sig if sig is not None else _default_sig()
    raw = parse_raw(text)
    el = _Elaborator(sig, False)
    t, _ = el.term(raw, {})
    return el.build(t)


def parse_equation(lhs_text: str, rhs_text: str, sig: Signature = None, *, extend=False,
                   lhs_pos=(1, 1), rhs_pos=(1, 1)):
    """Parse the two sides of a rule with shared variable sorts.

    Each side is a term or an equality between terms (an Eq atom pattern).
    """
    sig = sig if sig is not None else _default_sig()
    el = _Elaborator(sig, extend)
    sides = []
    for text, (line, col) in ((lhs_text, lhs_pos), (rhs_text, rhs_pos)):
        raw = parse_raw(text, line, col)
        if raw.kind == "bin" and raw.name == "=":
            l, ls = el.term(raw.args[0], {})
            r, rs = el.term(raw.args[1], {})
            el.sorts.unify(ls, rs, raw.pos)
            sides.append((("eq", l, r), BOOL, raw.pos))
        else:
            sides.append((*el.term(raw, {}), raw.pos))
    (l, ls, lpos), (r, rs, _) = sides
    el.sorts.unify(ls, rs, lpos)
    return el.build(l), el.build(r), el.new_symbols()


# -- printer -------------------------------------------------------------------

_FORMULA_PREC = {Implies: (10, "==>"), Or: (20, "\\/"), And: (30, "/\\")}


class _Printer:
    def __init__(self, annotate=True):
        self.annotate = annotate
        self.seen_free: set[str] = set()

    def formula(self, f, prec=0, tail=True, bound=frozenset()):
        if isinstance(f, Quant):
            kw = "EX" if isinstance(f, Exists) else "ALL"
            ann = "" if f.sort == LIST else f":{f.sort.value}"
            s = f"{kw} {f.var}{ann}. " + self.formula(f.body, 0, True, bound | {f.var})
            return s if tail else f"({s})"
        cls = type(f)
        if cls in _FORMULA_PREC:
            p, op = _FORMULA_PREC[cls]
            left = self.formula(f.left, p + 1, False, bound)
            right = self.formula(f.right, p, tail, bound)
            return _paren(f"{left} {op} {right}", p < prec)
        if isinstance(f, Not):
            if isinstance(f.body, Eq):
                return _paren(self.eq(f.body, bound, "~="), 40 < prec)
            return _paren("~ " + self.formula(f.body, _NOT_RBP, tail, bound), _NOT_RBP < prec)
        if isinstance(f, Eq):
            return _paren(self.eq(f, bound), 40 < prec)
        if isinstance(f, Atom):
            return self.term(f.term, prec, bound)
        raise TypeError(f"not a formula: {f!r}")

    def eq(self, f, bound, op="="):
        lhs = self.term(f.lhs, 41, bound)
        if _is_numeral(f.lhs) and _is_numeral(f.rhs):
            lhs += f":{f.lhs.sort.value}"
        return f"{lhs} {op} " + self.term(f.rhs, 41, bound)

    def term(self, t, prec=0, bound=frozenset()):
        if isinstance(t, Var):
            if t.name in bound or t.sort == LIST or not self.annotate or t.name in self.seen_free:
                return t.name
            self.seen_free.add(t.name)
            return f"{t.name}:{t.sort.value}"
        if isinstance(t, Eq):
            return _paren(self.eq(t, bound), 40 < prec)
        sym, args = t.symbol, t.args
        if sym == "nil" and not args:
            return "[]"
        if sym == "cons" and len(args) == 2:
            items = _list_items(t)
            if items is not None:
                return "[" + ", ".join(self.term(x, 0, bound) for x in items) + "]"
            return _paren(self.term(args[0], 51, bound) + " # " + self.term(args[1], 50, bound), 50 < prec)
        if sym == "append" and len(args) == 2:
            return _paren(self.term(args[0], 51, bound) + " @ " + self.term(args[1], 50, bound), 50 < prec)
        if sym == "leq" and len(args) == 2:
            return _paren(self.term(args[0], 41, bound) + " <= " + self.term(args[1], 41, bound), 40 < prec)
        if not args:
            return sym
        s = " ".join([sym] + [self.term(a, 61, bound) for a in args])
        return _paren(s, 60 < prec)


def _paren(s, cond):
    return f"({s})" if cond else s


def _is_numeral(t):
    return isinstance(t, App) and not t.args and is_literal_symbol(t.symbol)


def _list_items(t):
    items = []
    while isinstance(t, App) and t.symbol == "cons" and len(t.args) == 2:
        items.append(t.args[0])
        t = t.args[1]
    if isinstance(t, App) and t.symbol == "nil" and not t.args:
        return items
    return None


def format_formula(f, annotate=True) -> str:
    """Render a formula (or Eq pattern) in the grammar ``parse_formula`` reads."""
    return _Printer(annotate).formula(f)


def format_term(t, annotate=True) -> str:
    return _Printer(annotate).term(t)


def format_node(node, annotate=False) -> str:
    """Render either a term or a formula; used for trace snippets."""
    if isinstance(node, (Var, App)):
        return format_term(node, annotate)
    return format_formula(node, annotate)
