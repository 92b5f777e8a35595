"""Theory files: symbols, rules, lemmas and ``reversed`` requests.

A declaration starts at column 1; indented lines continue it.  Lines whose
first character is ``#`` are comments.  Forms::

    symbol foo :: list => list => bool
    rule NAME: LHS == RHS
    lemma NAME: "FORMULA"
    reversed NAME [as NEW] [expecting "FORMULA"]
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .errors import ParseError, TheoryError
from .rules import Rule, parse_rule
from .semantics import builtin_signature
from .syntax import SORT_NAMES, parse_formula_ext
from .terms import Signature

_NAME = r"[A-Za-z_][A-Za-z0-9_']*"
_SYMBOL_RE = re.compile(rf"symbol\s+({_NAME})\s*::\s*(.+)$", re.DOTALL)
_LEMMA_RE = re.compile(rf"lemma\s+({_NAME})\s*:\s*", re.DOTALL)
_REVERSED_RE = re.compile(
    rf"reversed\s+({_NAME})(?:\s+as\s+({_NAME}))?(?:\s+(expecting)\s+)?", re.DOTALL
)


@dataclass(frozen=True)
class SymbolDecl:
    name: str
    arg_sorts: tuple
    result: object
    line: int


@dataclass(frozen=True)
class RuleDecl:
    rule: Rule
    line: int

    @property
    def name(self):
        return self.rule.name


@dataclass(frozen=True)
class LemmaDecl:
    name: str
    formula: object
    line: int


@dataclass(frozen=True)
class ReversedDecl:
    source: str
    name: str
    expected: Optional[object]
    line: int


@dataclass
class TheoryFile:
    decls: list = field(default_factory=list)
    signature: Signature = field(default_factory=builtin_signature)

    @property
    def rules(self):
        return [d.rule for d in self.decls if isinstance(d, RuleDecl)]

    @property
    def lemmas(self):
        return [d for d in self.decls if isinstance(d, LemmaDecl)]

    @property
    def requests(self):
        return [d for d in self.decls if isinstance(d, ReversedDecl)]


def logical_lines(text: str):
    """Group physical lines into declarations: ``(start_line, text)`` pairs."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        if line[0] in " \t":
            if not out:
                raise ParseError("indented line does not continue a declaration", lineno, 1)
            out[-1][1].append(line)
        else:
            out.append((lineno, [line]))
    return [(n, "\n".join(parts).rstrip()) for n, parts in out]


def _unquote(text, line, col):
    """Strip surrounding double quotes; returns (inner, line, col) of the inner text."""
    s = text.strip()
    lead = text[: len(text) - len(text.lstrip())]
    if "\n" in lead:
        line += lead.count("\n")
        col = len(lead) - lead.rfind("\n")
    else:
        col += len(lead)
    if s.startswith('"'):
        if not s.endswith('"') or len(s) < 2:
            raise ParseError("unterminated quoted formula", line, col)
        return s[1:-1], line, col + 1
    return s, line, col


def _parse_sorts(text, line):
    names = [p.strip() for p in text.split("=>")]
    try:
        sorts = [SORT_NAMES[n] for n in names]
    except KeyError as e:
        raise ParseError(f"unknown sort {e.args[0]!r}", line, 1) from None
    return tuple(sorts[:-1]), sorts[-1]


def parse_theory(text: str, sig: Signature = None) -> TheoryFile:
    """Parse and sort-check a theory file, checking name references."""
    sig = sig if sig is not None else builtin_signature()
    th = TheoryFile(signature=sig)
    lemma_names: set[str] = set()
    rule_names: set[str] = set()
    for line, decl in logical_lines(text):
        keyword = decl.split(None, 1)[0]
        if keyword == "symbol":
            m = _SYMBOL_RE.match(decl)
            if m is None:
                raise ParseError("expected 'symbol NAME :: SORT => ... => SORT'", line, 1)
            args, res = _parse_sorts(m.group(2), line)
            th.signature = th.signature.extend({m.group(1): (args, res)})
            th.decls.append(SymbolDecl(m.group(1), args, res, line))
        elif keyword == "rule":
            rule, new = parse_rule(decl, th.signature, line=line, extend=True)
            th.signature = th.signature.extend(new)
            if rule.name in rule_names:
                raise TheoryError(f"duplicate rule name {rule.name!r}", line)
            rule_names.add(rule.name)
            th.decls.append(RuleDecl(rule, line))
        elif keyword == "lemma":
            m = _LEMMA_RE.match(decl)
            if m is None:
                raise ParseError("expected 'lemma NAME: FORMULA'", line, 1)
            body, bline, bcol = _unquote(decl[m.end():], line, m.end() + 1)
            f, new = parse_formula_ext(body, th.signature, extend=True, line=bline, col=bcol)
            th.signature = th.signature.extend(new)
            _claim(lemma_names, m.group(1), line)
            th.decls.append(LemmaDecl(m.group(1), f, line))
        elif keyword == "reversed":
            m = _REVERSED_RE.match(decl)
            if m is None:
                raise ParseError("expected 'reversed NAME [as NEW] [expecting FORMULA]'", line, 1)
            source, name = m.group(1), m.group(2) or f"{m.group(1)}_reversed"
            rest = decl[m.end():]
            expected = None
            if rest.strip():
                if m.group(3) is None:
                    raise ParseError(f"unexpected text after reversed {source}", line, m.end() + 1)
                body, bline, bcol = _unquote(rest, line, m.end() + 1)
                expected, new = parse_formula_ext(body, th.signature, extend=True, line=bline, col=bcol)
                th.signature = th.signature.extend(new)
            if source not in lemma_names:
                raise TheoryError(f"reversed refers to unknown lemma {source!r}", line)
            _claim(lemma_names, name, line)
            th.decls.append(ReversedDecl(source, name, expected, line))
        else:
            raise ParseError(f"unknown declaration {keyword!r}", line, 1)
    return th


def _claim(names, name, line):
    if name in names:
        raise TheoryError(f"duplicate lemma name {name!r}", line)
    names.add(name)
