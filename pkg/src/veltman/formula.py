"""Syntax of the interpretability language.

Formulas are built from propositional variables, ``bot``/``top``, the unary
connectives ``~`` ``[]`` ``<>`` and the binary connectives ``&`` ``|`` ``|>``
``->``.  ``[]A`` and ``<>A`` are first-class AST nodes; :func:`normalize`
rewrites them into the ``|>``-only core: ``[]A`` becomes ``~A |> bot`` and
``<>A`` becomes ``~(A |> bot)``.

Concrete grammar (EBNF)::

    form  := imp
    imp   := rhd ("->" imp)?          # right-associative
    rhd   := or ("|>" or)*            # left-associative
    or    := and ("|" and)*
    and   := unary ("&" unary)*
    unary := ("~" | "[]" | "<>") unary | atom
    atom  := ident | "bot" | "top" | "(" form ")"

Binding, tightest first: ``~ [] <>``, then ``&``, ``|``, ``|>``, ``->``.
Identifiers match ``[a-z][a-zA-Z0-9_]*``; ``bot`` and ``top`` are reserved.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable


class Formula:
    """Base class for AST nodes.  Nodes are immutable and compare structurally."""

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class Var(Formula):
    name: str


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Neg(Formula):
    arg: Formula


@dataclass(frozen=True)
class Box(Formula):
    arg: Formula


@dataclass(frozen=True)
class Dia(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Impl(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Rhd(Formula):
    left: Formula
    right: Formula


BOT = Bot()
TOP = Top()


class ParseError(ValueError):
    """Raised on malformed input; carries the offset of the offending token."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


_TOKEN = re.compile(r"->|\|>|\[\]|<>|[~&|()]|[a-z][a-zA-Z0-9_]*")
_WS = re.compile(r"\s*")

_RESERVED = {"bot", "top"}


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        pos = _WS.match(text, pos).end()
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        tokens.append((m.group(), pos))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        if self.i < len(self.tokens):
            return self.tokens[self.i][1]
        return len(self.text)

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.pos())
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.peek()
        if got != tok:
            raise ParseError(f"expected {tok!r}, got {got!r}" if got else f"expected {tok!r}, got end of input",
                             self.pos())
        self.i += 1

    def parse_form(self) -> Formula:
        return self.parse_imp()

    def parse_imp(self) -> Formula:
        left = self.parse_rhd()
        if self.peek() == "->":
            self.take()
            return Impl(left, self.parse_imp())
        return left

    def parse_rhd(self) -> Formula:
        node = self.parse_or()
        while self.peek() == "|>":
            self.take()
            node = Rhd(node, self.parse_or())
        return node

    def parse_or(self) -> Formula:
        node = self.parse_and()
        while self.peek() == "|":
            self.take()
            node = Or(node, self.parse_and())
        return node

    def parse_and(self) -> Formula:
        node = self.parse_unary()
        while self.peek() == "&":
            self.take()
            node = And(node, self.parse_unary())
        return node

    def parse_unary(self) -> Formula:
        tok = self.peek()
        if tok == "~":
            self.take()
            return Neg(self.parse_unary())
        if tok == "[]":
            self.take()
            return Box(self.parse_unary())
        if tok == "<>":
            self.take()
            return Dia(self.parse_unary())
        return self.parse_atom()

    def parse_atom(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.pos())
        if tok == "(":
            self.take()
            node = self.parse_form()
            self.expect(")")
            return node
        if tok == "bot":
            self.take()
            return BOT
        if tok == "top":
            self.take()
            return TOP
        if re.fullmatch(r"[a-z][a-zA-Z0-9_]*", tok):
            self.take()
            return Var(tok)
        raise ParseError(f"unexpected token {tok!r}", self.pos())


def parse(text: str) -> Formula:
    """Parse ``text`` into a Formula; raises ParseError with a position on bad input."""
    p = _Parser(text)
    node = p.parse_form()
    if p.peek() is not None:
        raise ParseError(f"trailing input {p.peek()!r}", p.pos())
    return node


# Binding strength used by the printer; higher binds tighter.
_ATOM, _UNARY, _AND, _OR, _RHD, _IMPL = 100, 90, 80, 70, 60, 50


def _level(f: Formula) -> int:
    if isinstance(f, (Var, Bot, Top)):
        return _ATOM
    if isinstance(f, (Neg, Box, Dia)):
        return _UNARY
    if isinstance(f, And):
        return _AND
    if isinstance(f, Or):
        return _OR
    if isinstance(f, Rhd):
        return _RHD
    if isinstance(f, Impl):
        return _IMPL
    raise TypeError(f"not a formula: {f!r}")


def pretty(f: Formula) -> str:
    """Render ``f`` with minimal parentheses; `parse(pretty(f)) == f`."""

    def wrap(child: Formula, strict_below: int) -> str:
        s = pretty(child)
        return f"({s})" if _level(child) < strict_below else s

    if isinstance(f, Var):
        return f.name
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Neg):
        return "~" + wrap(f.arg, _UNARY)
    if isinstance(f, Box):
        return "[]" + wrap(f.arg, _UNARY)
    if isinstance(f, Dia):
        return "<>" + wrap(f.arg, _UNARY)
    if isinstance(f, And):
        # left-associative: the right child needs parens when it is itself an &
        return f"{wrap(f.left, _AND)} & {wrap(f.right, _AND + 1)}"
    if isinstance(f, Or):
        return f"{wrap(f.left, _OR)} | {wrap(f.right, _OR + 1)}"
    if isinstance(f, Rhd):
        return f"{wrap(f.left, _RHD)} |> {wrap(f.right, _RHD + 1)}"
    if isinstance(f, Impl):
        # right-associative
        return f"{wrap(f.left, _IMPL + 1)} -> {wrap(f.right, _IMPL)}"
    raise TypeError(f"not a formula: {f!r}")


def normalize(f: Formula) -> Formula:
    """Eliminate [] and <> bottom-up: []A -> ~A |> bot, <>A -> ~(A |> bot).

    Idempotent; leaves every other connective untouched.
    """
    if isinstance(f, (Var, Bot, Top)):
        return f
    if isinstance(f, Neg):
        return Neg(normalize(f.arg))
    if isinstance(f, Box):
        return Rhd(Neg(normalize(f.arg)), BOT)
    if isinstance(f, Dia):
        return Neg(Rhd(normalize(f.arg), BOT))
    if isinstance(f, And):
        return And(normalize(f.left), normalize(f.right))
    if isinstance(f, Or):
        return Or(normalize(f.left), normalize(f.right))
    if isinstance(f, Impl):
        return Impl(normalize(f.left), normalize(f.right))
    if isinstance(f, Rhd):
        return Rhd(normalize(f.left), normalize(f.right))
    raise TypeError(f"not a formula: {f!r}")


def subformulas(f: Formula) -> frozenset[Formula]:
    """All subformulas of ``f`` including ``f``.  [] and <> nodes contribute
    themselves and their arguments, not their normalized expansions."""
    out: set[Formula] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in out:
            continue
        out.add(g)
        if isinstance(g, (Neg, Box, Dia)):
            stack.append(g.arg)
        elif isinstance(g, (And, Or, Impl, Rhd)):
            stack.append(g.left)
            stack.append(g.right)
    return frozenset(out)


def single_negation(f: Formula) -> Formula:
    """~A for non-negations, the stripped body for negations."""
    return f.arg if isinstance(f, Neg) else Neg(f)


def variables(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Var))


def d_closure(seeds: Iterable[Formula]) -> frozenset[Formula]:
    """Least superset of ``seeds`` plus top that is closed under subformulas
    and single negation."""
    closed: set[Formula] = set()
    todo = list(seeds) + [TOP]
    while todo:
        g = todo.pop()
        if g in closed:
            continue
        closed.add(g)
        todo.extend(subformulas(g))
        todo.append(single_negation(g))
    return frozenset(closed)


def _pool(gamma: Iterable[Formula]) -> frozenset[Formula]:
    """Antecedents and succedents of the |>-formulas in ``gamma``, read off the
    normalized forms (so a [] node contributes via its ``~A |> bot`` shape)."""
    out: set[Formula] = set()
    for g in gamma:
        n = normalize(g)
        if isinstance(n, Rhd):
            out.add(n.left)
            out.add(n.right)
    return frozenset(out)


def adequate_set(d: Iterable[Formula]) -> frozenset[Formula]:
    """Least superset of ``d`` closed under the five structure conditions:
    subformulas, single negation, membership of ``bot |> bot``, pairing of
    |>-components, and ``[]~A`` for every A in ``d``.
    """
    d = frozenset(d)
    gamma: set[Formula] = set(d)
    gamma.add(Rhd(BOT, BOT))
    gamma.update(Box(Neg(a)) for a in d)
    while True:
        new: set[Formula] = set()
        for g in gamma:
            for s in subformulas(g):
                if s not in gamma:
                    new.add(s)
            sn = single_negation(g)
            if sn not in gamma:
                new.add(sn)
        pool = _pool(gamma)
        for a in pool:
            for b in pool:
                g = Rhd(a, b)
                if g not in gamma:
                    new.add(g)
        if not new:
            return frozenset(gamma)
        gamma.update(new)


def is_adequate(gamma: Iterable[Formula], d: Iterable[Formula]) -> bool:
    """Check the five structure conditions for ``gamma`` over ``d`` directly."""
    gamma = frozenset(gamma)
    d = frozenset(d)
    if not d <= gamma:
        return False
    for g in gamma:
        if not subformulas(g) <= gamma:
            return False
        if single_negation(g) not in gamma:
            return False
    if Rhd(BOT, BOT) not in gamma:
        return False
    pool = _pool(gamma)
    for a in pool:
        for b in pool:
            if Rhd(a, b) not in gamma:
                return False
    return all(Box(Neg(a)) in gamma for a in d)
