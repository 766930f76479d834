"""LTL formula trees: parsing, negation normal form, X-normalization.

Formulas are immutable trees built from frozen dataclasses; structural
equality and hashing come for free, so shared subterms compare equal.
The surface syntax keeps the sugar operators (F, G, ->, !); the NNF core
restricts to literals, constants, And/Or, X, U and V (release).
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class Formula:
    """Base class for all formula nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class TrueConst(Formula):
    pass


@dataclass(frozen=True)
class FalseConst(Formula):
    pass


@dataclass(frozen=True)
class Prop(Formula):
    name: str


@dataclass(frozen=True)
class Lit(Formula):
    """NNF literal: a proposition with an explicit polarity."""

    name: str
    positive: bool


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    child: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Release(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Finally(Formula):
    child: Formula


@dataclass(frozen=True)
class Globally(Formula):
    child: Formula


TRUE = TrueConst()
FALSE = FalseConst()


def children(f: Formula) -> tuple[Formula, ...]:
    match f:
        case Not(c) | Next(c) | Finally(c) | Globally(c):
            return (c,)
        case And(a, b) | Or(a, b) | Implies(a, b) | Until(a, b) | Release(a, b):
            return (a, b)
        case _:
            return ()


def size(f: Formula) -> int:
    """Node count of the tree (shared subterms counted per occurrence)."""
    return 1 + sum(size(c) for c in children(f))


def props_of(f: Formula) -> set[str]:
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Prop) or isinstance(g, Lit):
            out.add(g.name)
        else:
            stack.extend(children(g))
    return out


def subformulas(f: Formula) -> list[Formula]:
    """All structurally distinct subformulas in deterministic bottom-up order.

    Children precede parents; duplicates are listed once, at their first
    (deepest-leftmost) completion point.
    """
    out: list[Formula] = []
    seen: set[Formula] = set()

    def visit(g: Formula) -> None:
        if g in seen:
            return
        for c in children(g):
            visit(c)
        if g not in seen:
            seen.add(g)
            out.append(g)

    visit(f)
    return out


# --- parsing ---------------------------------------------------------------

class LtlSyntaxError(ValueError):
    """Malformed formula text; `position` is a 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"syntax error at position {position}: {message}")
        self.position = position


_KEYWORDS = {"true", "false", "U", "R", "V", "X", "F", "G"}

_TOKEN_RE = re.compile(
    r"\s+|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>->|\|\||&&|\[\]|<>|[!()])"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """Return (kind, text, position) triples; kind is 'name' or the symbol."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise LtlSyntaxError(f"unknown token {text[pos]!r}", pos)
        if m.lastgroup == "name":
            word = m.group()
            kind = word if word in _KEYWORDS else "name"
            tokens.append((kind, word, pos))
        elif m.lastgroup == "sym":
            tokens.append((m.group(), m.group(), pos))
        pos = m.end()
    return tokens


class _Parser:
    """Recursive descent over the token list.

    Precedence, loosest to tightest: -> (right), ||, &&, U/R/V (right,
    equal precedence), unary (! X F G [] <>), atoms.
    """

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> str | None:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][0]
        return None

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str) -> LtlSyntaxError:
        if self.pos < len(self.tokens):
            return LtlSyntaxError(message, self.tokens[self.pos][2])
        return LtlSyntaxError(message + " (unexpected end of input)", len(self.text))

    def parse(self) -> Formula:
        f = self.parse_implies()
        if self.peek() is not None:
            raise self.error(f"unexpected {self.tokens[self.pos][1]!r}")
        return f

    def parse_implies(self) -> Formula:
        left = self.parse_or()
        if self.peek() == "->":
            self.advance()
            return Implies(left, self.parse_implies())
        return left

    def parse_or(self) -> Formula:
        left = self.parse_and()
        while self.peek() == "||":
            self.advance()
            left = Or(left, self.parse_and())
        return left

    def parse_and(self) -> Formula:
        left = self.parse_until()
        while self.peek() == "&&":
            self.advance()
            left = And(left, self.parse_until())
        return left

    def parse_until(self) -> Formula:
        left = self.parse_unary()
        kind = self.peek()
        if kind == "U":
            self.advance()
            return Until(left, self.parse_until())
        if kind in ("R", "V"):
            self.advance()
            return Release(left, self.parse_until())
        return left

    def parse_unary(self) -> Formula:
        kind = self.peek()
        if kind == "!":
            self.advance()
            return Not(self.parse_unary())
        if kind == "X":
            self.advance()
            return Next(self.parse_unary())
        if kind in ("F", "<>"):
            self.advance()
            return Finally(self.parse_unary())
        if kind in ("G", "[]"):
            self.advance()
            return Globally(self.parse_unary())
        return self.parse_atom()

    def parse_atom(self) -> Formula:
        kind = self.peek()
        if kind is None:
            raise self.error("missing operand")
        if kind == "true":
            self.advance()
            return TRUE
        if kind == "false":
            self.advance()
            return FALSE
        if kind == "name":
            return Prop(self.advance()[1])
        if kind == "(":
            self.advance()
            f = self.parse_implies()
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.advance()
            return f
        raise self.error(f"unexpected {self.tokens[self.pos][1]!r}")


def parse_ltl(text: str) -> Formula:
    """Parse a formula in the ASCII surface syntax.

    Raises LtlSyntaxError with a character position on malformed input.
    """
    return _Parser(text).parse()


# --- printing --------------------------------------------------------------

# precedence levels for minimal-parenthesis printing
_IMPLIES, _OR, _AND, _UNTIL, _UNARY, _ATOM = range(6)


def _wrap(f: Formula, min_level: int) -> str:
    text, level = _render(f)
    if level < min_level:
        return f"({text})"
    return text


def _render(f: Formula) -> tuple[str, int]:
    match f:
        case TrueConst():
            return "true", _ATOM
        case FalseConst():
            return "false", _ATOM
        case Prop(name):
            return name, _ATOM
        case Lit(name, positive):
            return (name, _ATOM) if positive else ("!" + name, _UNARY)
        case Not(c):
            return "!" + _wrap(c, _UNARY), _UNARY
        case Next(c):
            return "X " + _wrap(c, _UNARY), _UNARY
        case Finally(c):
            return "F " + _wrap(c, _UNARY), _UNARY
        case Globally(c):
            return "G " + _wrap(c, _UNARY), _UNARY
        case And(a, b):
            return f"{_wrap(a, _AND)} && {_wrap(b, _AND + 1)}", _AND
        case Or(a, b):
            return f"{_wrap(a, _OR)} || {_wrap(b, _OR + 1)}", _OR
        case Implies(a, b):
            return f"{_wrap(a, _IMPLIES + 1)} -> {_wrap(b, _IMPLIES)}", _IMPLIES
        case Until(a, b):
            return f"{_wrap(a, _UNTIL + 1)} U {_wrap(b, _UNTIL)}", _UNTIL
        case Release(a, b):
            return f"{_wrap(a, _UNTIL + 1)} R {_wrap(b, _UNTIL)}", _UNTIL
    raise TypeError(f"not a formula: {f!r}")


def pretty(f: Formula) -> str:
    """Render with minimal parentheses; parse(pretty(f)) == f for surface trees."""
    return _render(f)[0]


def _sugared(f: Formula) -> Formula:
    match f:
        case Until(TrueConst(), b):
            return Finally(_sugared(b))
        case Release(FalseConst(), b):
            return Globally(_sugared(b))
        case Until(a, b):
            return Until(_sugared(a), _sugared(b))
        case Release(a, b):
            return Release(_sugared(a), _sugared(b))
        case And(a, b):
            return And(_sugared(a), _sugared(b))
        case Or(a, b):
            return Or(_sugared(a), _sugared(b))
        case Next(c):
            return Next(_sugared(c))
        case _:
            return f


def display_name(f: Formula) -> str:
    """Human-facing label: like pretty() but folds `true U x` back to `F x`
    and `false V x` back to `G x`. Display only; not meant to be reparsed."""
    return pretty(_sugared(f))


# --- negation normal form --------------------------------------------------

def _mk_and(a: Formula, b: Formula) -> Formula:
    if a == TRUE:
        return b
    if b == TRUE:
        return a
    if a == FALSE or b == FALSE:
        return FALSE
    return And(a, b)


def _mk_or(a: Formula, b: Formula) -> Formula:
    if a == FALSE:
        return b
    if b == FALSE:
        return a
    if a == TRUE or b == TRUE:
        return TRUE
    return Or(a, b)


def _mk_next(c: Formula) -> Formula:
    if isinstance(c, (TrueConst, FalseConst)):
        return c
    return Next(c)


def _mk_until(a: Formula, b: Formula) -> Formula:
    if isinstance(b, (TrueConst, FalseConst)):
        return b
    if a == FALSE:
        return b
    return Until(a, b)


def _mk_release(a: Formula, b: Formula) -> Formula:
    if isinstance(b, (TrueConst, FalseConst)):
        return b
    if a == TRUE:
        return b
    return Release(a, b)


def to_nnf(f: Formula, negate: bool = False) -> Formula:
    """Negation normal form of f (of !f when `negate` is set).

    F and G are expanded (F x = true U x, G x = false V x), implication is
    rewritten, and negation is pushed down to literals via the U/V and
    And/Or dualities. Constant subterms are folded away.
    """
    match f:
        case TrueConst():
            return FALSE if negate else TRUE
        case FalseConst():
            return TRUE if negate else FALSE
        case Prop(name):
            return Lit(name, not negate)
        case Lit(name, positive):
            return Lit(name, positive != negate)
        case Not(c):
            return to_nnf(c, not negate)
        case And(a, b):
            na, nb = to_nnf(a, negate), to_nnf(b, negate)
            return _mk_or(na, nb) if negate else _mk_and(na, nb)
        case Or(a, b):
            na, nb = to_nnf(a, negate), to_nnf(b, negate)
            return _mk_and(na, nb) if negate else _mk_or(na, nb)
        case Implies(a, b):
            na, nb = to_nnf(a, not negate), to_nnf(b, negate)
            return _mk_and(na, nb) if negate else _mk_or(na, nb)
        case Next(c):
            return _mk_next(to_nnf(c, negate))
        case Until(a, b):
            na, nb = to_nnf(a, negate), to_nnf(b, negate)
            return _mk_release(na, nb) if negate else _mk_until(na, nb)
        case Release(a, b):
            na, nb = to_nnf(a, negate), to_nnf(b, negate)
            return _mk_until(na, nb) if negate else _mk_release(na, nb)
        case Finally(c):
            nc = to_nnf(c, negate)
            return _mk_release(FALSE, nc) if negate else _mk_until(TRUE, nc)
        case Globally(c):
            nc = to_nnf(c, negate)
            return _mk_until(TRUE, nc) if negate else _mk_release(FALSE, nc)
    raise TypeError(f"not a formula: {f!r}")


def is_nnf(f: Formula) -> bool:
    """True iff the tree uses only the NNF core node kinds."""
    if isinstance(f, (Not, Implies, Finally, Globally, Prop)):
        return False
    return all(is_nnf(c) for c in children(f))


# --- X-normalization -------------------------------------------------------

def _stacked_literal(f: Formula) -> bool:
    while isinstance(f, Next):
        f = f.child
    return isinstance(f, Lit)


def is_x_normalized(f: Formula) -> bool:
    """True iff every Next in the tree stacks only over a literal."""
    if isinstance(f, Next):
        return _stacked_literal(f.child)
    return all(is_x_normalized(c) for c in children(f))


def _push_next(f: Formula) -> Formula:
    """Wrap an already X-normalized NNF formula in one X, distributing it
    through every connective so it lands on literals."""
    match f:
        case TrueConst() | FalseConst():
            return f
        case Lit(_, _) | Next(_):
            return Next(f)
        case And(a, b):
            return And(_push_next(a), _push_next(b))
        case Or(a, b):
            return Or(_push_next(a), _push_next(b))
        case Until(a, b):
            return Until(_push_next(a), _push_next(b))
        case Release(a, b):
            return Release(_push_next(a), _push_next(b))
    raise ValueError(f"not an NNF formula: {f!r}")


def x_normalize(f: Formula) -> Formula:
    """Rewrite an NNF formula so no connective other than X itself occurs
    beneath a Next node. X commutes with all remaining connectives, so the
    result is equivalent to the input."""
    match f:
        case Next(c):
            return _push_next(x_normalize(c))
        case And(a, b):
            return And(x_normalize(a), x_normalize(b))
        case Or(a, b):
            return Or(x_normalize(a), x_normalize(b))
        case Until(a, b):
            return Until(x_normalize(a), x_normalize(b))
        case Release(a, b):
            return Release(x_normalize(a), x_normalize(b))
        case _:
            return f
