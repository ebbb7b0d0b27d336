"""Recursive-descent parser for index sets, terms, sequence literals and
formulas.

Grammar summary::

    formula := ("exists" | "forall") ident [":=" term] formula | impl
    impl    := disj ["->" impl]
    disj    := conj {"\\/" conj}
    conj    := lit {"/\\" lit}
    lit     := "~" lit | "(" formula ")" | atom | "true" | "false"
    atom    := term rel term | ident "(" term ")" | "S(" term ")" | "st(" term "," term ")"
    rel     := "=" | "#" | "<" | "<=" | ">" | ">=" | "~~"
    term    := sum;  sum := prod {("+"|"-") prod};  prod := unary {("*"|"/") unary}
    unary   := "-" unary | power;  power := primary ["^" ["-"] int]
    primary := int | ident | "n" | "delta(" rational ")" | "seq{" cell "->" expr, ... "}"
             | ident "(" term, ... ")" | "ite(" formula "," term "," term ")" | "(" term ")"
    set     := diff {"|" diff};  diff := inter {"\\" inter};  inter := unary {"&" unary}
    unary   := "~" unary | "res(" int "," int ")" | "fin{" int, ... "}" | "omega"
             | "evens" | "odds" | ident | "(" set ")"

A call needs its "(" to touch the function name, so ``exists x := a (x = 0)``
reads the witness ``a`` followed by a parenthesized body.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from ..errors import DivisionError, ParseError, PartitionError, RepairWarning
from ..index_algebra import (
    EMPTY,
    OMEGA,
    IndexSet,
    finite_set,
    residue,
)
from ..poly import RationalFunc
from ..sequences import piecewise
from .syntax import (
    BUILTIN_FUNCS,
    And,
    BinOp,
    Bool,
    Call,
    Const,
    Formula,
    Implies,
    Index,
    Ite,
    Neg,
    Not,
    Or,
    Pow,
    Pred,
    Quant,
    Rel,
    SeqLit,
    St,
    Std,
    Term,
    Var,
)

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>/\\|\\/|->|<=|>=|~~|:=|\|=|[-+*/^()=#<>~&|\\{},@\[\]:;.!])
    """,
    re.VERBOSE,
)

KEYWORDS = {"exists", "forall", "true", "false"}
RESERVED_TERMS = {"n", "delta", "seq", "ite", "S", "st"} | set(BUILTIN_FUNCS)


@dataclass(frozen=True)
class Token:
    kind: str  # num, ident, op, end
    text: str
    pos: int
    end: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, pos + 1, text)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), pos, m.end()))
        pos = m.end()
    out.append(Token("end", "", len(text), len(text)))
    return out


SetLookup = Callable[[str], IndexSet | None]


class Parser:
    def __init__(self, text: str, set_names: SetLookup | Mapping | None = None):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        if isinstance(set_names, Mapping):
            mapping = set_names
            set_names = mapping.get
        self.set_names = set_names or (lambda name: None)

    # token helpers -------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, *texts: str) -> bool:
        t = self.tok
        return t.kind in ("op", "ident") and t.text in texts

    def advance(self) -> Token:
        t = self.tok
        self.i = min(self.i + 1, len(self.toks) - 1)
        return t

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.pos, max(tok.end, tok.pos + 1), self.text)

    def expect(self, text: str) -> Token:
        if self.tok.kind not in ("op", "ident") or self.tok.text != text:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def ident(self) -> Token:
        if self.tok.kind != "ident":
            found = self.tok.text or "end of input"
            raise self.error(f"expected a name, found {found!r}")
        return self.advance()

    def integer(self) -> int:
        if self.tok.kind != "num":
            found = self.tok.text or "end of input"
            raise self.error(f"expected an integer, found {found!r}")
        return int(self.advance().text)

    def rational(self) -> Fraction:
        sign = -1 if self.at("-") and self.advance() else 1
        p = self.integer()
        q = 1
        if self.at("/"):
            self.advance()
            tok = self.tok
            q = self.integer()
            if q == 0:
                raise self.error("zero denominator", tok)
        return sign * Fraction(p, q)

    def touching_call(self) -> bool:
        """An identifier immediately followed by '('."""
        nxt = self.peek()
        return nxt.kind == "op" and nxt.text == "(" and nxt.pos == self.tok.end

    def finish(self):
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")

    # formulas ------------------------------------------------------------

    def formula(self) -> Formula:
        if self.at("exists", "forall") and self.tok.kind == "ident":
            kind = self.advance().text
            var = self.ident()
            self._check_var(var)
            witness = None
            if self.at(":="):
                self.advance()
                witness = self.term()
            body = self.formula()
            return Quant(kind, var.text, witness, body)
        return self.implication()

    def _check_var(self, tok: Token):
        if tok.text in RESERVED_TERMS or tok.text in KEYWORDS:
            raise self.error(f"{tok.text!r} is reserved", tok)

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.at("->"):
            self.advance()
            return Implies(left, self._quant_or(self.implication))
        return left

    def _quant_or(self, fallback):
        if self.at("exists", "forall") and self.tok.kind == "ident":
            return self.formula()
        return fallback()

    def disjunction(self) -> Formula:
        out = self.conjunction()
        while self.at("\\/"):
            self.advance()
            out = Or(out, self._quant_or(self.conjunction))
        return out

    def conjunction(self) -> Formula:
        out = self.literal()
        while self.at("/\\"):
            self.advance()
            out = And(out, self._quant_or(self.literal))
        return out

    def literal(self) -> Formula:
        if self.at("~") and self.tok.kind == "op":
            self.advance()
            return Not(self._quant_or(self.literal))
        if self.tok.kind == "ident" and self.tok.text in ("true", "false"):
            return Bool(self.advance().text == "true")
        if self.at("("):
            start = self.i
            try:
                self.advance()
                inner = self.formula()
                self.expect(")")
            except ParseError as first:
                self.i = start
                try:
                    return self.atom()
                except ParseError as second:
                    # report whichever reading got further
                    raise first if first.pos > second.pos else second from None
            if self.at("=", "#", "<", "<=", ">", ">=", "~~", "+", "-", "*", "/", "^"):
                self.i = start
                return self.atom()
            return inner
        return self.atom()

    def atom(self) -> Formula:
        start = self.tok
        if self.tok.kind == "ident" and self.tok.text in ("S", "st") and self.touching_call():
            name = self.advance().text
            self.expect("(")
            first = self.term()
            if name == "S":
                self.expect(")")
                return Std(first)
            self.expect(",")
            second = self.term()
            self.expect(")")
            return St(first, second)
        left = self.term()
        if self.tok.kind == "op" and self.tok.text in ("=", "#", "<", "<=", ">", ">=", "~~"):
            op = self.advance().text
            right = self.term()
            return Rel(op, left, right)
        if (isinstance(left, Call) and len(left.args) == 1
                and left.name not in BUILTIN_FUNCS):
            return Pred(left.name, left.args[0])
        raise self.error("expected a relation after the term", self.tok if self.tok.kind != "end" else start)

    # terms ---------------------------------------------------------------

    def term(self) -> Term:
        out = self.product()
        while self.at("+", "-") and self.tok.kind == "op":
            op = self.advance().text
            out = BinOp(op, out, self.product())
        return out

    def product(self) -> Term:
        out = self.unary()
        while self.at("*", "/") and self.tok.kind == "op":
            op = self.advance().text
            out = BinOp(op, out, self.unary())
        return out

    def unary(self) -> Term:
        if self.at("-") and self.tok.kind == "op":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Term:
        base = self.primary()
        if self.at("^"):
            self.advance()
            sign = -1 if self.at("-") and self.advance() else 1
            return Pow(base, sign * self.integer())
        return base

    def primary(self) -> Term:
        tok = self.tok
        if tok.kind == "num":
            return Const(self.integer())
        if self.at("("):
            self.advance()
            inner = self.term()
            self.expect(")")
            return inner
        if tok.kind != "ident":
            found = tok.text or "end of input"
            raise self.error(f"expected a term, found {found!r}")
        name = tok.text
        if name in KEYWORDS:
            raise self.error(f"{name!r} cannot start a term")
        if name == "n" and not self.touching_call():
            self.advance()
            return Index()
        if name == "delta":
            self.advance()
            self.expect("(")
            q = self.rational()
            self.expect(")")
            return Const(q)
        if name == "seq" and self.peek().text == "{":
            return SeqLit(self.seq_literal())
        if name == "ite" and self.touching_call():
            self.advance()
            self.expect("(")
            cond = self.formula()
            self.expect(",")
            then = self.term()
            self.expect(",")
            other = self.term()
            self.expect(")")
            return Ite(cond, then, other)
        if self.touching_call():
            self.advance()
            self.expect("(")
            args = [self.term()]
            while self.at(","):
                self.advance()
                args.append(self.term())
            self.expect(")")
            want = BUILTIN_FUNCS.get(name)
            if want is not None and want != len(args):
                raise self.error(f"{name} takes {want} argument(s), got {len(args)}", tok)
            return Call(name, tuple(args))
        if name in RESERVED_TERMS:
            raise self.error(f"{name!r} is reserved", tok)
        self.advance()
        return Var(name)

    # sequence literals ---------------------------------------------------

    def seq_literal(self):
        start = self.advance()
        self.expect("{")
        pieces = []
        while True:
            cell = self.set_expr()
            self.expect("->")
            expr_tok = self.tok
            expr = self.term()
            pieces.append((cell, self._rational_func(expr, expr_tok)))
            if self.at(","):
                self.advance()
                continue
            break
        end = self.expect("}")
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RepairWarning)
                return piecewise(pieces)
        except PartitionError as exc:
            raise ParseError(str(exc), start.pos, end.end, self.text) from None

    def _rational_func(self, t: Term, tok: Token) -> RationalFunc:
        try:
            return to_rational_func(t)
        except (TypeError, DivisionError) as exc:
            raise ParseError(str(exc), tok.pos, self.tok.pos, self.text) from None

    # index sets ----------------------------------------------------------

    def set_expr(self) -> IndexSet:
        out = self.set_diff()
        while self.at("|"):
            self.advance()
            out = out | self.set_diff()
        return out

    def set_diff(self) -> IndexSet:
        out = self.set_inter()
        while self.at("\\"):
            self.advance()
            out = out - self.set_inter()
        return out

    def set_inter(self) -> IndexSet:
        out = self.set_unary()
        while self.at("&"):
            self.advance()
            out = out & self.set_unary()
        return out

    def set_unary(self) -> IndexSet:
        tok = self.tok
        if self.at("~"):
            self.advance()
            return ~self.set_unary()
        if self.at("("):
            self.advance()
            inner = self.set_expr()
            self.expect(")")
            return inner
        if tok.kind != "ident":
            found = tok.text or "end of input"
            raise self.error(f"expected an index set, found {found!r}")
        name = tok.text
        if name == "res":
            self.advance()
            self.expect("(")
            r = self.integer()
            self.expect(",")
            m = self.integer()
            end = self.expect(")")
            if m < 1 or r >= m:
                raise ParseError(f"res({r},{m}) needs 0 <= r < m", tok.pos, end.end, self.text)
            return residue(r, m)
        if name == "fin":
            self.advance()
            self.expect("{")
            items = []
            if not self.at("}"):
                items.append(self.integer())
                while self.at(","):
                    self.advance()
                    items.append(self.integer())
            self.expect("}")
            return finite_set(items)
        self.advance()
        if name == "omega":
            return OMEGA
        if name == "empty":
            return EMPTY
        if name == "evens":
            return residue(0, 2)
        if name == "odds":
            return residue(1, 2)
        found = self.set_names(name)
        if isinstance(found, IndexSet):
            return found
        raise ParseError(f"unknown index set {name!r}", tok.pos, tok.end, self.text)


def to_rational_func(t: Term) -> RationalFunc:
    """Read a term in the index variable alone as a rational function."""
    if isinstance(t, Const):
        return RationalFunc.const(t.value)
    if isinstance(t, Index):
        return RationalFunc.var()
    if isinstance(t, Neg):
        return -to_rational_func(t.arg)
    if isinstance(t, BinOp):
        a, b = to_rational_func(t.left), to_rational_func(t.right)
        if t.op == "+":
            return a + b
        if t.op == "-":
            return a - b
        if t.op == "*":
            return a * b
        return a / b
    if isinstance(t, Pow):
        base = to_rational_func(t.base)
        out = RationalFunc.const(1)
        for _ in range(abs(t.exp)):
            out = out * base
        return RationalFunc.const(1) / out if t.exp < 0 else out
    raise TypeError(f"piece expressions may only use n and rationals, not {t}")


# entry points ---------------------------------------------------------------


def parse(text: str, set_names=None) -> Formula:
    p = Parser(text, set_names)
    phi = p.formula()
    p.finish()
    return phi


parse_formula = parse


def parse_term(text: str, set_names=None) -> Term:
    p = Parser(text, set_names)
    t = p.term()
    p.finish()
    return t


def parse_set(text: str, set_names=None) -> IndexSet:
    p = Parser(text, set_names)
    s = p.set_expr()
    p.finish()
    return s


def parse_seq(text: str, set_names=None):
    """Parse a closed term such as ``seq{...}`` or ``1/(n+1)`` into a Seq."""
    from .terms import eval_term

    return eval_term(parse_term(text, set_names), {})
