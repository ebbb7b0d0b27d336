"""Abstract syntax for terms and formulas, with a printer whose output the
parser reads back to the same tree."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from ..sequences import Seq

# terms ----------------------------------------------------------------------


class Term:
    __slots__ = ()

    def __str__(self):
        return format_term(self)

    def __repr__(self):
        return f"{type(self).__name__}({self})"


@dataclass(frozen=True, repr=False)
class Var(Term):
    name: str


@dataclass(frozen=True, repr=False)
class Const(Term):
    """delta(q), the standard copy of a rational."""

    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True, repr=False)
class Index(Term):
    """The index sequence n."""


@dataclass(frozen=True, repr=False)
class SeqLit(Term):
    seq: Seq


@dataclass(frozen=True, repr=False)
class BinOp(Term):
    op: str
    left: Term
    right: Term


@dataclass(frozen=True, repr=False)
class Neg(Term):
    arg: Term


@dataclass(frozen=True, repr=False)
class Pow(Term):
    base: Term
    exp: int


@dataclass(frozen=True, repr=False)
class Call(Term):
    """Library functions (abs, min, max, inv) and user-defined functions."""

    name: str
    args: tuple


@dataclass(frozen=True, repr=False)
class Ite(Term):
    """Definition by cases: ``then`` where ``cond`` holds, ``other`` elsewhere."""

    cond: "Formula"
    then: Term
    other: Term


BUILTIN_FUNCS = {"abs": 1, "min": 2, "max": 2, "inv": 1}

# formulas -------------------------------------------------------------------


class Formula:
    __slots__ = ()

    def __str__(self):
        return format_formula(self)

    def __repr__(self):
        return f"{type(self).__name__}({self})"


@dataclass(frozen=True, repr=False)
class Bool(Formula):
    value: bool


@dataclass(frozen=True, repr=False)
class Rel(Formula):
    """left op right for op in = # < <= > >= ~~."""

    op: str
    left: Term
    right: Term


@dataclass(frozen=True, repr=False)
class Pred(Formula):
    """Internal predicate applied to a term."""

    name: str
    arg: Term


@dataclass(frozen=True, repr=False)
class Std(Formula):
    """S(t): t is standard."""

    arg: Term


@dataclass(frozen=True, repr=False)
class St(Formula):
    """st(x, y): x is the standard part of y."""

    part: Term
    arg: Term


@dataclass(frozen=True, repr=False)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Quant(Formula):
    kind: str  # "exists" or "forall"
    var: str
    witness: Term | None
    body: Formula


INDEX_RELATIONS = ("=", "#", "<", "<=", ">", ">=")
RELATIONS = INDEX_RELATIONS + ("~~",)


def conj(*parts: Formula) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(*parts: Formula) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


# traversal ------------------------------------------------------------------


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, BinOp):
        yield from subterms(t.left)
        yield from subterms(t.right)
    elif isinstance(t, (Neg,)):
        yield from subterms(t.arg)
    elif isinstance(t, Pow):
        yield from subterms(t.base)
    elif isinstance(t, Call):
        for a in t.args:
            yield from subterms(a)
    elif isinstance(t, Ite):
        for a in atoms(t.cond):
            yield from (s for term in atom_terms(a) for s in subterms(term))
        yield from subterms(t.then)
        yield from subterms(t.other)


def atoms(phi: Formula) -> Iterator[Formula]:
    if isinstance(phi, (Rel, Pred, Std, St, Bool)):
        yield phi
    elif isinstance(phi, Not):
        yield from atoms(phi.arg)
    elif isinstance(phi, (And, Or, Implies)):
        yield from atoms(phi.left)
        yield from atoms(phi.right)
    elif isinstance(phi, Quant):
        yield from atoms(phi.body)


def atom_terms(a: Formula) -> tuple:
    if isinstance(a, Rel):
        return (a.left, a.right)
    if isinstance(a, (Pred, Std)):
        return (a.arg,)
    if isinstance(a, St):
        return (a.part, a.arg)
    return ()


def term_vars(t: Term) -> set[str]:
    return {s.name for s in subterms(t) if isinstance(s, Var)}


def free_vars(phi: Formula) -> set[str]:
    if isinstance(phi, Quant):
        inner = free_vars(phi.body) - {phi.var}
        return inner | (term_vars(phi.witness) if phi.witness is not None else set())
    if isinstance(phi, Not):
        return free_vars(phi.arg)
    if isinstance(phi, (And, Or, Implies)):
        return free_vars(phi.left) | free_vars(phi.right)
    out: set[str] = set()
    for t in atom_terms(phi):
        out |= term_vars(t)
    return out


def connective_count(phi: Formula) -> int:
    if isinstance(phi, Not):
        return 1 + connective_count(phi.arg)
    if isinstance(phi, (And, Or, Implies)):
        return 1 + connective_count(phi.left) + connective_count(phi.right)
    if isinstance(phi, Quant):
        return connective_count(phi.body)
    return 0


def is_quantifier_free(phi: Formula) -> bool:
    if isinstance(phi, Quant):
        return False
    if isinstance(phi, Not):
        return is_quantifier_free(phi.arg)
    if isinstance(phi, (And, Or, Implies)):
        return is_quantifier_free(phi.left) and is_quantifier_free(phi.right)
    return True


# printing -------------------------------------------------------------------


def _q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def seq_literal(seq: Seq) -> str:
    return "seq{" + ", ".join(f"{c} -> {e}" for c, e in seq.pieces) + "}"


def _term_prec(t: Term) -> int:
    if isinstance(t, BinOp):
        return 1 if t.op in "+-" else 2
    if isinstance(t, Neg):
        return 3
    if isinstance(t, Pow):
        return 4
    return 5


def format_term(t: Term) -> str:
    def wrap(child: Term, need: int) -> str:
        text = format_term(child)
        return f"({text})" if _term_prec(child) < need else text

    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        q = t.value
        return str(q.numerator) if q.denominator == 1 and q >= 0 else f"delta({_q(q)})"
    if isinstance(t, Index):
        return "n"
    if isinstance(t, SeqLit):
        return seq_literal(t.seq)
    if isinstance(t, BinOp):
        p = _term_prec(t)
        sep = f" {t.op} " if p == 1 else t.op
        return wrap(t.left, p) + sep + wrap(t.right, p + 1)
    if isinstance(t, Neg):
        return "-" + wrap(t.arg, 3)
    if isinstance(t, Pow):
        return f"{wrap(t.base, 5)}^{t.exp}"
    if isinstance(t, Call):
        return f"{t.name}(" + ", ".join(format_term(a) for a in t.args) + ")"
    if isinstance(t, Ite):
        return f"ite({format_formula(t.cond)}, {format_term(t.then)}, {format_term(t.other)})"
    raise TypeError(f"not a term: {t!r}")


def _formula_prec(phi: Formula) -> int:
    if isinstance(phi, Quant):
        return 0
    if isinstance(phi, Implies):
        return 1
    if isinstance(phi, Or):
        return 2
    if isinstance(phi, And):
        return 3
    if isinstance(phi, Not):
        return 4
    return 5


def format_formula(phi: Formula) -> str:
    def wrap(child: Formula, need: int) -> str:
        text = format_formula(child)
        return f"({text})" if _formula_prec(child) < need else text

    if isinstance(phi, Bool):
        return "true" if phi.value else "false"
    if isinstance(phi, Rel):
        return f"{format_term(phi.left)} {phi.op} {format_term(phi.right)}"
    if isinstance(phi, Pred):
        return f"{phi.name}({format_term(phi.arg)})"
    if isinstance(phi, Std):
        return f"S({format_term(phi.arg)})"
    if isinstance(phi, St):
        return f"st({format_term(phi.part)}, {format_term(phi.arg)})"
    if isinstance(phi, Not):
        return "~" + wrap(phi.arg, 6)
    if isinstance(phi, And):
        return f"{wrap(phi.left, 3)} /\\ {wrap(phi.right, 4)}"
    if isinstance(phi, Or):
        return f"{wrap(phi.left, 2)} \\/ {wrap(phi.right, 3)}"
    if isinstance(phi, Implies):
        return f"{wrap(phi.left, 2)} -> {wrap(phi.right, 1)}"
    if isinstance(phi, Quant):
        head = f"{phi.kind} {phi.var}"
        if phi.witness is not None:
            head += f" := {format_term(phi.witness)}"
        return f"{head} ({format_formula(phi.body)})"
    raise TypeError(f"not a formula: {phi!r}")
