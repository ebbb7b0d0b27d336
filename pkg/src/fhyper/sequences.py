"""Guises: total maps from the naturals to the rationals, given piecewise by
rational functions of the index ``n`` over cells of an index partition.

The class is closed under the field operations, absolute value, min and
max, and every comparison between two guises has a computable truth set.
"""

from __future__ import annotations

import operator
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import ArgumentError, DivisionError, PartitionError, RepairWarning
from .index_algebra import (
    EMPTY,
    OMEGA,
    IndexSet,
    finite_set,
    interval_from,
    union_all,
)
from .poly import RationalFunc

Piece = tuple[IndexSet, RationalFunc]


# limits ---------------------------------------------------------------------


@dataclass(frozen=True)
class Limit:
    """Limit of a single rational function as n grows."""

    kind: str  # "finite", "+inf" or "-inf"
    value: Fraction | None = None

    @classmethod
    def finite(cls, q) -> "Limit":
        return cls("finite", Fraction(q))

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def __str__(self):
        if self.kind == "finite":
            return _fmt(self.value)
        return "+oo" if self.kind == "+inf" else "-oo"


PLUS_INFINITY = Limit("+inf")
MINUS_INFINITY = Limit("-inf")


def limit_of(expr: RationalFunc) -> Limit:
    dn, dd = expr.num.degree, expr.den.degree
    if expr.num.is_zero or dn < dd:
        return Limit.finite(0)
    ratio = expr.num.lead / expr.den.lead
    if dn == dd:
        return Limit.finite(ratio)
    return PLUS_INFINITY if ratio > 0 else MINUS_INFINITY


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# the sequence type ----------------------------------------------------------


@dataclass(frozen=True)
class Seq:
    pieces: tuple
    name: str | None = field(default=None, compare=False)
    repaired: frozenset = field(default=frozenset(), compare=False)

    def __call__(self, i: int) -> Fraction:
        return self.eval(i)

    def eval(self, i: int) -> Fraction:
        for cell, expr in self.pieces:
            if i in cell:
                return expr(i)
        raise PartitionError(f"index {i} is not covered")  # unreachable for canonical values

    def values(self, limit: int) -> list[Fraction]:
        return [self.eval(i) for i in range(limit)]

    def named(self, name: str | None) -> "Seq":
        return Seq(self.pieces, name, self.repaired)

    @property
    def infinite_pieces(self) -> list[Piece]:
        return [(c, e) for c, e in self.pieces if c.is_infinite]

    @property
    def is_constant(self) -> bool:
        return len(self.pieces) == 1 and self.pieces[0][1].is_constant

    def scan_bound(self) -> int:
        return max((c.scan_bound() for c, _ in self.pieces), default=1)

    # arithmetic sugar
    def __add__(self, other):
        return arith("+", self, _coerce(other))

    def __radd__(self, other):
        return arith("+", _coerce(other), self)

    def __sub__(self, other):
        return arith("-", self, _coerce(other))

    def __rsub__(self, other):
        return arith("-", _coerce(other), self)

    def __mul__(self, other):
        return arith("*", self, _coerce(other))

    def __rmul__(self, other):
        return arith("*", _coerce(other), self)

    def __truediv__(self, other):
        return arith("/", self, _coerce(other))

    def __rtruediv__(self, other):
        return arith("/", _coerce(other), self)

    def __neg__(self):
        return Seq(tuple((c, -e) for c, e in self.pieces))

    def __str__(self):
        return format_seq(self)

    def __repr__(self):
        return f"Seq({self})"


def _coerce(x) -> Seq:
    return x if isinstance(x, Seq) else constant(x)


def format_seq(a: Seq) -> str:
    if a.is_constant:
        return f"delta({_fmt(a.pieces[0][1].constant_value)})"
    parts = [f"{cell} -> {expr}" for cell, expr in a.pieces]
    return "seq{" + ", ".join(parts) + "}"


def _normalize(pieces: Iterable[Piece], warn: bool = False) -> Seq:
    """Canonical Seq from pieces already known to partition omega."""
    infinite: list[list] = []
    points: dict[int, Fraction] = {}
    repaired: set[int] = set()
    for cell, expr in pieces:
        if cell.is_empty:
            continue
        bad = [i for i in expr.poles() if i in cell]
        if bad:
            repaired.update(bad)
            for i in bad:
                points[i] = Fraction(0)
            cell = cell - finite_set(bad)
        if cell.is_finite:
            for i in cell.exceptions:
                points[i] = expr(i)
        else:
            infinite.append([cell, expr])
    if repaired and warn:
        warnings.warn(f"repaired singular indices {sorted(repaired)} to 0",
                      RepairWarning, stacklevel=3)
    # a point whose value an infinite piece already produces joins that piece
    joined: list[list[int]] = [[] for _ in infinite]
    leftover: dict[Fraction, list[int]] = {}
    for i, v in sorted(points.items()):
        for k, (_, expr) in enumerate(infinite):
            try:
                hit = expr(i) == v
            except DivisionError:
                hit = False
            if hit:
                joined[k].append(i)
                break
        else:
            leftover.setdefault(v, []).append(i)
    merged: dict[RationalFunc, IndexSet] = {}
    for (cell, expr), extra in zip(infinite, joined):
        if extra:
            cell = cell | finite_set(extra)
        merged[expr] = merged.get(expr, EMPTY) | cell
    for v, idx in leftover.items():
        expr = RationalFunc.const(v)
        merged[expr] = merged.get(expr, EMPTY) | finite_set(idx)
    inf = sorted(((c, e) for e, c in merged.items() if c.is_infinite),
                 key=lambda p: (p[0].first(), str(p[1])))
    fin = sorted(((c, e) for e, c in merged.items() if c.is_finite),
                 key=lambda p: min(p[0].exceptions))
    return Seq(tuple(inf + fin), repaired=frozenset(repaired))


# constructors ---------------------------------------------------------------


def constant(q) -> Seq:
    """The standard embedding of a rational."""
    return Seq(((OMEGA, RationalFunc.const(Fraction(q))),))


delta = constant


def index_seq() -> Seq:
    """The sequence n -> n."""
    return Seq(((OMEGA, RationalFunc.var()),))


def from_expr(expr: RationalFunc, warn: bool = True) -> Seq:
    return _normalize([(OMEGA, expr)], warn=warn)


def piecewise(pieces: Sequence[tuple[IndexSet, RationalFunc | Fraction | int]],
              warn: bool = True) -> Seq:
    """Build a Seq from cells that partition omega exactly."""
    cells = []
    norm = []
    for cell, expr in pieces:
        if not isinstance(expr, RationalFunc):
            expr = RationalFunc.const(Fraction(expr))
        cells.append(cell)
        norm.append((cell, expr))
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            overlap = cells[i] & cells[j]
            if not overlap.is_empty:
                raise PartitionError(f"cells {cells[i]} and {cells[j]} overlap on {overlap}")
    cover = union_all(cells)
    if not cover.is_omega:
        raise PartitionError(f"cells leave {~cover} uncovered")
    return _normalize(norm, warn=warn)


def restrict(a: Seq, domain: IndexSet) -> Seq:
    """a on ``domain``, 0 elsewhere."""
    pieces = [(c & domain, e) for c, e in a.pieces]
    pieces.append((~domain, RationalFunc.const(0)))
    return _normalize(pieces)


def select(cond: IndexSet, a: Seq, b: Seq) -> Seq:
    """a where ``cond`` holds, b elsewhere."""
    pieces = [(c & cond, e) for c, e in a.pieces]
    pieces += [(c - cond, e) for c, e in b.pieces]
    return _normalize(pieces)


# arithmetic -----------------------------------------------------------------


def _refine(a: Seq, b: Seq):
    for c1, e1 in a.pieces:
        for c2, e2 in b.pieces:
            c = c1 & c2
            if not c.is_empty:
                yield c, e1, e2


_OPS: dict[str, Callable] = {
    "+": operator.add,
    "-": operator.sub,
    "*": operator.mul,
}


def arith(op: str, a: Seq, b: Seq, domain: IndexSet = OMEGA) -> Seq:
    """Pointwise a op b.  Division carves finitely many zero indices of the
    divisor out to value 0; a divisor vanishing on an infinite part of
    ``domain`` is an error."""
    if op in _OPS:
        f = _OPS[op]
        pieces = []
        for c, e1, e2 in _refine(a, b):
            if c.is_finite:
                # pointwise is much cheaper than rational-function algebra
                pieces += [(finite_set([i]), RationalFunc.const(f(e1(i), e2(i))))
                           for i in c.exceptions]
            else:
                pieces.append((c, f(e1, e2)))
        return _normalize(pieces)
    if op not in ("/", "÷"):
        raise ArgumentError(f"unknown operation {op!r}")
    pieces = []
    carved: list[int] = []
    for c, e1, e2 in _refine(a, b):
        if e2.is_zero:
            if (c & domain).is_infinite:
                raise DivisionError(f"division by a sequence that is 0 on {c}")
            carved.extend(i for i in c.exceptions if i in c and i in domain)
            pieces.append((c, RationalFunc.const(0)))
            continue
        zeros = [i for i in e2.zeros() if i in c]
        if zeros:
            carved.extend(i for i in zeros if i in domain)
            pieces.append((finite_set(zeros), RationalFunc.const(0)))
            c = c - finite_set(zeros)
        pieces.append((c, e1 / e2))
    if carved:
        warnings.warn(f"division repaired indices {sorted(set(carved))} to 0",
                      RepairWarning, stacklevel=2)
    out = _normalize(pieces)
    return Seq(out.pieces, repaired=out.repaired | frozenset(carved))


def reciprocal(a: Seq) -> Seq:
    """1/a with every zero of a (even infinitely many) sent to 0."""
    pieces = []
    for c, e in a.pieces:
        if e.is_zero:
            pieces.append((c, RationalFunc.const(0)))
            continue
        zeros = [i for i in e.zeros() if i in c]
        if zeros:
            pieces.append((finite_set(zeros), RationalFunc.const(0)))
            c = c - finite_set(zeros)
        pieces.append((c, RationalFunc.const(1) / e))
    return _normalize(pieces)


def absolute(a: Seq) -> Seq:
    nonneg = truth_set(a, ">=", constant(0))
    return select(nonneg, a, -a)


def minimum(a: Seq, b: Seq) -> Seq:
    return select(truth_set(a, "<=", b), a, b)


def maximum(a: Seq, b: Seq) -> Seq:
    return select(truth_set(a, ">=", b), a, b)


# truth sets -----------------------------------------------------------------

_SIGN_TESTS: dict[str, Callable[[int], bool]] = {
    "=": lambda s: s == 0,
    "#": lambda s: s != 0,
    "!=": lambda s: s != 0,
    "≠": lambda s: s != 0,
    "<": lambda s: s < 0,
    "<=": lambda s: s <= 0,
    "≤": lambda s: s <= 0,
    ">": lambda s: s > 0,
    ">=": lambda s: s >= 0,
    "≥": lambda s: s >= 0,
}

RELATIONS = ("=", "#", "<", "<=", ">", ">=")


def sign_set(expr: RationalFunc, cell: IndexSet, test: Callable[[int], bool]) -> IndexSet:
    """Indices of ``cell`` where the sign of ``expr`` passes ``test``."""
    if expr.is_zero:
        return cell if test(0) else EMPTY
    bound = expr.sign_bound()
    tail = cell & interval_from(bound + 1) if test(expr.eventual_sign()) else EMPTY
    head = [i for i in range(bound + 1) if i in cell and test(expr.sign_at(i))]
    return tail | finite_set(head)


def truth_set(a: Seq, rel: str, b: Seq) -> IndexSet:
    """The exact set of indices n with a(n) rel b(n)."""
    try:
        test = _SIGN_TESTS[rel]
    except KeyError:
        raise ArgumentError(f"unknown relation {rel!r}") from None
    h = arith("-", a, b)
    points = []
    out = EMPTY
    for c, e in h.pieces:
        if c.is_finite:
            points += [i for i in c.exceptions if test(e.sign_at(i))]
        else:
            out = out | sign_set(e, c, test)
    return out | finite_set(points) if points else out


def extensionally_equal(a: Seq, b: Seq) -> bool:
    return truth_set(a, "=", b).is_omega


# limit analysis -------------------------------------------------------------


def cluster_limits(a: Seq, s: IndexSet = OMEGA) -> list[tuple[IndexSet, Limit]]:
    """Limits of ``a`` along each of its cells that meet ``s`` infinitely.

    Cells sharing a limit are merged; cells are reported by their periodic
    part, so finite edits of ``a`` leave the answer unchanged."""
    if s.is_finite:
        raise ArgumentError(f"cluster limits need an infinite index set, got {s}")
    groups: dict[Limit, IndexSet] = {}
    for cell, expr in a.pieces:
        if (cell & s).is_infinite:
            lim = limit_of(expr)
            groups[lim] = groups.get(lim, EMPTY) | cell.periodic_part()
    return sorted(((c, lim) for lim, c in groups.items()), key=lambda p: p[0].first())


def cells_where(a: Seq, keep: Callable[[RationalFunc], bool]) -> IndexSet:
    """Union of the infinite cells whose expression satisfies ``keep``."""
    return union_all(c for c, e in a.pieces if c.is_infinite and keep(e))


def infinitesimal_set(h: Seq) -> IndexSet:
    """Cells along which h tends to 0.  A filter forces h to be
    infinitesimal exactly when it contains this set."""
    return cells_where(h, lambda e: limit_of(e) == Limit.finite(0))


def bounded_set(a: Seq) -> IndexSet:
    """Cells along which a has a finite limit."""
    return cells_where(a, lambda e: limit_of(e).is_finite)


def standard_set(a: Seq) -> IndexSet:
    """Cells on which a is constant, i.e. equal to a standard real."""
    return cells_where(a, lambda e: e.is_constant)
