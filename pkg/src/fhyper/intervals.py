"""Finite unions of intervals of the rational line with rational endpoints.

Each finite endpoint may carry a ``source`` label recording which term
produced it; Boolean operations keep the labels so that callers can turn a
numeric interval back into a symbolic one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable


@dataclass(frozen=True)
class Interval:
    lo: Fraction | None  # None is -infinity
    hi: Fraction | None  # None is +infinity
    lo_closed: bool = False
    hi_closed: bool = False
    lo_src: object = field(default=None, compare=False)
    hi_src: object = field(default=None, compare=False)

    def __contains__(self, x) -> bool:
        if self.lo is not None and (x < self.lo or (x == self.lo and not self.lo_closed)):
            return False
        if self.hi is not None and (x > self.hi or (x == self.hi and not self.hi_closed)):
            return False
        return True

    @property
    def is_point(self) -> bool:
        return self.lo is not None and self.lo == self.hi

    def __str__(self):
        if self.is_point:
            return "{" + _q(self.lo) + "}"
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        lo = "-oo" if self.lo is None else _q(self.lo)
        hi = "oo" if self.hi is None else _q(self.hi)
        return f"{left}{lo}, {hi}{right}"


def _q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class IntervalUnion:
    intervals: tuple = ()

    def __contains__(self, x) -> bool:
        return any(x in iv for iv in self.intervals)

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def is_everything(self) -> bool:
        return len(self.intervals) == 1 and self.intervals[0].lo is None and self.intervals[0].hi is None

    def endpoints(self) -> list[tuple[Fraction, object]]:
        out = []
        for iv in self.intervals:
            if iv.lo is not None:
                out.append((iv.lo, iv.lo_src))
            if iv.hi is not None:
                out.append((iv.hi, iv.hi_src))
        return out

    def __or__(self, other: "IntervalUnion") -> "IntervalUnion":
        return combine([self, other], lambda a, b: a or b)

    def __and__(self, other: "IntervalUnion") -> "IntervalUnion":
        return combine([self, other], lambda a, b: a and b)

    def __sub__(self, other: "IntervalUnion") -> "IntervalUnion":
        return combine([self, other], lambda a, b: a and not b)

    def __invert__(self) -> "IntervalUnion":
        return combine([self], lambda a: not a)

    def issubset(self, other: "IntervalUnion") -> bool:
        return (self - other).is_empty

    def __le__(self, other):
        return self.issubset(other)

    def leftmost(self) -> Interval | None:
        return self.intervals[0] if self.intervals else None

    def __str__(self):
        if not self.intervals:
            return "empty"
        return " U ".join(str(iv) for iv in self.intervals)


EMPTY_UNION = IntervalUnion()
EVERYTHING = IntervalUnion((Interval(None, None),))


def relation(op: str, v, src=None) -> IntervalUnion:
    """The set of x with x op v."""
    v = Fraction(v)
    if op == "<":
        return IntervalUnion((Interval(None, v, hi_src=src),))
    if op in ("<=", "≤"):
        return IntervalUnion((Interval(None, v, hi_closed=True, hi_src=src),))
    if op == ">":
        return IntervalUnion((Interval(v, None, lo_src=src),))
    if op in (">=", "≥"):
        return IntervalUnion((Interval(v, None, lo_closed=True, lo_src=src),))
    if op == "=":
        return IntervalUnion((Interval(v, v, True, True, src, src),))
    if op in ("#", "!=", "≠"):
        return IntervalUnion((Interval(None, v, hi_src=src), Interval(v, None, lo_src=src)))
    raise ValueError(f"unknown relation {op!r}")


def interval(lo, hi, lo_closed=False, hi_closed=False) -> IntervalUnion:
    lo = None if lo is None else Fraction(lo)
    hi = None if hi is None else Fraction(hi)
    probe = Interval(lo, hi, lo_closed, hi_closed)
    return combine([IntervalUnion((probe,))], lambda a: a)


def combine(parts: Iterable[IntervalUnion], member: Callable[..., bool]) -> IntervalUnion:
    """The set of x with member(x in part_1, x in part_2, ...), rebuilt
    from the finitely many breakpoints of the parts."""
    parts = list(parts)
    labels: dict = {}
    for p in parts:
        for v, src in p.endpoints():
            if labels.get(v) is None:
                labels[v] = src
    points = sorted(labels)

    def test(x) -> bool:
        return member(*(x in p for p in parts))

    # elementary pieces in order: open gaps and breakpoints
    pieces: list[tuple[str, Fraction | None, Fraction | None, bool]] = []
    if not points:
        return EVERYTHING if test(Fraction(0)) else EMPTY_UNION
    pieces.append(("gap", None, points[0], test(points[0] - 1)))
    for j, p in enumerate(points):
        pieces.append(("point", p, p, test(p)))
        if j + 1 < len(points):
            q = points[j + 1]
            pieces.append(("gap", p, q, test((p + q) / 2)))
    pieces.append(("gap", points[-1], None, test(points[-1] + 1)))

    out = []
    start = None
    last = pieces[0]
    for kind, lo, hi, inside in pieces + [("gap", None, None, False)]:
        if inside and start is None:
            start = (lo, kind == "point")
        if not inside and start is not None:
            prev_kind, _, prev_hi, _ = last
            s_lo, s_closed = start
            out.append(Interval(
                s_lo, prev_hi, s_closed and s_lo is not None, prev_kind == "point" and prev_hi is not None,
                labels.get(s_lo) if s_lo is not None else None,
                labels.get(prev_hi) if prev_hi is not None else None))
            start = None
        last = (kind, lo, hi, inside)
    return IntervalUnion(tuple(out))
