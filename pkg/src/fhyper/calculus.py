"""Filter-relative infinitesimal calculus: halos, finiteness, standard
parts and continuity.

For piecewise rational sequences, "|a - b| < 1/m on a set in F for every m"
holds exactly when a - b tends to 0 along every cell that meets the core of
F infinitely, so every query here reduces to limits along cells.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Union

from .errors import ArgumentError, DivisionError, DomainError
from .filters import F0, Filter, contains
from .index_algebra import OMEGA, IndexSet, residue
from .poly import RationalFunc
from .sequences import (
    Limit,
    Seq,
    absolute,
    cluster_limits,
    constant,
    from_expr,
    infinitesimal_set,
    limit_of,
    piecewise,
    truth_set,
)

# halos ----------------------------------------------------------------------


def is_infinitesimal(a: Seq, f: Filter) -> bool:
    return all(lim == Limit.finite(0) for _, lim in cluster_limits(a, f.core))


def in_halo(b: Seq, a: Seq, f: Filter) -> bool:
    """b lies in the halo of a at f."""
    return is_infinitesimal(a - b, f)


def is_finite_at(a: Seq, f: Filter) -> bool:
    return all(lim.is_finite for _, lim in cluster_limits(a, f.core))


def is_standard(a: Seq, f: Filter) -> bool:
    """f forces S(a): on the core, a takes finitely many constant values."""
    return all(e.is_constant for c, e in a.pieces if (c & f.core).is_infinite)


def forces_apart(a: Seq, b: Seq, f: Filter) -> bool:
    """f forces ~(a ~~ b)."""
    return contains(f, ~infinitesimal_set(a - b))


# standard parts -------------------------------------------------------------


@dataclass(frozen=True)
class Branch:
    cell: IndexSet
    limit: Limit
    case: str  # "1", "2.1", "2.2", or "2" when the cell mixes both sides

    def __str__(self):
        return f"{self.cell} -> {self.limit}  (case {self.case})"


@dataclass(frozen=True)
class Unique:
    value: Fraction
    case: str = "1"

    def __str__(self):
        return f"Unique({_q(self.value)})"


@dataclass(frozen=True)
class Branches:
    branches: tuple

    def __str__(self):
        return "Branches[" + ", ".join(f"({b.cell}, {b.limit})" for b in self.branches) + "]"


@dataclass(frozen=True)
class Unbounded:
    cells: tuple

    def __str__(self):
        return "Unbounded[" + ", ".join(f"({c}, {lim})" for c, lim in self.cells) + "]"


StResult = Union[Unique, Branches, Unbounded]


def _q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _case(a: Seq, cell: IndexSet, q: Fraction, core: IndexSet) -> str:
    """Which case of the existence argument the cell falls under: the
    sequence equals q there (1), or approaches it from below (2.1) or
    above (2.2)."""
    signs = set()
    for c, e in a.pieces:
        if (c & cell & core).is_infinite:
            signs.add((e - RationalFunc.const(q)).eventual_sign())
    if signs == {0}:
        return "1"
    if signs == {-1}:
        return "2.1"
    if signs == {1}:
        return "2.2"
    return "2"


def standard_part(a: Seq, f: Filter) -> StResult:
    groups = cluster_limits(a, f.core)
    unbounded = [(c, lim) for c, lim in groups if not lim.is_finite]
    if unbounded:
        return Unbounded(tuple(unbounded))
    if len(groups) == 1:
        q = groups[0][1].value
        return Unique(q, _case(a, OMEGA, q, f.core))
    return Branches(tuple(Branch(c, lim, _case(a, c, lim.value, f.core)) for c, lim in groups))


# continuity -----------------------------------------------------------------

UnaryFn = Callable[..., Seq]


@dataclass(frozen=True)
class ContinuityReport:
    verdict: bool
    point: Fraction
    value: Fraction
    left: tuple  # limits of f(c - 1/(n+1))
    right: tuple  # limits of f(c + 1/(n+1))
    certificate: Seq | None = None
    side: int | None = None
    witness_sets: dict = field(default_factory=dict)
    verified: bool = True

    def __bool__(self):
        return self.verdict

    def summary(self) -> str:
        left = ", ".join(str(x) for x in self.left)
        right = ", ".join(str(x) for x in self.right)
        head = "continuous" if self.verdict else "discontinuous"
        text = f"{head} at {_q(self.point)}: f(c) = {_q(self.value)}, left limit {left}, right limit {right}"
        if self.certificate is not None:
            text += f"; certificate x = {self.certificate}"
        return text


def approach(c, side: int) -> Seq:
    """c + side/(n+1)."""
    expr = RationalFunc.const(Fraction(c)) + RationalFunc.const(side) / (
        RationalFunc.var() + RationalFunc.const(1))
    return from_expr(expr, warn=False)


def _value_at(fn: UnaryFn, c: Fraction) -> Fraction:
    try:
        y = fn(constant(c))
    except DivisionError as exc:
        raise DomainError(f"function undefined at {_q(c)}: {exc}") from None
    if not y.is_constant:
        raise ArgumentError("function must not depend on the index n")
    return y.pieces[0][1].constant_value


def _side_limits(fn: UnaryFn, c: Fraction, side: int) -> tuple[Seq, tuple]:
    x = approach(c, side)
    try:
        y = fn(x)
    except DivisionError as exc:
        raise DomainError(f"function undefined near {_q(c)}: {exc}") from None
    return y, tuple(lim for _, lim in cluster_limits(y))


def check_continuity(fn: UnaryFn, c) -> ContinuityReport:
    """Decide classical continuity of fn at the rational c from its
    one-sided limits, with a halo certificate either way."""
    c = Fraction(c)
    fc = _value_at(fn, c)
    target = Limit.finite(fc)
    y_minus, left = _side_limits(fn, c, -1)
    y_plus, right = _side_limits(fn, c, 1)
    bad_left = any(lim != target for lim in left)
    bad_right = any(lim != target for lim in right)
    if not (bad_left or bad_right):
        witness = {}
        for m in range(1, 11):
            eps = constant(Fraction(1, m))
            sets = [truth_set(absolute(y - constant(fc)), "<", eps) for y in (y_minus, y_plus)]
            witness[m] = sets[0] & sets[1]
        verified = all(s.is_cofinite for s in witness.values())
        return ContinuityReport(True, c, fc, left, right, witness_sets=witness, verified=verified)
    side = -1 if bad_left else 1
    x = approach(c, side)
    verified = in_halo(x, constant(c), F0) and forces_apart(fn(x), constant(fc), F0)
    return ContinuityReport(False, c, fc, left, right, certificate=x, side=side, verified=verified)


def halo_probes(c) -> list[Seq]:
    """Sequences infinitely close to c at every filter."""
    c = Fraction(c)
    n = RationalFunc.var()
    one = RationalFunc.const(1)
    base = RationalFunc.const(c)
    sq = (n + one) * (n + one)
    alt = piecewise([(residue(0, 2), base + one / (n + one)), (residue(1, 2), base - one / (n + one))],
                    warn=False)
    return [
        approach(c, -1),
        approach(c, 1),
        from_expr(base + one / sq, warn=False),
        from_expr(base - one / sq, warn=False),
        alt,
        constant(c),
    ]


def f_continuous(fn: UnaryFn, c, f: Filter, probes: list[Seq] | None = None) -> bool:
    """F-relative continuity at c, checked on halo probes: every probe x
    with x ~~ c at f must have fn(x) ~~ fn(c) at f."""
    return f_continuity_profile(fn, c, [f], probes)[0]


def f_continuity_profile(fn: UnaryFn, c, filters: list[Filter],
                         probes: list[Seq] | None = None) -> list[bool]:
    """f_continuous at each filter, evaluating fn on the probes once."""
    c = Fraction(c)
    fc = constant(_value_at(fn, c))
    images = []
    for x in probes or halo_probes(c):
        try:
            images.append((x, fn(x)))
        except DivisionError as exc:
            raise DomainError(str(exc)) from None
    return [all(in_halo(y, fc, f) for x, y in images if in_halo(x, constant(c), f))
            for f in filters]


def transfer_counterexample(fn: UnaryFn, c, x: Seq, f: Filter) -> Seq:
    """Turn a counterexample x to continuity at f into one at F0.

    x is reindexed along an infinite part of the core on which both x and
    fn(x) - fn(c) follow single expressions, the second with a nonzero
    limit."""
    c = Fraction(c)
    fc = _value_at(fn, c)
    if not in_halo(x, constant(c), f):
        raise ArgumentError("x is not infinitely close to c at this filter")
    y = fn(x) - constant(fc)
    for cx, ex in x.pieces:
        for cy, ey in y.pieces:
            cell = cx & cy & f.core
            if cell.is_infinite and limit_of(ey) != Limit.finite(0):
                return _reindex(ex, cell)
    raise ArgumentError("x is not a counterexample at this filter")


def _reindex(expr: RationalFunc, cell: IndexSet) -> Seq:
    """i -> expr(sigma(i)) where sigma enumerates the periodic part of cell
    beyond its exceptions."""
    m = cell.modulus
    rs = sorted(cell.residues)
    k = len(rs)
    q0 = cell.horizon // m + 1
    pieces = []
    for j, r in enumerate(rs):
        # i = k*t + j  maps to  m*(q0 + t) + r
        a = Fraction(m, k)
        b = Fraction(m * q0 + r) - Fraction(m * j, k)
        pieces.append((residue(j, k) if k > 1 else OMEGA, expr.compose_affine(a, b)))
    return piecewise(pieces, warn=False)


def check_f_continuity_certificate(fn: UnaryFn, c, x: Seq) -> bool:
    """x ~~ c and ~(fn(x) ~~ fn(c)) both forced at F0."""
    c = Fraction(c)
    fc = constant(_value_at(fn, c))
    return in_halo(x, constant(c), F0) and forces_apart(fn(x), fc, F0)
