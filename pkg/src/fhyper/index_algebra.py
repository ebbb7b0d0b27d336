"""Eventually periodic subsets of the naturals.

Every set is stored as a periodic pattern (``modulus`` plus a bitmask of
residues) together with the finite set of indices where membership
disagrees with the pattern.  The canonical form uses the least period, so
two sets are extensionally equal exactly when their fields are equal.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import reduce
from math import gcd
from typing import Iterable, Iterator

from .errors import ArgumentError


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _divisors(m: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= m:
        if m % d == 0:
            small.append(d)
            if d * d != m:
                large.append(m // d)
        d += 1
    return small + large[::-1]


def _lift(mask: int, m: int, target: int) -> int:
    """Repeat an m-bit pattern until it fills ``target`` bits."""
    if m == target:
        return mask
    # mask * (1 + 2^m + 2^2m + ...) stacks copies of the pattern
    return mask * (((1 << target) - 1) // ((1 << m) - 1))


def _least_period(mask: int, m: int) -> tuple[int, int]:
    for d in _divisors(m):
        low = mask & ((1 << d) - 1)
        if _lift(low, d, m) == mask:
            return d, low
    return m, mask


class Kind(enum.Enum):
    FINITE = "Finite"
    COFINITE = "Cofinite"
    INFINITE_COINFINITE = "InfiniteCoinfinite"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    count: int | None = None

    @property
    def finite(self) -> bool:
        return self.kind is Kind.FINITE

    @property
    def cofinite(self) -> bool:
        return self.kind is Kind.COFINITE

    @property
    def infinite(self) -> bool:
        return self.kind is not Kind.FINITE

    def __str__(self):
        if self.count is None:
            return self.kind.value
        return f"{self.kind.value}({self.count})"


@dataclass(frozen=True)
class IndexSet:
    modulus: int
    mask: int
    exceptions: frozenset = frozenset()

    # construction -------------------------------------------------------

    @classmethod
    def _make(cls, modulus: int, mask: int, members: Iterable[int]) -> "IndexSet":
        """Canonicalize a pattern plus an explicit list of indices that
        must be members (``True``) or non-members.  ``members`` holds
        (index, flag) pairs."""
        if modulus > 1:
            modulus, mask = _least_period(mask, modulus)
        exc = frozenset(
            i for i, flag in members if bool((mask >> (i % modulus)) & 1) != flag
        )
        return cls(modulus, mask, exc)

    @property
    def residues(self) -> frozenset:
        return frozenset(r for r in range(self.modulus) if (self.mask >> r) & 1)

    def periodic_member(self, i: int) -> bool:
        return bool((self.mask >> (i % self.modulus)) & 1)

    def __contains__(self, i: int) -> bool:
        return self.periodic_member(i) != (i in self.exceptions)

    def member(self, i: int) -> bool:
        return i in self

    @property
    def additions(self) -> frozenset:
        return frozenset(i for i in self.exceptions if not self.periodic_member(i))

    @property
    def removals(self) -> frozenset:
        return frozenset(i for i in self.exceptions if self.periodic_member(i))

    @property
    def horizon(self) -> int:
        """First index beyond every exception."""
        return max(self.exceptions) + 1 if self.exceptions else 0

    def periodic_part(self) -> "IndexSet":
        return IndexSet(self.modulus, self.mask)

    # Boolean algebra ----------------------------------------------------

    def _combine(self, other: "IndexSet", op) -> "IndexSet":
        if self.modulus == other.modulus:
            m, a, b = self.modulus, self.mask, other.mask
        else:
            m = _lcm(self.modulus, other.modulus)
            a = _lift(self.mask, self.modulus, m)
            b = _lift(other.mask, other.modulus, m)
        full = (1 << m) - 1
        mask = op(a, b) & full
        spots = self.exceptions | other.exceptions
        members = []
        for i in spots:
            x, y = i in self, i in other
            members.append((i, bool(op(int(x), int(y)) & 1)))
        return IndexSet._make(m, mask, members)

    def __or__(self, other: "IndexSet") -> "IndexSet":
        return self._combine(other, lambda x, y: x | y)

    def __and__(self, other: "IndexSet") -> "IndexSet":
        return self._combine(other, lambda x, y: x & y)

    def __sub__(self, other: "IndexSet") -> "IndexSet":
        return self._combine(other, lambda x, y: x & ~y)

    def __xor__(self, other: "IndexSet") -> "IndexSet":
        return self._combine(other, lambda x, y: x ^ y)

    def __invert__(self) -> "IndexSet":
        full = (1 << self.modulus) - 1
        return IndexSet(self.modulus, full ^ self.mask, self.exceptions)

    union = __or__
    intersect = __and__
    difference = __sub__

    def complement(self) -> "IndexSet":
        return ~self

    # queries ------------------------------------------------------------

    def classify(self) -> Classification:
        if self.mask == 0:
            return Classification(Kind.FINITE, len(self.exceptions))
        if self.mask == (1 << self.modulus) - 1:
            return Classification(Kind.COFINITE, len(self.exceptions))
        return Classification(Kind.INFINITE_COINFINITE)

    @property
    def is_finite(self) -> bool:
        return self.mask == 0

    @property
    def is_infinite(self) -> bool:
        return self.mask != 0

    @property
    def is_cofinite(self) -> bool:
        return self.mask == (1 << self.modulus) - 1

    @property
    def is_empty(self) -> bool:
        return self.mask == 0 and not self.exceptions

    @property
    def is_omega(self) -> bool:
        return self.is_cofinite and not self.exceptions

    def issubset(self, other: "IndexSet") -> bool:
        return (self - other).is_empty

    def __le__(self, other: "IndexSet") -> bool:
        return self.issubset(other)

    def almost_subset(self, other: "IndexSet") -> bool:
        """Inclusion up to finitely many indices."""
        return (self - other).is_finite

    def members(self, limit: int) -> list[int]:
        return [i for i in range(limit) if i in self]

    def __iter__(self) -> Iterator[int]:
        if self.is_finite:
            yield from sorted(self.exceptions)
            return
        i = 0
        while True:
            if i in self:
                yield i
            i += 1

    def first(self) -> int | None:
        if self.is_empty:
            return None
        return next(iter(self))

    def scan_bound(self) -> int:
        """An index beyond which membership is purely periodic, padded by
        a few full periods; scanning below it sees every behaviour."""
        return 4 * self.modulus + self.horizon + 1

    def __len__(self) -> int:
        if not self.is_finite:
            raise ArgumentError("infinite index set has no length")
        return len(self.exceptions)

    # text ---------------------------------------------------------------

    def __str__(self) -> str:
        return format_index_set(self)

    def __repr__(self) -> str:
        return f"IndexSet({self})"


def _fin(items) -> str:
    return "fin{" + ",".join(str(i) for i in sorted(items)) + "}"


def format_index_set(s: IndexSet) -> str:
    adds, removes = sorted(s.additions), sorted(s.removals)
    if s.mask == 0:
        return _fin(adds)
    if s.is_cofinite:
        return "~" + _fin(removes) if removes else "omega"
    res = sorted(s.residues)
    if len(res) * 2 > s.modulus:
        missing = [r for r in range(s.modulus) if r not in res]
        base = "~" + _paren(" | ".join(f"res({r},{s.modulus})" for r in missing), len(missing))
    else:
        base = " | ".join(f"res({r},{s.modulus})" for r in res)
        if adds or removes:
            base = _paren(base, len(res))
    if adds:
        base = f"({base} | {_fin(adds)})"
    if removes:
        base = f"{base} \\ {_fin(removes)}"
    return base


def _paren(text: str, parts: int) -> str:
    return f"({text})" if parts > 1 else text


# builders ---------------------------------------------------------------

OMEGA = IndexSet(1, 1)
EMPTY = IndexSet(1, 0)


def omega() -> IndexSet:
    return OMEGA


def empty() -> IndexSet:
    return EMPTY


def residue(r: int, m: int) -> IndexSet:
    """{n : n = r (mod m)}."""
    if m < 1:
        raise ArgumentError(f"modulus must be positive, got {m}")
    if not 0 <= r < m:
        raise ArgumentError(f"residue {r} out of range for modulus {m}")
    return IndexSet._make(m, 1 << r, ())


def residues(rs: Iterable[int], m: int) -> IndexSet:
    sets = [residue(r, m) for r in rs]
    return reduce(IndexSet.__or__, sets, EMPTY)


def finite_set(indices: Iterable[int]) -> IndexSet:
    idx = frozenset(int(i) for i in indices)
    if any(i < 0 for i in idx):
        raise ArgumentError("indices must be natural numbers")
    return IndexSet(1, 0, idx)


def interval_from(start: int) -> IndexSet:
    """{n : n >= start}."""
    return ~finite_set(range(start))


def complement(s: IndexSet) -> IndexSet:
    return ~s


def union(s: IndexSet, t: IndexSet) -> IndexSet:
    return s | t


def intersect(s: IndexSet, t: IndexSet) -> IndexSet:
    return s & t


def difference(s: IndexSet, t: IndexSet) -> IndexSet:
    return s - t


def boolean_op(op: str, s: IndexSet, t: IndexSet | None = None) -> IndexSet:
    if op == "complement":
        return ~s
    if t is None:
        raise ArgumentError(f"{op} needs two operands")
    table = {"union": IndexSet.__or__, "intersect": IndexSet.__and__,
             "difference": IndexSet.__sub__}
    try:
        return table[op](s, t)
    except KeyError:
        raise ArgumentError(f"unknown set operation {op!r}") from None


def classify(s: IndexSet) -> Classification:
    return s.classify()


def is_subset(s: IndexSet, t: IndexSet) -> bool:
    return (s - t).classify() == Classification(Kind.FINITE, 0)


def union_all(sets: Iterable[IndexSet]) -> IndexSet:
    return reduce(IndexSet.__or__, sets, EMPTY)


def intersect_all(sets: Iterable[IndexSet]) -> IndexSet:
    return reduce(IndexSet.__and__, sets, OMEGA)
