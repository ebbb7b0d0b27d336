"""Ultrafilters of the residue-class algebra, presented as oracles.

An oracle picks one residue r_m for every modulus m, coherently: when m
divides m', r_m' reduces to r_m.  A periodic set with modulus M (finite
exceptions ignored) is accepted iff r_M is one of its residues.  This is a
non-principal ultrafilter of the decidable algebra, and the quotient model
it determines is two-valued.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import prod
from typing import Callable, Mapping, Sequence

from .errors import ArgumentError, IncoherenceError
from .filters import F0, Filter, extend
from .index_algebra import IndexSet
from .logic.forcing import truth_index_set
from .logic.syntax import Formula

Chooser = Callable[[int], int]

PROBE_LIMIT = 64


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


def _factor(m: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def _is_prime(p: int) -> bool:
    return p >= 2 and _factor(p) == {p: 1}


def _crt(parts: Sequence[tuple[int, int]]) -> int:
    """The x < prod(m) with x = r mod m for coprime (r, m) pairs."""
    total = prod(m for _, m in parts)
    x = 0
    for r, m in parts:
        rest = total // m
        x += r * rest * pow(rest, -1, m)
    return x % total


# choosers ---------------------------------------------------------------------


class Profinite:
    """A chooser from one p-adic digit stream per prime: r_m is the unique
    residue agreeing with every stream modulo the prime powers of m."""

    def __init__(self, digits: Callable[[int, int], int], tag: str):
        self._digits = digits  # (prime, position) -> digit
        self.tag = tag

    def adic(self, p: int, k: int) -> int:
        return sum(self._digits(p, i) * p ** i for i in range(k))

    def __call__(self, m: int) -> int:
        if m < 1:
            raise ArgumentError(f"modulus must be positive, got {m}")
        parts = [(self.adic(p, k), p ** k) for p, k in _factor(m).items()]
        return _crt(parts) if parts else 0

    def __repr__(self):
        return self.tag


def zero_chooser() -> Profinite:
    return Profinite(lambda p, i: 0, "zero")


def padic(base: int, digits: Sequence[int]) -> Profinite:
    """Track the base-adic number with the given low digits (then zeros);
    every other prime contributes residue 0."""
    if not _is_prime(base):
        raise ArgumentError(f"padic base must be prime, got {base}")
    digits = list(digits)
    for d in digits:
        if not 0 <= d < base:
            raise ArgumentError(f"digit {d} out of range for base {base}")

    def digit(p: int, i: int) -> int:
        return digits[i] if p == base and i < len(digits) else 0

    return Profinite(digit, f"padic({base}; {' '.join(map(str, digits))})")


def random_chooser(seed: int) -> Profinite:
    """Independent uniformly random digits for every prime, fixed by seed."""
    cache: dict[tuple[int, int], int] = {}

    def digit(p: int, i: int) -> int:
        if (p, i) not in cache:
            cache[(p, i)] = random.Random(f"{seed}:{p}:{i}").randrange(p)
        return cache[(p, i)]

    return Profinite(digit, f"random({seed})")


# oracles ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class UltraOracle:
    chooser: Chooser
    tag: str = ""
    _seen: dict = field(default_factory=dict, repr=False)

    def residue(self, m: int) -> int:
        """r_m, with coherence against every divisor checked on first use."""
        if m not in self._seen:
            r = self._raw(m)
            for d in _divisors(m)[:-1]:
                if r % d != self._raw(d):
                    raise IncoherenceError(
                        f"r_{m} = {r} but r_{d} = {self._raw(d)}", (d, m))
            self._seen[m] = r
        return self._seen[m]

    def _raw(self, m: int) -> int:
        r = self.chooser(m)
        if not 0 <= r < m:
            raise ArgumentError(f"chooser gave r_{m} = {r}, outside 0..{m - 1}")
        return r

    def __str__(self):
        return self.tag or "ultra"


def mk_ultra(chooser: Chooser | Mapping[int, int], tag: str | None = None) -> UltraOracle:
    """Wrap a chooser after checking coherence on moduli 1..64.  A mapping is
    read with residue 0 for moduli it does not list."""
    if isinstance(chooser, Mapping):
        table = dict(chooser)
        fn: Chooser = lambda m: table.get(m, 0)
        tag = tag or "table"
    else:
        fn = chooser
    u = UltraOracle(fn, tag if tag is not None else repr(chooser))
    for m in range(1, PROBE_LIMIT + 1):
        u.residue(m)
    return u


def ultra_contains(u: UltraOracle, s: IndexSet) -> bool:
    m = s.modulus
    return u.residue(m) in s.residues


def extends_filter(u: UltraOracle, f: Filter) -> bool:
    return all(ultra_contains(u, g) for g in f.generators)


def quotient_sat(u: UltraOracle, phi: Formula, env: Mapping | None = None) -> bool:
    """Satisfaction in the quotient by u: two-valued for every formula in
    the decidable fragment."""
    return ultra_contains(u, truth_index_set(phi, env or {}))


def forcing_filter(u: UltraOracle, phi: Formula, env: Mapping | None = None) -> Filter | None:
    """A filter extended by u that forces phi, when u satisfies it."""
    s = truth_index_set(phi, env or {})
    if not ultra_contains(u, s):
        return None
    return F0 if s.is_cofinite else extend(F0, s)
