"""Univariate polynomials and rational functions in the index variable n,
with exact rational coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from math import ceil, lcm
from typing import Iterable, Sequence

from .errors import ArgumentError, DivisionError


def _trim(coeffs: Iterable) -> tuple:
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Poly:
    """Coefficients stored lowest degree first; the zero polynomial is ()."""

    coeffs: tuple = ()

    @classmethod
    def of(cls, *coeffs) -> "Poly":
        return cls(_trim(coeffs))

    @classmethod
    def const(cls, q) -> "Poly":
        return cls(_trim([q]))

    @classmethod
    def var(cls) -> "Poly":
        return cls((Fraction(0), Fraction(1)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    @cached_property
    def _scaled(self) -> tuple[tuple[int, ...], int]:
        den = lcm(*(c.denominator for c in self.coeffs)) if self.coeffs else 1
        return tuple(int(c * den) for c in self.coeffs), den

    def __call__(self, x) -> Fraction:
        if isinstance(x, int):
            ints, den = self._scaled
            return Fraction(_horner_int(ints, x), den)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Poly(_trim(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero or other.is_zero:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(_trim(out))

    def scale(self, q) -> "Poly":
        return Poly(_trim(c * q for c in self.coeffs))

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero:
            raise DivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quot = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        d, lc = other.degree, other.lead
        while len(rem) - 1 >= d and rem:
            k = len(rem) - 1 - d
            f = rem[-1] / lc
            quot[k] = f
            for j, c in enumerate(other.coeffs):
                rem[j + k] -= f * c
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return Poly(_trim(quot)), Poly(_trim(rem))

    def monic(self) -> "Poly":
        return self.scale(1 / self.lead) if self.coeffs else self

    def compose_affine(self, a, b) -> "Poly":
        """p(a*n + b)."""
        inner = Poly.of(b, a)
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * inner + Poly.const(c)
        return acc

    def integer_coeffs(self) -> tuple[int, ...]:
        """A positive multiple of the polynomial with integer coefficients."""
        return self._scaled[0]

    def cauchy_bound(self) -> int:
        """Integer B with every real root of absolute value below B."""
        if self.degree < 1:
            return 0
        lc = abs(self.lead)
        return ceil(1 + max(abs(c) / lc for c in self.coeffs[:-1])) + 1

    def natural_roots(self) -> list[int]:
        """Non-negative integer roots (the polynomial must be nonzero)."""
        if self.is_zero:
            raise ArgumentError("zero polynomial has every root")
        ints = self.integer_coeffs()
        roots = []
        shift = 0
        while shift < len(ints) and ints[shift] == 0:
            shift += 1
        if shift:
            roots.append(0)
        ints = ints[shift:]
        if len(ints) <= 1:
            return roots
        c0 = abs(ints[0])
        bound = self.cauchy_bound()
        for r in _positive_divisors(c0, bound):
            if _horner_int(ints, r) == 0:
                roots.append(r)
        return sorted(roots)

    def sign_at(self, n: int) -> int:
        v = _horner_int(self.integer_coeffs(), n)
        return (v > 0) - (v < 0)

    def __str__(self) -> str:
        return _format_poly(self.coeffs)


def _horner_int(ints: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(ints):
        acc = acc * x + c
    return acc


def _positive_divisors(n: int, cap: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n and d <= cap:
        if n % d == 0:
            out.append(d)
            if n // d <= cap and n // d != d:
                out.append(n // d)
        d += 1
    return out


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _format_poly(coeffs: tuple) -> str:
    if not coeffs:
        return "0"
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = _fmt_q(mag)
        else:
            mono = "n" if k == 1 else f"n^{k}"
            if mag == 1:
                body = mono
            elif mag.denominator == 1:
                body = f"{mag.numerator}*{mono}"
            else:
                body = f"{mag.numerator}/{mag.denominator}*{mono}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero:
        a, b = b, a.divmod(b)[1]
    return a.monic()


@dataclass(frozen=True)
class RationalFunc:
    """num/den in lowest terms with a monic denominator."""

    num: Poly
    den: Poly

    @classmethod
    def make(cls, num: Poly, den: Poly | None = None) -> "RationalFunc":
        den = Poly.const(1) if den is None else den
        if den.is_zero:
            raise DivisionError("rational function with zero denominator")
        if num.is_zero:
            return cls(Poly(), Poly.const(1))
        if den.is_constant:
            return cls(num.scale(1 / den.lead), Poly.const(1))
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num.divmod(g)[0], den.divmod(g)[0]
        lc = den.lead
        return cls(num.scale(1 / lc), den.scale(1 / lc))

    @classmethod
    def const(cls, q) -> "RationalFunc":
        return cls(Poly.const(q), Poly.const(1))

    @classmethod
    def var(cls) -> "RationalFunc":
        return cls(Poly.var(), Poly.const(1))

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_constant(self) -> bool:
        return self.num.is_constant and self.den.is_constant

    @property
    def constant_value(self) -> Fraction:
        return self.num(0) / self.den(0)

    def __call__(self, n) -> Fraction:
        if isinstance(n, int):
            (ni, nd), (di, dd) = self.num._scaled, self.den._scaled
            d = _horner_int(di, n)
            if d == 0:
                raise DivisionError(f"pole at n={n}")
            return Fraction(_horner_int(ni, n) * dd, d * nd)
        d = self.den(n)
        if d == 0:
            raise DivisionError(f"pole at n={n}")
        return self.num(n) / d

    def poles(self) -> list[int]:
        return self.den.natural_roots()

    def zeros(self) -> list[int]:
        return [] if self.num.is_zero else self.num.natural_roots()

    def __add__(self, other: "RationalFunc") -> "RationalFunc":
        if self.den == other.den:
            if self.den.is_constant:
                return RationalFunc(self.num + other.num, self.den)
            return RationalFunc.make(self.num + other.num, self.den)
        return RationalFunc.make(self.num * other.den + other.num * self.den,
                                 self.den * other.den)

    def __neg__(self) -> "RationalFunc":
        return RationalFunc(-self.num, self.den)

    def __sub__(self, other: "RationalFunc") -> "RationalFunc":
        return self + (-other)

    def __mul__(self, other: "RationalFunc") -> "RationalFunc":
        if self.den.is_constant and other.den.is_constant:
            return RationalFunc(self.num * other.num, self.den)
        return RationalFunc.make(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RationalFunc") -> "RationalFunc":
        if other.is_zero:
            raise DivisionError("division by the zero rational function")
        return RationalFunc.make(self.num * other.den, self.den * other.num)

    def compose_affine(self, a, b) -> "RationalFunc":
        return RationalFunc.make(self.num.compose_affine(a, b),
                                 self.den.compose_affine(a, b))

    def sign_bound(self) -> int:
        """Beyond this index numerator and denominator keep a fixed sign."""
        return max(self.num.cauchy_bound(), self.den.cauchy_bound())

    def eventual_sign(self) -> int:
        if self.num.is_zero:
            return 0
        s = self.num.lead * self.den.lead
        return 1 if s > 0 else -1

    def sign_at(self, n: int) -> int:
        return self.num.sign_at(n) * self.den.sign_at(n)

    def __str__(self) -> str:
        if self.den.is_constant:
            return str(self.num)
        num = str(self.num)
        if sum(1 for c in self.num.coeffs if c) > 1:
            num = f"({num})"
        den = str(self.den)
        if sum(1 for c in self.den.coeffs if c) > 1:
            den = f"({den})"
        return f"{num}/{den}"
