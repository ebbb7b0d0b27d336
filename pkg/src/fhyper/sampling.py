"""Seeded random generators for index sets, filters, sequences, formulas and
internal predicates.  Every generator takes a ``random.Random`` so callers
control reproducibility."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .filters import F0, Filter, extend
from .index_algebra import IndexSet, finite_set, residues
from .internal_sets import InternalPred, internal
from .logic.syntax import (
    And,
    BinOp,
    Const,
    Formula,
    Not,
    Or,
    Pow,
    Rel,
    Std,
    Term,
    Var,
)
from .poly import Poly, RationalFunc
from .sequences import Seq, from_expr, piecewise

INDEX_OPS = ("=", "#", "<", "<=", ">", ">=")
AND, OR = "/\\", "\\/"


def random_index_set(rng: random.Random, max_modulus: int = 12, edits: int = 2) -> IndexSet:
    m = rng.randint(1, max_modulus)
    s = residues([r for r in range(m) if rng.random() < 0.5], m)
    for _ in range(rng.randint(0, edits)):
        s = s ^ finite_set([rng.randrange(3 * m + 5)])
    return s


def random_filter(rng: random.Random, max_modulus: int = 12, max_gens: int = 2) -> Filter:
    """F0 extended by up to max_gens random sets, keeping the core infinite."""
    f = F0
    for _ in range(rng.randint(0, max_gens)):
        m = rng.randint(2, max_modulus)
        rs = [r for r in range(m) if rng.random() < 0.6] or [rng.randrange(m)]
        s = residues(rs, m)
        if (f.core & s).is_infinite:
            f = extend(f, s)
    return f


def _coeff(rng: random.Random, small: bool = True) -> Fraction:
    if small or rng.random() < 0.7:
        return Fraction(rng.randint(-3, 3))
    return Fraction(rng.randint(-5, 5), rng.randint(1, 4))


def random_poly(rng: random.Random, degree: int = 3) -> Poly:
    d = rng.randint(0, degree)
    return Poly.of(*(_coeff(rng, small=False) for _ in range(d + 1)))


def _safe_den(rng: random.Random, degree: int) -> Poly:
    """A denominator positive at every natural number."""
    d = rng.randint(0, degree)
    coeffs = [Fraction(rng.randint(1, 4)) for _ in range(d + 1)]
    return Poly.of(*coeffs)


def random_rational(rng: random.Random, degree: int = 3, poles: bool = False) -> RationalFunc:
    num = random_poly(rng, degree)
    if rng.random() < 0.5:
        return RationalFunc.make(num)
    if poles:
        den = random_poly(rng, min(degree, 2))
        if den.is_zero:
            den = Poly.const(1)
    else:
        den = _safe_den(rng, min(degree, 2))
    return RationalFunc.make(num, den)


def random_seq(rng: random.Random, max_modulus: int = 12, degree: int = 3,
               points: int = 1, poles: bool = False) -> Seq:
    """Residue classes mod a random m, each with its own rational function,
    plus a few finite edits."""
    m = rng.randint(1, max_modulus)
    shared = [random_rational(rng, degree, poles) for _ in range(rng.randint(1, min(m, 3)))]
    assign = [rng.choice(shared) for _ in range(m)]
    edits = sorted({rng.randrange(2 * m + 6) for _ in range(rng.randint(0, points))})
    cut = finite_set(edits)
    pieces = [(residues([r], m) - cut, assign[r]) for r in range(m)]
    pieces += [(finite_set([i]), _coeff(rng, small=False)) for i in edits]
    return piecewise(pieces, warn=False)


def random_convergent_seq(rng: random.Random, max_modulus: int = 6) -> tuple[Seq, Fraction]:
    """A sequence with one finite limit along every cell, and that limit."""
    q = _coeff(rng, small=False)
    m = rng.randint(1, max_modulus)
    pieces = []
    for r in range(m):
        den = _safe_den(rng, 2)
        # q*den + lower-degree noise over den tends to q
        noise = Poly.of(*(_coeff(rng) for _ in range(den.degree))) if den.degree else Poly()
        pieces.append((residues([r], m), RationalFunc.make(den.scale(q) + noise, den)))
    return piecewise(pieces, warn=False), q


# formulas ---------------------------------------------------------------------


def random_term(rng: random.Random, names: Sequence[str], depth: int = 1) -> Term:
    if depth <= 0 or rng.random() < 0.4:
        if rng.random() < 0.75:
            return Var(rng.choice(list(names)))
        return Const(_coeff(rng, small=False))
    roll = rng.random()
    if roll < 0.15:
        return Pow(random_term(rng, names, 0), rng.randint(2, 3))
    op = rng.choice("+-*")
    return BinOp(op, random_term(rng, names, depth - 1), random_term(rng, names, depth - 1))


def random_atom(rng: random.Random, names: Sequence[str], limit_atoms: bool = False) -> Formula:
    if limit_atoms and rng.random() < 0.25:
        if rng.random() < 0.5:
            return Std(random_term(rng, names, 1))
        return Rel("~~", random_term(rng, names, 1), random_term(rng, names, 1))
    return Rel(rng.choice(INDEX_OPS), random_term(rng, names, 1), random_term(rng, names, 1))


def random_formula(rng: random.Random, names: Sequence[str], connectives: int = 3,
                   limit_atoms: bool = False) -> Formula:
    """A quantifier-free formula with at most ``connectives`` connectives."""
    budget = rng.randint(0, connectives)
    return _formula(rng, names, budget, limit_atoms)


def _formula(rng, names, budget: int, limit_atoms: bool) -> Formula:
    if budget == 0:
        return random_atom(rng, names, limit_atoms)
    roll = rng.random()
    if roll < 0.3:
        return Not(_formula(rng, names, budget - 1, limit_atoms))
    left = rng.randint(0, budget - 1)
    parts = (_formula(rng, names, left, limit_atoms),
             _formula(rng, names, budget - 1 - left, limit_atoms))
    return And(*parts) if roll < 0.65 else Or(*parts)


# internal predicates ---------------------------------------------------------


def random_internal(rng: random.Random, params: dict[str, Seq] | None = None) -> InternalPred:
    """A Boolean combination of up to three comparisons of x with params."""
    params = dict(params or {"p": random_seq(rng, 6, 2), "q": random_seq(rng, 6, 2)})
    names = list(params)

    def atom() -> str:
        bound = rng.choice(names + [str(rng.randint(-2, 2))])
        return f"x {rng.choice(['<', '<=', '>', '>=', '=', '#'])} {bound}"

    text = atom()
    for _ in range(rng.randint(0, 2)):
        conn = rng.choice([AND, OR])
        neg = "~" if rng.random() < 0.3 else ""
        text = f"({text}) {conn} {neg}({atom()})"
    return internal(text, params)


def random_interval_chain(rng: random.Random, depth: int) -> list[InternalPred]:
    """X^k = (c - w*s_k, c + w*t_k) with positive widths decreasing in k, so
    the chain is nested and nonempty at every index."""
    c = random_seq(rng, 4, 2)
    w = from_expr(RationalFunc.make(_safe_den(rng, 2), _safe_den(rng, 2)), warn=False)
    shrink = [rng.choice(["1/(k+1)", "1/(k+1)^2", "1/2^k"]) for _ in range(2)]
    closed = [rng.random() < 0.5 for _ in range(2)]
    chain = []
    for k in range(depth + 1):
        s, t = (Fraction(_shrink(e, k)) for e in shrink)
        lo_op = "<=" if closed[0] else "<"
        hi_op = "<=" if closed[1] else "<"
        text = f"c - w*({s}) {lo_op} x {AND} x {hi_op} c + w*({t})"
        chain.append(internal(text, {"c": c, "w": w}))
    return chain


def _shrink(expr: str, k: int) -> Fraction:
    if expr == "1/(k+1)":
        return Fraction(1, k + 1)
    if expr == "1/(k+1)^2":
        return Fraction(1, (k + 1) ** 2)
    return Fraction(1, 2 ** k)
