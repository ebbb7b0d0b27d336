import warnings
from fractions import Fraction as Q
from math import lcm

import pytest
from hypothesis import given

from conftest import rng_for, seeds
from fhyper.errors import DivisionError, PartitionError, RepairWarning
from fhyper.index_algebra import OMEGA, finite_set, interval_from, residue
from fhyper.poly import Poly, RationalFunc
from fhyper.sampling import random_seq
from fhyper.sequences import (
    MINUS_INFINITY,
    PLUS_INFINITY,
    Limit,
    arith,
    cluster_limits,
    constant,
    from_expr,
    index_seq,
    piecewise,
    truth_set,
)

EVENS, ODDS = residue(0, 2), residue(1, 2)
N = RationalFunc.var()
ONE = RationalFunc.const(1)
LA = piecewise([(EVENS, 2), (ODDS, 0)])
LB = piecewise([(EVENS, 0), (ODDS, 2)])
ALT = piecewise([(EVENS, Q(1, 2)), (ODDS, Q(-1, 2))])


class TestPoly:
    def test_natural_roots(self):
        p = Poly.of(-6, 11, -6, 1)  # (n-1)(n-2)(n-3)
        assert p.natural_roots() == [1, 2, 3]
        assert Poly.of(0, 1).natural_roots() == [0]
        assert Poly.of(1, 1).natural_roots() == []

    def test_lowest_terms(self):
        r = RationalFunc.make(Poly.of(-1, 0, 1), Poly.of(-2, 2))  # (n^2-1)/(2n-2)
        assert r == RationalFunc.make(Poly.of(Q(1, 2), Q(1, 2)))
        assert r.den.lead == 1

    def test_integer_and_fraction_evaluation_agree(self):
        r = RationalFunc.make(Poly.of(Q(1, 3), -2, Q(5, 7)), Poly.of(3, 1))
        for i in range(12):
            assert r(i) == r(Q(i))

    def test_printing(self):
        assert str(ONE / (N + ONE)) == "1/(n + 1)"
        assert str(N * N - ONE) == "n^2 - 1"


class TestExamples:
    def test_constant(self):
        assert constant(5)(17) == 5
        assert truth_set(constant(2) + constant(3), "=", constant(5)) == OMEGA

    def test_hypernatural_sequence(self):
        a = piecewise([(EVENS, N / RationalFunc.const(2)), (ODDS, Q(1, 2))])
        assert a(6) == 3 and a(7) == Q(1, 2)

    def test_repair_of_one_over_n(self):
        with pytest.warns(RepairWarning):
            a = piecewise([(OMEGA, ONE / N)])
        assert a(0) == 0 and a(4) == Q(1, 4)
        assert a.repaired == frozenset({0})
        assert any(c == finite_set([0]) for c, _ in a.pieces)

    def test_partition_errors(self):
        with pytest.raises(PartitionError):
            piecewise([(EVENS, 1)])
        with pytest.raises(PartitionError):
            piecewise([(EVENS, 1), (residue(0, 4) | ODDS, 2)])

    def test_laugwitz_product(self):
        assert arith("*", LA, LB) == constant(0)

    def test_self_difference(self):
        a = from_expr(N * N + ONE)
        assert arith("-", a, a) == constant(0)

    def test_division_by_laugwitz_fails(self):
        with pytest.raises(DivisionError):
            arith("/", constant(1), LA)

    def test_truth_sets(self):
        x = from_expr(ONE / (N + ONE))
        assert truth_set(x, "<", constant(Q(1, 3))) == interval_from(3)
        assert truth_set(LA, "=", constant(0)) == ODDS
        assert truth_set(LA, "=", LA) == OMEGA

    def test_cluster_limits(self):
        assert cluster_limits(ALT, OMEGA) == [(EVENS, Limit.finite(Q(1, 2))), (ODDS, Limit.finite(Q(-1, 2)))]
        assert cluster_limits(constant(7), OMEGA) == [(OMEGA, Limit.finite(7))]
        assert cluster_limits(index_seq(), OMEGA) == [(OMEGA, PLUS_INFINITY)]
        assert cluster_limits(-index_seq(), OMEGA) == [(OMEGA, MINUS_INFINITY)]

    def test_cluster_limits_needs_infinite_set(self):
        with pytest.raises(ValueError):
            cluster_limits(ALT, finite_set([1, 2]))


def _bound(*seqs):
    m = lcm(*(c.modulus for s in seqs for c, _ in s.pieces))
    return 4 * m + max(s.scan_bound() for s in seqs) + 1


OPS = {"=": lambda x, y: x == y, "#": lambda x, y: x != y, "<": lambda x, y: x < y,
       "<=": lambda x, y: x <= y, ">": lambda x, y: x > y, ">=": lambda x, y: x >= y}


@given(seeds)
def test_truth_set_matches_pointwise_oracle(seed):
    rng = rng_for(seed)
    a, b = random_seq(rng), random_seq(rng)
    op = rng.choice(list(OPS))
    s = truth_set(a, op, b)
    for n in range(_bound(a, b) + 30):
        assert (n in s) == OPS[op](a(n), b(n)), (n, str(a), op, str(b))


@given(seeds)
def test_arith_is_pointwise(seed):
    rng = rng_for(seed)
    a, b = random_seq(rng), random_seq(rng)
    for op, f in (("+", Q.__add__), ("-", Q.__sub__), ("*", Q.__mul__)):
        c = arith(op, a, b)
        for n in range(40):
            assert c(n) == f(a(n), b(n))


@given(seeds)
def test_congruence(seed):
    rng = rng_for(seed)
    a, a2, b, b2 = (random_seq(rng, 4, 2) for _ in range(4))
    both = truth_set(a, "=", a2) & truth_set(b, "=", b2)
    for op in "+-*":
        assert both.issubset(truth_set(arith(op, a, b), "=", arith(op, a2, b2)))


@given(seeds)
def test_equality_is_an_equivalence(seed):
    rng = rng_for(seed)
    a, b, c = (random_seq(rng, 4, 1) for _ in range(3))
    assert truth_set(a, "=", b) == truth_set(b, "=", a)
    assert (truth_set(a, "=", b) & truth_set(b, "=", c)).issubset(truth_set(a, "=", c))


@given(seeds)
def test_cluster_limits_ignore_finite_edits(seed):
    rng = rng_for(seed)
    a = random_seq(rng)
    pts = sorted({rng.randrange(40) for _ in range(3)})
    pieces = [(c - finite_set(pts), e) for c, e in a.pieces]
    pieces += [(finite_set([p]), rng.randint(-9, 9)) for p in pts]
    b = piecewise(pieces, warn=False)
    assert cluster_limits(a, OMEGA) == cluster_limits(b, OMEGA)


@given(seeds)
def test_poles_are_repaired(seed):
    rng = rng_for(seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RepairWarning)
        a = random_seq(rng, poles=True)
    for c, e in a.pieces:
        if c.is_infinite:
            assert not [i for i in e.poles() if i in c]
    assert all(isinstance(a(n), Q) for n in range(30))
