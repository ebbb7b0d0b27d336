import pytest
from hypothesis import given

from conftest import rng_for, seeds
from fhyper.errors import ImproperFilterError
from fhyper.filters import F0, compatible, contains, extend, frechet, join, mk_filter, refines, try_extend
from fhyper.index_algebra import complement, finite_set, residue
from fhyper.logic import forces, parse
from fhyper.sampling import random_filter, random_index_set
from fhyper.sequences import constant, piecewise, truth_set

EVENS, ODDS = residue(0, 2), residue(1, 2)
LA = piecewise([(EVENS, 2), (ODDS, 0)])


class TestExamples:
    def test_frechet(self):
        assert contains(frechet(), complement(finite_set([0, 1])))
        assert not contains(frechet(), EVENS)
        assert refines(extend(F0, EVENS), frechet())

    def test_mk_filter(self):
        assert mk_filter([EVENS]).core == EVENS
        with pytest.raises(ImproperFilterError):
            mk_filter([EVENS, ODDS])
        assert mk_filter([EVENS, residue(0, 3)]).core == residue(0, 6)

    def test_contains(self):
        g = mk_filter([EVENS])
        assert contains(g, EVENS)
        assert not contains(g, residue(0, 4))
        assert not contains(g, finite_set([5]))

    def test_extend(self):
        g1 = extend(frechet(), EVENS)
        assert g1.core == EVENS and str(g1) == "F0 + res(0,2)"
        with pytest.raises(ImproperFilterError):
            extend(g1, ODDS)
        assert try_extend(g1, ODDS) is None

    def test_pass_to_subsequence(self):
        g = extend(F0, truth_set(LA, "=", constant(0)))
        assert forces(g, parse("x = 0"), {"x": LA}).value

    def test_refines(self):
        g = extend(F0, EVENS)
        assert refines(g, F0)
        assert not refines(F0, g)
        assert refines(g, g)

    def test_compatible(self):
        assert not compatible(extend(F0, EVENS), extend(F0, ODDS))
        assert compatible(F0, extend(F0, residue(3, 7)))
        assert compatible(extend(F0, residue(0, 4)), extend(F0, EVENS))

    def test_equality_by_core(self):
        assert extend(F0, EVENS) == extend(F0, EVENS - finite_set([0]))
        assert join(extend(F0, EVENS), extend(F0, residue(0, 3))).core == residue(0, 6)


@given(seeds)
def test_filter_laws(seed):
    rng = rng_for(seed)
    f = random_filter(rng)
    s, t = random_index_set(rng), random_index_set(rng)
    if contains(f, s) and contains(f, t):
        assert contains(f, s & t)
    if contains(f, s) and s.issubset(t):
        assert contains(f, t)
    if s.is_finite:
        assert not contains(f, s)


@given(seeds)
def test_persistence_and_monotonicity(seed):
    rng = rng_for(seed)
    f = random_filter(rng)
    s, t = random_index_set(rng), random_index_set(rng)
    g = try_extend(f, t)
    if g is None:
        return
    assert refines(g, f)
    if contains(f, s):
        assert contains(g, s)


@given(seeds)
def test_refinability(seed):
    rng = rng_for(seed)
    f = random_filter(rng)
    s = random_index_set(rng)
    if contains(f, s):
        return
    g = extend(f, complement(s))
    assert not contains(g, s)
    for _ in range(5):
        h = try_extend(g, random_index_set(rng))
        if h is not None:
            assert not contains(h, s)
