from fractions import Fraction as Q

from hypothesis import given, strategies as st

from fhyper.intervals import EMPTY_UNION, EVERYTHING, interval, relation

bounds = st.fractions(min_value=-5, max_value=5, max_denominator=4)
ops = st.sampled_from(["<", "<=", ">", ">=", "=", "#"])
unions = st.builds(relation, ops, bounds) | st.builds(interval, bounds, bounds, st.booleans(), st.booleans())
probes = [Q(k, 8) for k in range(-48, 49)]


def test_relation_shapes():
    assert str(relation("<", 1)) == "(-oo, 1)"
    assert str(relation(">=", Q(1, 2))) == "[1/2, oo)"
    assert str(relation("#", 0)) == "(-oo, 0) U (0, oo)"
    assert str(relation("=", 3)) == "{3}"
    assert str(EMPTY_UNION) == "empty"


def test_merging():
    u = interval(0, 1, hi_closed=True) | interval(1, 2)
    assert u == interval(0, 2)
    assert interval(0, 1) | interval(1, 2) != interval(0, 2)
    assert (relation("<", 0) | relation(">=", 0)) == EVERYTHING
    assert interval(1, 0).is_empty


def test_sources_survive():
    u = relation("<", 1, src="hi") & relation(">", 0, src="lo")
    assert sorted(map(str, (s for _, s in u.endpoints()))) == ["hi", "lo"]


@given(unions, unions)
def test_boolean_ops_pointwise(a, b):
    for x in probes:
        assert (x in a | b) == (x in a or x in b)
        assert (x in a & b) == (x in a and x in b)
        assert (x in a - b) == (x in a and x not in b)
        assert (x in ~a) == (x not in a)
    assert (a & b).issubset(a)
    assert ~~a == a
