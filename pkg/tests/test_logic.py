from fractions import Fraction as Q

import pytest
from hypothesis import given

from conftest import rng_for, seeds
from fhyper.errors import FragmentError, ParseError
from fhyper.filters import F0, contains, extend, try_extend
from fhyper.index_algebra import EMPTY, OMEGA, residue
from fhyper.logic import (
    And,
    BinOp,
    Const,
    Or,
    Quant,
    Rel,
    Var,
    check_structure_axioms,
    forces,
    forces_clausal,
    format_formula,
    function,
    parse,
    parse_term,
    stable_set,
    truth_index_set,
)
from fhyper.sampling import random_filter, random_formula, random_index_set, random_seq
from fhyper.sequences import constant, from_expr, piecewise
from fhyper.poly import RationalFunc

EVENS, ODDS = residue(0, 2), residue(1, 2)
LAUGWITZ = {"a": piecewise([(EVENS, 2), (ODDS, 0)]), "b": piecewise([(EVENS, 0), (ODDS, 2)])}


class TestParser:
    def test_product_atom(self):
        phi = parse("a*b = 0")
        assert phi == Rel("=", BinOp("*", Var("a"), Var("b")), Const(Q(0)))

    def test_disjunction(self):
        phi = parse(r"a = 0 \/ b = 0")
        assert isinstance(phi, Or)
        assert isinstance(phi.left, Rel) and isinstance(phi.right, Rel)

    def test_quantified_halo_formula(self):
        phi = parse(r"exists x (x ~~ r /\ ~(f(x) ~~ f(r)))")
        assert isinstance(phi, Quant) and phi.kind == "exists"
        assert isinstance(phi.body, And)
        assert phi.body.left == Rel("~~", Var("x"), Var("r"))

    @pytest.mark.parametrize("text", [
        "a*b = 0",
        r"a = 0 \/ b = 0 /\ ~(a < b)",
        r"exists x := 1/(n+1) (x > 0 /\ x ~~ 0)",
        r"forall x (x ~~ 0 -> abs(x) ~~ 0)",
        "S(a) -> st(delta(1/2), a)",
        "a^2 - 2*a + 1 >= 0",
        "min(a, b) <= max(a, b)",
        "seq{res(0,2) -> n, res(1,2) -> 1/3} # delta(-2)",
        r"(a # b) /\ true",
        "ite(a < 0, -a, a) = abs(a)",
    ])
    def test_round_trip(self, text):
        phi = parse(text)
        assert parse(format_formula(phi)) == phi

    @pytest.mark.parametrize("text, col", [
        ("a = = 0", 4),
        ("a + ", 4),
        (r"a = 0 /\ ", 9),
        ("(a = 0", 6),
    ])
    def test_error_positions(self, text, col):
        with pytest.raises(ParseError) as err:
            parse(text)
        assert err.value.pos == col
        assert f"column {col}" in str(err.value)


class TestTruthIndexSet:
    def test_laugwitz(self):
        assert truth_index_set(parse("a*b = 0"), LAUGWITZ) == OMEGA
        assert truth_index_set(parse(r"a = 0 \/ b = 0"), LAUGWITZ) == OMEGA
        assert truth_index_set(parse("a < a"), LAUGWITZ) == EMPTY

    def test_unannotated_quantifier_rejected(self):
        with pytest.raises(FragmentError):
            truth_index_set(parse("exists x (x = a)"), LAUGWITZ)

    def test_limit_atoms_rejected(self):
        with pytest.raises(FragmentError):
            truth_index_set(parse("a ~~ b"), LAUGWITZ)

    def test_witnessed_existential(self):
        phi = parse("exists x := a + 1 (x > a)")
        assert truth_index_set(phi, LAUGWITZ) == OMEGA


class TestForces:
    def test_zero_divisors(self):
        assert forces(F0, parse("a*b = 0"), LAUGWITZ).value
        v = forces(F0, parse("a = 0"), LAUGWITZ)
        assert not v.value and v.certificate == extend(F0, EVENS)
        assert v.describe_certificate() == "refuted by: F0 + res(0,2)"
        v = forces(F0, parse("b = 0"), LAUGWITZ)
        assert not v.value and v.certificate == extend(F0, ODDS)
        assert forces(F0, parse(r"a = 0 \/ b = 0"), LAUGWITZ).value

    def test_transfer_sentence(self):
        assert forces(F0, parse("delta(2) + delta(3) = delta(5)"), {}).value

    def test_verdict_matches_truth_set(self):
        v = forces(extend(F0, ODDS), parse("a = 0"), LAUGWITZ)
        assert v.value == contains(extend(F0, ODDS), v.truth_index_set)

    def test_continuity_shape(self):
        env = {"f": function(parse_term("abs(x)")), "r": constant(0)}
        assert forces(F0, parse(r"forall x (x ~~ r -> f(x) ~~ f(r))"), env).value
        step = function(parse_term("ite(x < 0, 0, 1)"))
        env = {"f": step, "r": constant(0)}
        assert forces(F0, parse(r"exists x (x ~~ r /\ ~(f(x) ~~ f(r)))"), env).value

    def test_witness_polarity(self):
        with pytest.raises(FragmentError):
            forces(F0, parse("forall x := a (x = a)"), LAUGWITZ)
        v = forces(F0, parse("exists x := a - 2 (x + 2 = a)"), LAUGWITZ)
        assert v.value and not v.exact

    def test_clausal_examples(self):
        phi = parse("~(a = 0)")
        assert not forces_clausal(F0, phi, LAUGWITZ)
        assert forces_clausal(extend(F0, EVENS), phi, LAUGWITZ)

    def test_halo_and_standardness(self):
        env = {"e": from_expr(RationalFunc.const(1) / (RationalFunc.var() + RationalFunc.const(1))),
               **LAUGWITZ}
        assert forces(F0, parse("e ~~ 0"), env).value
        assert not forces(F0, parse("a ~~ 0"), env).value
        assert forces(extend(F0, ODDS), parse("a ~~ 0"), env).value
        assert forces(F0, parse("S(a)"), env).value
        assert not forces(F0, parse("S(e)"), env).value
        assert forces(F0, parse(r"a ~~ 0 \/ a ~~ 2"), env).value
        assert forces_clausal(F0, parse(r"a ~~ 0 \/ a ~~ 2"), env)


@given(seeds)
def test_los_agreement(seed):
    rng = rng_for(seed)
    env = {k: random_seq(rng) for k in "abc"}
    phi = random_formula(rng, "abc", 3, limit_atoms=True)
    f = random_filter(rng)
    assert forces(f, phi, env).value == forces_clausal(f, phi, env), format_formula(phi)


@given(seeds)
def test_transfer_for_constant_sentences(seed):
    rng = rng_for(seed)
    env = {k: constant(rng.randint(-3, 3)) for k in "abc"}
    phi = random_formula(rng, "abc", 3)
    s = truth_index_set(phi, env)
    assert s in (EMPTY, OMEGA)
    expected = s == OMEGA
    for _ in range(3):
        assert forces(random_filter(rng), phi, env).value == expected


@given(seeds)
def test_persistence_and_refinability(seed):
    rng = rng_for(seed)
    env = {k: random_seq(rng) for k in "ab"}
    phi = random_formula(rng, "ab", 2)
    f = random_filter(rng)
    v = forces(f, phi, env)
    if v.value:
        g = try_extend(f, random_index_set(rng))
        if g is not None:
            assert forces(g, phi, env).value
    else:
        g = v.certificate
        assert not forces(g, phi, env).value
        for _ in range(4):
            h = try_extend(g, random_index_set(rng))
            if h is not None:
                assert not forces(h, phi, env).value


@given(seeds)
def test_regular_open_on_chains(seed):
    # f forces phi iff every g below f has some h below g forcing phi
    rng = rng_for(seed)
    env = {k: random_seq(rng) for k in "ab"}
    phi = random_formula(rng, "ab", 2)
    f = random_filter(rng)
    x = stable_set(phi, env)
    holds = forces(f, phi, env).value
    g = try_extend(f, random_index_set(rng)) or f
    dense = any(forces(h, phi, env).value
                for h in (g, try_extend(g, x), try_extend(g, ~x)) if h is not None)
    if holds:
        assert dense
    bad = try_extend(f, ~x)
    if not holds:
        assert bad is not None
        assert not forces(bad, phi, env).value


def test_fullness_of_witnesses():
    env = {"a": piecewise([(EVENS, 1), (ODDS, 3)])}
    phi = parse("exists x := a - 1 (x + 1 = a)")
    v = forces(F0, phi, env)
    assert v.value
    w = v.certificate["x"]
    assert forces(F0, parse("w + 1 = a"), {**env, "w": w}).value


class TestAxioms:
    def test_all_pass_on_order(self):
        rng = rng_for(5)
        env = {"a": random_seq(rng), "b": random_seq(rng)}
        filters = [F0] + [random_filter(rng) for _ in range(49)]
        report = check_structure_axioms(parse("a < b"), env, filters)
        assert report.ok, str(report)
        assert set(report.checks) == {"persistence", "refinability", "regular-open",
                                      "equality-equivalence", "equality-congruence"}

    def test_congruence_of_addition(self):
        report = check_structure_axioms(parse("a + b = b + a"), LAUGWITZ, [F0, extend(F0, EVENS)])
        assert report.checks["equality-congruence"]

    def test_mutant_is_caught(self):
        # a forcing procedure that reads the truth set through a complement bug
        def mutant(f, phi, env):
            return contains(f, ~truth_index_set(phi, env))

        report = check_structure_axioms(parse("a = 0"), LAUGWITZ, [F0, extend(F0, ODDS)], forcing=mutant)
        assert report.failed("refinability")
