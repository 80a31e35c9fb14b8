import pytest

from cutfree import psc
from cutfree.derivation import CUT_FREE_RULES, RJ, Derivation, dumps, loads
from cutfree.preorder import Preorder
from cutfree.search import Prover, SearchLimit
from cutfree.syntax import Sequent, parse_sequent

A = Preorder.discrete(["a", "b", "p(1)", "p(2)"])


@pytest.mark.parametrize(
    "text",
    [
        "a |- a",
        "a |- ~~a",
        "~~~a |- ~a",
        "~a |- ~~~a",
        "a, ~a |-",
        "a & b |- b & a",
        "/\\x. p(x) |- p(2)",
        "p(1), p(2) |- /\\x. p(x)",
        "~a |- ~(a & b)",
        "a |- ~(~a & b)",
    ],
)
def test_derivable(text):
    s = parse_sequent(text)
    d = psc.prove_psc(A, s, 2)
    assert d is not None and d.conclusion == s
    assert not psc.check_psc(A, d, 2)
    assert d.rules_used() <= CUT_FREE_RULES - {RJ}


@pytest.mark.parametrize(
    "text",
    ["~~a |- a", "|-", "a |- b", "~(a & b) |- ~a", "p(1) |- /\\x. p(x)", "~a |- ~b", "|- ~a"],
)
def test_not_derivable(text):
    assert not psc.decide_psc(A, parse_sequent(text), 2)


def test_bound_matters_for_omega():
    s = parse_sequent("p(1), p(2) |- /\\x. p(x)")
    wide = Preorder.discrete(["p(1)", "p(2)", "p(3)"])
    assert psc.decide_psc(wide, s, 2)
    assert not psc.decide_psc(wide, s, 3)


def test_preorder_is_used():
    pre = Preorder.build("ab", [("a", "b")], absurd=[])
    assert psc.decide_psc(pre, parse_sequent("a |- b"), 2)
    assert psc.decide_psc(pre, parse_sequent("~b |- ~a"), 2)
    assert not psc.decide_psc(pre, parse_sequent("~a |- ~b"), 2)


def test_absurd_marker_gives_negation():
    pre = Preorder.build("ab", absurd=["a"])
    assert psc.decide_psc(pre, parse_sequent("|- ~a"), 2)
    assert psc.decide_psc(pre, parse_sequent("a |- b"), 2)


def test_checker_reports_bad_steps():
    s = parse_sequent("a |- b")
    bogus = Derivation("base", s)
    problems = psc.check_psc(A, bogus, 2)
    assert problems


def test_cut_is_not_a_rule():
    from cutfree.derivation import DerivationError

    d = psc.prove_psc(A, parse_sequent("a |- ~~a"), 2)
    with pytest.raises(DerivationError):
        Derivation("cut", parse_sequent("a |- ~~a"), (d, d))


def test_undeclared_generator_is_an_error():
    with pytest.raises(Exception):
        psc.decide_psc(A, parse_sequent("z |- z"), 2)


def test_derivation_json_round_trip():
    d = psc.prove_psc(A, parse_sequent("/\\x. ~p(x) |- ~p(2) & ~p(1)"), 2)
    assert loads(dumps(d)) == d


def test_brute_force_agrees_on_small_universe():
    universe = [t for s in ("a", "~a", "~~a", "a & b", "b") for t in parse_sequent(s + " |-").antecedent]
    fix = psc.brute_force_psc(A, universe, None, 2)
    prover = Prover(A.closure, 2)
    for s in fix:
        assert prover.decide(s)
    assert parse_sequent("a, ~a |-") in fix
    assert parse_sequent("~~a |- a") not in fix


def test_goal_cap_raises():
    p = Prover(A.closure, 2, max_goals=3)
    with pytest.raises(SearchLimit):
        p.decide(parse_sequent("~~~a, ~(a & b), /\\x. p(x) |- ~(~a & ~b)"))
