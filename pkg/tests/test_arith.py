import random

import pytest

import strategies
from cutfree import arith
from cutfree.syntax import FreeVariableError, Lit, Prime, Sequent, Var, free_vars, parse_sequent, parse_term


@pytest.mark.parametrize(
    "text,value",
    [("1 = 1", True), ("1+1 = 1'", True), ("1 < 1", False), ("1' < 1+1+1", True), ("1'' = 1+1", False)],
)
def test_eval_prime(text, value):
    assert arith.eval_prime(parse_term(text)) is value


def test_eval_rejects_open_and_foreign_primes():
    with pytest.raises(FreeVariableError):
        arith.eval_prime(Prime("=", (Var("x"), Lit(1))))
    with pytest.raises(arith.CalculusNError):
        arith.N_BASE.check_prime(Prime("a"))


def test_base_relation():
    t, f = parse_term("1 = 1"), parse_term("1 < 1")
    assert arith.base_holds(Sequent(frozenset(), t))
    assert arith.base_holds(Sequent(frozenset([f]), None))
    assert not arith.base_holds(Sequent(frozenset([t]), f))
    assert not arith.base_holds(Sequent(frozenset(), None))


def test_decide_n():
    assert arith.decide_n(parse_sequent("|- /\\x. x = x"), 3)
    assert arith.decide_n(parse_sequent("|- ~/\\x. x < 1"), 3)
    assert not arith.decide_n(parse_sequent("|- /\\x. x < 1''"), 3)
    assert arith.decide_n(parse_sequent("|- /\\x. x < 1''''"), 3)


def test_free_variable_goal_uses_rule_j():
    d = arith.prove_n(parse_sequent("|- a = a", allow_free=True), 3)
    assert d is not None and d.rule == "j"
    assert not arith.check_nderivation(d, 3)


def test_dne_for_compound_formulas():
    for text in ("~(1 = 1)", "1 = 1 & 1 < 1'", "/\\x. ~(x < 1)"):
        a = parse_term(text)
        d = arith.derive_dne(a, 3)
        assert d.conclusion == Sequent(frozenset([parse_term(f"~~({text})")]), a)
        assert not arith.check_nderivation(d, 3)


def test_induction_conclusion():
    body = parse_term("x = x", allow_free=True)
    step = arith.prove_n(parse_sequent("x = x |- x' = x'", allow_free=True), 3)
    d = arith.derive_induction("x", body, step, 3)
    assert d.conclusion == parse_sequent("1 = 1 |- b = b", allow_free=True)
    assert not arith.check_nderivation(d, 3)


def test_specialize():
    d = arith.prove_n(parse_sequent("1 < a |- ~(a = 1)", allow_free=True), 3)
    out = arith.specialize(d, "a", 2, 3)
    assert out.conclusion == parse_sequent("1 < 1' |- ~(1' = 1)")
    assert not arith.check_nderivation(out, 3)


def test_universe_helpers():
    terms = arith.numeral_terms(2)
    assert Lit(1) in terms and Lit(2) in terms
    primes = arith.prime_formulas(terms)
    reps = arith.representatives(primes, None, 3)
    assert len(reps) == 2
    universe = arith.formula_universe(1, reps, [], "x")
    assert universe and all(not free_vars(t) for t in universe)


def test_consistency_small():
    r = arith.consistency_check(3, 1)
    assert r.consistent and r.complete
    assert any("consistent" in line for line in r.lines())


def test_corrupted_base_is_caught():
    r = arith.consistency_check(3, 0, base=arith.ArithmeticBase(accept_empty=True))
    assert not r.consistent and r.witness == "|-"


def test_admissible_rules_small_run():
    counts = strategies.n_admissible_suite(random.Random(3), 3, 10)
    assert all(v >= 10 for v in counts.values()), counts
