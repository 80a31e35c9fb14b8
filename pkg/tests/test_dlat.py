import pytest
from hypothesis import given, settings

import strategies
from cutfree.dlat import (
    DLTermError,
    cnf,
    decide_dl,
    decide_ent,
    dnf,
    enumerate_free_dl,
    oracle_dl,
    parse_dlterm,
)
from cutfree.preorder import Preorder

ABC = Preorder.discrete("abc")


def test_normal_forms_absorb():
    t = parse_dlterm("a | a & b")
    assert dnf(t) == {frozenset("a")}
    assert cnf(parse_dlterm("a & (a | b)")) == {frozenset("a")}


def test_distributivity_both_ways():
    lhs = parse_dlterm("a & (b | c)")
    rhs = parse_dlterm("a & b | a & c")
    assert decide_dl(ABC, lhs, rhs) and decide_dl(ABC, rhs, lhs)


def test_join_is_not_below_a_generator():
    assert not decide_dl(ABC, parse_dlterm("a | b"), parse_dlterm("a"))
    assert decide_dl(ABC, parse_dlterm("a & b"), parse_dlterm("a | c"))


def test_markers_in_entailment():
    pre = Preorder.build("abc", absurd=["a"], top=["c"])
    assert decide_ent(pre, ["a"], [])
    assert decide_ent(pre, [], ["c"])
    assert not decide_ent(pre, ["b"], [])


def test_negation_rejected():
    with pytest.raises(DLTermError):
        parse_dlterm("~a")


def test_free_counts():
    assert enumerate_free_dl(ABC) == 18
    assert enumerate_free_dl(Preorder.discrete("ab")) == 4
    assert enumerate_free_dl(Preorder.build("ab", [("a", "b")])) == 2


@settings(max_examples=300, deadline=None)
@given(strategies.dl_terms(), strategies.dl_terms())
def test_agrees_with_two_valued_oracle(s, t):
    for pre in (ABC, Preorder.build("abc", [("a", "b")], absurd=["c"])):
        assert decide_dl(pre, s, t) == oracle_dl(pre, s, t)
