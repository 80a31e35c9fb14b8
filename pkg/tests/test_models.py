import numpy as np
import pytest

from cutfree import models
from cutfree.preorder import Preorder
from cutfree.syntax import parse_sequent, parse_term

A = Preorder.discrete("a")


def test_enumeration_sizes():
    ms = models.enumerate_psc(4)
    assert [m.size for m in ms] == [2, 3, 4, 4]
    assert len(models.enumerate_psc(4, include_trivial=True)) == 5
    assert all(not models.validate_psc(m) for m in ms)


def test_enumeration_cap():
    with pytest.raises(models.ModelError):
        models.enumerate_psc(6)


def test_three_chain_pseudocomplements():
    m = models.chain(3)
    assert m.names == ("0", "m", "1")
    assert m.pcomp.tolist() == [2, 0, 0]
    assert m.leq(0, 1) and not m.leq(2, 1)


def test_validation_finds_broken_tables():
    m = models.chain(3)
    bad = models.FinitePSC(m.meet, [2, 1, 0], m.bottom, m.top, m.names)
    laws = {v.law for v in models.validate_psc(bad)}
    assert "pseudocomplement" in laws


def test_constructor_rejects_bad_shapes():
    with pytest.raises(models.ModelError):
        models.FinitePSC([[0, 1]], [0], 0, 0)
    with pytest.raises(models.ModelError):
        models.FinitePSC([[0, 0], [0, 1]], [1, 0], 0, 1, ("x", "x"))


def test_eval_term_in_three_chain():
    m = models.chain(3)
    t = parse_term("~~a")
    assert models.eval_term(m, {"a": 1}, t, 2) == 2
    assert not models.eval_sequent(m, {"a": 1}, parse_sequent("~~a |- a"), 2)
    assert models.eval_sequent(m, {"a": 1}, parse_sequent("a |- ~~a"), 2)


def test_vector_matches_pointwise():
    pre = Preorder.build("ab", [("a", "b")])
    for m in models.enumerate_psc(4):
        names, rows = models.assignments(m, pre)
        index = {g: i for i, g in enumerate(names)}
        s = parse_sequent("~(a & ~b) |- ~~b")
        vec = models.sequent_vector(m, index, rows, s, 2)
        for r, v in zip(rows, vec):
            asg = {g: int(r[i]) for g, i in index.items()}
            assert models.eval_sequent(m, asg, s, 2) == bool(v)


def test_assignments_respect_preorder():
    pre = Preorder.build("ab", [("a", "b")], absurd=[])
    m = models.chain(3)
    names, rows = models.assignments(m, pre)
    ia, ib = names.index("a"), names.index("b")
    assert all(m.leq(r[ia], r[ib]) for r in rows)
    assert len(rows) == 6


def test_countermodel_search():
    hit = models.countermodel(models.enumerate_psc(4), A, parse_sequent("~~a |- a"), 2)
    assert hit is not None
    m, asg = hit
    assert m.size == 3 and asg == {"a": 1}
    assert models.countermodel(models.enumerate_psc(4), A, parse_sequent("a |- ~~a"), 2) is None


def test_boolean_pair_validates_excluded_middle_shape():
    m = models.boolean_pair()
    assert models.eval_sequent(m, {"a": 0}, parse_sequent("~~a |- a"), 2)


def test_text_format_round_trip():
    for m in models.enumerate_psc(4):
        assert models.parse_model(models.print_model(m)) == m


def test_text_format_errors():
    with pytest.raises(models.ModelError):
        models.parse_model("meet\n")
    with pytest.raises(models.ModelError):
        models.parse_model("carrier 0 1\nmeet\n0 0\n0 1\npcomp 1 0\nbottom 0\n")


def test_sound_on_reports_failures():
    bad = [parse_sequent("~~a |- a")]
    fails = models.sound_on(models.enumerate_psc(4), A, bad, 2)
    assert fails and fails[0][0] == bad[0]
