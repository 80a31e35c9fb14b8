"""Hypothesis strategies and seeded random generators for tests."""

import itertools
import random

from hypothesis import strategies as st

from helpers import terms_upto
from cutfree import arith
from cutfree.cut import Transformer
from cutfree.derivation import CUT_FREE_RULES
from cutfree.syntax import (
    Join,
    Lit,
    Meet,
    Neg,
    OmegaMeet,
    Plus,
    Prime,
    Sequent,
    Succ,
    Var,
    conjuncts,
    meet,
    parse_term,
    sort_terms,
    subst_term,
)

BINDERS = ("x", "y", "z")


# ---------------------------------------------------------------------------
# hypothesis


def numerals(scope=()):
    leaves = st.integers(1, 5).map(Lit)
    if scope:
        leaves = leaves | st.sampled_from([Var(v) for v in scope])

    def extend(inner):
        return st.one_of(
            inner.filter(lambda t: not isinstance(t, Lit)).map(Succ),
            st.tuples(inner, inner).map(lambda lr: Plus(*lr)),
        )

    return st.recursive(leaves, extend, max_leaves=4)


def primes(scope=()):
    nums = numerals(scope)
    return st.one_of(
        st.sampled_from([Prime("a"), Prime("b"), Prime("c")]),
        nums.map(lambda n: Prime("p", (n,))),
        st.tuples(nums, nums).map(lambda lr: Prime("q", lr)),
        st.tuples(st.sampled_from(["=", "<"]), nums, nums).map(lambda t: Prime(t[0], (t[1], t[2]))),
    )


@st.composite
def terms(draw, scope=(), max_depth=3):
    if max_depth == 0 or draw(st.integers(0, 3)) == 0:
        return draw(primes(scope))
    kind = draw(st.sampled_from(["neg", "meet", "omega"]))
    if kind == "neg":
        return Neg(draw(terms(scope, max_depth - 1)))
    if kind == "meet":
        parts = draw(st.lists(terms(scope, max_depth - 1), min_size=2, max_size=3))
        return Meet(tuple(parts))
    if len(scope) == len(BINDERS):
        return draw(primes(scope))
    var = BINDERS[len(scope)]
    return OmegaMeet(var, draw(terms(scope + (var,), max_depth - 1)))


@st.composite
def sequents(draw):
    left = draw(st.lists(terms(max_depth=2), max_size=3))
    right = draw(st.none() | terms(max_depth=2))
    return Sequent.of(left, right)


@st.composite
def dl_terms(draw, gens="abc", max_depth=3):
    if max_depth == 0 or draw(st.integers(0, 2)) == 0:
        return Prime(draw(st.sampled_from(gens)))
    parts = tuple(draw(st.lists(dl_terms(gens, max_depth - 1), min_size=2, max_size=3)))
    return Meet(parts) if draw(st.booleans()) else Join(parts)


# ---------------------------------------------------------------------------
# seeded random pools


def psc_pool():
    return terms_upto(2)


def random_psc_sequent(rng: random.Random, pool, max_left: int = 2) -> Sequent:
    left = rng.sample(pool, rng.randint(0, max_left))
    right = rng.choice(list(pool) + [None])
    return Sequent.of(left, right)


def dl_terms_upto(max_depth: int, gens="abc") -> list:
    """Every lattice term of depth <= ``max_depth`` with binary meets and joins of distinct parts."""
    levels = [[Prime(g) for g in gens]]
    for d in range(1, max_depth + 1):
        lower = [t for lv in levels for t in lv]
        new = []
        for t, u in itertools.combinations(lower, 2):
            if t in levels[-1] or u in levels[-1]:
                new += [Meet((t, u)), Join((t, u))]
        levels.append(new)
    return [t for lv in levels for t in lv]


def dl_terms_depth(d: int, rng: random.Random, count: int, gens="abc") -> list:
    """``count`` random terms of depth exactly ``d``."""
    below = dl_terms_upto(d - 1, gens)
    top = [t for t in below if _dl_depth(t) == d - 1]
    out = []
    while len(out) < count:
        t = rng.choice(top)
        u = rng.choice(below)
        if t != u:
            out.append(Meet((t, u)) if rng.random() < 0.5 else Join((t, u)))
    return out


def _dl_depth(t) -> int:
    if isinstance(t, Prime):
        return 0
    parts = t.conjuncts if isinstance(t, Meet) else t.disjuncts
    return 1 + max(_dl_depth(c) for c in parts)


# ---------------------------------------------------------------------------
# calculus N


N_CLOSED = [parse_term(s) for s in ("1=1", "1<1", "1'=1+1", "1''<1'")]
N_OPEN_X = [parse_term(s, allow_free=True) for s in ("x=x", "1<x", "x<1''", "x=1'")]


def n_pool() -> list:
    """Closed formulas of depth <= 2 over a few true and false primes."""
    base = list(N_CLOSED)
    omegas = [OmegaMeet("x", b) for b in N_OPEN_X]
    omegas += [OmegaMeet("x", Neg(b)) for b in N_OPEN_X[:2]]
    depth1 = [Neg(t) for t in base] + [Meet(p) for p in itertools.combinations(base, 2)] + omegas
    depth2 = [Neg(t) for t in depth1[:8]] + [Meet((t, u)) for t in base[:2] for u in depth1[:6]]
    return sort_terms(set(base + depth1 + depth2))


def n_open_pool(var: str = "a") -> list:
    """Formulas with one free variable ``var``."""
    opens = [subst_term(b, "x", Var(var)) for b in N_OPEN_X]
    out = list(opens) + [Neg(t) for t in opens]
    out += [Meet((t, c)) for t in opens for c in N_CLOSED[:2]]
    out += [Meet(p) for p in itertools.combinations(opens, 2)]
    return sort_terms(set(out))


def n_admissible_suite(rng: random.Random, bound: int, per_rule: int) -> dict:
    """Run rules k-q on ``per_rule`` random derivable instances each.

    Returns the number of checked outputs per rule; raises on the first
    output that fails the checker or has the wrong conclusion.
    """
    tr = Transformer(arith.N_BASE, bound, allow_j=True)
    prover = arith.n_prover(bound)
    closed = n_pool()
    opens = n_open_pool()
    counts = dict.fromkeys("klmnopq", 0)

    def ok(d, want, rule):
        problems = arith.check_nderivation(d, bound)
        assert not problems, (rule, str(problems[0]))
        assert d.conclusion == want, (rule, str(d.conclusion), str(want))
        assert d.rules_used() <= CUT_FREE_RULES
        assert prover.decide(want)
        counts[rule] += 1

    def random_seq(pool):
        return Sequent.of(rng.sample(pool, rng.randint(0, 2)), rng.choice(pool + [None]))

    mixed = closed + opens
    guard = 0
    while min(counts[r] for r in "klmno") < per_rule:
        guard += 1
        assert guard < 200_000, counts
        s = random_seq(mixed)
        d = prover.prove(s)
        if d is None:
            continue
        c = s.succedent
        if counts["k"] < per_rule and c is not None:
            rest = random_seq(mixed)
            right = Sequent(rest.antecedent | conjuncts(c), rest.succedent)
            d2 = prover.prove(right)
            if d2 is not None:
                want = Sequent((right.antecedent - conjuncts(c)) | s.antecedent, right.succedent)
                ok(tr.cut(d, d2), want, "k")
        if isinstance(c, Meet) and counts["l"] < per_rule:
            ok(tr.invert_meet(d, 0), s.with_succedent(c.conjuncts[0]), "l")
            ok(tr.invert_meet(d, len(c.conjuncts) - 1), s.with_succedent(c.conjuncts[-1]), "m")
        if isinstance(c, Neg) and counts["n"] < per_rule:
            ok(tr.invert_neg(d), Sequent(s.antecedent | conjuncts(c.body), None), "n")
        if isinstance(c, OmegaMeet) and counts["o"] < per_rule:
            n = rng.randint(1, bound)
            ok(tr.invert_omega(d, n), s.with_succedent(c.instance(n)), "o")

    while counts["p"] < per_rule:
        guard += 1
        assert guard < 400_000, counts
        s = random_seq(opens + closed[:4])
        if "a" not in s.free_vars():
            continue
        d = prover.prove(s)
        if d is None:
            continue
        n = rng.randint(1, bound)
        ok(tr.specialize(d, "a", n), s.subst("a", n), "p")

    schemas = opens + [meet(t, u) for t, u in itertools.combinations(opens, 2)]
    steps = []
    for body in schemas:
        step = Sequent(conjuncts(body), subst_term(body, "a", Succ(Var("a"))))
        d = prover.prove(step)
        if d is not None:
            steps.append((body, d))
    assert steps
    while counts["q"] < per_rule:
        body, d = rng.choice(steps)
        out = arith.derive_induction("a", body, d, bound)
        first = subst_term(body, "a", Lit(1))
        want = Sequent(conjuncts(first), subst_term(body, "a", Var("b")))
        ok(out, want, "q")
    return counts

