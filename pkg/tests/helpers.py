"""Shared builders for test universes and random inputs."""

import itertools
import random

from cutfree.preorder import Preorder
from cutfree.syntax import (
    Lit,
    Meet,
    Neg,
    OmegaMeet,
    Prime,
    Sequent,
    Var,
    conjuncts,
    depth,
    meet,
    sort_terms,
    subterms,
)

A = Prime("a")
P1 = Prime("p", (Lit(1),))
P2 = Prime("p", (Lit(2),))
PX = Prime("p", (Var("x"),))
GENERATORS = (A, P1, P2)

DISCRETE = Preorder.build(GENERATORS)
LINKED = Preorder.build(GENERATORS, [(P1, A), (A, P2)])


def terms_upto(max_depth: int) -> list:
    """Closed terms over ``a`` and unary ``p`` of depth <= ``max_depth``.

    Meets are binary over distinct parts; omega-meets bind ``x`` in bodies
    built from ``p(x)``.
    """
    closed = {0: [A, P1, P2]}
    open_ = {0: [PX]}
    for d in range(1, max_depth + 1):
        lower_c = [t for k in range(d) for t in closed[k]]
        lower_o = [t for k in range(d) for t in open_[k]]
        new_c, new_o = [], []
        new_c += [Neg(t) for t in closed[d - 1]]
        new_o += [Neg(t) for t in open_[d - 1]]
        for t, u in itertools.combinations(lower_c, 2):
            if depth(t) == d - 1 or depth(u) == d - 1:
                new_c.append(Meet((t, u)))
        for t in open_[d - 1]:
            for u in lower_c:
                new_o.append(Meet((t, u)))
        new_c += [OmegaMeet("x", b) for b in open_[d - 1]]
        closed[d] = sort_terms(set(new_c))
        open_[d] = sort_terms(set(new_o))
    return [t for d in range(max_depth + 1) for t in closed[d]]


def maximal_universes(max_depth: int = 2, bound: int = 2) -> list:
    """Universes ``subterms(t) + generators`` not contained in another one."""
    unis = {frozenset(subterms(t, bound)) | frozenset(GENERATORS) for t in terms_upto(max_depth)}
    unis = sorted(unis, key=lambda u: (-len(u), sorted(map(str, u))))
    keep = []
    for u in unis:
        if not any(u <= k for k in keep):
            keep.append(u)
    return keep


def acceptance_universes(bound: int = 2) -> list:
    """Maximal universes spanned by one or two terms of depth <= 2."""
    terms = terms_upto(2)
    gens = frozenset(GENERATORS)
    subs = [frozenset(subterms(t, bound)) for t in terms]
    unis = set(s | gens for s in subs)
    for s, u in itertools.combinations(subs, 2):
        unis.add(s | u | gens)
    unis = sorted(unis, key=lambda u: (-len(u), sorted(map(str, u))))
    keep = []
    for u in unis:
        if not any(u <= k for k in keep):
            keep.append(u)
    return keep


def sequents_over(universe) -> list:
    from cutfree.search import all_sequents

    return all_sequents(universe, cap=10**7)


def random_sequent(rng: random.Random, pool, max_left: int = 2, allow_empty_right: bool = True):
    left = rng.sample(pool, rng.randint(0, max_left))
    right = rng.choice(list(pool) + ([None] if allow_empty_right else []))
    ante = frozenset().union(*(conjuncts(t) for t in left)) if left else frozenset()
    return Sequent(ante, right)


def random_preorder(rng: random.Random, max_gens: int = 6, max_pairs: int = 10, markers: bool = True):
    n = rng.randint(1, max_gens)
    gens = [f"g{i}" for i in range(n)]
    pairs = [(rng.choice(gens), rng.choice(gens)) for _ in range(rng.randint(0, max_pairs))]
    absurd, top = [], []
    if markers and rng.random() < 0.3:
        absurd = [rng.choice(gens)]
    if markers and rng.random() < 0.3:
        top = [rng.choice(gens)]
    return Preorder.build(gens, pairs, absurd, top)
