"""The free distributive lattice over a preorder.

Elements are terms over generators with ``&`` and ``|``.  The order is
decided by a multi-conclusion entailment between generator sets: a join of
meets lies below a meet of joins when every (meet clause, join clause) pair
is an entailment.
"""

from __future__ import annotations

import itertools
from typing import Iterable

import numpy as np

from . import _kernels
from .preorder import Preorder, PreorderError, generator_key
from .syntax import Join, Meet, Prime, Term, meet, parse_term, print_term


class DLTermError(ValueError):
    pass


def parse_dlterm(text: str) -> Term:
    t = parse_term(text, joins=True)
    _check(t)
    return t


def _check(t: Term) -> None:
    if isinstance(t, Prime):
        generator_key(t)
    elif isinstance(t, Meet):
        for c in t.conjuncts:
            _check(c)
    elif isinstance(t, Join):
        for c in t.disjuncts:
            _check(c)
    else:
        raise DLTermError(f"only generators, '&' and '|' are allowed here: {print_term(t)}")


def join(*terms: Term) -> Term:
    flat = []
    for t in terms:
        flat.extend(t.disjuncts if isinstance(t, Join) else (t,))
    uniq = list(dict.fromkeys(flat))
    return uniq[0] if len(uniq) == 1 else Join(tuple(uniq))


def generators_of(t: Term) -> frozenset:
    if isinstance(t, Prime):
        return frozenset([generator_key(t)])
    parts = t.conjuncts if isinstance(t, Meet) else t.disjuncts
    return frozenset().union(*(generators_of(c) for c in parts))


def _absorb(clauses) -> frozenset:
    clauses = set(clauses)
    return frozenset(c for c in clauses if not any(d < c for d in clauses))


def dnf(t: Term) -> frozenset:
    """Join of meets, as a set of generator sets with absorption."""
    if isinstance(t, Prime):
        return frozenset([frozenset([generator_key(t)])])
    if isinstance(t, Join):
        return _absorb(itertools.chain.from_iterable(dnf(c) for c in t.disjuncts))
    if isinstance(t, Meet):
        acc = {frozenset()}
        for c in t.conjuncts:
            acc = _absorb(a | b for a in acc for b in dnf(c))
        return frozenset(acc)
    raise DLTermError(f"not a lattice term: {print_term(t)}")


def cnf(t: Term) -> frozenset:
    """Meet of joins, as a set of generator sets with absorption."""
    if isinstance(t, Prime):
        return frozenset([frozenset([generator_key(t)])])
    if isinstance(t, Meet):
        return _absorb(itertools.chain.from_iterable(cnf(c) for c in t.conjuncts))
    if isinstance(t, Join):
        acc = {frozenset()}
        for c in t.disjuncts:
            acc = _absorb(a | b for a in acc for b in cnf(c))
        return frozenset(acc)
    raise DLTermError(f"not a lattice term: {print_term(t)}")


def decide_ent(p: Preorder, left: Iterable, right: Iterable) -> bool:
    """``A |- B``: the least entailment relation containing ``p``."""
    cl = p.closure
    left = [generator_key(g) for g in left]
    right = [generator_key(g) for g in right]
    for g in left + right:
        cl.check_prime(g)
    if any(cl.is_absurd(a) for a in left) or any(cl.is_top(b) for b in right):
        return True
    return any(cl.holds(a, b) for a in left for b in right)


def decide_dl(p: Preorder, s: Term, t: Term) -> bool:
    return all(decide_ent(p, c, d) for c in dnf(s) for d in cnf(t))


# ---------------------------------------------------------------------------
# semantic oracle


TWO_CHAIN = np.array([[True, True], [False, True]])


def monotone_assignments(p: Preorder, max_generators: int = 12):
    """(generator names, 0/1 matrix of every assignment respecting ``p``)."""
    cl = p.closure
    names = cl.names
    if len(names) > max_generators:
        raise PreorderError(f"{len(names)} generators exceeds the cap of {max_generators}")
    rows = _kernels.order_preserving_maps(cl.matrix, cl.absurd, cl.top, TWO_CHAIN, 0, 1)
    return names, rows.astype(bool)


def eval_two(t: Term, index: dict, rows: np.ndarray) -> np.ndarray:
    if isinstance(t, Prime):
        return rows[:, index[generator_key(t)]]
    if isinstance(t, Meet):
        return np.logical_and.reduce([eval_two(c, index, rows) for c in t.conjuncts])
    if isinstance(t, Join):
        return np.logical_or.reduce([eval_two(c, index, rows) for c in t.disjuncts])
    raise DLTermError(f"not a lattice term: {print_term(t)}")


def oracle_dl(p: Preorder, s: Term, t: Term, max_generators: int = 12) -> bool:
    """``s <= t`` under every order-preserving 0/1 assignment."""
    names, rows = monotone_assignments(p, max_generators)
    index = {g: i for i, g in enumerate(names)}
    for g in generators_of(s) | generators_of(t):
        if g not in index:
            raise PreorderError(f"undeclared generator {g!r}")
    return bool(np.all(~eval_two(s, index, rows) | eval_two(t, index, rows)))


# ---------------------------------------------------------------------------
# enumeration


def _term_of(clauses) -> Term:
    meets = [meet(*(parse_term(g) for g in sorted(c))) for c in sorted(clauses, key=sorted)]
    return join(*meets)


def free_dl_classes(p: Preorder, max_generators: int = 3) -> list:
    """Terms grouped by equality in the free distributive lattice over ``p``."""
    gens = sorted(p.generators)
    if len(gens) > max_generators:
        raise PreorderError(f"{len(gens)} generators exceeds the cap of {max_generators}")
    subsets = [
        frozenset(c) for r in range(1, len(gens) + 1) for c in itertools.combinations(gens, r)
    ]
    seen = set()
    terms = []
    for r in range(1, len(subsets) + 1):
        for combo in itertools.combinations(subsets, r):
            key = _absorb(combo)
            if key not in seen:
                seen.add(key)
                terms.append(_term_of(key))
    classes = []
    for t in terms:
        for cls in classes:
            if decide_dl(p, t, cls[0]) and decide_dl(p, cls[0], t):
                cls.append(t)
                break
        else:
            classes.append([t])
    return classes


def enumerate_free_dl(p: Preorder, max_generators: int = 3) -> int:
    return len(free_dl_classes(p, max_generators))
