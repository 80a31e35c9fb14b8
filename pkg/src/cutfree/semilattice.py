"""The free meet-semilattice over a preorder, as a single-conclusion entailment."""

from __future__ import annotations

import itertools
from typing import Iterable

from .preorder import Preorder, PreorderError, generator_key


def _names(gens: Iterable) -> frozenset:
    return frozenset(generator_key(g) for g in gens)


def decide_sl(p: Preorder, left: Iterable, right: Iterable) -> bool:
    """``a1 & ... & an <= b1 & ... & bm`` in the free semilattice over ``p``.

    Each ``b`` on the right must lie above some ``a`` on the left.
    """
    left, right = _names(left), _names(right)
    if not left or not right:
        raise PreorderError("semilattice queries need nonempty sides")
    cl = p.closure
    return all(any(cl.holds(a, b) for a in left) for b in right)


def free_sl_classes(p: Preorder, max_generators: int = 5) -> list:
    """Nonempty generator meets grouped by equality in the free semilattice."""
    gens = sorted(p.generators)
    if len(gens) > max_generators:
        raise PreorderError(f"{len(gens)} generators exceeds the cap of {max_generators}")
    subsets = [
        frozenset(c) for r in range(1, len(gens) + 1) for c in itertools.combinations(gens, r)
    ]
    classes = []
    for s in subsets:
        for cls in classes:
            rep = cls[0]
            if decide_sl(p, s, rep) and decide_sl(p, rep, s):
                cls.append(s)
                break
        else:
            classes.append([s])
    return classes


def enumerate_free_sl(p: Preorder, max_generators: int = 5) -> int:
    return len(free_sl_classes(p, max_generators))
