"""Calculus K over a preordered set of generators: decide, prove, check."""

from __future__ import annotations

from typing import Iterable, Optional

from . import derivation as _d
from .derivation import Derivation
from .preorder import Preorder
from .search import Prover, brute_force_derivations
from .syntax import Sequent


def prover(p: Preorder, bound: int) -> Prover:
    return Prover(p.closure, bound)


def decide_psc(p: Preorder, s: Sequent, bound: int) -> bool:
    return prover(p, bound).decide(s)


def prove_psc(p: Preorder, s: Sequent, bound: int) -> Optional[Derivation]:
    return prover(p, bound).prove(s)


def check_psc(p: Preorder, d: Derivation, bound: int) -> list:
    """Problems found in ``d``; an empty list means every node is a rule instance."""
    return _d.check_derivation(p.closure, d, bound)


def brute_force_psc(p: Preorder, universe: Iterable, depth: Optional[int], bound: int, cap: int = 200_000):
    return brute_force_derivations(p.closure, universe, depth, bound, cap)
