"""Backward proof search and brute-force forward enumeration of derivations.

The search works with implicit weakening: a basic relation may be used
inside any antecedent containing its prime, and left rules keep their
principal term (contraction).  Weakening steps are made explicit as rule-d
nodes when the derivation is assembled.
"""

from __future__ import annotations

import itertools
import sys
from collections import Counter
from typing import Iterable, Optional

from .derivation import BASE, RA, RB, RC, RD, RE, RF, RJ, Derivation, Family
from .syntax import (
    Meet,
    Neg,
    OmegaMeet,
    Prime,
    Sequent,
    conjuncts,
    sort_terms,
    subterms,
)

_INF = float("inf")


class SearchLimit(RuntimeError):
    pass


def weaken(d: Derivation, antecedent: frozenset) -> Derivation:
    """Weaken ``d`` to ``antecedent`` with one rule-d node (chains collapse)."""
    antecedent = frozenset(antecedent)
    if d.antecedent == antecedent:
        return d
    if not d.antecedent <= antecedent:
        raise ValueError("weakening cannot drop antecedent terms")
    if d.rule == RD:
        d = d.premisses[0]
    return Derivation(RD, Sequent(antecedent, d.succedent), (d,))


def _tighten(d: Derivation, smaller: frozenset) -> Derivation:
    """Weaken only up to ``smaller`` when the premiss allows it."""
    if d.rule == RD and d.premisses[0].antecedent <= smaller:
        return weaken(d.premisses[0], smaller)
    return d


class Prover:
    """Memoised backward search for one base theory at one bound.

    False results that depend on a goal still being explored higher up the
    stack are not cached, so the answer is independent of visiting order.
    """

    def __init__(self, base, bound: int, allow_j: bool = False, max_goals: Optional[int] = None):
        if bound < 1:
            raise ValueError("bound must be >= 1")
        self.base = base
        self.bound = bound
        self.allow_j = allow_j
        self.max_goals = max_goals
        self.memo: dict = {}
        self.onstack: dict = {}
        self.stats = Counter()

    def validate(self, s: Sequent) -> None:
        for t in s.terms():
            for u in subterms(t, self.bound):
                if isinstance(u, Prime):
                    self.base.check_prime(u)

    def prove(self, s: Sequent) -> Optional[Derivation]:
        self.validate(s)
        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, 20000))
        try:
            result, _ = self._search(s)
        finally:
            sys.setrecursionlimit(limit)
        return result

    def decide(self, s: Sequent) -> bool:
        return self.prove(s) is not None

    # -- search ------------------------------------------------------------

    def _search(self, goal: Sequent):
        if goal in self.memo:
            self.stats["memo_hits"] += 1
            return self.memo[goal], _INF
        if goal in self.onstack:
            self.stats["cycles"] += 1
            return None, self.onstack[goal]
        self.stats["goals"] += 1
        if self.max_goals is not None and self.stats["goals"] > self.max_goals:
            raise SearchLimit(f"more than {self.max_goals} goals explored")
        idx = len(self.onstack)
        self.onstack[goal] = idx
        low = _INF

        def sub(g):
            nonlocal low
            r, lw = self._search(g)
            if lw < low:
                low = lw
            return r

        try:
            result = self._expand(goal, sub)
        finally:
            del self.onstack[goal]
        if result is not None:
            self.memo[goal] = result
            return result, _INF
        if low >= idx:
            self.memo[goal] = None
            return None, _INF
        return None, low

    def _expand(self, goal: Sequent, sub) -> Optional[Derivation]:
        ante, succ = goal.antecedent, goal.succedent
        bound = self.bound

        fv = goal.free_vars()
        if fv:
            if not self.allow_j:
                return None
            v = min(fv)
            instances = []
            for n in range(1, bound + 1):
                r = sub(goal.subst(v, n))
                if r is None:
                    return None
                instances.append(r)
            return Derivation(RJ, goal, (), Family(v, bound, tuple(instances)))

        ordered = sort_terms(ante)

        # basic relations, weakened into the full antecedent
        if succ is None or isinstance(succ, Prime):
            base = self.base
            for p in ordered:
                if isinstance(p, Prime) and base.base_relation(frozenset([p]), succ):
                    leaf = Derivation(BASE, Sequent(frozenset([p]), succ))
                    return weaken(leaf, ante)
            if base.base_relation(frozenset(), succ):
                return weaken(Derivation(BASE, Sequent(frozenset(), succ)), ante)

        # right rules
        if isinstance(succ, Meet):
            prems = []
            for part in succ.conjuncts:
                r = sub(Sequent(ante, part))
                if r is None:
                    break
                prems.append(r)
            else:
                return Derivation(RA, goal, tuple(prems))
        elif isinstance(succ, Neg):
            r = sub(Sequent(ante | conjuncts(succ.body), None))
            if r is not None:
                return Derivation(RB, goal, (r,))
        elif isinstance(succ, OmegaMeet):
            prems = []
            for n in range(1, bound + 1):
                r = sub(Sequent(ante, succ.instance(n)))
                if r is None:
                    break
                prems.append(r)
            else:
                return Derivation(RC, goal, (), Family(succ.var, bound, tuple(prems)))

        # left rules, keeping the principal term
        for t in ordered:
            if isinstance(t, Neg):
                r = sub(Sequent(ante, t.body))
                if r is not None:
                    return Derivation(RE, goal, (_tighten(r, ante - {t}),))
        for t in ordered:
            if isinstance(t, OmegaMeet):
                for n in range(1, bound + 1):
                    extra = conjuncts(t.instance(n))
                    if extra <= ante:
                        continue
                    r = sub(Sequent(ante | extra, succ))
                    if r is not None:
                        return Derivation(RF, goal, (_tighten(r, (ante - {t}) | extra),))
        return None


# ---------------------------------------------------------------------------
# brute-force enumeration


def sequent_space(universe: Iterable) -> tuple:
    """(antecedent atoms, succedent options) for sequents over a term universe."""
    universe = frozenset(universe)
    atoms = set()
    for t in universe:
        atoms |= conjuncts(t)
    atoms = tuple(sort_terms(atoms))
    succs = (None,) + tuple(sort_terms(universe))
    return atoms, succs


def all_sequents(universe: Iterable, cap: int = 200_000) -> list:
    atoms, succs = sequent_space(universe)
    total = (1 << len(atoms)) * len(succs)
    if total > cap:
        raise SearchLimit(f"sequent space of {total} exceeds cap {cap}")
    out = []
    for r in range(len(atoms) + 1):
        for combo in itertools.combinations(atoms, r):
            a = frozenset(combo)
            for s in succs:
                out.append(Sequent(a, s))
    return out


def brute_force_derivations(base, universe: Iterable, depth: int, bound: int, cap: int = 200_000):
    """Sequents over ``universe`` derivable by a tree of height <= ``depth``.

    Every sequent in such a tree must itself lie over the universe, which is
    expected to be closed under ``subterms(., bound)``.  ``depth=None`` runs
    to the fixpoint.
    """
    universe = frozenset(universe)
    atoms, succs = sequent_space(universe)
    index = {t: i for i, t in enumerate(atoms)}
    n_atoms = len(atoms)
    total = (1 << n_atoms) * len(succs)
    if total > cap:
        raise SearchLimit(f"sequent space of {total} exceeds cap {cap}")
    universe_set = set(universe)

    def mask_of(terms) -> Optional[int]:
        m = 0
        for t in terms:
            i = index.get(t)
            if i is None:
                return None
            m |= 1 << i
        return m

    # per-succedent static data
    neg_atoms = [(i, t) for i, t in enumerate(atoms) if isinstance(t, Neg) and t.body in universe_set]
    omega_atoms = []
    for i, t in enumerate(atoms):
        if isinstance(t, OmegaMeet):
            insts = [mask_of(conjuncts(t.instance(n))) for n in range(1, bound + 1)]
            omega_atoms.append((i, insts))
    neg_body_mask = {}
    omega_inst = {}
    meet_parts = {}
    for s in succs:
        if isinstance(s, Neg):
            neg_body_mask[s] = mask_of(conjuncts(s.body))
        elif isinstance(s, OmegaMeet):
            omega_inst[s] = [s.instance(n) for n in range(1, bound + 1)]
        elif isinstance(s, Meet):
            meet_parts[s] = s.conjuncts

    def is_base(mask, s):
        if bin(mask).count("1") > 1:
            return False
        ante = frozenset(atoms[i] for i in range(n_atoms) if mask >> i & 1)
        if any(not isinstance(t, Prime) for t in ante):
            return False
        if s is not None and not isinstance(s, Prime):
            return False
        return base.base_relation(ante, s)

    derived = {s: set() for s in succs}
    for s in succs:
        for mask in range(1 << n_atoms):
            if is_base(mask, s):
                derived[s].add(mask)

    rounds = 1
    while depth is None or rounds < depth:
        prev = {s: frozenset(v) for s, v in derived.items()}
        changed = False
        for s in succs:
            have = prev[s]
            for mask in range(1 << n_atoms):
                if mask in have:
                    continue
                if _one_step(mask, s, prev, have, neg_atoms, omega_atoms, neg_body_mask, omega_inst, meet_parts, depth is None):
                    derived[s].add(mask)
                    changed = True
        rounds += 1
        if not changed:
            break

    out = set()
    for s, masks in derived.items():
        for mask in masks:
            out.add(Sequent(frozenset(atoms[i] for i in range(n_atoms) if mask >> i & 1), s))
    return out


def _one_step(mask, s, prev, have, neg_atoms, omega_atoms, neg_body_mask, omega_inst, meet_parts, to_fixpoint):
    # d: any proper sub-antecedent; to a fixpoint, dropping one atom at a time suffices
    if to_fixpoint:
        rest = mask
        while rest:
            bit = rest & -rest
            if mask ^ bit in have:
                return True
            rest ^= bit
    else:
        sub = (mask - 1) & mask
        while True:
            if sub in have:
                return True
            if sub == 0:
                break
            sub = (sub - 1) & mask
    # right rules
    if s in meet_parts:
        if all(mask in prev.get(part, ()) for part in meet_parts[s]):
            return True
    elif s in neg_body_mask:
        extra = neg_body_mask[s]
        if extra is not None and (mask | extra) in prev[None]:
            return True
    elif s in omega_inst:
        if all(mask in prev.get(inst, ()) for inst in omega_inst[s]):
            return True
    # e: premiss antecedent is the conclusion's, with or without the principal
    for i, t in neg_atoms:
        if mask >> i & 1:
            got = prev.get(t.body, ())
            if mask in got or (mask & ~(1 << i)) in got:
                return True
    # f: premiss is G + A(n) where G is the conclusion with or without the principal
    for i, insts in omega_atoms:
        if mask >> i & 1:
            for extra in insts:
                if extra is None:
                    continue
                if (mask | extra) in have or ((mask & ~(1 << i)) | extra) in have:
                    return True
    return False
