"""Calculus N: the cut-free calculus over arithmetic prime formulas.

Prime formulas are ``s = t`` and ``s < t`` over numeral terms built from
``1``, successor ``'``, ``+`` and numeral variables.  Closed primes are
evaluated; a basic relation holds when it is true under evaluation.  Rule j
generalises a sequent with a free variable from its instances ``1..bound``.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Optional

from .cut import CutTrace, Transformer
from .derivation import BASE, RA, RB, RC, RD, RE, RF, RJ, Derivation, check_derivation
from .search import Prover, SearchLimit
from .syntax import (
    COMPARISONS,
    FreeVariableError,
    Lit,
    Meet,
    Neg,
    OmegaMeet,
    Plus,
    Prime,
    Sequent,
    Succ,
    Term,
    Var,
    conjuncts,
    free_vars,
    meet,
    num_value,
    print_term,
    sort_terms,
    subst_numeral,
    subst_term,
)
from .syntax import depth as term_depth


class CalculusNError(ValueError):
    pass


def eval_prime(p: Prime) -> bool:
    """Truth of a closed comparison over the positive integers."""
    if not isinstance(p, Prime) or p.name not in COMPARISONS:
        raise CalculusNError(f"not an arithmetic prime formula: {p}")
    if free_vars(p):
        raise FreeVariableError(f"free variable in {print_term(p)}")
    left, right = (num_value(a) for a in p.args)
    return left == right if p.name == "=" else left < right


@dataclass(frozen=True)
class ArithmeticBase:
    """Basic relations of N, decided by evaluation.

    ``accept_empty`` makes the empty relation basic; it exists only so the
    consistency harness can be shown to detect an unsound base.
    """

    accept_empty: bool = False

    def check_prime(self, p) -> None:
        if not isinstance(p, Prime) or p.name not in COMPARISONS or len(p.args) != 2:
            raise CalculusNError(f"not an arithmetic prime formula: {p}")

    def base_relation(self, antecedent, succedent) -> bool:
        if len(antecedent) > 1:
            return False
        for t in list(antecedent) + ([succedent] if succedent is not None else []):
            if not isinstance(t, Prime) or free_vars(t):
                return False
            self.check_prime(t)
        if not antecedent:
            if succedent is None:
                return self.accept_empty
            return eval_prime(succedent)
        (p,) = antecedent
        if succedent is None:
            return not eval_prime(p)
        return (not eval_prime(p)) or eval_prime(succedent)


N_BASE = ArithmeticBase()


def base_holds(s: Sequent) -> bool:
    for t in s.terms():
        if not isinstance(t, Prime):
            raise CalculusNError(f"basic relations are over primes, got {print_term(t)}")
    return N_BASE.base_relation(s.antecedent, s.succedent)


def check_nderivation(d: Derivation, bound: int, base=N_BASE) -> list:
    return check_derivation(base, d, bound, allow_j=True)


def n_prover(bound: int, base=N_BASE, max_goals: Optional[int] = None) -> Prover:
    return Prover(base, bound, allow_j=True, max_goals=max_goals)


def decide_n(s: Sequent, bound: int, base=N_BASE) -> bool:
    return n_prover(bound, base).decide(s)


def prove_n(s: Sequent, bound: int, base=N_BASE) -> Optional[Derivation]:
    return n_prover(bound, base).prove(s)


def n_transformer(bound: int, base=N_BASE) -> Transformer:
    return Transformer(base, bound, allow_j=True)


def cut_n(d1: Derivation, d2: Derivation, bound: int, trace: Optional[CutTrace] = None) -> Derivation:
    return n_transformer(bound).cut(d1, d2, trace)


def specialize(d: Derivation, var: str, n: int, bound: int) -> Derivation:
    return n_transformer(bound).specialize(d, var, n)


# ---------------------------------------------------------------------------
# double negation and induction


def derive_dne_prime(p: Prime) -> Derivation:
    """``~~P |- P`` from the basic relation ``|- P`` or ``P |-``."""
    goal = Sequent(frozenset([Neg(Neg(p))]), p)
    if eval_prime(p):
        return Derivation(RD, goal, (Derivation(BASE, Sequent(frozenset(), p)),))
    leaf = Derivation(BASE, Sequent(frozenset([p]), None))
    not_p = Derivation(RB, Sequent(frozenset(), Neg(p)), (leaf,))
    return Derivation(RE, goal, (not_p,))


def derive_dne(a: Term, bound: int) -> Derivation:
    """``~~A |- A`` by induction on ``A``."""
    return _Dne(n_transformer(bound)).run(a)


class _Dne:
    def __init__(self, tr: Transformer):
        self.tr = tr

    def run(self, a: Term) -> Derivation:
        tr = self.tr
        goal = Sequent(frozenset([Neg(Neg(a))]), a)
        fv = free_vars(a)
        if fv:
            v = min(fv)
            inst = [self.run(subst_numeral(a, v, n)) for n in range(1, tr.bound + 1)]
            return tr._family(RJ, goal, v, inst)
        if isinstance(a, Prime):
            return derive_dne_prime(a)
        if isinstance(a, Neg):
            c = a.body
            inner = tr._node(RE, Sequent(conjuncts(c) | {a}, None), (tr.refl(c),))
            nn_c = tr._node(RB, Sequent(conjuncts(c), Neg(a)), (inner,))
            outer = tr._node(RE, Sequent(conjuncts(c) | {Neg(Neg(a))}, None), (nn_c,))
            return tr._node(RB, goal, (outer,))
        if isinstance(a, Meet):
            parts = [
                self._through(a, c, tr._weaken(tr.refl(c), conjuncts(a))) for c in a.conjuncts
            ]
            return tr._node(RA, goal, parts)
        if isinstance(a, OmegaMeet):
            inst = []
            for n in range(1, tr.bound + 1):
                c = a.instance(n)
                pick = tr._node(RF, Sequent(frozenset([a]), c), (tr.refl(c),))
                inst.append(self._through(a, c, pick))
            return tr._family(RC, goal, a.var, inst)
        raise CalculusNError(f"no double negation rule for {a}")

    def _through(self, a: Term, c: Term, d: Derivation) -> Derivation:
        """From ``d: A |- C`` derive ``~~A |- C`` using ``~~C |- C``."""
        tr = self.tr
        nn_a, n_c = Neg(Neg(a)), Neg(c)
        e1 = tr._node(RE, Sequent(conjuncts(a) | {n_c}, None), (d,))
        b1 = tr._node(RB, Sequent(frozenset([n_c]), Neg(a)), (e1,))
        e2 = tr._node(RE, Sequent(frozenset([nn_a, n_c]), None), (b1,))
        mono = tr._node(RB, Sequent(frozenset([nn_a]), Neg(n_c)), (e2,))
        return tr.cut(mono, self.run(c))


def derive_induction(
    var: str, body: Term, step: Derivation, bound: int, target_var: str = "b"
) -> Derivation:
    """From ``step: A(var) |- A(var')`` derive ``A(1) |- A(target_var)``.

    ``A(1) |- A(m)`` is chained from instances of ``step`` by cut for every
    ``m <= bound``; rule j closes the family.
    """
    tr = n_transformer(bound)
    want = Sequent(conjuncts(body), _subst_succ(body, var))
    if step.conclusion != want:
        raise CalculusNError(f"step must conclude {want}, got {step.conclusion}")
    if target_var in free_vars(body) - {var}:
        raise CalculusNError(f"target variable {target_var} already occurs in the schema")
    first = subst_numeral(body, var, 1)
    chain = [tr.refl(first)]
    for m in range(1, bound):
        link = tr.specialize(step, var, m) if var in step.conclusion.free_vars() else step
        chain.append(tr.cut(chain[-1], link))
    if var not in free_vars(body):
        return chain[0]
    goal = Sequent(conjuncts(first), subst_term(body, var, Var(target_var)))
    return tr._family(RJ, goal, target_var, chain)


def _subst_succ(body: Term, var: str) -> Term:
    return subst_term(body, var, Succ(Var(var)))


# ---------------------------------------------------------------------------
# universes and the consistency harness


def numeral_terms(max_size: int, variables=()) -> list:
    """All numeral terms of size <= ``max_size`` (a literal ``n`` has size ``n``)."""
    by_size = {}
    for s in range(1, max_size + 1):
        out = []
        out.append(Lit(s))
        if s == 1:
            out.extend(Var(v) for v in variables)
        else:
            out.extend(Succ(t) for t in by_size[s - 1] if not isinstance(t, Lit))
            for k in range(1, s - 1):
                out.extend(Plus(l, r) for l in by_size[k] for r in by_size[s - 1 - k])
        by_size[s] = out
    return [t for s in range(1, max_size + 1) for t in by_size[s]]


def prime_formulas(terms) -> list:
    return [Prime(op, (l, r)) for op in COMPARISONS for l in terms for r in terms]


def truth_vector(p: Prime, var: Optional[str], bound: int) -> tuple:
    if var is None or var not in free_vars(p):
        return (eval_prime(p),)
    return tuple(eval_prime(subst_numeral(p, var, n)) for n in range(1, bound + 1))


def representatives(primes, var: Optional[str], bound: int) -> list:
    """One prime per truth behaviour, picking the first in print order."""
    seen = {}
    for p in sort_terms(primes):
        key = (var is not None and var in free_vars(p), truth_vector(p, var, bound))
        seen.setdefault(key, p)
    return sort_terms(seen.values())


def formula_universe(depth: int, closed, open_, var: str = "x") -> list:
    """Closed formulas of depth <= ``depth``.

    ``open_`` are primes whose only free variable is ``var``; they occur
    under an omega-meet binding ``var``.  Meets are binary over distinct
    formulas; wider meets flatten to the same antecedents.
    """
    layers_closed = [sort_terms(set(closed))]
    layers_open = [sort_terms(set(open_))]
    all_closed, all_open = set(layers_closed[0]), set(layers_open[0])
    for _ in range(depth):
        new_c, new_o = set(), set()
        for pool, mixed, out in ((all_closed, all_closed, new_c), (all_open, all_closed | all_open, new_o)):
            for t in pool:
                out.add(Neg(t))
            for t, u in itertools.combinations(sort_terms(mixed), 2):
                if t in pool or u in pool:
                    m = meet(t, u)
                    if isinstance(m, Meet) and (out is new_c or var in free_vars(m)):
                        out.add(m)
        for t in all_open:
            new_c.add(OmegaMeet(var, t))
        all_closed |= new_c
        all_open |= new_o
    return sort_terms(t for t in all_closed if term_depth(t) <= depth)


@dataclass
class ConsistencyReport:
    bound: int
    depth: int
    consistent: bool
    complete: bool
    universe_size: int
    full_prime_count: int
    representative_primes: int
    queries: int
    goals_explored: int
    seconds: float
    witness: Optional[str] = None
    notes: list = field(default_factory=list)

    def lines(self) -> list:
        status = "consistent" if self.consistent else "INCONSISTENT"
        if not self.complete:
            status += " (partial: resource cap reached)"
        out = [
            f"bound {self.bound}, formula depth {self.depth}: {status}",
            f"primes over numeral terms of size <= 3: {self.full_prime_count}",
            f"representative primes used: {self.representative_primes}",
            f"formulas in universe: {self.universe_size}",
            f"decision queries: {self.queries}",
            f"goals explored: {self.goals_explored}",
            f"seconds: {self.seconds:.2f}",
        ]
        if self.witness:
            out.append(f"witness: {self.witness}")
        out.extend(self.notes)
        return out


def consistency_check(
    bound: int,
    depth: int,
    base=N_BASE,
    term_size: int = 3,
    var: str = "x",
    max_goals: Optional[int] = 2_000_000,
    representative: bool = True,
    max_universe: int = 20_000,
) -> ConsistencyReport:
    """Confirm that ``|-`` is not derivable, and that no formula is both provable and refutable.

    Primes are reduced to one representative per truth behaviour over
    ``1..bound``: the basic relation only sees truth values, so any two
    primes with equal behaviour are interchangeable in every derivation.
    With ``representative=False`` every prime is used; a universe larger
    than ``max_universe`` is truncated and the report flagged partial.
    """
    if not 1 <= bound <= 5 or not 0 <= depth <= 2:
        raise CalculusNError("consistency check runs at bound 1..5 and depth 0..2")
    t0 = time.perf_counter()
    closed_terms = numeral_terms(term_size)
    open_terms = numeral_terms(term_size, (var,))
    closed_primes = prime_formulas(closed_terms)
    open_primes = [p for p in prime_formulas(open_terms) if var in free_vars(p)]
    if representative:
        reps_c = representatives(closed_primes, None, bound)
        reps_o = representatives(open_primes, var, bound)
    else:
        reps_c, reps_o = closed_primes, open_primes
    notes = []
    if depth >= 2 and not representative and len(reps_c) + len(reps_o) > 40:
        universe = formula_universe(1, reps_c, reps_o, var)
        notes.append("unreduced depth-2 universe too large to build; depth 1 used")
        truncated = True
    else:
        universe = formula_universe(depth, reps_c, reps_o, var)
        truncated = False
    if len(universe) > max_universe:
        universe = universe[:max_universe]
        notes.append(f"universe truncated to {max_universe} formulas")
        truncated = True

    prover = n_prover(bound, base, max_goals=max_goals)
    report = ConsistencyReport(
        bound=bound,
        depth=depth,
        consistent=True,
        complete=not truncated,
        universe_size=len(universe),
        full_prime_count=len(set(closed_primes) | set(open_primes)),
        representative_primes=len(reps_c) + len(reps_o),
        queries=0,
        goals_explored=0,
        seconds=0.0,
        notes=notes,
    )
    try:
        report.queries += 1
        if prover.decide(Sequent(frozenset(), None)):
            report.consistent = False
            report.witness = "|-"
        else:
            for a in universe:
                report.queries += 2
                if prover.decide(Sequent(frozenset(), a)) and prover.decide(Sequent(conjuncts(a), None)):
                    report.consistent = False
                    report.witness = f"|- {print_term(a)}  and  {print_term(a)} |-"
                    break
    except SearchLimit as e:
        report.complete = False
        report.notes.append(str(e))
    report.goals_explored = prover.stats["goals"]
    report.seconds = time.perf_counter() - t0
    return report
