"""Derivation transformations: reflexivity, inversions and cut elimination.

Every function returns a derivation built only from the cut-free rule
vocabulary.  Cut is eliminated by structural recursion: outer recursion on
the cut formula, inner recursion on the derivation that uses it (and, for a
prime cut formula against a basic relation, on the derivation that proves
it).  No ordinal measure is involved.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .derivation import (
    BASE,
    RA,
    RB,
    RC,
    RD,
    RE,
    RF,
    RJ,
    Derivation,
    DerivationError,
    Family,
    check_node,
    rf_witnesses,
)
from .search import weaken
from .syntax import Meet, Neg, OmegaMeet, Prime, Sequent, Term, conjuncts, depth, free_vars


class CutError(DerivationError):
    pass


@dataclass
class CutTrace:
    """Records ``(level, formula depth, formula)`` for each cut-formula recursion."""

    calls: list = field(default_factory=list)

    def record(self, level: int, formula: Term) -> None:
        self.calls.append((level, depth(formula), str(formula)))

    def outer_calls_decrease(self) -> bool:
        """Nested calls at ``level + 1`` always use a smaller cut formula."""
        last_at = {}
        for level, size, _ in self.calls:
            if level > 0 and level - 1 in last_at and size >= last_at[level - 1]:
                return False
            last_at[level] = size
            for k in [k for k in last_at if k > level]:
                del last_at[k]
        return True


class Transformer:
    """Transformations over one base theory at one bound."""

    def __init__(self, base, bound: int, allow_j: bool = False, strict: bool = True):
        self.base = base
        self.bound = bound
        self.allow_j = allow_j
        self.strict = strict
        self.trace: Optional[CutTrace] = None

    # -- node construction -------------------------------------------------

    def _node(self, rule, conclusion, premisses=(), family=None) -> Derivation:
        d = Derivation(rule, conclusion, tuple(premisses), family)
        if self.strict:
            msg = check_node(self.base, d, self.bound, self.allow_j)
            if msg is not None:
                raise CutError(f"internal: built invalid [{rule}] node {conclusion}: {msg}")
        return d

    def _family(self, rule, conclusion, var, instances) -> Derivation:
        instances = tuple(instances)
        if rule == RJ and var not in conclusion.free_vars():
            return instances[0]
        return self._node(rule, conclusion, (), Family(var, self.bound, instances))

    def _weaken(self, d: Derivation, antecedent) -> Derivation:
        try:
            return weaken(d, antecedent)
        except ValueError:
            raise CutError(
                f"internal: cannot weaken {d.conclusion} to {sorted(map(str, antecedent))}"
            ) from None

    # -- reflexivity ---------------------------------------------------------

    def refl(self, t: Term) -> Derivation:
        """Derivation of ``t |- t`` by induction on the term."""
        goal = Sequent(conjuncts(t), t)
        fv = free_vars(t)
        if fv:
            v = min(fv)
            return self._family(
                RJ, goal, v, [self.refl(_subst(t, v, n)) for n in range(1, self.bound + 1)]
            )
        if isinstance(t, Prime):
            return self._node(BASE, goal)
        if isinstance(t, Meet):
            parts = [self._weaken(self.refl(c), goal.antecedent) for c in t.conjuncts]
            return self._node(RA, goal, parts)
        if isinstance(t, OmegaMeet):
            inst = []
            for n in range(1, self.bound + 1):
                a_n = t.instance(n)
                inst.append(self._node(RF, Sequent(frozenset([t]), a_n), (self.refl(a_n),)))
            return self._family(RC, goal, t.var, inst)
        if isinstance(t, Neg):
            body = self.refl(t.body)
            contra = self._node(RE, Sequent(body.antecedent | {t}, None), (body,))
            return self._node(RB, goal, (contra,))
        raise CutError(f"no reflexivity derivation for {t}")

    # -- inversions ----------------------------------------------------------

    def invert_meet(self, d: Derivation, side: int) -> Derivation:
        """From ``G |- A1 & ... & Ak`` derive ``G |- A_side``."""
        m = d.succedent
        if not isinstance(m, Meet):
            raise CutError(f"succedent of {d.conclusion} is not a meet")
        target = d.conclusion.with_succedent(m.conjuncts[side])
        return self._invert(d, target, lambda x: self.invert_meet(x, side), RA, side)

    def invert_omega(self, d: Derivation, n: int) -> Derivation:
        """From ``G |- /\\x. A`` derive ``G |- A(n)``."""
        w = d.succedent
        if not isinstance(w, OmegaMeet):
            raise CutError(f"succedent of {d.conclusion} is not an omega-meet")
        if not 1 <= n <= self.bound:
            raise CutError(f"instance {n} outside 1..{self.bound}")
        target = d.conclusion.with_succedent(w.instance(n))
        return self._invert(d, target, lambda x: self.invert_omega(x, n), RC, n - 1)

    def _invert(self, d, target, again, right_rule, pick):
        r = d.rule
        if r == right_rule:
            return d.children()[pick]
        if r == RD:
            return self._weaken(again(d.premisses[0]), target.antecedent)
        if r == RE:
            return self._node(RE, target, d.premisses)
        if r == RF:
            return self._node(RF, target, (again(d.premisses[0]),))
        if r == RJ:
            v = d.family.var
            return self._family(RJ, target, v, [again(x) for x in d.family.instances])
        raise CutError(f"cannot invert a derivation ending in rule {r}")

    def invert_neg(self, d: Derivation) -> Derivation:
        """From ``G |- ~A`` derive ``G, A |-``."""
        a = d.succedent
        if not isinstance(a, Neg):
            raise CutError(f"succedent of {d.conclusion} is not a negation")
        target = Sequent(d.antecedent | conjuncts(a.body), None)
        r = d.rule
        if r == RB:
            return d.premisses[0]
        if r == RD:
            return self._weaken(self.invert_neg(d.premisses[0]), target.antecedent)
        if r == RE:
            prem = self._weaken(d.premisses[0], target.antecedent)
            return self._node(RE, target, (prem,))
        if r == RF:
            return self._node(RF, target, (self.invert_neg(d.premisses[0]),))
        if r == RJ:
            v = d.family.var
            return self._family(RJ, target, v, [self.invert_neg(x) for x in d.family.instances])
        raise CutError(f"cannot invert a derivation ending in rule {r}")

    # -- ex falso --------------------------------------------------------------

    def ex_falso(self, d: Derivation, succedent: Optional[Term]) -> Derivation:
        """From ``G |-`` derive ``G |- C``; admissible, not a rule."""
        if d.succedent is not None:
            raise CutError("ex falso needs an empty succedent")
        if succedent is None:
            return d
        target = d.conclusion.with_succedent(succedent)
        r = d.rule
        if r == RE:
            return self._node(RE, target, d.premisses)
        if r == RD:
            return self._weaken(self.ex_falso(d.premisses[0], succedent), target.antecedent)
        if r == RF:
            return self._node(RF, target, (self.ex_falso(d.premisses[0], succedent),))
        if r == RJ:
            v = d.family.var
            inst = [
                self.ex_falso(x, _subst(succedent, v, n))
                for n, x in enumerate(d.family.instances, 1)
            ]
            return self._family(RJ, target, v, inst)
        if r == BASE:
            (p,) = d.antecedent
            return self._absurd_intro(p, succedent)
        raise CutError(f"no derivation with empty succedent ends in rule {r}")

    def _absurd_intro(self, p: Prime, c: Term) -> Derivation:
        goal = Sequent(frozenset([p]), c)
        fv = free_vars(c)
        if fv:
            v = min(fv)
            return self._family(
                RJ, goal, v, [self._absurd_intro(p, _subst(c, v, n)) for n in range(1, self.bound + 1)]
            )
        if isinstance(c, Prime):
            return self._node(BASE, goal)
        if isinstance(c, Meet):
            return self._node(RA, goal, [self._absurd_intro(p, x) for x in c.conjuncts])
        if isinstance(c, Neg):
            leaf = self._node(BASE, Sequent(frozenset([p]), None))
            return self._node(RB, goal, (self._weaken(leaf, {p} | conjuncts(c.body)),))
        if isinstance(c, OmegaMeet):
            inst = [self._absurd_intro(p, c.instance(n)) for n in range(1, self.bound + 1)]
            return self._family(RC, goal, c.var, inst)
        raise CutError(f"cannot introduce {c}")

    # -- cut -------------------------------------------------------------------

    def cut(self, d1: Derivation, d2: Derivation, trace: Optional[CutTrace] = None) -> Derivation:
        """From ``G |- b`` and ``D |- C`` with ``b`` in ``D`` derive ``(D - b), G |- C``."""
        b = d1.succedent
        if b is None:
            raise CutError("the left derivation has no cut formula")
        if not conjuncts(b) <= d2.antecedent:
            raise CutError(f"cut formula {b} does not occur in {d2.conclusion}")
        saved = self.trace
        self.trace = trace
        try:
            return self._cut(d1, b, d2, 0)
        finally:
            self.trace = saved

    def transitivity(self, d1: Derivation, d2: Derivation) -> Derivation:
        """From ``a |- b`` and ``b |- c`` derive ``a |- c``."""
        if d2.antecedent != conjuncts(d1.succedent):
            raise CutError("the right derivation must have exactly the cut formula on the left")
        return self.cut(d1, d2)

    def _cut(self, d1, b, d2, level):
        if self.trace is not None:
            self.trace.record(level, b)
        target = Sequent((d2.antecedent - conjuncts(b)) | d1.antecedent, d2.succedent)
        if isinstance(b, Meet):
            cur = d2
            for i, part in enumerate(b.conjuncts):
                cur = self._weaken(cur, cur.antecedent | conjuncts(part))
                cur = self._cut(self.invert_meet(d1, i), part, cur, level + 1)
            return self._weaken(cur, target.antecedent)
        return self._cut_right(d1, b, d2, level, target)

    def _cut_right(self, d1, b, d2, level, target):
        r = d2.rule
        ante = target.antecedent

        def rec(p):
            if b not in p.antecedent:
                return p
            t = Sequent((p.antecedent - {b}) | d1.antecedent, p.succedent)
            return self._cut_right(d1, b, p, level, t)

        if r == BASE:
            return self._weaken(self._cut_base(d1, d2.succedent), ante)
        if r == RD:
            return self._weaken(rec(d2.premisses[0]), ante)
        if r == RA:
            parts = [self._weaken(rec(p), ante) for p in d2.premisses]
            return self._node(RA, target, parts)
        if r == RB:
            extra = conjuncts(d2.succedent.body)
            return self._node(RB, target, (self._weaken(rec(d2.premisses[0]), ante | extra),))
        if r == RC:
            inst = [self._weaken(rec(p), ante) for p in d2.family.instances]
            return self._family(RC, target, d2.family.var, inst)
        if r == RE:
            prem = d2.premisses[0]
            if Neg(prem.succedent) == b:
                return self._cut_neg(d1, b, prem, level, target)
            return self._node(RE, target, (self._weaken(rec(prem), ante),))
        if r == RF:
            prem = d2.premisses[0]
            readings = rf_witnesses(d2.conclusion, prem.conclusion, self.bound)
            for w, n in readings:
                if w == b:
                    return self._cut_omega(d1, b, n, prem, level, target)
            w, n = readings[0]
            extra = conjuncts(w.instance(n))
            return self._node(RF, target, (self._weaken(rec(prem), ante | extra),))
        if r == RJ:
            v = d2.family.var
            d1_free = v in d1.conclusion.free_vars()
            inst = []
            for n, p in enumerate(d2.family.instances, 1):
                left = self.specialize(d1, v, n) if d1_free else d1
                out = self._cut(left, left.succedent, p, level)
                inst.append(self._weaken(out, target.subst(v, n).antecedent))
            return self._family(RJ, target, v, inst)
        raise CutError(f"unexpected rule {r} in cut")

    def _cut_base(self, d1, c):
        """``d1: G |- b`` with ``b`` prime, and ``b |- c`` basic: derive ``G |- c``."""
        target = d1.conclusion.with_succedent(c)
        r = d1.rule
        if r == BASE:
            return self._node(BASE, target)
        if r == RD:
            return self._weaken(self._cut_base(d1.premisses[0], c), target.antecedent)
        if r == RE:
            return self._node(RE, target, d1.premisses)
        if r == RF:
            return self._node(RF, target, (self._cut_base(d1.premisses[0], c),))
        if r == RJ:
            v = d1.family.var
            return self._family(RJ, target, v, [self._cut_base(x, c) for x in d1.family.instances])
        raise CutError(f"a prime cut formula cannot be concluded by rule {r}")

    def _cut_neg(self, d1, b, prem, level, target):
        # prem: D' |- B0 with b = ~B0 principal in the last step
        x = prem
        if b in prem.antecedent:
            x = self._cut_right(
                d1, b, prem, level, Sequent((prem.antecedent - {b}) | d1.antecedent, prem.succedent)
            )
        y = self.ex_falso(self.invert_neg(d1), target.succedent)
        z = self._cut(x, b.body, y, level + 1)
        return self._weaken(z, target.antecedent)

    def _cut_omega(self, d1, b, n, prem, level, target):
        # prem: G, A(n) |- C with b = /\x. A principal in the last step
        x = prem
        if b in prem.antecedent:
            x = self._cut_right(
                d1, b, prem, level, Sequent((prem.antecedent - {b}) | d1.antecedent, prem.succedent)
            )
        left = self.invert_omega(d1, n)
        z = self._cut(left, b.instance(n), x, level + 1)
        return self._weaken(z, target.antecedent)

    # -- specialisation --------------------------------------------------------

    def specialize(self, d: Derivation, var: str, n: int) -> Derivation:
        """From a derivation of ``S(var)`` build one of ``S(n)``."""
        if not 1 <= n <= self.bound:
            raise CutError(f"numeral {n} outside 1..{self.bound}")
        if var not in d.conclusion.free_vars():
            return d
        if d.rule == RJ and d.family.var == var:
            return d.family.instances[n - 1]
        concl = d.conclusion.subst(var, n)
        prems = [self.specialize(p, var, n) for p in d.premisses]
        if d.family is not None:
            inst = [self.specialize(p, var, n) for p in d.family.instances]
            return self._family(d.rule, concl, d.family.var, inst)
        return self._node(d.rule, concl, prems)


def _subst(t, var, n):
    from .syntax import subst_numeral

    return subst_numeral(t, var, n)


def strip_vacuous_weakenings(d: Derivation) -> Derivation:
    """Remove rule-d nodes that add nothing and merge rule-d chains."""
    kids = tuple(strip_vacuous_weakenings(p) for p in d.premisses)
    family = d.family
    if family is not None:
        family = Family(family.var, family.bound, tuple(strip_vacuous_weakenings(p) for p in family.instances))
    if d.rule == RD:
        (p,) = kids
        if p.antecedent == d.antecedent:
            return p
        if p.rule == RD:
            kids = p.premisses
    return Derivation(d.rule, d.conclusion, kids, family)
