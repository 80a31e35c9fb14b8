"""Derivation trees, their JSON interchange format and the rule checker.

Rule tags::

    base   basic relation  p |- q,  |- q,  p |-
    a      G |- A1 & ... & Ak           from  G |- Ai  (each i)
    b      G |- ~A                      from  G, A |-
    c      G |- /\\x. A                  from  G |- A(n)  for n = 1..bound
    d      G, D |- C                    from  G |- C
    e      G, ~B |- C   (C optional)    from  G |- B
    f      G, /\\x. A |- C               from  G, A(n) |- C  for some n <= bound
    j      S(v)                         from  S(n)  for n = 1..bound  (calculus N)

Contraction, exchange and associativity have no tag: antecedents are sets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Optional

from .syntax import (
    Meet,
    Neg,
    OmegaMeet,
    Prime,
    Sequent,
    conjuncts,
    free_vars,
    parse_sequent,
    print_sequent,
)

BASE, RA, RB, RC, RD, RE, RF, RJ = "base", "a", "b", "c", "d", "e", "f", "j"
RULES = (BASE, RA, RB, RC, RD, RE, RF, RJ)
CUT_FREE_RULES = frozenset(RULES)


class DerivationError(ValueError):
    pass


@dataclass(frozen=True)
class Family:
    """Numeral-indexed premisses: ``instances[n - 1]`` is the premiss for ``n``."""

    var: str
    bound: int
    instances: tuple

    def __post_init__(self):
        object.__setattr__(self, "instances", tuple(self.instances))


@dataclass(frozen=True)
class Derivation:
    rule: str
    conclusion: Sequent
    premisses: tuple = ()
    family: Optional[Family] = None

    def __post_init__(self):
        object.__setattr__(self, "premisses", tuple(self.premisses))
        if self.rule not in RULES:
            raise DerivationError(f"unknown rule {self.rule!r}")

    @property
    def antecedent(self) -> frozenset:
        return self.conclusion.antecedent

    @property
    def succedent(self):
        return self.conclusion.succedent

    def children(self) -> tuple:
        if self.family is not None:
            return self.family.instances
        return self.premisses

    def nodes(self) -> Iterator["Derivation"]:
        stack = [self]
        while stack:
            d = stack.pop()
            yield d
            stack.extend(reversed(d.children()))

    def rules_used(self) -> frozenset:
        return frozenset(d.rule for d in self.nodes())

    def depth(self) -> int:
        kids = self.children()
        return 1 + (max(k.depth() for k in kids) if kids else 0)

    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    def __str__(self):
        return format_tree(self)


def format_tree(d: Derivation, indent: str = "") -> str:
    lines = []

    def walk(node, prefix, label):
        lines.append(f"{prefix}{label}[{node.rule}] {print_sequent(node.conclusion)}")
        if node.family is not None:
            for n, sub in enumerate(node.family.instances, 1):
                walk(sub, prefix + "  ", f"{node.family.var}={n}: ")
        for sub in node.premisses:
            walk(sub, prefix + "  ", "")

    walk(d, indent, "")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# JSON


def to_json_obj(d: Derivation) -> dict:
    obj = {
        "rule": d.rule,
        "sequent": print_sequent(d.conclusion),
        "premisses": [to_json_obj(p) for p in d.premisses],
    }
    if d.family is not None:
        obj["family"] = {
            "var": d.family.var,
            "bound": d.family.bound,
            "instances": [to_json_obj(p) for p in d.family.instances],
        }
    return obj


def dumps(d: Derivation) -> str:
    return json.dumps(to_json_obj(d), ensure_ascii=False, indent=1) + "\n"


def from_json_obj(obj: dict) -> Derivation:
    try:
        family = None
        if "family" in obj and obj["family"] is not None:
            f = obj["family"]
            family = Family(
                f["var"], int(f["bound"]), tuple(from_json_obj(x) for x in f["instances"])
            )
        return Derivation(
            obj["rule"],
            parse_sequent(obj["sequent"], allow_free=True),
            tuple(from_json_obj(x) for x in obj.get("premisses", ())),
            family,
        )
    except (KeyError, TypeError) as e:
        raise DerivationError(f"malformed derivation JSON: {e}") from None


def loads(text: str) -> Derivation:
    return from_json_obj(json.loads(text))


# ---------------------------------------------------------------------------
# local rule templates


def rb_ok(concl: Sequent, prem: Sequent) -> bool:
    a = concl.succedent
    if not isinstance(a, Neg) or prem.succedent is not None:
        return False
    inst = conjuncts(a.body)
    return (
        inst <= prem.antecedent
        and prem.antecedent - inst <= concl.antecedent
        and concl.antecedent <= prem.antecedent
    )


def re_ok(concl: Sequent, prem: Sequent) -> bool:
    b = prem.succedent
    if b is None:
        return False
    principal = Neg(b)
    if principal not in concl.antecedent:
        return False
    return concl.antecedent - {principal} <= prem.antecedent <= concl.antecedent


def rf_witnesses(concl: Sequent, prem: Sequent, bound: int) -> list:
    """All (omega-meet, n) readings of ``prem / concl`` as an instance of rule f."""
    if prem.succedent != concl.succedent:
        return []
    out = []
    for w in sorted(concl.antecedent, key=str):
        if not isinstance(w, OmegaMeet):
            continue
        rest = concl.antecedent - {w}
        if not rest <= prem.antecedent:
            continue
        for n in range(1, bound + 1):
            inst = conjuncts(w.instance(n))
            if inst <= prem.antecedent and prem.antecedent - inst <= concl.antecedent:
                out.append((w, n))
    return out


def check_node(base, d: Derivation, bound: int, allow_j: bool = False) -> Optional[str]:
    """Return a message if ``d`` does not instantiate its rule, else None."""
    c = d.conclusion
    rule = d.rule
    if rule in (RC, RJ):
        if d.premisses:
            return f"rule {rule} takes a numeral family, not premisses"
        f = d.family
        if f is None:
            return f"rule {rule} needs a numeral family"
        if f.bound != bound:
            return f"family bound {f.bound} differs from bound {bound}"
        if len(f.instances) != bound:
            return f"family has {len(f.instances)} instances, expected {bound}"
    elif d.family is not None:
        return f"rule {rule} takes no numeral family"

    if rule == BASE:
        if d.premisses:
            return "basic relations have no premisses"
        for t in c.terms():
            if not isinstance(t, Prime):
                return f"basic relation over non-prime {t}"
            if free_vars(t):
                return f"basic relation with free variable: {t}"
        try:
            ok = base.base_relation(c.antecedent, c.succedent)
        except ValueError as e:
            return str(e)
        return None if ok else f"not a basic relation: {print_sequent(c)}"

    if rule == RA:
        m = c.succedent
        if not isinstance(m, Meet):
            return "rule a needs a meet on the right"
        if len(d.premisses) != len(m.conjuncts):
            return f"rule a needs {len(m.conjuncts)} premisses"
        for i, (p, part) in enumerate(zip(d.premisses, m.conjuncts)):
            if p.conclusion != Sequent(c.antecedent, part):
                return f"premiss {i} should be {print_sequent(Sequent(c.antecedent, part))}"
        return None

    if rule == RC:
        w = c.succedent
        if not isinstance(w, OmegaMeet):
            return "rule c needs an omega-meet on the right"
        if d.family.var != w.var:
            return f"family variable {d.family.var} differs from binder {w.var}"
        for n, p in enumerate(d.family.instances, 1):
            want = Sequent(c.antecedent, w.instance(n))
            if p.conclusion != want:
                return f"instance {n} should be {print_sequent(want)}"
        return None

    if rule == RJ:
        if not allow_j:
            return "rule j is not part of this calculus"
        v = d.family.var
        if v not in c.free_vars():
            return f"variable {v} is not free in the conclusion"
        for n, p in enumerate(d.family.instances, 1):
            want = c.subst(v, n)
            if p.conclusion != want:
                return f"instance {n} should be {print_sequent(want)}"
        return None

    if len(d.premisses) != 1:
        return f"rule {rule} takes exactly one premiss"
    p = d.premisses[0].conclusion
    if rule == RB:
        return None if rb_ok(c, p) else "rule b template mismatch"
    if rule == RD:
        if p.succedent != c.succedent:
            return "weakening must keep the succedent"
        if not p.antecedent <= c.antecedent:
            return "weakening may only add antecedent terms"
        return None
    if rule == RE:
        return None if re_ok(c, p) else "rule e template mismatch"
    if rule == RF:
        return None if rf_witnesses(c, p, bound) else "rule f template mismatch"
    return f"unknown rule {rule}"


@dataclass(frozen=True)
class Problem:
    path: tuple
    message: str

    def __str__(self):
        where = "/".join(("root",) + self.path)
        return f"{where}: {self.message}"


def check_derivation(base, d: Derivation, bound: int, allow_j: bool = False) -> list:
    """Check every node; return the list of problems (empty when the tree is valid)."""
    problems = []
    stack = [((), d)]
    while stack:
        path, node = stack.pop()
        msg = check_node(base, node, bound, allow_j)
        if msg is not None:
            problems.append(Problem(path, msg))
        if node.family is not None:
            for n, sub in enumerate(node.family.instances, 1):
                stack.append((path + (f"{node.family.var}={n}",), sub))
        for i, sub in enumerate(node.premisses):
            stack.append((path + (str(i),), sub))
    problems.sort(key=lambda p: p.path)
    return problems


def assert_valid(base, d: Derivation, bound: int, allow_j: bool = False) -> Derivation:
    problems = check_derivation(base, d, bound, allow_j)
    if problems:
        raise DerivationError("; ".join(str(p) for p in problems[:5]))
    return d
