"""Preordered sets of generators with absurd (``p <= .``) and top (``. <= p``) markers."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

import numpy as np

from . import _kernels
from .syntax import ParseError, Prime, Term, free_vars, parse_term, print_term


class PreorderError(ValueError):
    pass


def generator_key(t) -> str:
    """Canonical name of a closed prime used as a generator."""
    if isinstance(t, str):
        try:
            t = parse_term(t)
        except ParseError as e:
            raise PreorderError(f"bad generator {t!r}: {e}") from None
    if not isinstance(t, Prime) or free_vars(t):
        raise PreorderError(f"not a closed generator: {print_term(t)}")
    return print_term(t)


@dataclass(frozen=True)
class Preorder:
    generators: frozenset
    base_pairs: frozenset = frozenset()
    absurd_gens: frozenset = frozenset()
    top_gens: frozenset = frozenset()

    def __post_init__(self):
        for name in ("generators", "base_pairs", "absurd_gens", "top_gens"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        for a, b in self.base_pairs:
            for g in (a, b):
                if g not in self.generators:
                    raise PreorderError(f"undeclared generator {g!r} in base pair")
        for g in self.absurd_gens | self.top_gens:
            if g not in self.generators:
                raise PreorderError(f"undeclared generator {g!r} in marker")

    @classmethod
    def build(cls, generators: Iterable = (), pairs: Iterable = (), absurd=(), top=()):
        """Convenience constructor; generators of the pairs are declared implicitly."""
        pairs = {(generator_key(a), generator_key(b)) for a, b in pairs}
        gens = {generator_key(g) for g in generators}
        absurd = {generator_key(g) for g in absurd}
        top = {generator_key(g) for g in top}
        for a, b in pairs:
            gens.update((a, b))
        gens |= absurd | top
        return cls(frozenset(gens), frozenset(pairs), frozenset(absurd), frozenset(top))

    @classmethod
    def discrete(cls, generators: Iterable) -> "Preorder":
        return cls.build(generators)

    @cached_property
    def closure(self) -> "Closure":
        return preorder_close(self)


class Closure:
    """Queryable reflexive-transitive closure of a preorder."""

    def __init__(self, names, matrix, absurd, top):
        self.names = tuple(names)
        self.index = {g: i for i, g in enumerate(self.names)}
        self.matrix = matrix
        self.absurd = absurd
        self.top = top

    def _idx(self, g) -> int:
        key = generator_key(g)
        try:
            return self.index[key]
        except KeyError:
            raise PreorderError(f"undeclared generator {key!r}") from None

    def holds(self, a, b) -> bool:
        return bool(self.matrix[self._idx(a), self._idx(b)])

    def is_absurd(self, a) -> bool:
        return bool(self.absurd[self._idx(a)])

    def is_top(self, a) -> bool:
        return bool(self.top[self._idx(a)])

    def declared(self, g) -> bool:
        return isinstance(g, Prime) and not free_vars(g) and print_term(g) in self.index

    def check_prime(self, p) -> None:
        self._idx(p)

    def base_relation(self, antecedent: frozenset, succedent: Optional[Term]) -> bool:
        """``p <= q``, ``<= q`` or ``p <=`` as a basic relation; never the empty one."""
        if len(antecedent) > 1:
            return False
        for t in antecedent:
            if not isinstance(t, Prime):
                return False
        if succedent is not None and not isinstance(succedent, Prime):
            return False
        if not antecedent:
            return succedent is not None and self.is_top(succedent)
        (p,) = antecedent
        if succedent is None:
            return self.is_absurd(p)
        return self.holds(p, succedent)

    def as_preorder(self) -> Preorder:
        n = len(self.names)
        pairs = {
            (self.names[i], self.names[j])
            for i in range(n)
            for j in range(n)
            if i != j and self.matrix[i, j]
        }
        return Preorder(
            frozenset(self.names),
            frozenset(pairs),
            frozenset(g for g, f in zip(self.names, self.absurd) if f),
            frozenset(g for g, f in zip(self.names, self.top) if f),
        )

    def __eq__(self, other):
        return (
            isinstance(other, Closure)
            and self.names == other.names
            and np.array_equal(self.matrix, other.matrix)
            and np.array_equal(self.absurd, other.absurd)
            and np.array_equal(self.top, other.top)
        )


def preorder_close(p: Preorder) -> Closure:
    names = sorted(p.generators)
    index = {g: i for i, g in enumerate(names)}
    n = len(names)
    rel = np.zeros((n, n), dtype=np.bool_)
    for a, b in p.base_pairs:
        rel[index[a], index[b]] = True
    # a <= . means a is below everything; . <= a means a is above everything
    for g in p.absurd_gens:
        rel[index[g], :] = True
    for g in p.top_gens:
        rel[:, index[g]] = True
    closed = _kernels.transitive_closure(rel)
    absurd = np.zeros(n, dtype=np.bool_)
    top = np.zeros(n, dtype=np.bool_)
    for g in p.absurd_gens:
        absurd |= closed[:, index[g]]
    for g in p.top_gens:
        top |= closed[index[g], :]
    both = [names[i] for i in np.flatnonzero(absurd & top)]
    if both:
        raise PreorderError(
            f"generators both absurd and top make the empty relation basic: {both}"
        )
    return Closure(names, closed, absurd, top)


def parse_preorder(text: str) -> Preorder:
    """Read the line format ``p <= q`` / ``p <= .`` / ``. <= p`` / ``p``; ``#`` comments."""
    gens, pairs, absurd, top = set(), set(), set(), set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if "<=" not in line:
                gens.add(_gen(line))
                continue
            left, right = (s.strip() for s in line.split("<=", 1))
            if left == "." and right == ".":
                raise PreorderError("'. <= .' is never a basic relation")
            if right == ".":
                absurd.add(_gen(left))
            elif left == ".":
                top.add(_gen(right))
            else:
                pairs.add((_gen(left), _gen(right)))
        except ParseError as e:
            raise PreorderError(f"line {lineno}: {e}") from None
        except PreorderError as e:
            raise PreorderError(f"line {lineno}: {e}") from None
    return Preorder.build(gens, pairs, absurd, top)


def _gen(text: str) -> str:
    return generator_key(text)


def print_preorder(p: Preorder) -> str:
    lines = []
    related = set()
    for a, b in sorted(p.base_pairs):
        lines.append(f"{a} <= {b}")
        related.update((a, b))
    for g in sorted(p.absurd_gens):
        lines.append(f"{g} <= .")
        related.add(g)
    for g in sorted(p.top_gens):
        lines.append(f". <= {g}")
        related.add(g)
    lines.extend(sorted(p.generators - related))
    return "\n".join(lines) + "\n"
