"""Finite pseudocomplemented meet-semilattices with bottom and top.

Models validate the calculus: every derivable sequent holds under every
assignment of generators that respects the preorder.  Evaluation is
vectorised over all assignments at once.

Model file format (one item per line, ``#`` comments)::

    carrier 0 m 1
    meet
    0 0 0
    0 m m
    0 m 1
    pcomp 1 0 0
    bottom 0
    top 1
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .preorder import Preorder, generator_key
from .syntax import Meet, Neg, OmegaMeet, Prime, Sequent, Term, free_vars, print_term

LAW_NAMES = {
    _kernels.COMMUTATIVE: "commutativity",
    _kernels.IDEMPOTENT: "idempotence",
    _kernels.ASSOCIATIVE: "associativity",
    _kernels.BOTTOM: "bottom absorbs",
    _kernels.TOP: "top is neutral",
    _kernels.PSEUDOCOMPLEMENT: "pseudocomplement",
}


class ModelError(ValueError):
    pass


@dataclass(frozen=True, eq=False, repr=False)
class FinitePSC:
    meet: np.ndarray
    pcomp: np.ndarray
    bottom: int
    top: int
    names: tuple = ()

    def __post_init__(self):
        meet = np.asarray(self.meet, dtype=np.int64)
        pcomp = np.asarray(self.pcomp, dtype=np.int64)
        n = meet.shape[0]
        if meet.shape != (n, n) or pcomp.shape != (n,) or n == 0:
            raise ModelError("meet must be a square table and pcomp a row of the same size")
        if meet.min() < 0 or meet.max() >= n or pcomp.min() < 0 or pcomp.max() >= n:
            raise ModelError("table entries must name carrier elements")
        if not (0 <= self.bottom < n and 0 <= self.top < n):
            raise ModelError("bottom and top must be carrier elements")
        names = tuple(self.names) or tuple(str(i) for i in range(n))
        if len(names) != n or len(set(names)) != n:
            raise ModelError("element names must be distinct, one per element")
        meet.setflags(write=False)
        pcomp.setflags(write=False)
        object.__setattr__(self, "meet", meet)
        object.__setattr__(self, "pcomp", pcomp)
        object.__setattr__(self, "names", names)

    @property
    def size(self) -> int:
        return self.meet.shape[0]

    def leq(self, x: int, y: int) -> bool:
        return bool(self.meet[x, y] == x)

    @property
    def order(self) -> np.ndarray:
        return self.meet == np.arange(self.size)[:, None]

    def __eq__(self, other):
        return (
            isinstance(other, FinitePSC)
            and np.array_equal(self.meet, other.meet)
            and np.array_equal(self.pcomp, other.pcomp)
            and (self.bottom, self.top, self.names) == (other.bottom, other.top, other.names)
        )

    def __hash__(self):
        return hash((self.meet.tobytes(), self.pcomp.tobytes(), self.bottom, self.top, self.names))

    def __str__(self):
        return print_model(self)

    def __repr__(self):
        return f"FinitePSC(size={self.size}, names={self.names})"


@dataclass(frozen=True)
class Violation:
    law: str
    witnesses: tuple

    def __str__(self):
        return f"{self.law} fails at {self.witnesses}"


def validate_psc(m: FinitePSC) -> list:
    """Every violated law with its witnesses; an empty list means ``m`` is a model."""
    rows = _kernels.psc_violations(m.meet, m.pcomp, m.bottom, m.top)
    out = []
    for law, *w in rows.tolist():
        out.append(Violation(LAW_NAMES[law], tuple(m.names[i] for i in w if i >= 0)))
    return out


# ---------------------------------------------------------------------------
# evaluation


def eval_term(m: FinitePSC, asg: dict, t: Term, bound: int) -> int:
    """Value of a closed term; ``asg`` maps generator names to elements."""
    if isinstance(t, Prime):
        if free_vars(t):
            raise ModelError(f"free variable in {print_term(t)}")
        key = generator_key(t)
        if key not in asg:
            raise ModelError(f"unassigned generator {key!r}")
        return int(asg[key])
    if isinstance(t, Meet):
        v = m.top
        for c in t.conjuncts:
            v = int(m.meet[v, eval_term(m, asg, c, bound)])
        return v
    if isinstance(t, Neg):
        return int(m.pcomp[eval_term(m, asg, t.body, bound)])
    if isinstance(t, OmegaMeet):
        v = m.top
        for n in range(1, bound + 1):
            v = int(m.meet[v, eval_term(m, asg, t.instance(n), bound)])
        return v
    raise ModelError(f"cannot evaluate {print_term(t)} in a semilattice model")


def eval_sequent(m: FinitePSC, asg: dict, s: Sequent, bound: int) -> bool:
    left = m.top
    for t in s.antecedent:
        left = int(m.meet[left, eval_term(m, asg, t, bound)])
    right = m.bottom if s.succedent is None else eval_term(m, asg, s.succedent, bound)
    return m.leq(left, right)


def eval_vector(m: FinitePSC, index: dict, rows: np.ndarray, t: Term, bound: int, memo=None) -> np.ndarray:
    """Values of ``t`` under each assignment row at once."""
    if memo is None:
        memo = {}
    hit = memo.get(t)
    if hit is not None:
        return hit
    if isinstance(t, Prime):
        key = generator_key(t)
        if key not in index:
            raise ModelError(f"unassigned generator {key!r}")
        out = rows[:, index[key]]
    elif isinstance(t, Meet):
        out = np.full(rows.shape[0], m.top, dtype=np.int64)
        for c in t.conjuncts:
            out = m.meet[out, eval_vector(m, index, rows, c, bound, memo)]
    elif isinstance(t, Neg):
        out = m.pcomp[eval_vector(m, index, rows, t.body, bound, memo)]
    elif isinstance(t, OmegaMeet):
        out = np.full(rows.shape[0], m.top, dtype=np.int64)
        for n in range(1, bound + 1):
            out = m.meet[out, eval_vector(m, index, rows, t.instance(n), bound, memo)]
    else:
        raise ModelError(f"cannot evaluate {print_term(t)} in a semilattice model")
    memo[t] = out
    return out


def sequent_vector(m: FinitePSC, index: dict, rows: np.ndarray, s: Sequent, bound: int, memo=None) -> np.ndarray:
    """Truth of ``s`` under each assignment row."""
    if memo is None:
        memo = {}
    left = np.full(rows.shape[0], m.top, dtype=np.int64)
    for t in s.antecedent:
        left = m.meet[left, eval_vector(m, index, rows, t, bound, memo)]
    if s.succedent is None:
        right = np.full(rows.shape[0], m.bottom, dtype=np.int64)
    else:
        right = eval_vector(m, index, rows, s.succedent, bound, memo)
    return m.meet[left, right] == left


def assignments(m: FinitePSC, p: Preorder) -> tuple:
    """(generator names, matrix of every assignment respecting ``p``)."""
    cl = p.closure
    rows = _kernels.order_preserving_maps(cl.matrix, cl.absurd, cl.top, m.order, m.bottom, m.top)
    return cl.names, rows


def countermodel(models, p: Preorder, s: Sequent, bound: int) -> Optional[tuple]:
    """First (model, assignment dict) in which ``s`` fails, or None."""
    for m in models:
        names, rows = assignments(m, p)
        if rows.shape[0] == 0:
            continue
        index = {g: i for i, g in enumerate(names)}
        ok = sequent_vector(m, index, rows, s, bound)
        bad = np.flatnonzero(~ok)
        if bad.size:
            row = rows[bad[0]]
            return m, {g: int(row[i]) for i, g in enumerate(names)}
    return None


# ---------------------------------------------------------------------------
# enumeration


def _lattice_from_order(leq: np.ndarray) -> Optional[np.ndarray]:
    """Meet table of a finite poset, or None if some pair has no greatest lower bound."""
    n = leq.shape[0]
    meet = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(a, n):
            lower = np.flatnonzero(leq[:, a] & leq[:, b])
            tops = [x for x in lower if all(leq[y, x] for y in lower)]
            if len(tops) != 1:
                return None
            meet[a, b] = meet[b, a] = tops[0]
    return meet


def _pseudocomplements(meet: np.ndarray, leq: np.ndarray, bottom: int) -> Optional[np.ndarray]:
    n = meet.shape[0]
    pcomp = np.empty(n, dtype=np.int64)
    for a in range(n):
        disjoint = np.flatnonzero(meet[a] == bottom)
        tops = [x for x in disjoint if all(leq[y, x] for y in disjoint)]
        if len(tops) != 1:
            return None
        pcomp[a] = tops[0]
    return pcomp


def _canonical(leq: np.ndarray) -> bytes:
    n = leq.shape[0]
    inner = list(range(1, n - 1))
    best = None
    for perm in itertools.permutations(inner):
        order = [0] + list(perm) + [n - 1]
        code = leq[np.ix_(order, order)].tobytes()
        if best is None or code < best:
            best = code
    return best


def _is_partial_order(leq: np.ndarray) -> bool:
    n = leq.shape[0]
    if not leq.diagonal().all():
        return False
    if (leq & leq.T & ~np.eye(n, dtype=bool)).any():
        return False
    return bool((_kernels.transitive_closure(leq) == leq).all())


def enumerate_psc(max_size: int = 4, include_trivial: bool = False) -> list:
    """Every model of size <= ``max_size`` up to isomorphism, smallest first.

    Element 0 is the bottom and the last element the top; the order on the
    middle elements ranges over all partial orders.  The one-element model,
    where bottom equals top, is left out unless ``include_trivial``.
    """
    if max_size > 5:
        raise ModelError("model enumeration is capped at size 5")
    out = []
    if include_trivial:
        out.append(FinitePSC(np.zeros((1, 1)), np.zeros(1), 0, 0, ("0",)))
    for n in range(2, max_size + 1):
        middle = list(range(1, n - 1))
        pairs = [(a, b) for a in middle for b in middle if a != b]
        seen = set()
        for bits in itertools.product((False, True), repeat=len(pairs)):
            leq = np.zeros((n, n), dtype=bool)
            leq[0, :] = True
            leq[:, n - 1] = True
            np.fill_diagonal(leq, True)
            for (a, b), on in zip(pairs, bits):
                leq[a, b] = on
            if not _is_partial_order(leq):
                continue
            key = _canonical(leq)
            if key in seen:
                continue
            seen.add(key)
            meet = _lattice_from_order(leq)
            if meet is None:
                continue
            pcomp = _pseudocomplements(meet, leq, 0)
            if pcomp is None:
                continue
            inner = ("m",) if n == 3 else tuple(f"m{i}" for i in middle)
            names = ("0",) + inner + ("1",)
            m = FinitePSC(meet, pcomp, 0, n - 1, names)
            if validate_psc(m):
                raise ModelError("internal: enumerated table fails validation")
            out.append(m)
    return out


def boolean_pair() -> FinitePSC:
    return FinitePSC([[0, 0], [0, 1]], [1, 0], 0, 1, ("0", "1"))


def chain(n: int) -> FinitePSC:
    """The ``n``-element chain ``0 < ... < 1``."""
    if n < 2:
        raise ModelError("a chain model needs at least two elements")
    idx = np.arange(n)
    meet = np.minimum(idx[:, None], idx[None, :])
    pcomp = np.where(idx == 0, n - 1, 0)
    names = ("0", "m", "1") if n == 3 else tuple(str(i) for i in range(n))
    return FinitePSC(meet, pcomp, 0, n - 1, names)


# ---------------------------------------------------------------------------
# text format


def print_model(m: FinitePSC) -> str:
    nm = m.names
    lines = ["carrier " + " ".join(nm), "meet"]
    for row in m.meet:
        lines.append(" ".join(nm[x] for x in row))
    lines.append("pcomp " + " ".join(nm[x] for x in m.pcomp))
    lines.append(f"bottom {nm[m.bottom]}")
    lines.append(f"top {nm[m.top]}")
    return "\n".join(lines) + "\n"


def parse_model(text: str) -> FinitePSC:
    lines = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    try:
        if lines[0][0] != "carrier":
            raise ModelError("first line must be 'carrier ...'")
        names = tuple(lines[0][1:])
        index = {x: i for i, x in enumerate(names)}
        n = len(names)
        if lines[1] != ["meet"]:
            raise ModelError("second line must be 'meet'")
        meet = [[index[x] for x in row] for row in lines[2 : 2 + n]]
        if any(len(r) != n for r in meet) or len(meet) != n:
            raise ModelError("meet table must have one row of n entries per element")
        rest = {ln[0]: ln[1:] for ln in lines[2 + n :]}
        pcomp = [index[x] for x in rest["pcomp"]]
        (bottom,) = rest["bottom"]
        (top,) = rest["top"]
        return FinitePSC(meet, pcomp, index[bottom], index[top], names)
    except (KeyError, IndexError, ValueError) as e:
        if isinstance(e, ModelError):
            raise
        raise ModelError(f"malformed model file: {e}") from None


def sound_on(models, p: Preorder, sequents, bound: int) -> list:
    """(sequent, model, assignment) triples where a sequent fails."""
    failures = []
    for m in models:
        names, rows = assignments(m, p)
        if rows.shape[0] == 0:
            continue
        index = {g: i for i, g in enumerate(names)}
        memo = {}
        for s in sequents:
            ok = sequent_vector(m, index, rows, s, bound, memo)
            if not ok.all():
                row = rows[np.flatnonzero(~ok)[0]]
                failures.append((s, m, {g: int(row[i]) for i, g in enumerate(names)}))
    return failures

