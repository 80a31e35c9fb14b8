"""Terms, numerals, sequents: construction, parsing and printing.

Grammar (ASCII)::

    sequent  := [term {"," term}] "|-" [term]
    term     := join
    join     := meet {"|" meet}            (only with ``joins=True``)
    meet     := unary {"&" unary}
    unary    := "~" unary | "(" VAR ")" unary | "/\\" VAR "." term | atom
    atom     := "(" term ")" | NAME ["(" num {"," num} ")"] | num ("=" | "<") num
    num      := numsum
    numsum   := numpost {"+" numpost}
    numpost  := ("1" | DIGITS | VAR | "(" num ")") {"'"}

Decimal numerals are sugar: ``3`` reads as ``1''``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Union


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class FreeVariableError(ValueError):
    pass


# ---------------------------------------------------------------------------
# numeral terms


def _cache_hash(obj, *parts):
    object.__setattr__(obj, "_hash", hash((type(obj).__name__,) + parts))


@dataclass(frozen=True, eq=True)
class Lit:
    value: int
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.value < 1:
            raise ValueError("numerals start at 1")
        _cache_hash(self, self.value)

    def __hash__(self):
        return self._hash


@dataclass(frozen=True, eq=True)
class Var:
    name: str
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.name:
            raise ValueError("empty variable name")
        _cache_hash(self, self.name)

    def __hash__(self):
        return self._hash


@dataclass(frozen=True, eq=True)
class Succ:
    arg: "NumTerm"
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if isinstance(self.arg, Lit):
            raise ValueError("use succ() so that successor literals fold")
        _cache_hash(self, self.arg)

    def __hash__(self):
        return self._hash


@dataclass(frozen=True, eq=True)
class Plus:
    left: "NumTerm"
    right: "NumTerm"
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _cache_hash(self, self.left, self.right)

    def __hash__(self):
        return self._hash


NumTerm = Union[Lit, Var, Succ, Plus]


def succ(t: NumTerm) -> NumTerm:
    """Successor; a literal absorbs the stroke."""
    if isinstance(t, Lit):
        return Lit(t.value + 1)
    return Succ(t)


def num_value(t: NumTerm) -> int:
    if isinstance(t, Lit):
        return t.value
    if isinstance(t, Succ):
        return num_value(t.arg) + 1
    if isinstance(t, Plus):
        return num_value(t.left) + num_value(t.right)
    raise FreeVariableError(f"numeral variable {t.name} is free")


def num_size(t: NumTerm) -> int:
    if isinstance(t, Lit):
        return t.value
    if isinstance(t, Var):
        return 1
    if isinstance(t, Succ):
        return num_size(t.arg) + 1
    return num_size(t.left) + num_size(t.right) + 1


def _num_vars(t: NumTerm) -> frozenset:
    if isinstance(t, Var):
        return frozenset([t.name])
    if isinstance(t, Succ):
        return _num_vars(t.arg)
    if isinstance(t, Plus):
        return _num_vars(t.left) | _num_vars(t.right)
    return frozenset()


def _num_subst(t: NumTerm, var: str, value: NumTerm) -> NumTerm:
    if isinstance(t, Var):
        return value if t.name == var else t
    if isinstance(t, Succ):
        return succ(_num_subst(t.arg, var, value))
    if isinstance(t, Plus):
        return Plus(_num_subst(t.left, var, value), _num_subst(t.right, var, value))
    return t


# ---------------------------------------------------------------------------
# terms

COMPARISONS = ("=", "<")


@dataclass(frozen=True, eq=True)
class Prime:
    """A generator ``name`` or ``name(args)``; ``=`` and ``<`` are arithmetic predicates."""

    name: str
    args: tuple = ()
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.name in COMPARISONS and len(self.args) != 2:
            raise ValueError(f"{self.name} takes two arguments")
        _cache_hash(self, self.name, self.args)

    def __hash__(self):
        return self._hash

    def __str__(self):
        return print_term(self)


@dataclass(frozen=True, eq=True)
class Meet:
    conjuncts: tuple
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.conjuncts) < 2:
            raise ValueError("a meet needs at least two conjuncts")
        _cache_hash(self, self.conjuncts)

    def __hash__(self):
        return self._hash

    def __str__(self):
        return print_term(self)


@dataclass(frozen=True, eq=True)
class Join:
    """Binary-or-wider join; legal only in distributive-lattice terms."""

    disjuncts: tuple
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.disjuncts) < 2:
            raise ValueError("a join needs at least two disjuncts")
        _cache_hash(self, self.disjuncts)

    def __hash__(self):
        return self._hash

    def __str__(self):
        return print_term(self)


@dataclass(frozen=True, eq=True)
class Neg:
    body: "Term"
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _cache_hash(self, self.body)

    def __hash__(self):
        return self._hash

    def __str__(self):
        return print_term(self)


@dataclass(frozen=True, eq=True)
class OmegaMeet:
    """Meet of the instances ``body[var := 1], body[var := 2], ...``."""

    var: str
    body: "Term"
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _cache_hash(self, self.var, self.body)

    def __hash__(self):
        return self._hash

    def __str__(self):
        return print_term(self)

    def instance(self, n: int) -> "Term":
        return subst_numeral(self.body, self.var, n)


Term = Union[Prime, Meet, Join, Neg, OmegaMeet]


def meet(*terms: Term) -> Term:
    if len(terms) == 1:
        return terms[0]
    return Meet(tuple(terms))


def conjuncts(t: Term) -> frozenset:
    """The antecedent set a term stands for: nested meets are flattened."""
    if isinstance(t, Meet):
        out = set()
        for c in t.conjuncts:
            out |= conjuncts(c)
        return frozenset(out)
    return frozenset([t])


@lru_cache(maxsize=None)
def free_vars(t) -> frozenset:
    if isinstance(t, Prime):
        out = frozenset()
        for a in t.args:
            out |= _num_vars(a)
        return out
    if isinstance(t, (Meet, Join)):
        out = frozenset()
        for c in t.conjuncts if isinstance(t, Meet) else t.disjuncts:
            out |= free_vars(c)
        return out
    if isinstance(t, Neg):
        return free_vars(t.body)
    if isinstance(t, OmegaMeet):
        return free_vars(t.body) - {t.var}
    raise TypeError(t)


def depth(t: Term) -> int:
    if isinstance(t, Prime):
        return 0
    if isinstance(t, Meet):
        return 1 + max(depth(c) for c in t.conjuncts)
    if isinstance(t, Join):
        return 1 + max(depth(c) for c in t.disjuncts)
    if isinstance(t, Neg):
        return 1 + depth(t.body)
    return 1 + depth(t.body)


def subst_term(t: Term, var: str, value: NumTerm) -> Term:
    """Replace free occurrences of numeral variable ``var`` by ``value``.

    ``value`` must be closed, so no binder can capture it; binders named
    ``var`` shadow and stop the substitution.
    """
    if var not in free_vars(t):
        return t
    if isinstance(t, Prime):
        return Prime(t.name, tuple(_num_subst(a, var, value) for a in t.args))
    if isinstance(t, Meet):
        return Meet(tuple(subst_term(c, var, value) for c in t.conjuncts))
    if isinstance(t, Join):
        return Join(tuple(subst_term(c, var, value) for c in t.disjuncts))
    if isinstance(t, Neg):
        return Neg(subst_term(t.body, var, value))
    return OmegaMeet(t.var, subst_term(t.body, var, value))


def subst_numeral(schema: Term, var: str, n: int) -> Term:
    return subst_term(schema, var, Lit(n))


def instantiate(schema: Term, var: str, n: int) -> Term:
    """Instance of a schema whose only free numeral variable is ``var``."""
    out = subst_numeral(schema, var, n)
    if free_vars(out):
        raise FreeVariableError(
            f"schema has free variables besides {var}: {sorted(free_vars(out))}"
        )
    return out


def subterms(t: Term, bound: int) -> frozenset:
    """All closed subterms; an omega-meet contributes its instances 1..bound."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    out = set()
    stack = [t]
    while stack:
        s = stack.pop()
        if s in out:
            continue
        out.add(s)
        if isinstance(s, Meet):
            stack.extend(s.conjuncts)
        elif isinstance(s, Join):
            stack.extend(s.disjuncts)
        elif isinstance(s, Neg):
            stack.append(s.body)
        elif isinstance(s, OmegaMeet):
            stack.extend(s.instance(n) for n in range(1, bound + 1))
    return frozenset(out)


# ---------------------------------------------------------------------------
# sequents


@dataclass(frozen=True, eq=True)
class Sequent:
    """``antecedent |- succedent``; a missing succedent means absurdity.

    The antecedent is a set of non-meet terms: meets are split into their
    conjuncts on construction, so contraction, exchange and associativity
    hold by representation.
    """

    antecedent: frozenset
    succedent: Optional[Term] = None
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        flat = set()
        for t in self.antecedent:
            flat |= conjuncts(t)
        object.__setattr__(self, "antecedent", frozenset(flat))
        object.__setattr__(self, "_hash", hash((self.antecedent, self.succedent)))

    def __hash__(self):
        return self._hash

    def __str__(self):
        return print_sequent(self)

    @classmethod
    def of(cls, antecedent: Iterable[Term] = (), succedent: Optional[Term] = None):
        return cls(frozenset(antecedent), succedent)

    def with_antecedent(self, antecedent: Iterable[Term]) -> "Sequent":
        return Sequent(frozenset(antecedent), self.succedent)

    def with_succedent(self, succedent: Optional[Term]) -> "Sequent":
        return Sequent(self.antecedent, succedent)

    def terms(self) -> Iterator[Term]:
        yield from self.antecedent
        if self.succedent is not None:
            yield self.succedent

    def free_vars(self) -> frozenset:
        out = frozenset()
        for t in self.terms():
            out |= free_vars(t)
        return out

    def subst(self, var: str, n: int) -> "Sequent":
        value = Lit(n)
        return Sequent(
            frozenset(subst_term(t, var, value) for t in self.antecedent),
            None if self.succedent is None else subst_term(self.succedent, var, value),
        )


ABSURD = Sequent(frozenset(), None)


# ---------------------------------------------------------------------------
# printing


def print_num(t: NumTerm) -> str:
    if isinstance(t, Lit):
        return "1" + "'" * (t.value - 1)
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Succ):
        inner = print_num(t.arg)
        if isinstance(t.arg, Plus):
            inner = f"({inner})"
        return inner + "'"
    right = print_num(t.right)
    if isinstance(t.right, Plus):
        right = f"({right})"
    return f"{print_num(t.left)}+{right}"


@lru_cache(maxsize=1 << 16)
def print_term(t: Term) -> str:
    if isinstance(t, Prime):
        if t.name in COMPARISONS:
            return f"{print_num(t.args[0])} {t.name} {print_num(t.args[1])}"
        if t.args:
            return f"{t.name}({', '.join(print_num(a) for a in t.args)})"
        return t.name
    if isinstance(t, Meet):
        return " & ".join(_wrap(c, (Meet, Join, OmegaMeet)) for c in t.conjuncts)
    if isinstance(t, Join):
        return " | ".join(_wrap(c, (Join, OmegaMeet)) for c in t.disjuncts)
    if isinstance(t, Neg):
        return "~" + _wrap(t.body, (Meet, Join, OmegaMeet))
    return f"/\\{t.var}. {print_term(t.body)}"


def _wrap(t: Term, kinds) -> str:
    s = print_term(t)
    return f"({s})" if isinstance(t, kinds) else s


def sort_terms(terms: Iterable[Term]) -> list:
    return sorted(terms, key=print_term)


def print_sequent(s: Sequent) -> str:
    left = ", ".join(print_term(t) for t in sort_terms(s.antecedent))
    right = "" if s.succedent is None else print_term(s.succedent)
    return " ".join(x for x in (left, "|-", right) if x)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<turnstile>\|-)|(?P<bigmeet>/\\)|(?P<le><=)|(?P<num>\d+)"
    r"|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[&|~()=<,.'+]))"
)


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        value = m.group(kind)
        start = m.start(kind)
        if kind in ("turnstile", "bigmeet", "le", "op"):
            kind = value
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


_TERM_START = {"name", "num", "~", "(", "/\\"}
_NUM_CONTINUE = {"=", "<", "'", "+"}


class _Parser:
    def __init__(self, text: str, joins: bool, allow_free: bool):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.joins = joins
        self.allow_free = allow_free
        self.scope: list = []  # (source name, internal name)
        self.binders: set = set()
        self.atom_names: set = set()
        self.num_names: set = set()

    # token helpers
    def peek(self, k: int = 0):
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str):
        tok = self.next()
        if tok[0] != kind:
            found = tok[1] or "end of input"
            raise ParseError(f"expected {kind!r}, found {found!r}", tok[2])
        return tok

    def snapshot(self):
        return (self.i, set(self.binders), set(self.atom_names), set(self.num_names))

    def restore(self, state):
        self.i = state[0]
        self.binders, self.atom_names, self.num_names = (set(x) for x in state[1:])

    def fail(self, message: str):
        raise ParseError(message, self.peek()[2])

    # terms
    def term(self) -> Term:
        first = self.meet()
        if self.peek()[0] != "|" or not self.joins:
            if self.peek()[0] == "|":
                self.fail("joins are only allowed in distributive-lattice terms")
            return first
        parts = [first]
        while self.peek()[0] == "|":
            self.next()
            parts.append(self.meet())
        return Join(tuple(parts))

    def meet(self) -> Term:
        parts = [self.unary()]
        while self.peek()[0] == "&":
            self.next()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else Meet(tuple(parts))

    def unary(self) -> Term:
        kind = self.peek()[0]
        if kind == "~":
            self.next()
            return Neg(self.unary())
        if kind == "/\\":
            self.next()
            name = self.expect("name")
            self.expect(".")
            return self.bind(name, self.term)
        if (
            kind == "("
            and self.peek(1)[0] == "name"
            and self.peek(2)[0] == ")"
            and self.peek(3)[0] in _TERM_START
        ):
            self.next()
            name = self.next()
            self.next()
            return self.bind(name, self.unary)
        return self.atom()

    def bind(self, name_tok, body_parser) -> OmegaMeet:
        name = name_tok[1]
        if name in self.atom_names:
            raise ParseError(f"{name} is already used as a generator", name_tok[2])
        internal = name
        used = {n for _, n in self.scope}
        k = 0
        while internal in used:
            k += 1
            internal = f"{name}_{k}"
        self.binders.add(name)
        self.scope.append((name, internal))
        try:
            body = body_parser()
        finally:
            self.scope.pop()
        return OmegaMeet(internal, body)

    def atom(self) -> Term:
        tok = self.peek()
        if tok[0] == "(":
            state = self.snapshot()
            try:
                self.next()
                inner = self.term()
                self.expect(")")
                if self.peek()[0] not in _NUM_CONTINUE:
                    return inner
                error = None
            except ParseError as e:
                error = e
            self.restore(state)
            try:
                return self.comparison()
            except ParseError:
                if error is not None:
                    raise error
                raise
        if tok[0] == "num":
            return self.comparison()
        if tok[0] == "name":
            if self.peek(1)[0] in _NUM_CONTINUE:
                return self.comparison()
            self.next()
            name = tok[1]
            if self.lookup(name) is not None or name in self.num_names or name in self.binders:
                raise ParseError(f"{name} is a numeral variable, not a generator", tok[2])
            self.atom_names.add(name)
            args = ()
            if self.peek()[0] == "(":
                self.next()
                args = [self.num()]
                while self.peek()[0] == ",":
                    self.next()
                    args.append(self.num())
                self.expect(")")
                args = tuple(args)
            return Prime(name, args)
        self.fail(f"expected a term, found {tok[1] or 'end of input'!r}")

    def comparison(self) -> Term:
        left = self.num()
        op = self.next()
        if op[0] not in COMPARISONS:
            raise ParseError("expected '=' or '<'", op[2])
        right = self.num()
        return Prime(op[0], (left, right))

    # numerals
    def lookup(self, name: str) -> Optional[str]:
        for source, internal in reversed(self.scope):
            if source == name:
                return internal
        return None

    def num(self) -> NumTerm:
        left = self.numpost()
        while self.peek()[0] == "+":
            self.next()
            left = Plus(left, self.numpost())
        return left

    def numpost(self) -> NumTerm:
        tok = self.next()
        if tok[0] == "num":
            value = int(tok[1])
            if value < 1:
                raise ParseError("numerals start at 1", tok[2])
            t: NumTerm = Lit(value)
        elif tok[0] == "name":
            name = tok[1]
            if name in self.atom_names:
                raise ParseError(f"{name} is a generator, not a numeral variable", tok[2])
            internal = self.lookup(name)
            if internal is None:
                if not self.allow_free:
                    raise ParseError(f"unbound numeral variable {name}", tok[2])
                internal = name
            self.num_names.add(name)
            t = Var(internal)
        elif tok[0] == "(":
            t = self.num()
            self.expect(")")
        else:
            raise ParseError(f"expected a numeral, found {tok[1] or 'end of input'!r}", tok[2])
        while self.peek()[0] == "'":
            self.next()
            t = succ(t)
        return t

    def done(self):
        tok = self.peek()
        if tok[0] != "eof":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])


def parse_term(text: str, *, joins: bool = False, allow_free: bool = False) -> Term:
    p = _Parser(text, joins, allow_free)
    t = p.term()
    p.done()
    return t


def parse_sequent(text: str, *, allow_free: bool = False) -> Sequent:
    p = _Parser(text, False, allow_free)
    left = []
    if p.peek()[0] != "|-":
        left.append(p.term())
        while p.peek()[0] == ",":
            p.next()
            left.append(p.term())
    p.expect("|-")
    right = None
    if p.peek()[0] != "eof":
        right = p.term()
    p.done()
    return Sequent(frozenset(left), right)


def parse_num(text: str, *, allow_free: bool = True) -> NumTerm:
    p = _Parser(text, False, allow_free)
    t = p.num()
    p.done()
    return t
