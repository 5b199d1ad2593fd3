"""LTLf formulas: abstract syntax, concrete syntax, and finite-trace evaluation.

Formulas are immutable and compare structurally. The core language is
``Atom | Not | And | Next | Until``; ``Top``, ``Bottom``, ``Or``,
``Implies``, ``Eventually`` and ``Henceforth`` are convenience nodes that
:func:`desugar` rewrites into the core.

Concrete syntax (ASCII)::

    formula := implied
    implied := ored ("->" implied)?
    ored    := anded ("|" anded)*
    anded   := until ("&" until)*
    until   := unary ("U" until)?
    unary   := ("!" | "X" | "F" | "G") unary | atom
    atom    := "true" | "false" | IDENT | "(" formula ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

__all__ = [
    "TraceSet",
    "Formula",
    "Atom",
    "Top",
    "Bottom",
    "Not",
    "And",
    "Or",
    "Implies",
    "Next",
    "Until",
    "Eventually",
    "Henceforth",
    "TOP",
    "BOTTOM",
    "RESERVED_TOP",
    "FormulaSyntaxError",
    "parse_formula",
    "pretty_print",
    "desugar",
    "size",
    "atoms",
    "is_propositional",
    "holds_in_state",
    "truth_vector",
    "evaluate",
]

# Reserved proposition used to encode true as (r | !r) in the core language.
RESERVED_TOP = "__top"

KEYWORDS = frozenset({"X", "F", "G", "U", "true", "false"})
IDENT_RE = re.compile(r"[A-Za-z0-9_]+\Z")


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return pretty_print(self)


@dataclass(frozen=True, slots=True, repr=False)
class Atom(Formula):
    name: str

    def __repr__(self) -> str:
        return f"Atom({self.name!r})"


@dataclass(frozen=True, slots=True, repr=False)
class Top(Formula):
    def __repr__(self) -> str:
        return "Top()"


@dataclass(frozen=True, slots=True, repr=False)
class Bottom(Formula):
    def __repr__(self) -> str:
        return "Bottom()"


@dataclass(frozen=True, slots=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Next(Formula):
    operand: Formula


@dataclass(frozen=True, slots=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Eventually(Formula):
    operand: Formula


@dataclass(frozen=True, slots=True)
class Henceforth(Formula):
    operand: Formula


TOP = Top()
BOTTOM = Bottom()

_UNARY = (Not, Next, Eventually, Henceforth)
_BINARY = (And, Or, Implies, Until)
_TEMPORAL = (Next, Until, Eventually, Henceforth)


def children(phi: Formula) -> tuple[Formula, ...]:
    if isinstance(phi, _UNARY):
        return (phi.operand,)
    if isinstance(phi, _BINARY):
        return (phi.left, phi.right)
    return ()


def subformulas(phi: Formula) -> Iterator[Formula]:
    """Yield every node of ``phi``, children before parents."""
    stack: list[tuple[Formula, bool]] = [(phi, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            yield node
            continue
        stack.append((node, True))
        for child in reversed(children(node)):
            stack.append((child, False))


def size(phi: Formula) -> int:
    """Number of nodes in the syntax tree."""
    return sum(1 for _ in subformulas(phi))


def atoms(phi: Formula) -> frozenset[str]:
    return frozenset(n.name for n in subformulas(phi) if isinstance(n, Atom))


def is_propositional(phi: Formula) -> bool:
    return not any(isinstance(n, _TEMPORAL) for n in subformulas(phi))


def desugar(phi: Formula) -> Formula:
    """Rewrite ``phi`` into the core constructors {Atom, Not, And, Next, Until}.

    ``true`` becomes ``r | !r`` over the reserved atom ``__top``, then the
    disjunction is itself expanded. ``G f`` is ``!(true U !f)`` and ``F f``
    is ``!G !f``.
    """
    memo: dict[Formula, Formula] = {}
    for node in subformulas(phi):
        if node in memo:
            continue
        memo[node] = _desugar_node(node, memo)
    return memo[phi]


def _core_or(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


_CORE_TOP = _core_or(Atom(RESERVED_TOP), Not(Atom(RESERVED_TOP)))


def _desugar_node(node: Formula, memo: dict[Formula, Formula]) -> Formula:
    if isinstance(node, Atom):
        return node
    if isinstance(node, Top):
        return _CORE_TOP
    if isinstance(node, Bottom):
        return Not(_CORE_TOP)
    if isinstance(node, Not):
        return Not(memo[node.operand])
    if isinstance(node, Next):
        return Next(memo[node.operand])
    if isinstance(node, And):
        return And(memo[node.left], memo[node.right])
    if isinstance(node, Until):
        return Until(memo[node.left], memo[node.right])
    if isinstance(node, Or):
        return _core_or(memo[node.left], memo[node.right])
    if isinstance(node, Implies):
        return Not(And(memo[node.left], Not(memo[node.right])))
    if isinstance(node, Henceforth):
        return Not(Until(_CORE_TOP, Not(memo[node.operand])))
    if isinstance(node, Eventually):
        return Not(Not(Until(_CORE_TOP, Not(Not(memo[node.operand])))))
    raise TypeError(f"not a formula: {node!r}")


# ---------------------------------------------------------------------------
# Evaluation


def holds_in_state(phi: Formula, state: frozenset[str] | set[str]) -> bool:
    """Truth of a propositional formula in a single state."""
    if isinstance(phi, Atom):
        return phi.name in state
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bottom):
        return False
    if isinstance(phi, Not):
        return not holds_in_state(phi.operand, state)
    if isinstance(phi, And):
        return holds_in_state(phi.left, state) and holds_in_state(phi.right, state)
    if isinstance(phi, Or):
        return holds_in_state(phi.left, state) or holds_in_state(phi.right, state)
    if isinstance(phi, Implies):
        return not holds_in_state(phi.left, state) or holds_in_state(phi.right, state)
    raise ValueError(f"temporal operator in a state formula: {pretty_print(phi)}")


def _states_of(history) -> Sequence[frozenset[str]]:
    return getattr(history, "states", history)


def _postorder(phi: Formula) -> list[Formula]:
    order: list[Formula] = []
    seen: set[int] = set()
    stack: list[tuple[Formula, bool]] = [(phi, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
        elif id(node) not in seen:
            seen.add(id(node))
            stack.append((node, True))
            if isinstance(node, _BINARY):
                stack.append((node.right, False))
                stack.append((node.left, False))
            elif isinstance(node, _UNARY):
                stack.append((node.operand, False))
    return order


def _until_bits(a: int, b: int, nonlast: int, span: int) -> int:
    # Doubling: after the step with shift s, bit t of ``b`` says some
    # w in [t, t + 2s) has the right operand with the left one on [t, w);
    # bit t of ``a`` says the left operand holds on [t, t + 2s) inside
    # the same trace.
    a &= nonlast
    s = 1
    while s < span:
        b |= a & (b >> s)
        a &= a >> s
        s <<= 1
    return b


def _formula_bits(phi: Formula, atom_bits, full: int, nonlast: int, span: int) -> int:
    """Truth of ``phi`` at every packed position, bit ``i`` for position ``i``.

    ``atom_bits(name)`` gives the positions where an atom holds; ``nonlast``
    marks positions that have a successor in the same trace and ``span`` is
    the longest trace length.
    """
    table: dict[int, int] = {}
    for node in _postorder(phi):
        cls = type(node)
        if cls is Atom:
            v = atom_bits(node.name)
        elif cls is Not:
            v = full ^ table[id(node.operand)]
        elif cls is And:
            v = table[id(node.left)] & table[id(node.right)]
        elif cls is Next:
            v = (table[id(node.operand)] >> 1) & nonlast
        elif cls is Until:
            v = _until_bits(table[id(node.left)], table[id(node.right)], nonlast, span)
        elif cls is Or:
            v = table[id(node.left)] | table[id(node.right)]
        elif cls is Implies:
            v = (full ^ table[id(node.left)]) | table[id(node.right)]
        elif cls is Eventually:
            v = _until_bits(full, table[id(node.operand)], nonlast, span)
        elif cls is Henceforth:
            v = full ^ _until_bits(full, full ^ table[id(node.operand)], nonlast, span)
        elif cls is Top:
            v = full
        elif cls is Bottom:
            v = 0
        else:
            raise TypeError(f"not a formula: {node!r}")
        table[id(node)] = v
    return table[id(phi)]


def _mask_of(flags: Sequence[bool]) -> int:
    if len(flags) <= 64:
        v = 0
        for t, f in enumerate(flags):
            if f:
                v |= 1 << t
        return v
    return int("".join("1" if f else "0" for f in reversed(flags)), 2)


class TraceSet:
    """Several histories packed side by side for bulk evaluation.

    Position ``offsets[j] + t`` stands for time ``t`` of history ``j``.
    """

    def __init__(self, histories: Iterable):
        states: list[frozenset[str]] = []
        offsets, lengths = [], []
        for h in histories:
            hs = _states_of(h)
            if not hs:
                raise ValueError("a history has at least one state")
            offsets.append(len(states))
            lengths.append(len(hs))
            states.extend(hs)
        self.states = states
        self.offsets = tuple(offsets)
        self.lengths = tuple(lengths)
        self.size = len(states)
        self.full = (1 << self.size) - 1
        self.nonlast = self.full ^ sum(1 << (o + n - 1) for o, n in zip(offsets, lengths))
        self.span = max(lengths, default=1)
        self._atoms: dict[str, int] = {}

    def atom_bits(self, name: str) -> int:
        v = self._atoms.get(name)
        if v is None:
            v = self._atoms[name] = _mask_of([name in s for s in self.states])
        return v

    def bits(self, phi: Formula) -> int:
        return _formula_bits(phi, self.atom_bits, self.full, self.nonlast, self.span)

    def initial_bits(self) -> int:
        """Mask of the time-0 positions."""
        return sum(1 << o for o in self.offsets)

    def vectors(self, phi: Formula) -> list[list[bool]]:
        v = self.bits(phi)
        return [[bool(v >> (o + t) & 1) for t in range(n)] for o, n in zip(self.offsets, self.lengths)]


def _single_bits(phi: Formula, states: Sequence[frozenset[str]]) -> int:
    n = len(states)
    if n == 0:
        raise ValueError("a history has at least one state")
    full = (1 << n) - 1
    cache: dict[str, int] = {}

    def atom_bits(name: str) -> int:
        v = cache.get(name)
        if v is None:
            v = cache[name] = _mask_of([name in s for s in states])
        return v

    return _formula_bits(phi, atom_bits, full, full >> 1, n)


def truth_vector(phi: Formula, history) -> list[bool]:
    """Truth value of ``phi`` at every time point 0..k of ``history``.

    Each subformula becomes one bitmask over the trace; Until takes
    O(log k) word-parallel steps, so the cost is O(size(phi) * k log k / w).
    """
    states = _states_of(history)
    v = _single_bits(phi, states)
    return [bool(v >> t & 1) for t in range(len(states))]


def evaluate(phi: Formula, history, t: int = 0) -> bool:
    """Return whether ``history, t |= phi``.

    ``history`` is a :class:`ethplan.domain.History` or any sequence of
    states (sets of true proposition names). Raises ``IndexError`` when
    ``t`` lies outside ``[0, k]``.
    """
    states = _states_of(history)
    k = len(states) - 1
    if not 0 <= t <= k:
        raise IndexError(f"time point {t} outside [0, {k}]")
    return bool(_single_bits(phi, states) >> t & 1)


# ---------------------------------------------------------------------------
# Concrete syntax


class FormulaSyntaxError(SyntaxError):
    """Malformed formula text; ``offset`` is the 1-based column."""

    def __init__(self, message: str, text: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.msg = message
        self.text = text
        self.offset = offset


_TOKEN_RE = re.compile(r"\s*(?:(->)|([!&|()])|([A-Za-z0-9_]+))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:]
            stripped = rest.lstrip()
            if not stripped:
                break
            col = pos + (len(rest) - len(stripped)) + 1
            raise FormulaSyntaxError(f"unknown token {stripped[0]!r}", text, col)
        col = m.start(m.lastindex) + 1
        lexeme = m.group(m.lastindex)
        if m.lastindex == 3:
            kind = lexeme if lexeme in KEYWORDS else "IDENT"
        else:
            kind = lexeme
        tokens.append((kind, lexeme, col))
        pos = m.end()
    tokens.append(("EOF", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, reserved_ok: bool = False):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.reserved_ok = reserved_ok

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str) -> FormulaSyntaxError:
        kind, lexeme, col = self.tokens[self.i]
        if kind == "EOF":
            message = f"{message}, found end of input"
        else:
            message = f"{message}, found {lexeme!r}"
        return FormulaSyntaxError(message, self.text, col)

    def parse(self) -> Formula:
        phi = self.implied()
        if self.peek() != "EOF":
            raise self.error("expected end of formula")
        return phi

    def implied(self) -> Formula:
        left = self.ored()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.implied())
        return left

    def ored(self) -> Formula:
        left = self.anded()
        while self.peek() == "|":
            self.take()
            left = Or(left, self.anded())
        return left

    def anded(self) -> Formula:
        left = self.until()
        while self.peek() == "&":
            self.take()
            left = And(left, self.until())
        return left

    def until(self) -> Formula:
        left = self.unary()
        if self.peek() == "U":
            self.take()
            return Until(left, self.until())
        return left

    def unary(self) -> Formula:
        kind = self.peek()
        if kind in ("!", "X", "F", "G"):
            self.take()
            operand = self.unary()
            return {"!": Not, "X": Next, "F": Eventually, "G": Henceforth}[kind](operand)
        return self.atom()

    def atom(self) -> Formula:
        kind, lexeme, col = self.tokens[self.i]
        if kind == "true":
            self.take()
            return TOP
        if kind == "false":
            self.take()
            return BOTTOM
        if kind == "IDENT":
            if lexeme == RESERVED_TOP and not self.reserved_ok:
                raise FormulaSyntaxError(f"{RESERVED_TOP!r} is reserved", self.text, col)
            self.take()
            return Atom(lexeme)
        if kind == "(":
            self.take()
            inner = self.implied()
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.take()
            return inner
        raise self.error("expected a proposition, constant or '('")


def parse_formula(text: str, *, allow_reserved: bool = False) -> Formula:
    """Parse ASCII formula text into a :class:`Formula`.

    >>> parse_formula("G !dangerous")
    Henceforth(operand=Not(operand=Atom('dangerous')))
    """
    return _Parser(text, allow_reserved).parse()


# precedence levels, loosest first
_PREC = {Implies: 1, Or: 2, And: 3, Until: 4}
_UNARY_PREC = 5
_ATOM_PREC = 6

_ASCII = {Not: "!", Next: "X ", Eventually: "F ", Henceforth: "G ",
          And: " & ", Or: " | ", Implies: " -> ", Until: " U "}
_UNICODE = {Not: "¬", Next: "X", Eventually: "◇", Henceforth: "□",
            And: " ∧ ", Or: " ∨ ", Implies: " → ", Until: " U "}


def _prec(phi: Formula) -> int:
    if isinstance(phi, _UNARY):
        return _UNARY_PREC
    return _PREC.get(type(phi), _ATOM_PREC)


def pretty_print(phi: Formula, unicode: bool = False) -> str:
    """Render ``phi`` with the minimum parentheses needed to re-parse it."""
    symbols = _UNICODE if unicode else _ASCII

    def wrap(child: Formula, min_prec: int) -> str:
        text = render(child)
        return f"({text})" if _prec(child) < min_prec else text

    def render(node: Formula) -> str:
        if isinstance(node, Atom):
            return node.name
        if isinstance(node, Top):
            return "⊤" if unicode else "true"
        if isinstance(node, Bottom):
            return "⊥" if unicode else "false"
        op = symbols[type(node)]
        if isinstance(node, _UNARY):
            return op + wrap(node.operand, _UNARY_PREC)
        p = _PREC[type(node)]
        if isinstance(node, (Until, Implies)):  # right-associative
            return wrap(node.left, p + 1) + op + wrap(node.right, p)
        return wrap(node.left, p) + op + wrap(node.right, p + 1)

    return render(phi)


FormulaLike = Union[Formula, str]


def as_formula(value: FormulaLike) -> Formula:
    return parse_formula(value) if isinstance(value, str) else value
