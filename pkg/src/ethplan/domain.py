"""States, action theories, plan-generated histories and Sat-sets."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import NonPropositionalEffect, UndeclaredName, UnknownAction
from .ltlf import (
    BOTTOM,
    IDENT_RE,
    KEYWORDS,
    RESERVED_TOP,
    And,
    Bottom,
    Formula,
    Not,
    atoms,
    evaluate,
    holds_in_state,
    is_propositional,
    pretty_print,
)

NOOP = "noop"

State = frozenset  # frozenset[str] of true propositions
Plan = tuple  # tuple[str, ...] of action names, executed at steps 1..k


def check_identifier(name: str, what: str = "name") -> str:
    if not IDENT_RE.match(name) or name in KEYWORDS or name == RESERVED_TOP:
        raise ValueError(f"invalid {what} {name!r}")
    return name


class ActionTheory:
    """Positive and negative effect preconditions over a declared universe.

    ``positive[(a, p)]`` is the propositional condition under which action
    ``a`` makes ``p`` true, ``negative[(a, p)]`` the condition under which
    it makes ``p`` false. Missing pairs default to ``false``. The no-op
    action is always declared and never has effects.
    """

    __slots__ = ("propositions", "actions", "_positive", "_negative", "_effects", "_key", "_hash")

    def __init__(
        self,
        propositions: Iterable[str],
        actions: Iterable[str],
        positive: Mapping[tuple[str, str], Formula] | None = None,
        negative: Mapping[tuple[str, str], Formula] | None = None,
    ):
        props = frozenset(check_identifier(p, "proposition") for p in propositions)
        acts = frozenset(check_identifier(a, "action") for a in actions) | {NOOP}
        tables = []
        for sign, table in (("+", positive or {}), ("-", negative or {})):
            clean = {}
            for (a, p), phi in table.items():
                if a not in acts:
                    raise UnknownAction(f"effect{sign} refers to undeclared action {a!r}")
                if p not in props:
                    raise UndeclaredName(f"effect{sign} refers to undeclared proposition {p!r}")
                if not is_propositional(phi):
                    raise NonPropositionalEffect(
                        f"effect{sign} {a} {p}: {pretty_print(phi)} is not propositional"
                    )
                missing = atoms(phi) - props
                if missing:
                    raise UndeclaredName(f"effect{sign} {a} {p} mentions {sorted(missing)}")
                if isinstance(phi, Bottom):
                    continue
                if a == NOOP:
                    raise ValueError("the no-op action cannot have effects")
                clean[(a, p)] = phi
            tables.append(clean)
        self.propositions = props
        self.actions = acts
        self._positive, self._negative = tables
        effects: dict[str, list[tuple[str, Formula, Formula]]] = {a: [] for a in acts}
        for a, p in sorted(set(self._positive) | set(self._negative)):
            effects[a].append((p, self.positive(a, p), self.negative(a, p)))
        self._effects = {a: tuple(v) for a, v in effects.items()}
        self._key = (
            props,
            acts,
            frozenset(self._positive.items()),
            frozenset(self._negative.items()),
        )
        self._hash = hash(self._key)

    def positive(self, action: str, prop: str) -> Formula:
        return self._positive.get((action, prop), BOTTOM)

    def negative(self, action: str, prop: str) -> Formula:
        return self._negative.get((action, prop), BOTTOM)

    @property
    def positive_table(self) -> dict[tuple[str, str], Formula]:
        return dict(self._positive)

    @property
    def negative_table(self) -> dict[tuple[str, str], Formula]:
        return dict(self._negative)

    def effects_of(self, action: str) -> tuple[tuple[str, Formula, Formula], ...]:
        try:
            return self._effects[action]
        except KeyError:
            raise UnknownAction(f"undeclared action {action!r}") from None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ActionTheory):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return (
            f"ActionTheory(propositions={sorted(self.propositions)}, "
            f"actions={sorted(self.actions)}, {len(self._positive)}+/{len(self._negative)}- effects)"
        )


@dataclass(frozen=True)
class History:
    """A k-history: states at times 0..k and the actions at steps 1..k."""

    states: tuple[frozenset[str], ...]
    actions: tuple[str, ...]

    def __post_init__(self):
        if len(self.states) != len(self.actions) + 1:
            raise ValueError(
                f"a history with {len(self.actions)} actions needs {len(self.actions) + 1} states"
            )

    @property
    def length(self) -> int:
        return len(self.actions)

    def suffix(self, j: int) -> History:
        """The shifted history starting at time ``j``."""
        if not 0 <= j <= self.length:
            raise IndexError(j)
        return History(self.states[j:], self.actions[j:])


def make_state(props: Iterable[str], theory: ActionTheory | None = None) -> frozenset[str]:
    state = frozenset(props)
    if theory is not None:
        unknown = state - theory.propositions
        if unknown:
            raise UndeclaredName(f"state mentions undeclared propositions {sorted(unknown)}")
    return state


def make_plan(actions: str | Sequence[str]) -> tuple[str, ...]:
    """Build a plan from a sequence or a comma-separated string."""
    if isinstance(actions, str):
        return tuple(a.strip() for a in actions.split(",") if a.strip())
    return tuple(actions)


def successor(state: frozenset[str], action: str, theory: ActionTheory) -> frozenset[str]:
    """State reached by executing ``action`` in ``state``.

    A proposition becomes true when only its positive condition holds,
    false when only its negative condition holds, and keeps its value
    otherwise. Conditions are read in the pre-state.
    """
    added = []
    removed = []
    for p, plus, minus in theory.effects_of(action):
        up = holds_in_state(plus, state)
        down = holds_in_state(minus, state)
        if up and not down:
            added.append(p)
        elif down and not up:
            removed.append(p)
    if not added and not removed:
        return state
    return (state - frozenset(removed)) | frozenset(added)


def generate_history(plan: Sequence[str], initial: frozenset[str], theory: ActionTheory) -> History:
    """The unique history generated by ``plan`` from ``initial``."""
    plan = tuple(plan)
    for a in plan:
        if a not in theory.actions:
            raise UnknownAction(f"undeclared action {a!r}")
    states = [frozenset(initial)]
    for a in plan:
        states.append(successor(states[-1], a, theory))
    return History(tuple(states), plan)


def is_compatible(history: History, theory: ActionTheory) -> bool:
    """Check every step of ``history`` against the action theory.

    Written directly from the set equation (remove props whose negative
    condition alone holds, add props whose positive condition alone holds)
    over the whole universe, independently of :func:`successor`.
    """
    for t in range(1, history.length + 1):
        a = history.actions[t - 1]
        if a not in theory.actions:
            return False
        prev = history.states[t - 1]
        universe = theory.propositions | prev
        removed = {
            p for p in universe
            if holds_in_state(And(Not(theory.positive(a, p)), theory.negative(a, p)), prev)
        }
        added = {
            p for p in universe
            if holds_in_state(And(theory.positive(a, p), Not(theory.negative(a, p))), prev)
        }
        if history.states[t] != (prev - removed) | added:
            return False
    return True


def sat_set(
    formulas: Iterable[Formula],
    plan: Sequence[str],
    initial: frozenset[str],
    theory: ActionTheory,
) -> frozenset[Formula]:
    """Formulas true at time 0 of the history generated by ``plan``."""
    history = generate_history(plan, initial, theory)
    return frozenset(phi for phi in formulas if evaluate(phi, history, 0))
