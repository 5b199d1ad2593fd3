"""Moral conflicts, contractions and their minimality at a bounded horizon.

Every plan quantifier ranges over plans of length at most ``horizon``. A
"not a conflict" answer is exact (a witness plan exists); a "conflict"
answer only says no plan up to the horizon satisfies all values.

For a fixed (theory, initial state, horizon) the plan space is generated
once and each formula is reduced to a bitmask over it (bit ``i`` set when
plan ``i`` satisfies the formula). Satisfiability of any value set is then
the AND of its masks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .domain import ActionTheory, generate_history, make_state, sat_set
from .errors import BaseMismatch, MismatchedContext, UniverseTooLarge
from .evaluation import Relation, ValueBase, compare_profiles
from .ltlf import Formula, TraceSet, as_formula
from .search import check_horizon, count_plans, enumerate_plans

MAX_PHYSICAL_UNIVERSE = 12


@dataclass(frozen=True)
class MoralProblem:
    values: frozenset[Formula]
    theory: ActionTheory
    initial: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "values", frozenset(as_formula(f) for f in self.values))
        object.__setattr__(self, "initial", make_state(self.initial, self.theory))

    def with_values(self, values: Iterable[Formula]) -> MoralProblem:
        return MoralProblem(frozenset(values), self.theory, self.initial)


@lru_cache(maxsize=64)
def _plan_space(theory: ActionTheory, initial: frozenset[str], horizon: int):
    plans = tuple(enumerate_plans(sorted(theory.actions), horizon))
    traces = TraceSet(generate_history(p, initial, theory) for p in plans)
    return plans, traces


@lru_cache(maxsize=1 << 14)
def _mask(phi: Formula, theory: ActionTheory, initial: frozenset[str], horizon: int) -> int:
    _, traces = _plan_space(theory, initial, horizon)
    v = traces.bits(phi)
    bits = 0
    for i, offset in enumerate(traces.offsets):
        if v >> offset & 1:
            bits |= 1 << i
    return bits


def clear_caches() -> None:
    _plan_space.cache_clear()
    _mask.cache_clear()


def _joint_mask(values: Iterable[Formula], theory, initial, horizon: int) -> int:
    plans, _ = _plan_space(theory, initial, horizon)
    bits = (1 << len(plans)) - 1
    for phi in values:
        bits &= _mask(phi, theory, initial, horizon)
        if not bits:
            break
    return bits


def satisfying_plan(problem: MoralProblem, horizon: int) -> tuple[str, ...] | None:
    """Shortest (then lexicographically first) plan satisfying every value."""
    check_horizon(horizon)
    bits = _joint_mask(problem.values, problem.theory, problem.initial, horizon)
    if not bits:
        return None
    plans, _ = _plan_space(problem.theory, problem.initial, horizon)
    return plans[(bits & -bits).bit_length() - 1]


def is_conflict(problem: MoralProblem, horizon: int) -> bool:
    """True iff no plan of length <= horizon satisfies all the values."""
    return satisfying_plan(problem, horizon) is None


def _satisfiable(values: Iterable[Formula], problem: MoralProblem, horizon: int) -> bool:
    return bool(_joint_mask(values, problem.theory, problem.initial, horizon))


def _check_context(problem: MoralProblem, other: MoralProblem) -> None:
    if problem.theory != other.theory or problem.initial != other.initial:
        raise MismatchedContext("moral problems must share the action theory and initial state")


def is_contraction(problem: MoralProblem, candidate: MoralProblem, horizon: int) -> bool:
    _check_context(problem, candidate)
    return candidate.values <= problem.values and not is_conflict(candidate, horizon)


def contraction_of_plan(problem: MoralProblem, plan: Sequence[str]) -> MoralProblem:
    """The contraction generated by ``plan``: the values it satisfies."""
    return problem.with_values(sat_set(problem.values, plan, problem.initial, problem.theory))


def is_qual_minimal(problem: MoralProblem, candidate: MoralProblem, horizon: int) -> bool:
    """Inclusion-maximality by one-value extensions.

    Rejects a conflicting candidate, then rejects if adding any single
    missing value keeps the set satisfiable.
    """
    _check_context(problem, candidate)
    if not candidate.values <= problem.values or is_conflict(candidate, horizon):
        return False
    for extra in problem.values - candidate.values:
        if _satisfiable(candidate.values | {extra}, problem, horizon):
            return False
    return True


def is_qual_minimal_exhaustive(problem: MoralProblem, candidate: MoralProblem, horizon: int) -> bool:
    """Inclusion-maximality checked against every strict superset."""
    _check_context(problem, candidate)
    if not candidate.values <= problem.values or is_conflict(candidate, horizon):
        return False
    missing = sorted(problem.values - candidate.values, key=str)
    for r in range(1, len(missing) + 1):
        for extra in itertools.combinations(missing, r):
            if _satisfiable(candidate.values | set(extra), problem, horizon):
                return False
    return True


def is_quant_minimal(problem: MoralProblem, candidate: MoralProblem, horizon: int) -> bool:
    """No satisfiable subset of the values is strictly larger than the candidate."""
    _check_context(problem, candidate)
    if not candidate.values <= problem.values or is_conflict(candidate, horizon):
        return False
    values = sorted(problem.values, key=str)
    for r in range(len(values), len(candidate.values), -1):
        for subset in itertools.combinations(values, r):
            if _satisfiable(subset, problem, horizon):
                return False
    return True


def _restrict(values: frozenset[Formula], base: ValueBase) -> tuple[frozenset[Formula], ...]:
    return tuple(values & level for level in base.levels)


def _check_base(problem: MoralProblem, base: ValueBase) -> None:
    if base.union() != problem.values:
        raise BaseMismatch("the value base does not partition the problem's values")


def _lex_better(challenger, incumbent) -> bool:
    return compare_profiles(challenger, incumbent, "qual").relation is Relation.FIRST_PREFERRED


def is_lex_minimal(problem: MoralProblem, base: ValueBase, candidate: MoralProblem, horizon: int) -> bool:
    """Lexicographic minimality of a contraction with respect to ``base``.

    The candidate must be a satisfiable subset of the values, and no other
    satisfiable subset may agree with it on levels 1..k-1 while strictly
    containing its restriction to level k.
    """
    _check_context(problem, candidate)
    _check_base(problem, base)
    if not candidate.values <= problem.values or is_conflict(candidate, horizon):
        return False
    mine = _restrict(candidate.values, base)
    values = sorted(problem.values, key=str)
    for r in range(len(values) + 1):
        for subset in itertools.combinations(values, r):
            other = frozenset(subset)
            if _lex_better(_restrict(other, base), mine) and _satisfiable(other, problem, horizon):
                return False
    return True


def realizable_sat_sets(problem: MoralProblem, horizon: int) -> dict[frozenset[Formula], tuple[str, ...]]:
    """Distinct Sat-sets of plans up to the horizon, each with its first plan."""
    check_horizon(horizon)
    plans, _ = _plan_space(problem.theory, problem.initial, horizon)
    masks = [(phi, _mask(phi, problem.theory, problem.initial, horizon)) for phi in problem.values]
    found: dict[frozenset[Formula], tuple[str, ...]] = {}
    for i, plan in enumerate(plans):
        key = frozenset(phi for phi, m in masks if m >> i & 1)
        found.setdefault(key, plan)
    return found


def _maximal(sets: Iterable[frozenset[Formula]], criterion: str, base: ValueBase | None):
    sets = list(sets)
    if criterion == "qual":
        return {s for s in sets if not any(s < t for t in sets)}
    if criterion == "quant":
        best = max((len(s) for s in sets), default=0)
        return {s for s in sets if len(s) == best}
    profiles = {s: _restrict(s, base) for s in sets}
    return {s for s in sets if not any(_lex_better(profiles[t], profiles[s]) for t in sets)}


def enumerate_minimal_contractions(
    problem: MoralProblem,
    horizon: int,
    criterion: str = "qual",
    base: ValueBase | None = None,
    strategy: str = "auto",
) -> frozenset[MoralProblem]:
    """All minimal contractions under ``criterion`` ("qual", "quant" or "lex").

    ``strategy="plans"`` collects the Sat-sets of all plans up to the
    horizon and keeps the maximal ones; ``"subsets"`` tests every subset of
    the values with the matching minimality check. ``"auto"`` picks the
    smaller of the two spaces.
    """
    check_horizon(horizon)
    if criterion not in ("qual", "quant", "lex"):
        raise ValueError(f"unknown criterion {criterion!r}")
    if criterion == "lex":
        if base is None:
            raise ValueError("the lex criterion needs a value base")
        _check_base(problem, base)
    if strategy == "auto":
        n_plans = count_plans(len(problem.theory.actions), horizon)
        strategy = "plans" if n_plans <= 2 ** len(problem.values) else "subsets"
    if strategy == "plans":
        chosen = _maximal(realizable_sat_sets(problem, horizon), criterion, base)
        return frozenset(problem.with_values(s) for s in chosen)
    if strategy != "subsets":
        raise ValueError(f"unknown strategy {strategy!r}")
    values = sorted(problem.values, key=str)
    result = set()
    for r in range(len(values) + 1):
        for subset in itertools.combinations(values, r):
            candidate = problem.with_values(subset)
            if criterion == "qual":
                ok = is_qual_minimal(problem, candidate, horizon)
            elif criterion == "quant":
                ok = is_quant_minimal(problem, candidate, horizon)
            else:
                ok = is_lex_minimal(problem, base, candidate, horizon)
            if ok:
                result.add(candidate)
    return frozenset(result)


def all_states(universe: Iterable[str]) -> Iterable[frozenset[str]]:
    props = sorted(universe)
    for r in range(len(props) + 1):
        for combo in itertools.combinations(props, r):
            yield frozenset(combo)


def is_physical_conflict(values: Iterable[Formula], theory: ActionTheory, horizon: int) -> bool:
    """Conflict from every start state over the theory's declared universe."""
    check_horizon(horizon)
    if len(theory.propositions) > MAX_PHYSICAL_UNIVERSE:
        raise UniverseTooLarge(
            f"{len(theory.propositions)} propositions; at most {MAX_PHYSICAL_UNIVERSE} supported"
        )
    values = frozenset(as_formula(f) for f in values)
    for state in all_states(theory.propositions):
        if not is_conflict(MoralProblem(values, theory, state), horizon):
            return False
    return True


def is_conflict_for_theories(values: Iterable[Formula], theories: Iterable[ActionTheory], horizon: int) -> bool:
    """Physical conflict under every theory of an explicit finite family."""
    values = frozenset(as_formula(f) for f in values)
    return all(is_physical_conflict(values, theory, horizon) for theory in theories)


__all__ = [
    "MoralProblem",
    "all_states",
    "clear_caches",
    "contraction_of_plan",
    "enumerate_minimal_contractions",
    "is_conflict",
    "is_conflict_for_theories",
    "is_contraction",
    "is_lex_minimal",
    "is_physical_conflict",
    "is_qual_minimal",
    "is_qual_minimal_exhaustive",
    "is_quant_minimal",
    "realizable_sat_sets",
    "satisfying_plan",
]
