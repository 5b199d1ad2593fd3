"""Bounded-horizon plan enumeration, dominance checks and non-dominated sets.

Everything here streams over the plan space: only the plan under test, the
current candidate and the frontier of best Sat-profiles found so far are
kept in memory, never the full set of ``|Act|^K`` plans.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .evaluation import EthicalPlanningDomain, Relation, compare_profiles, level_profile

LENGTH_MODES = ("all", "exact")


def check_horizon(horizon: int) -> int:
    if not isinstance(horizon, int) or horizon < 0:
        raise ValueError(f"horizon must be a non-negative integer, got {horizon!r}")
    return horizon


def enumerate_plans(
    actions: Iterable[str],
    horizon: int,
    lengths: str = "all",
    first: str | None = None,
) -> Iterator[tuple[str, ...]]:
    """Yield every plan up to ``horizon`` once, ordered by (length, action index).

    Sets of actions are sorted first so the order is reproducible. With
    ``lengths="exact"`` only plans of length ``horizon`` are produced.
    ``first`` restricts the stream to plans starting with that action.
    """
    check_horizon(horizon)
    if lengths not in LENGTH_MODES:
        raise ValueError(f"lengths must be one of {LENGTH_MODES}")
    if isinstance(actions, (set, frozenset)):
        acts = sorted(actions)
    else:
        acts = list(dict.fromkeys(actions))
    if not acts:
        raise ValueError("at least one action is needed")
    sizes = [horizon] if lengths == "exact" else range(horizon + 1)
    for g in sizes:
        if first is None:
            yield from itertools.product(acts, repeat=g)
        elif g > 0:
            for rest in itertools.product(acts, repeat=g - 1):
                yield (first, *rest)


def count_plans(n_actions: int, horizon: int, lengths: str = "all") -> int:
    if lengths == "exact":
        return n_actions**horizon
    return sum(n_actions**g for g in range(horizon + 1))


@dataclass(frozen=True)
class PlanQuery:
    domain: EthicalPlanningDomain
    horizon: int
    mode: str = "qual"
    lengths: str = "all"

    def __post_init__(self):
        check_horizon(self.horizon)
        if self.mode not in ("qual", "quant"):
            raise ValueError(f"mode must be 'qual' or 'quant', got {self.mode!r}")
        if self.lengths not in LENGTH_MODES:
            raise ValueError(f"lengths must be one of {LENGTH_MODES}")

    def plans(self, first: str | None = None) -> Iterator[tuple[str, ...]]:
        return enumerate_plans(sorted(self.domain.theory.actions), self.horizon, self.lengths, first)

    def profile(self, plan: Sequence[str]):
        return level_profile(self.domain, plan)


def is_dominated(query: PlanQuery, plan: Sequence[str]) -> tuple[str, ...] | None:
    """First enumerated plan strictly better than ``plan``, or ``None``."""
    plan = tuple(plan)
    if len(plan) > query.horizon:
        raise ValueError(f"plan of length {len(plan)} exceeds the horizon {query.horizon}")
    target = query.profile(plan)
    for other in query.plans():
        if compare_profiles(target, query.profile(other), query.mode).relation is Relation.SECOND_PREFERRED:
            return other
    return None


def _insert(front: list, profile, mode: str) -> None:
    for kept in front:
        if kept == profile:
            return
        if compare_profiles(kept, profile, mode).relation is Relation.FIRST_PREFERRED:
            return
    front[:] = [
        kept for kept in front
        if compare_profiles(profile, kept, mode).relation is not Relation.FIRST_PREFERRED
    ]
    front.append(profile)


def _front_of(query: PlanQuery, first: str | None = None) -> list:
    front: list = []
    for plan in query.plans(first):
        _insert(front, query.profile(plan), query.mode)
    return front


def maximal_profiles(query: PlanQuery) -> list:
    """Distinct Sat-profiles not strictly beaten by any plan in the query's space."""
    return _front_of(query)


def iter_non_dominated(query: PlanQuery, front: list | None = None) -> Iterator[tuple[str, ...]]:
    """Stream the non-dominated plans in enumeration order (two passes)."""
    if front is None:
        front = maximal_profiles(query)
    best = set(front)
    for plan in query.plans():
        if query.profile(plan) in best:
            yield plan


def _partition_front(args):
    query, first = args
    return _front_of(query, first)


def _partition_members(args):
    query, first, front = args
    best = set(front)
    return [plan for plan in query.plans(first) if query.profile(plan) in best]


def non_dominated_set(
    query: PlanQuery,
    collapse_profiles: bool = False,
    workers: int | None = None,
) -> list[tuple[str, ...]]:
    """All non-dominated plans of the query, in enumeration order.

    With ``collapse_profiles`` only the first plan of each distinct
    Sat-profile is returned. ``workers > 1`` splits the plan space by first
    action across processes; the result equals the sequential one.
    """
    if workers and workers > 1 and query.horizon > 0:
        plans = _parallel_non_dominated(query, workers)
    else:
        plans = iter_non_dominated(query)
    if not collapse_profiles:
        return list(plans)
    seen = set()
    reps = []
    for plan in plans:
        prof = query.profile(plan)
        if prof not in seen:
            seen.add(prof)
            reps.append(plan)
    return reps


def _parallel_non_dominated(query: PlanQuery, workers: int) -> list[tuple[str, ...]]:
    firsts = sorted(query.domain.theory.actions)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        fronts = list(pool.map(_partition_front, [(query, a) for a in firsts]))
        front: list = []
        if query.lengths == "all":
            _insert(front, query.profile(()), query.mode)
        for part in fronts:
            for prof in part:
                _insert(front, prof, query.mode)
        parts = list(pool.map(_partition_members, [(query, a, front) for a in firsts]))
    members = [p for part in parts for p in part]
    if query.lengths == "all" and query.profile(()) in set(front):
        members.append(())
    # restore length-lexicographic enumeration order
    index = {a: i for i, a in enumerate(firsts)}
    members.sort(key=lambda p: (len(p), [index[a] for a in p]))
    return members
