"""Lexicographic comparison of plans against a prioritised value base."""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .domain import ActionTheory, generate_history, make_state
from .errors import MoralityOutOfRange
from .ltlf import Formula, as_formula, evaluate, pretty_print


@dataclass(frozen=True)
class ValueBase:
    """Value levels ordered by priority; ``levels[0]`` is priority 1."""

    levels: tuple[frozenset[Formula], ...]

    def __post_init__(self):
        levels = tuple(frozenset(as_formula(f) for f in level) for level in self.levels)
        object.__setattr__(self, "levels", levels)
        seen: set[Formula] = set()
        for level in levels:
            repeated = seen & level
            if repeated:
                warnings.warn(
                    "formulas repeated across value levels are counted once per level: "
                    + ", ".join(sorted(pretty_print(f) for f in repeated)),
                    stacklevel=3,
                )
            seen |= level

    @classmethod
    def of(cls, *levels: Iterable[Formula | str]) -> ValueBase:
        return cls(tuple(frozenset(as_formula(f) for f in level) for level in levels))

    @property
    def degree(self) -> int:
        return len(self.levels)

    def union(self) -> frozenset[Formula]:
        return frozenset().union(*self.levels)


@dataclass(frozen=True)
class EthicalPlanningDomain:
    theory: ActionTheory
    initial: frozenset[str]
    values: ValueBase

    def __post_init__(self):
        object.__setattr__(self, "initial", make_state(self.initial, self.theory))


@dataclass(frozen=True)
class MixedMotiveDomain:
    theory: ActionTheory
    initial: frozenset[str]
    values: ValueBase
    desires: frozenset[Formula]
    morality: int
    allowed_morality: tuple[int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "initial", make_state(self.initial, self.theory))
        object.__setattr__(self, "desires", frozenset(as_formula(f) for f in self.desires))
        check_morality(self.morality, self.values.degree, self.allowed_morality)


def check_morality(mu: int, degree: int, allowed: tuple[int, int] | None = None) -> None:
    if not 1 <= mu <= degree + 1:
        raise MoralityOutOfRange(f"morality {mu} outside 1..{degree + 1}")
    if allowed is not None and not allowed[0] <= mu <= allowed[1]:
        raise MoralityOutOfRange(f"morality {mu} outside the allowed range {allowed[0]}..{allowed[1]}")


def induce(mixed: MixedMotiveDomain) -> EthicalPlanningDomain:
    """Insert the desires as a value level at position ``morality``."""
    check_morality(mixed.morality, mixed.values.degree, mixed.allowed_morality)
    levels = list(mixed.values.levels)
    levels.insert(mixed.morality - 1, mixed.desires)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        base = ValueBase(tuple(levels))
    return EthicalPlanningDomain(mixed.theory, mixed.initial, base)


class Relation(enum.Enum):
    FIRST_PREFERRED = "first preferred"
    SECOND_PREFERRED = "second preferred"
    EQUIVALENT = "equivalent"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class ComparisonResult:
    relation: Relation
    deciding_level: int | None = None  # 1-based
    witness: tuple[frozenset[Formula], frozenset[Formula]] | None = None


def level_profile(domain: EthicalPlanningDomain, plan: Sequence[str]) -> tuple[frozenset[Formula], ...]:
    """Sat-set of ``plan`` restricted to each value level.

    The history is generated once and each distinct formula evaluated once.
    """
    history = generate_history(plan, domain.initial, domain.theory)
    truth = {phi: evaluate(phi, history, 0) for phi in domain.values.union()}
    return tuple(frozenset(phi for phi in level if truth[phi]) for level in domain.values.levels)


def compare_profiles(
    first: Sequence[frozenset[Formula]],
    second: Sequence[frozenset[Formula]],
    mode: str = "qual",
) -> ComparisonResult:
    """Compare two level profiles lexicographically by inclusion or cardinality."""
    if mode not in ("qual", "quant"):
        raise ValueError(f"unknown comparison mode {mode!r}")
    for k, (s1, s2) in enumerate(zip(first, second), start=1):
        if mode == "qual":
            if s1 == s2:
                continue
            if s2 < s1:
                rel = Relation.FIRST_PREFERRED
            elif s1 < s2:
                rel = Relation.SECOND_PREFERRED
            else:
                rel = Relation.INCOMPARABLE
        else:
            if len(s1) == len(s2):
                continue
            rel = Relation.FIRST_PREFERRED if len(s1) > len(s2) else Relation.SECOND_PREFERRED
        return ComparisonResult(rel, k, (s1, s2))
    return ComparisonResult(Relation.EQUIVALENT)


def qual_compare(domain: EthicalPlanningDomain, plan1: Sequence[str], plan2: Sequence[str]) -> ComparisonResult:
    return compare_profiles(level_profile(domain, plan1), level_profile(domain, plan2), "qual")


def quant_compare(domain: EthicalPlanningDomain, plan1: Sequence[str], plan2: Sequence[str]) -> ComparisonResult:
    return compare_profiles(level_profile(domain, plan1), level_profile(domain, plan2), "quant")


def compare(domain: EthicalPlanningDomain, plan1, plan2, mode: str = "qual") -> ComparisonResult:
    return compare_profiles(level_profile(domain, plan1), level_profile(domain, plan2), mode)


def _fmt_set(formulas: Iterable[Formula]) -> str:
    items = sorted(pretty_print(f) for f in formulas)
    return "{" + ", ".join(items) + "}"


@dataclass(frozen=True)
class Explanation:
    mode: str
    result: ComparisonResult
    # (level, formulas satisfied by plan 1, formulas satisfied by plan 2)
    table: tuple[tuple[int, frozenset[Formula], frozenset[Formula]], ...] = field(repr=False)

    @property
    def deciders(self) -> frozenset[Formula]:
        """Values at the deciding level satisfied by exactly one of the plans."""
        if self.result.witness is None:
            return frozenset()
        s1, s2 = self.result.witness
        return s1 ^ s2

    def verdict(self) -> str:
        rel = self.result.relation
        if rel is Relation.FIRST_PREFERRED:
            return "plan1 preferred"
        if rel is Relation.SECOND_PREFERRED:
            return "plan2 preferred"
        return rel.value

    def summary(self) -> str:
        rel = self.result.relation
        if rel is Relation.EQUIVALENT:
            return f"equivalent at all {len(self.table)} levels"
        k = self.result.deciding_level
        if rel is Relation.INCOMPARABLE:
            return f"incomparable (level {k})"
        return f"{self.verdict()} (level {k}: {', '.join(sorted(pretty_print(f) for f in self.deciders))})"

    def __str__(self) -> str:
        lines = [self.summary()]
        rel = self.result.relation
        if rel in (Relation.FIRST_PREFERRED, Relation.SECOND_PREFERRED):
            k = self.result.deciding_level
            s1, s2 = self.result.witness
            lines.append(f"  levels 1..{k - 1} agree" if k > 1 else "  decided at the top level")
            lines.append(f"  level {k}: plan1 satisfies {_fmt_set(s1)}, plan2 satisfies {_fmt_set(s2)}")
        else:
            for k, s1, s2 in self.table:
                if self.mode == "quant":
                    lines.append(f"  level {k}: plan1 {_fmt_set(s1)} ({len(s1)})  plan2 {_fmt_set(s2)} ({len(s2)})")
                else:
                    lines.append(f"  level {k}: plan1 {_fmt_set(s1)}  plan2 {_fmt_set(s2)}")
        return "\n".join(lines)


def explain(domain: EthicalPlanningDomain, plan1, plan2, mode: str = "qual") -> Explanation:
    """Explain which values decide between two plans."""
    p1 = level_profile(domain, plan1)
    p2 = level_profile(domain, plan2)
    result = compare_profiles(p1, p2, mode)
    table = tuple((k, s1, s2) for k, (s1, s2) in enumerate(zip(p1, p2), start=1))
    return Explanation(mode, result, table)
