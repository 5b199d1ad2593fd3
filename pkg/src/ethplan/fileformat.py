"""The ``.epd`` domain file format.

A file has a ``domain`` block (universe and conditional effects) and a
``problem`` block (initial state, value levels, desires, morality)::

    domain {
      propositions: blocked, surgery, destination
      actions: move, ask
      effect+ move destination: !blocked
      effect- ask blocked: blocked
    }
    problem {
      init: blocked
      values[1]: G !dangerous
      desires: F destination; F (destination & !waited)
      morality: 3
      morality-range: 2..3
      horizon: 4
    }

``#`` starts a comment. Effects not listed default to ``false``. The
no-op action ``noop`` is always available.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .domain import NOOP, ActionTheory, check_identifier
from .errors import MoralityOutOfRange, NonPropositionalEffect, UndeclaredName
from .evaluation import EthicalPlanningDomain, MixedMotiveDomain, ValueBase, check_morality, induce
from .ltlf import Formula, FormulaSyntaxError, atoms, is_propositional, parse_formula, pretty_print


class DomainSyntaxError(SyntaxError):
    """Malformed domain file; carries 1-based ``lineno`` and ``offset``."""

    def __init__(self, message: str, lineno: int, offset: int = 1, line: str = ""):
        super().__init__(f"line {lineno}, column {offset}: {message}")
        self.msg = message
        self.lineno = lineno
        self.offset = offset
        self.text = line


@dataclass(frozen=True)
class Effect:
    sign: str  # "+" or "-"
    action: str
    proposition: str
    condition: Formula


@dataclass(frozen=True)
class DomainFile:
    propositions: tuple[str, ...]
    actions: tuple[str, ...]
    effects: tuple[Effect, ...]
    initial: frozenset[str]
    levels: tuple[tuple[Formula, ...], ...] = ()
    desires: tuple[Formula, ...] = ()
    morality: int | None = None
    morality_range: tuple[int, int] | None = None
    horizon: int | None = None

    @property
    def all_actions(self) -> tuple[str, ...]:
        return self.actions if NOOP in self.actions else (*self.actions, NOOP)

    def theory(self) -> ActionTheory:
        positive = {(e.action, e.proposition): e.condition for e in self.effects if e.sign == "+"}
        negative = {(e.action, e.proposition): e.condition for e in self.effects if e.sign == "-"}
        return ActionTheory(self.propositions, self.actions, positive, negative)

    def value_base(self) -> ValueBase:
        return ValueBase(tuple(frozenset(level) for level in self.levels))

    def effective_morality(self, override: int | None = None) -> int:
        return override if override is not None else (
            self.morality if self.morality is not None else len(self.levels) + 1
        )

    def mixed_domain(self, morality: int | None = None, initial=None) -> MixedMotiveDomain:
        return MixedMotiveDomain(
            self.theory(),
            self.initial if initial is None else frozenset(initial),
            self.value_base(),
            frozenset(self.desires),
            self.effective_morality(morality),
            self.morality_range,
        )

    def ethical_domain(self, morality: int | None = None, initial=None) -> EthicalPlanningDomain:
        """The ethical planning domain induced by desires at the given morality."""
        return induce(self.mixed_domain(morality, initial))


_EFFECT_RE = re.compile(r"effect([+-])\s+(\S+)\s+(\S+?)\s*:(.*)\Z")
_VALUES_RE = re.compile(r"values\[\s*(\d+)\s*\]\s*:(.*)\Z")
_RANGE_RE = re.compile(r"\s*(\d+)\s*\.\.\s*(\d+)\s*\Z")


def _idents(text: str, lineno: int, col: int, what: str, line: str) -> list[str]:
    names = [n for n in re.split(r"[,\s]+", text.strip()) if n]
    for n in names:
        try:
            check_identifier(n, what)
        except ValueError as exc:
            raise DomainSyntaxError(str(exc), lineno, col, line) from None
    return names


def _formula(text: str, lineno: int, col: int, line: str) -> Formula:
    try:
        return parse_formula(text)
    except FormulaSyntaxError as exc:
        raise DomainSyntaxError(exc.msg, lineno, col + exc.offset - 1, line) from None


def _formula_list(text: str, lineno: int, col: int, line: str) -> list[Formula]:
    result = []
    if not text.strip():
        return result
    start = 0
    for piece in text.split(";"):
        stripped = piece.strip()
        lead = len(piece) - len(piece.lstrip())
        if not stripped:
            raise DomainSyntaxError("empty formula in list", lineno, col + start, line)
        result.append(_formula(stripped, lineno, col + start + lead, line))
        start += len(piece) + 1
    return result


def _int(text: str, lineno: int, col: int, line: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise DomainSyntaxError(f"expected an integer, found {text.strip()!r}", lineno, col, line) from None


def parse_domain_file(text: str) -> DomainFile:
    """Parse and validate the text of a domain file."""
    section = None  # None -> expecting a block header; else "domain"/"problem"
    seen_blocks: list[str] = []
    props: list[str] | None = None
    acts: list[str] | None = None
    effects: list[Effect] = []
    effect_keys: set[tuple[str, str, str]] = set()
    initial: list[str] | None = None
    levels: dict[int, list[Formula]] = {}
    desires: list[Formula] = []
    morality = morality_range = horizon = None
    last_line = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = raw.split("#", 1)[0].rstrip()
        body = line.strip()
        if not body:
            continue
        col = len(line) - len(line.lstrip()) + 1
        if section is None:
            m = re.fullmatch(r"(domain|problem)\s*\{", body)
            if not m:
                raise DomainSyntaxError("expected 'domain {' or 'problem {'", lineno, col, raw)
            name = m.group(1)
            expected = "domain" if not seen_blocks else "problem" if seen_blocks == ["domain"] else None
            if name != expected:
                raise DomainSyntaxError(f"unexpected '{name}' block", lineno, col, raw)
            section = name
            seen_blocks.append(name)
            continue
        if body == "}":
            section = None
            continue

        key, sep, rest = body.partition(":")
        rest_col = col + len(key) + 1
        key = key.strip()
        if section == "domain":
            m = _EFFECT_RE.match(body)
            if m:
                sign, action, prop, cond_text = m.groups()
                cond_col = col + m.start(4)
                cond_text_stripped = cond_text.strip()
                lead = len(cond_text) - len(cond_text.lstrip())
                cond = _formula(cond_text_stripped, lineno, cond_col + lead, raw)
                if (sign, action, prop) in effect_keys:
                    raise DomainSyntaxError(f"duplicate effect{sign} {action} {prop}", lineno, col, raw)
                effect_keys.add((sign, action, prop))
                effects.append(Effect(sign, action, prop, cond))
            elif key == "propositions" and sep:
                props = _idents(rest, lineno, rest_col, "proposition", raw)
            elif key == "actions" and sep:
                acts = _idents(rest, lineno, rest_col, "action", raw)
            else:
                raise DomainSyntaxError(f"unknown domain declaration {body!r}", lineno, col, raw)
            continue

        # problem block
        m = _VALUES_RE.match(body)
        if m:
            k = int(m.group(1))
            if k < 1:
                raise DomainSyntaxError("value levels are numbered from 1", lineno, col, raw)
            levels.setdefault(k, []).extend(_formula_list(m.group(2), lineno, col + m.start(2), raw))
        elif key == "init" and sep:
            initial = [] if rest.strip() == "none" else _idents(rest, lineno, rest_col, "proposition", raw)
        elif key == "desires" and sep:
            desires.extend(_formula_list(rest, lineno, rest_col, raw))
        elif key == "morality" and sep:
            morality = _int(rest, lineno, rest_col, raw)
        elif key == "morality-range" and sep:
            rm = _RANGE_RE.match(rest)
            if not rm:
                raise DomainSyntaxError("expected a range like 2..3", lineno, rest_col, raw)
            morality_range = (int(rm.group(1)), int(rm.group(2)))
        elif key == "horizon" and sep:
            horizon = _int(rest, lineno, rest_col, raw)
            if horizon < 0:
                raise DomainSyntaxError("horizon must be non-negative", lineno, rest_col, raw)
        else:
            raise DomainSyntaxError(f"unknown problem declaration {body!r}", lineno, col, raw)

    if section is not None:
        raise DomainSyntaxError(f"unterminated '{section}' block", last_line + 1, 1)
    if seen_blocks != ["domain", "problem"]:
        raise DomainSyntaxError("a domain block followed by a problem block is required", last_line + 1, 1)
    if props is None:
        raise DomainSyntaxError("missing 'propositions:' declaration", last_line + 1, 1)
    if acts is None:
        raise DomainSyntaxError("missing 'actions:' declaration", last_line + 1, 1)
    if initial is None:
        raise DomainSyntaxError("missing 'init:' declaration", last_line + 1, 1)
    if levels and sorted(levels) != list(range(1, max(levels) + 1)):
        raise DomainSyntaxError("value levels must be numbered 1..m without gaps", last_line + 1, 1)

    domain = DomainFile(
        propositions=tuple(dict.fromkeys(props)),
        actions=tuple(dict.fromkeys(acts)),
        effects=tuple(effects),
        initial=frozenset(initial),
        levels=tuple(tuple(levels[k]) for k in sorted(levels)),
        desires=tuple(desires),
        morality=morality,
        morality_range=morality_range,
        horizon=horizon,
    )
    validate(domain)
    return domain


def validate(domain: DomainFile) -> None:
    declared = set(domain.propositions)
    actions = set(domain.all_actions)
    for e in domain.effects:
        if e.action not in actions:
            raise UndeclaredName(f"effect{e.sign} uses undeclared action {e.action!r}")
        if e.proposition not in declared:
            raise UndeclaredName(f"effect{e.sign} uses undeclared proposition {e.proposition!r}")
        if not is_propositional(e.condition):
            raise NonPropositionalEffect(
                f"effect{e.sign} {e.action} {e.proposition}: {pretty_print(e.condition)} is not propositional"
            )
        missing = atoms(e.condition) - declared
        if missing:
            raise UndeclaredName(f"effect{e.sign} {e.action} {e.proposition} mentions {sorted(missing)}")
        if e.action == NOOP:
            raise ValueError("the no-op action cannot have effects")
    unknown = domain.initial - declared
    if unknown:
        raise UndeclaredName(f"init mentions undeclared propositions {sorted(unknown)}")
    for phi in [f for level in domain.levels for f in level] + list(domain.desires):
        missing = atoms(phi) - declared
        if missing:
            raise UndeclaredName(f"{pretty_print(phi)} mentions undeclared propositions {sorted(missing)}")
    if domain.morality_range is not None:
        lo, hi = domain.morality_range
        if lo > hi:
            raise MoralityOutOfRange(f"empty morality range {lo}..{hi}")
    check_morality(domain.effective_morality(), len(domain.levels), domain.morality_range)


def render_domain_file(domain: DomainFile) -> str:
    """Canonical text of a domain file; parses back to an equal object."""
    lines = ["domain {"]
    lines.append("  propositions: " + ", ".join(domain.propositions))
    lines.append("  actions: " + ", ".join(domain.actions))
    for e in domain.effects:
        lines.append(f"  effect{e.sign} {e.action} {e.proposition}: {pretty_print(e.condition)}")
    lines.append("}")
    lines.append("problem {")
    lines.append("  init: " + (", ".join(sorted(domain.initial)) if domain.initial else "none"))
    for k, level in enumerate(domain.levels, start=1):
        lines.append(f"  values[{k}]: " + "; ".join(pretty_print(f) for f in level))
    if domain.desires:
        lines.append("  desires: " + "; ".join(pretty_print(f) for f in domain.desires))
    if domain.morality is not None:
        lines.append(f"  morality: {domain.morality}")
    if domain.morality_range is not None:
        lines.append(f"  morality-range: {domain.morality_range[0]}..{domain.morality_range[1]}")
    if domain.horizon is not None:
        lines.append(f"  horizon: {domain.horizon}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_domain_file(path: str | Path) -> DomainFile:
    return parse_domain_file(Path(path).read_text(encoding="utf-8"))


def bundled_path(name: str) -> Path:
    """Path of a fixture shipped with the package, e.g. ``hospital.epd``."""
    return Path(str(resources.files("ethplan") / "data" / name))


def load_bundled(name: str) -> DomainFile:
    return load_domain_file(bundled_path(name))
