"""Command-line front end: ``ethplan <command> FILE [options]``.

Exit status is 0 on success, 1 on domain errors (bad file, unknown action,
morality out of range) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence, TextIO

from .conflict import MoralProblem, enumerate_minimal_contractions, satisfying_plan
from .domain import generate_history, make_plan
from .errors import EthplanError
from .evaluation import explain
from .fileformat import DomainFile, load_domain_file
from .ltlf import evaluate, pretty_print
from .search import PlanQuery, count_plans, iter_non_dominated, maximal_profiles

SCHEMA_VERSION = "1"


def _fmt_state(state) -> str:
    return "{" + ", ".join(sorted(state)) + "}"


def _fmt_plan(plan) -> str:
    return ",".join(plan) if plan else "(empty plan)"


def _formulas(fs) -> list[str]:
    return sorted(pretty_print(f) for f in fs)


def _horizon(args, domain: DomainFile) -> int:
    if args.horizon is not None:
        return args.horizon
    if domain.horizon is not None:
        return domain.horizon
    raise EthplanError("no --horizon given and the file declares none")


def cmd_check(args, domain: DomainFile):
    ed = domain.ethical_domain(args.morality)
    details = {
        "propositions": list(domain.propositions),
        "actions": list(domain.all_actions),
        "effects": len(domain.effects),
        "levels": len(domain.levels),
        "desires": len(domain.desires),
        "morality": domain.effective_morality(args.morality),
        "induced_levels": [_formulas(level) for level in ed.values.levels],
    }
    text = (
        f"valid: {len(domain.propositions)} propositions, {len(domain.all_actions)} actions, "
        f"{len(domain.effects)} effect rules, {len(domain.levels)} value levels, "
        f"{len(domain.desires)} desires, morality {details['morality']}"
    )
    return "valid", details, text


def cmd_simulate(args, domain: DomainFile):
    ed = domain.ethical_domain(args.morality)
    plan = make_plan(args.plan)
    history = generate_history(plan, ed.initial, ed.theory)
    values = []
    for k, level in enumerate(ed.values.levels, start=1):
        for phi in sorted(level, key=pretty_print):
            values.append({"level": k, "formula": pretty_print(phi), "satisfied": evaluate(phi, history, 0)})
    lines = [f"simulated plan {_fmt_plan(plan)}", "history:"]
    lines.append(f"  t=0  {_fmt_state(history.states[0])}")
    for t in range(1, history.length + 1):
        lines.append(f"  t={t}  --{history.actions[t - 1]}-->  {_fmt_state(history.states[t])}")
    lines.append("values:")
    for v in values:
        mark = "yes" if v["satisfied"] else "no "
        lines.append(f"  [{mark}] level {v['level']}: {v['formula']}")
    lines.append(" -> ".join(_fmt_state(s) for s in history.states))
    details = {
        "plan": list(plan),
        "states": [sorted(s) for s in history.states],
        "actions": list(history.actions),
        "values": values,
    }
    return "simulated", details, "\n".join(lines)


def cmd_compare(args, domain: DomainFile):
    ed = domain.ethical_domain(args.morality)
    plan1, plan2 = make_plan(args.plan1), make_plan(args.plan2)
    mode = "quant" if args.quant else "qual"
    exp = explain(ed, plan1, plan2, mode)
    res = exp.result
    details = {
        "mode": mode,
        "plan1": list(plan1),
        "plan2": list(plan2),
        "relation": res.relation.name,
        "deciding_level": res.deciding_level,
        "deciders": _formulas(exp.deciders),
        "levels": [
            {"level": k, "plan1": _formulas(s1), "plan2": _formulas(s2)} for k, s1, s2 in exp.table
        ],
    }
    return exp.verdict(), details, str(exp)


def cmd_solve(args, domain: DomainFile):
    ed = domain.ethical_domain(args.morality)
    horizon = _horizon(args, domain)
    lengths = "exact" if args.exact_length else "all"
    query = PlanQuery(ed, horizon, "quant" if args.quant else "qual", lengths)
    front = maximal_profiles(query)
    plans = []
    seen = set()
    for plan in iter_non_dominated(query, front):
        if args.collapse_profiles:
            prof = query.profile(plan)
            if prof in seen:
                continue
            seen.add(prof)
        plans.append(plan)
    n_actions = len(ed.theory.actions)
    verdict = f"{len(plans)} non-dominated {'profile' if args.collapse_profiles else 'plan'}" + (
        "" if len(plans) == 1 else "s"
    )
    entries = []
    lines = [f"{verdict} (horizon {horizon}, {query.mode}, {lengths} lengths)"]
    for plan in plans:
        prof = query.profile(plan)
        sat = sorted({pretty_print(f) for level in prof for f in level})
        entries.append({"plan": list(plan), "satisfied": sat})
        lines.append(f"  {_fmt_plan(plan)}  satisfies {{{', '.join(sat)}}}")
    details = {
        "horizon": horizon,
        "mode": query.mode,
        "lengths": lengths,
        "collapsed": bool(args.collapse_profiles),
        "plans_enumerated": count_plans(n_actions, horizon, lengths),
        "plans": entries,
    }
    return verdict, details, "\n".join(lines)


def cmd_conflict(args, domain: DomainFile):
    ed = domain.ethical_domain(args.morality)
    horizon = _horizon(args, domain)
    values = set(ed.values.union())
    if args.omit_desires:
        values = domain.value_base().union()
    problem = MoralProblem(frozenset(values), ed.theory, ed.initial)
    witness = satisfying_plan(problem, horizon)
    verdict = "conflict" if witness is None else "no conflict"
    if witness is None:
        text = f"conflict: no plan of length <= {horizon} satisfies all {len(values)} values"
    else:
        text = f"no conflict: plan {_fmt_plan(witness)} satisfies all {len(values)} values"
    details = {
        "horizon": horizon,
        "values": _formulas(values),
        "witness": None if witness is None else list(witness),
    }
    return verdict, details, text


def cmd_contract(args, domain: DomainFile):
    ed = domain.ethical_domain(args.morality)
    horizon = _horizon(args, domain)
    problem = MoralProblem(ed.values.union(), ed.theory, ed.initial)
    base = ed.values if args.criterion == "lex" else None
    found = enumerate_minimal_contractions(problem, horizon, args.criterion, base)
    contractions = sorted((_formulas(m.values) for m in found), key=lambda fs: (-len(fs), fs))
    verdict = f"{len(contractions)} minimal contraction" + ("" if len(contractions) == 1 else "s")
    lines = [f"{verdict} ({args.criterion}, horizon {horizon})"]
    for fs in contractions:
        lines.append("  {" + ", ".join(fs) + "}")
    details = {"horizon": horizon, "criterion": args.criterion, "contractions": contractions}
    return verdict, details, "\n".join(lines)


COMMANDS = {
    "check": cmd_check,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "solve": cmd_solve,
    "conflict": cmd_conflict,
    "contract": cmd_contract,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="domain file (.epd)")
    common.add_argument("--morality", type=int, help="override the degree of morality")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="ethplan", description="Ethical planning with LTLf values.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common], help="validate a domain file")
    p = sub.add_parser("simulate", parents=[common], help="show the history of a plan")
    p.add_argument("--plan", required=True, help="comma-separated actions")
    p = sub.add_parser("compare", parents=[common], help="compare two plans")
    p.add_argument("--plan1", required=True)
    p.add_argument("--plan2", required=True)
    p.add_argument("--quant", action="store_true", help="compare by cardinality")
    p = sub.add_parser("solve", parents=[common], help="list non-dominated plans")
    p.add_argument("--horizon", type=int)
    p.add_argument("--quant", action="store_true")
    p.add_argument("--exact-length", action="store_true")
    p.add_argument("--collapse-profiles", action="store_true")
    p = sub.add_parser("conflict", parents=[common], help="bounded moral-conflict check")
    p.add_argument("--horizon", type=int)
    p.add_argument("--omit-desires", action="store_true")
    p = sub.add_parser("contract", parents=[common], help="enumerate minimal contractions")
    p.add_argument("--horizon", type=int)
    p.add_argument("--criterion", choices=("qual", "quant", "lex"), default="qual")
    return parser


def run(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    """Execute one command; returns the exit status."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "horizon", None) is not None and args.horizon < 0:
        print("ethplan: error: --horizon must be non-negative", file=err)
        return 2
    try:
        domain = load_domain_file(args.file)
        verdict, details, text = COMMANDS[args.command](args, domain)
    except OSError as exc:
        print(f"ethplan: error: {exc}", file=err)
        return 1
    except (EthplanError, SyntaxError, ValueError) as exc:
        if args.json:
            payload = {"schema_version": SCHEMA_VERSION, "command": args.command, "verdict": "error", "details": {"message": str(exc)}}
            print(json.dumps(payload, indent=2), file=out)
        print(f"ethplan: error: {exc}", file=err)
        return 1
    if args.json:
        payload = {"schema_version": SCHEMA_VERSION, "command": args.command, "verdict": verdict, "details": details}
        print(json.dumps(payload, indent=2), file=out)
    else:
        print(text, file=out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
