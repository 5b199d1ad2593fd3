"""Moral conflicts and how to give up as little as possible.

No plan in the hospital domain satisfies every value and desire, so the
problem is a moral conflict. A contraction keeps a satisfiable subset; we
list the minimal ones under three criteria.
"""

from ethplan import load_bundled
from ethplan.conflict import MoralProblem, enumerate_minimal_contractions, satisfying_plan
from ethplan.ltlf import pretty_print

domain = load_bundled("hospital.epd")
HORIZON = 4


def fmt(values):
    return "{" + ", ".join(sorted(pretty_print(v) for v in values)) + "}"


ed = domain.ethical_domain(3)
problem = MoralProblem(ed.values.union(), ed.theory, ed.initial)
print(f"all values: {fmt(problem.values)}")
print(f"satisfying plan up to length {HORIZON}: {satisfying_plan(problem, HORIZON)}")

for criterion in ("qual", "quant", "lex"):
    base = ed.values if criterion == "lex" else None
    found = enumerate_minimal_contractions(problem, HORIZON, criterion, base)
    print(f"\n{criterion}-minimal contractions:")
    for m in sorted(found, key=lambda m: fmt(m.values)):
        print(f"  {fmt(m.values)}  (e.g. plan {satisfying_plan(m, HORIZON)})")

# Dropping the desires leaves a consistent set of values.
values_only = problem.with_values(domain.value_base().union())
print(f"\nvalues alone: {fmt(values_only.values)}")
print(f"  witness plan: {satisfying_plan(values_only, HORIZON)}")
