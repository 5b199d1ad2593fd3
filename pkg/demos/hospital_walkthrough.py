"""A delivery robot in a hospital corridor, blocked by a person.

It can ask the person to step aside (slow) or sound its horn (fast, but it
annoys people and is dangerous near an operating room). We simulate both
plans, compare them, and watch the choice change with the robot's degree
of morality.
"""

from ethplan import explain, generate_history, load_bundled, pretty_print
from ethplan.ltlf import evaluate

domain = load_bundled("hospital.epd")
ASK = ("ask", "move")
HORN = ("horn", "move")


def show_history(plan, initial=None):
    ed = domain.ethical_domain(initial=initial)
    h = generate_history(plan, ed.initial, ed.theory)
    print(f"{','.join(plan)}:")
    print("  " + " -> ".join("{" + ", ".join(sorted(s)) + "}" for s in h.states))
    for k, level in enumerate(ed.values.levels, start=1):
        for phi in sorted(level, key=pretty_print):
            mark = "x" if evaluate(phi, h) else " "
            print(f"  [{mark}] level {k}  {pretty_print(phi)}")


print("== histories (desires at the bottom, morality 3) ==")
show_history(ASK)
show_history(HORN)

print("\n== comparisons ==")
for mu in (3, 2):
    exp = explain(domain.ethical_domain(mu), ASK, HORN)
    print(f"morality {mu}: {exp.summary()}")

# With surgery under way, honking is dangerous. The top-priority value now
# rules it out even for a hurried robot.
print("\n== surgery in progress, morality 2 ==")
hurried = domain.ethical_domain(2, initial={"blocked", "surgery"})
print(explain(hurried, ASK, HORN))
