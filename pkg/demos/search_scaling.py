"""Non-dominated plan search on the rover domain, and how it scales.

The search streams the plan space twice and keeps only the frontier of
best Sat-profiles, so memory stays flat while time grows with the number
of plans (3^K here).
"""

import time
import tracemalloc

from ethplan import load_bundled
from ethplan.search import PlanQuery, count_plans, non_dominated_set
from ethplan.ltlf import pretty_print

rover = load_bundled("rover.epd")
ed = rover.ethical_domain()

print("value levels:")
for k, level in enumerate(ed.values.levels, start=1):
    print(f"  {k}: " + "; ".join(sorted(pretty_print(f) for f in level)))

print("\n  K      plans     time   heap peak  best profiles")
for horizon in range(2, 9):
    query = PlanQuery(ed, horizon, lengths="exact")
    tracemalloc.start()
    t0 = time.perf_counter()
    best = non_dominated_set(query, collapse_profiles=True)
    elapsed = time.perf_counter() - t0
    _, peak = tracemalloc.get_traced_memory()
    tracemalloc.stop()
    n = count_plans(len(ed.theory.actions), horizon, "exact")
    print(f"  {horizon}  {n:9d}  {elapsed:6.2f}s  {peak / 1024:7.0f} KiB  {len(best)}")

query = PlanQuery(ed, 6, lengths="exact")
print("\nrepresentatives at K=6:")
for plan in non_dominated_set(query, collapse_profiles=True):
    sat = sorted(pretty_print(f) for level in query.profile(plan) for f in level)
    print(f"  {','.join(plan)}  satisfies {sat}")
