"""Refining dynamic stability: reservation values and sophistication.

Loads the bundled two-period market ``example2`` where two dynamically
stable outcomes disagree about whether a2 and b2 should match early.  The
continuation-value-respecting refinement raises every agent's reservation
value to their worst conjectured continuation payoff, computed as a
decreasing fixed point — and it eliminates the early match.  Run with
``python3 demos/03_refinements.py``.
"""

from dynmatch import Solver
from dynmatch.matching import matching_text
from dynmatch.reproduce import load_fixture

economy, _ = load_fixture("example2")
solver = Solver()

for concept in ("ds", "cvr-ds", "sds"):
    solutions = solver.solution_set(concept, economy)
    print(f"{concept}: {len(solutions)} solution(s)")
    for m in solutions:
        print("  ", matching_text(m))

# The decreasing iteration behind cvr-ds: conjecture sets shrink until the
# thresholds they imply stop cutting anything.
print()
trace = solver.family("cvr-ds").iterates(economy)
print(f"value-respecting iteration converged in {len(trace)} step(s):")
for n, stage in enumerate(trace):
    sizes = {k: len(v) for k, v in sorted(stage.items())}
    print(f"  round {n}: conjecture-set sizes {sizes}")

# The increasing iteration behind sds: start from deferred-arrival
# conjectures and add candidate outcomes until nothing new appears.
trace = solver.family("sds").iterates(economy)
print(f"sophisticated iteration converged in {len(trace)} step(s):")
for n, stage in enumerate(trace):
    sizes = {k: len(v) for k, v in sorted(stage.items())}
    print(f"  round {n}: conjecture-set sizes {sizes}")
