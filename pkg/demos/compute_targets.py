"""Best-known target values, computed by brute force before any benchmarking.

Staircase objectives are enumerated exhaustively over their integer states;
continuous ones get a dense coarse grid scan plus halving-window refinement
around the best separated cells.  Solvers never certify their own targets:
a run succeeds only when its quantized best value equals the stored target.
"""

from multiwalk import TargetStore, get_objective, objective_names
from multiwalk.targets import compute_target

store = TargetStore()
print(f"{'objective':>12} {'p':>2} {'method':>12} {'valueTarget':>16} minimizer")
for name in objective_names():
    record = compute_target(get_objective(name))
    store.add(record)
    coords = ", ".join(f"{c:.6g}" for c in record.coords)
    print(f"{name:>12} {get_objective(name).dims:>2} {record.method:>12} "
          f"{record.value_target!r:>16} ({coords})")

store.save("targets.csv")
print()
print("wrote targets.csv; pass it to `multiwalk solve/bench --targets targets.csv`.")
print("the wild family shares one target: averaging over coordinates makes the")
print("three-ruler minimum the one-ruler minimum, replicated.")
