"""Reproducing the success-rate comparisons at desk scale.

A benchmark cell reads "x/y (t)": x exact factorizations out of y seeded
runs, with t the total time spent divided by the number of successes
(failed runs are sunk cost).  Run i always uses seed base_seed + i, so the
numbers are identical for any worker count; only the wall clock changes.

The published protocols are available as presets: the screening protocol
stops at 5 successes checking every 10 runs (at most 100), the final
comparison at 100 successes checking every 50 (at most 1000).  Here we run
a shrunken version over three instances; scale up by swapping the StopRule.
"""

from exactnmf import (
    HeuristicSpec,
    RefineConfig,
    SAConfig,
    StopRule,
    benchmark_registry,
    render_markdown,
    run_trials,
    sweep,
)

stop = StopRule(max_runs=6, target_successes=3, check_every=3)
refine = RefineConfig.deterministic()

# Keep the annealer short for the demo; defaults suit the hard instances.
base = HeuristicSpec(refine=refine,
                     sa=SAConfig(moves_per_level=10, sweeps_per_move=50))

instances = [(e.name, e.matrix, e.nnrank) for e in benchmark_registry()
             if e.name in ("LEDM6", "6-G", "UDISJ4")]

axis = [("MS2", {"heuristic": "ms2"}),
        ("SA", {"heuristic": "sa"}),
        ("RBR", {"heuristic": "rbr"}),
        ("Hybrid", {"heuristic": "hybrid"})]

table = sweep(instances, axis, base, stop, workers=1)
print(render_markdown(table))

# Single cells are one call; per-trial records carry seeds and errors so any
# run can be replayed exactly.
report = run_trials(instances[0][1], 5, base, stop, matrix_name="LEDM6")
print("LEDM6 rank-growth trials:")
for t in report.trials:
    print(f"  run {t.run_index} (seed {t.seed}): error {t.final_error:.1e} "
          f"in {t.sweeps} sweeps -> {'success' if t.success else 'miss'}")
