"""The local solvers and their shared contract.

A solver takes (X, W, H) and improves the factors in whole sweeps; the
Frobenius error never increases from sweep to sweep.  The annealing and
rank-growth heuristics rely on exactly two things shown here: monotone
sweeps and exact budget accounting.
"""

from exactnmf import (
    InitStrategy,
    Iterations,
    SolverKind,
    WallTime,
    algo_nmf,
    inner_pass_cap,
    init_pair,
    make_rng,
    relative_error,
)

rng = make_rng(0)
W_true = rng.random((30, 6))
H_true = rng.random((6, 25))
X = W_true @ H_true  # exactly factorizable at r=6

W0, H0 = init_pair(InitStrategy.SPARSE11, 30, 25, 6, make_rng(1))
print("starting relative error:", f"{relative_error(X, W0, H0):.3f}")

# Every solver decreases the error monotonically; they differ in speed and
# in how they cope with zeros (multiplicative rules get stuck on sparse
# iterates, coordinate descent does not).
print(f"\n{'solver':>6} " + " ".join(f"{s:>9}" for s in ("20", "100", "500")))
for kind in SolverKind:
    errors = []
    W, H = W0, H0
    done = 0
    for sweeps in (20, 100, 500):
        W, H, n = algo_nmf(kind, X, W, H, Iterations(sweeps - done))
        done = sweeps
        errors.append(relative_error(X, W, H))
    print(f"{kind.value:>6} " + " ".join(f"{e:>9.2e}" for e in errors))

# The accelerated variants repeat a block update while it keeps paying off,
# up to a cap set by the flop ratio of the problem shape.
print("\ninner-pass cap for 30x25 at r=6:", inner_pass_cap(30, 25, 6))
print("inner-pass cap for 50x50 at r=10:", inner_pass_cap(50, 50, 10))

# Budgets: an iteration budget runs an exact sweep count (replayable);
# a wall-time budget runs whole sweeps until the period elapses.
_, _, n_iter = algo_nmf(SolverKind.AHALS, X, W0, H0, Iterations(250))
_, _, n_time = algo_nmf(SolverKind.AHALS, X, W0, H0, WallTime(0.05))
print(f"\nIterations(250) performed {n_iter} sweeps;",
      f"WallTime(0.05s) performed {n_time} sweeps on this machine")
