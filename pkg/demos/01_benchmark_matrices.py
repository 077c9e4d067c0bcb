"""Tour of the benchmark matrix families.

Every instance used in the success-rate comparisons is generated here, with
its dimensions, rank, and nonnegative rank (the smallest r admitting an
exact factorization X = WH with W, H >= 0).  The interesting tension: rank
can be far below the nonnegative rank, and these families realize that gap
in structurally different ways.
"""

import numpy as np

from exactnmf import (
    benchmark_registry,
    conjectured_ngon_rank,
    corr_submatrix,
    generic_ngon_slack,
    ledm,
    numeric_rank,
    verify_registry,
)

# The registry holds the 18 standard instances.  A trailing * marks a
# nonnegative rank that is only the best known value, not proven.
print(f"{'name':8} {'size':>8} {'rank':>5} {'rank+':>6}  notes")
for e in benchmark_registry():
    star = "" if e.nnrank_exact else "*"
    m, n = e.expected_shape
    print(f"{e.name:8} {f'{m}x{n}':>8} {e.known_rank:>5} {f'{e.nnrank}{star}':>6}  {e.notes}")

# Each entry self-checks: dimensions and numeric rank against the records.
failures = [name for name, ok, _ in verify_registry() if not ok]
print("\nregistry self-check:", "all 18 entries pass" if not failures else failures)

# Linear Euclidean distance matrices have rank 3 for any vector with three
# distinct entries, yet their nonnegative rank grows with n.
a = np.array([0.3, 1.1, 2.0, 4.7, 5.9])
print("\nLEDM on arbitrary points, rank:", numeric_rank(ledm(a)))

# Slack matrices of polygons: entry (i, j) is how far vertex j sits from
# edge i.  Random (generic) polygons keep rank 3 but behave differently
# from regular ones; the sampler guarantees well-separated vertices.
S = generic_ngon_slack(12, seed=7)
print("generic 12-gon slack: shape", S.shape, "rank", numeric_rank(S),
      "min entry", S.min())

# For regular n-gons there is a conjectured closed form for the nonnegative
# rank, growing like 2*log2(n).
print("\nconjectured regular n-gon nonnegative ranks:")
print({n: conjectured_ngon_rank(n) for n in (6, 8, 12, 16, 24, 32, 64)})

# A submatrix of the correlation polytope's slack matrix: rank n(n+1)/2 + 1,
# but believed to have full nonnegative rank 2^n.
M = corr_submatrix(4)
print("\ncorrelation submatrix n=4: shape", M.shape, "rank", numeric_rank(M),
      "(conjectured nonnegative rank 16)")
