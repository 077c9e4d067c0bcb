"""Using exact factorizations to settle a rank question.

Is the nonnegative rank of a Kronecker product always the product of the
nonnegative ranks?  The slack matrix of two nested squares says no: at
a = sqrt(2) - 0.9 it has rank 3 and nonnegative rank 4, yet its Kronecker
square admits an exact factorization with only 12 terms, well below
4 * 4 = 16.  A found factorization IS the certificate for the upper bound;
the lower side comes from exhausting a search budget.
"""

import math

import numpy as np

from exactnmf import (
    RefineConfig,
    SAConfig,
    hybrid,
    kronecker,
    nested_squares,
    numeric_rank,
    relative_error,
)

refine = RefineConfig.deterministic()
a = math.sqrt(2) - 0.9
A = nested_squares(a)
print("nested-squares matrix at a = sqrt(2) - 0.9:")
print(np.array_str(A, precision=4))
print("rank:", numeric_rank(A))

# Nonnegative rank 4: the search finds r=4 instantly and never lands at r=3
# (geometrically, no triangle fits between the two squares).
found = hybrid(A, 4, refine=refine, seed=1)
print(f"\nr=4 search: error {found.error:.2e} (exact factorization found)")
trimmed = SAConfig(n_levels=11, moves_per_level=10, sweeps_per_move=50)
miss = min(hybrid(A, 3, sa_cfg=trimmed, refine=refine, seed=s).error
           for s in range(1, 11))
print(f"r=3 search: best error over 10 runs {miss:.2e} (no exact fit)")

# The Kronecker square is 16x16 with nonnegative rank at most 16; the
# search certifies 12.
AA = kronecker(A, A)
print(f"\nKronecker square: shape {AA.shape}, rank {numeric_rank(AA)}")
found = hybrid(AA, 12, refine=refine, seed=1)
W, H = found.pair.W, found.pair.H
print(f"r=12 search: error {found.error:.2e}; "
      f"certificate verifies to {relative_error(AA, W, H):.2e}")

# Larger a leaves less room between the squares and the product needs more
# terms; at a=1 (the square's own slack matrix) it needs all 16.
for a_try in (1.0, 0.7, math.sqrt(2) - 0.9):
    X = kronecker(nested_squares(a_try), nested_squares(a_try))
    res = hybrid(X, 12, sa_cfg=trimmed, refine=refine, seed=1)
    verdict = "exact" if res.error <= 1e-6 else "not found"
    print(f"a = {a_try:.4f}: r=12 factorization {verdict} "
          f"(error {res.error:.1e})")
