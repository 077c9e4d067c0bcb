"""Compiled inner loops for the local NMF solvers.

Everything here works on one factor block at a time in the row convention:
to update rows of B in min ||M - A B||_F^2 the caller passes the Gram matrix
G = A^T A and the correlation T = A^T M.  The column updates of the other
factor reuse the same kernels on transposed buffers.
"""

from numba import njit


@njit(cache=True)
def cd_pass(G, T, B):
    """One cyclic coordinate-descent pass over the rows of B.

    Each row k is set to the exact nonnegative minimizer of the quadratic
    objective given all other rows (Gauss-Seidel).  Rows whose diagonal Gram
    entry is below 1e-30 are skipped; they belong to numerically dead
    columns of A and dividing by them is not allowed.

    Returns the exact decrease of ||M - A B||_F^2 achieved by the pass.
    """
    r, n = B.shape
    dec = 0.0
    for k in range(r):
        d = G[k, k]
        if d < 1e-30:
            continue
        for j in range(n):
            acc = T[k, j]
            for l in range(r):
                acc -= G[k, l] * B[l, j]
            v = B[k, j] + acc / d
            if v < 0.0:
                v = 0.0
            delta = v - B[k, j]
            # closed-form decrease of the coordinate quadratic
            dec += 2.0 * acc * delta - d * delta * delta
            B[k, j] = v
    return dec


@njit(cache=True)
def mu_pass(G, T, B, eps):
    """One multiplicative-update pass over all of B.

    Entries below eps are raised to eps first so the update can move them
    (zeros are absorbing under a pure multiplicative rule).  The denominator
    carries the same eps guard against division by zero.
    """
    r, n = B.shape
    for k in range(r):
        for j in range(n):
            if B[k, j] < eps:
                B[k, j] = eps
    for k in range(r):
        for j in range(n):
            den = eps
            for l in range(r):
                den += G[k, l] * B[l, j]
            B[k, j] = B[k, j] * T[k, j] / den


@njit(cache=True)
def block_objective(G, T, B):
    """||M - A B||_F^2 up to the constant ||M||_F^2.

    Used by the accelerated sweeps to measure the decrease of a block pass
    without forming the m-by-n residual.
    """
    r, n = B.shape
    q = 0.0
    for k in range(r):
        for j in range(n):
            q -= 2.0 * T[k, j] * B[k, j]
    for k in range(r):
        for l in range(r):
            s = 0.0
            for j in range(n):
                s += B[k, j] * B[l, j]
            q += G[k, l] * s
    return q
