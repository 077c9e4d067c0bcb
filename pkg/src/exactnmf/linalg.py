"""Dense-matrix primitives: norms, residuals, the leading singular triplet,
numeric rank and Kronecker products.

Matrices are plain 2-d float64 numpy arrays with finite entries.  All
benchmark instances are at most 128-by-128, so every routine here is a dense
small-matrix kernel; there is no sparse path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ZeroMatrixError",
    "SizeOverflowError",
    "FactorPair",
    "SingularTriplet",
    "as_matrix",
    "frobenius_norm",
    "relative_error",
    "leading_singular_triplet",
    "numeric_rank",
    "kronecker",
]

KRONECKER_ENTRY_CAP = 2**24


class ZeroMatrixError(ValueError):
    """Raised when an operation needs ||X||_F > 0 but X is zero."""


class SizeOverflowError(ValueError):
    """Raised when a result would exceed the configured entry cap."""


def as_matrix(values, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-d float64 array and check every entry is finite."""
    M = np.asarray(values, dtype=np.float64)
    if M.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got ndim={M.ndim}")
    if M.shape[0] < 1 or M.shape[1] < 1:
        raise ValueError(f"{name} must have at least one row and column")
    if not np.isfinite(M).all():
        raise ValueError(f"{name} contains NaN or Inf entries")
    return M


@dataclass(frozen=True)
class FactorPair:
    """A candidate factorization (W, H) with W m-by-r and H r-by-n.

    Both factors are entrywise nonnegative.  Instances are immutable values:
    heuristics build new pairs rather than mutating old ones, so pairs can be
    shared freely between concurrent workers.
    """

    W: np.ndarray
    H: np.ndarray

    def __post_init__(self):
        W = as_matrix(self.W, "W")
        H = as_matrix(self.H, "H")
        if W.shape[1] != H.shape[0]:
            raise ValueError(
                f"inner dimensions do not conform: W is {W.shape}, H is {H.shape}"
            )
        if W.min(initial=0.0) < 0 or H.min(initial=0.0) < 0:
            raise ValueError("factors must be entrywise nonnegative")
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "H", H)

    @property
    def rank(self) -> int:
        return self.W.shape[1]

    def product(self) -> np.ndarray:
        return self.W @ self.H

    def relative_error(self, X) -> float:
        return relative_error(X, self.W, self.H)


@dataclass(frozen=True)
class SingularTriplet:
    """Dominant singular triplet (sigma, u, v) with unit u and v.

    ``converged`` is False when the power iteration hit its iteration cap;
    the best iterate is still returned.
    """

    sigma: float
    u: np.ndarray
    v: np.ndarray
    converged: bool = True
    iterations: int = 0


def frobenius_norm(M) -> float:
    """Square root of the sum of squared entries."""
    M = as_matrix(M)
    return float(np.linalg.norm(M))


def relative_error(X, W, H=None) -> float:
    """||X - W H||_F / ||X||_F.

    Accepts either ``relative_error(X, pair)`` or ``relative_error(X, W, H)``.
    Raises ZeroMatrixError when ||X||_F = 0.
    """
    if H is None:
        if not isinstance(W, FactorPair):
            raise TypeError("pass a FactorPair or both W and H")
        W, H = W.W, W.H
    X = as_matrix(X, "X")
    W = as_matrix(W, "W")
    H = as_matrix(H, "H")
    if W.shape[0] != X.shape[0] or H.shape[1] != X.shape[1] or W.shape[1] != H.shape[0]:
        raise ValueError(
            f"dimensions do not conform: X {X.shape}, W {W.shape}, H {H.shape}"
        )
    norm_x = np.linalg.norm(X)
    if norm_x == 0.0:
        raise ZeroMatrixError("relative error is undefined for a zero matrix")
    return float(np.linalg.norm(X - W @ H) / norm_x)


def leading_singular_triplet(X, tol: float = 1e-10, max_iters: int = 10000) -> SingularTriplet:
    """Dominant singular triplet of X by power iteration on the Gram operator.

    The start vector is the normalized all-ones vector, which is never
    orthogonal to the Perron vector of a nonnegative matrix, so the result is
    deterministic and reproducible across platforms.  Convergence is declared
    when both residuals ||X v - sigma u|| and ||X^T u - sigma v|| drop below
    ``tol * sigma``; if ``max_iters`` passes first the best iterate is
    returned with ``converged=False``.
    """
    X = as_matrix(X, "X")
    m, n = X.shape
    if np.linalg.norm(X) == 0.0:
        raise ZeroMatrixError("the zero matrix has no leading singular triplet")
    v = np.full(n, 1.0 / np.sqrt(n))
    u = np.full(m, 1.0 / np.sqrt(m))
    sigma = 0.0
    for it in range(1, max_iters + 1):
        w = X @ v
        nw = np.linalg.norm(w)
        if nw > 0.0:
            u = w / nw
        z = X.T @ u
        nz = np.linalg.norm(z)
        if nz > 0.0:
            v = z / nz
        sigma = float(u @ (X @ v))
        res_u = np.linalg.norm(X @ v - sigma * u)
        res_v = np.linalg.norm(X.T @ u - sigma * v)
        if max(res_u, res_v) <= tol * max(sigma, np.finfo(float).tiny):
            return SingularTriplet(sigma, u, v, converged=True, iterations=it)
    return SingularTriplet(sigma, u, v, converged=False, iterations=max_iters)


def numeric_rank(X, rel_tol: float = 1e-9) -> int:
    """Number of singular values above ``rel_tol`` times the largest.

    The benchmark matrices are exactly low-rank up to generator round-off;
    at these sizes a full dense SVD is cheap and 1e-9 cleanly separates true
    from noise singular values.
    """
    X = as_matrix(X, "X")
    s = np.linalg.svd(X, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rel_tol * s[0]))


def kronecker(A, B, max_entries: int = KRONECKER_ENTRY_CAP) -> np.ndarray:
    """Kronecker product in the standard block layout.

    Refuses to build results with more than ``max_entries`` entries.
    """
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    entries = A.size * B.size
    if entries > max_entries:
        raise SizeOverflowError(
            f"Kronecker product would have {entries} entries, cap is {max_entries}"
        )
    return np.kron(A, B)
