"""Local NMF improvement algorithms behind one uniform sweep contract.

Five solvers: multiplicative updates (mu), hierarchical alternating least
squares (hals), their accelerated variants (amu, ahals) that repeat each
block update while it keeps paying off, and alternating nonnegative least
squares (anls) with an exact active-set inner solver.

Every solver runs in whole sweeps (one full update of H then of W), keeps
the factors entrywise nonnegative, and never increases the Frobenius
objective across a sweep.  ``algo_nmf`` applies a solver under either an
exact sweep count or a wall-time quantum.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import nnls as _lawson_hanson_nnls

from ._kernels import block_objective, cd_pass, mu_pass
from .linalg import as_matrix

__all__ = [
    "SolverKind",
    "Iterations",
    "WallTime",
    "Budget",
    "NNLSStallWarning",
    "MU_EPS",
    "ACCEL_GAMMA",
    "inner_pass_cap",
    "mu_sweep",
    "hals_sweep",
    "accelerated_sweep",
    "anls_sweep",
    "algo_nmf",
]

MU_EPS = 1e-16        # floor reviving zero entries before a multiplicative pass
ACCEL_GAMMA = 0.01    # keep repeating a block while it recovers 1% of its first gain
ANLS_COND_LIMIT = 1e12
ANLS_DAMPING = 1e-12


class SolverKind(str, Enum):
    MU = "mu"
    AMU = "amu"
    HALS = "hals"
    AHALS = "ahals"
    ANLS = "anls"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, name: str) -> "SolverKind":
        try:
            return cls(name.strip().lower())
        except ValueError:
            valid = ", ".join(s.value for s in cls)
            raise ValueError(f"unknown solver {name!r}; expected one of: {valid}")


@dataclass(frozen=True)
class Iterations:
    """Run exactly this many outer sweeps."""

    sweeps: int

    def __post_init__(self):
        if self.sweeps < 1:
            raise ValueError("sweep count must be at least 1")


@dataclass(frozen=True)
class WallTime:
    """Run whole sweeps until at least this many seconds have elapsed."""

    seconds: float

    def __post_init__(self):
        if not self.seconds > 0:
            raise ValueError("wall-time budget must be positive")


Budget = Iterations | WallTime


class NNLSStallWarning(RuntimeWarning):
    """The active-set solver hit its pivot cap on some column."""


def inner_pass_cap(m: int, n: int, r: int) -> int:
    """Inner-pass cap 1 + floor(rho) with rho = m*n / (m*r + n*r).

    rho is the flop ratio between forming the fixed block matrices and one
    block pass, so the cap keeps the repeated passes cheaper than the setup
    they amortize.
    """
    return 1 + int((m * n) / (m * r + n * r))


def _hals_block(G, T, B, cap: int, gamma: float) -> None:
    """Update B in place by up to ``cap`` coordinate passes."""
    first = cd_pass(G, T, B)
    passes = 1
    while passes < cap:
        dec = cd_pass(G, T, B)
        passes += 1
        if not dec >= gamma * first:
            break


def _mu_block(G, T, B, cap: int, gamma: float) -> None:
    """Update B in place by up to ``cap`` multiplicative passes."""
    if cap <= 1:
        mu_pass(G, T, B, MU_EPS)
        return
    before = block_objective(G, T, B)
    mu_pass(G, T, B, MU_EPS)
    after = block_objective(G, T, B)
    first = before - after
    passes = 1
    while passes < cap:
        mu_pass(G, T, B, MU_EPS)
        now = block_objective(G, T, B)
        dec, after = after - now, now
        passes += 1
        if not dec >= gamma * first:
            break


def _sweep(kind: SolverKind, X, W, H, cap: int, gamma: float):
    """One full sweep (H block then W block); H is updated in place,
    the returned W is a fresh array."""
    block = _mu_block if kind in (SolverKind.MU, SolverKind.AMU) else _hals_block
    block(W.T @ W, W.T @ X, H, cap, gamma)
    Wt = np.ascontiguousarray(W.T)
    block(H @ H.T, H @ X.T, Wt, cap, gamma)
    return np.ascontiguousarray(Wt.T), H


def _nnls_columns(A, B, previous):
    """argmin_{C >= 0} ||B - A C||_F column by column via Lawson-Hanson.

    When A's Gram matrix is numerically singular the normal equations get
    Tikhonov damping, realized by augmenting A with sqrt(damping) * I rows.
    A column whose active-set iteration stalls keeps its previous value
    (columns are independent, so the sweep stays monotone).
    """
    r = A.shape[1]
    G = A.T @ A
    with np.errstate(all="ignore"):
        cond = np.linalg.cond(G)
    if not np.isfinite(cond) or cond > ANLS_COND_LIMIT:
        A = np.vstack([A, np.sqrt(ANLS_DAMPING) * np.eye(r)])
        B = np.vstack([B, np.zeros((r, B.shape[1]))])
    C = np.empty((r, B.shape[1]))
    stalled = 0
    for j in range(B.shape[1]):
        try:
            C[:, j] = _lawson_hanson_nnls(A, B[:, j])[0]
        except RuntimeError:
            C[:, j] = previous[:, j]
            stalled += 1
    if stalled:
        warnings.warn(
            f"NNLS stalled on {stalled} column(s); previous values kept",
            NNLSStallWarning,
            stacklevel=3,
        )
    return C


def _anls_sweep(X, W, H):
    H = _nnls_columns(W, X, H)
    W = _nnls_columns(H.T, X.T, W.T).T
    return np.ascontiguousarray(W), np.ascontiguousarray(H)


def _check_inputs(X, W, H):
    X = np.ascontiguousarray(as_matrix(X, "X"))
    # the sweeps update in place, so the caller's factors must be copied
    W = np.array(as_matrix(W, "W"), order="C")
    H = np.array(as_matrix(H, "H"), order="C")
    if W.shape[0] != X.shape[0] or H.shape[1] != X.shape[1] or W.shape[1] != H.shape[0]:
        raise ValueError(
            f"dimensions do not conform: X {X.shape}, W {W.shape}, H {H.shape}"
        )
    if W.min() < 0 or H.min() < 0:
        raise ValueError("factors must be entrywise nonnegative")
    return X, W, H


def algo_nmf(kind, X, W, H, budget: Budget, gamma: float = ACCEL_GAMMA,
             cap: int | None = None):
    """Improve (W, H) with the chosen solver under the given budget.

    Returns ``(W, H, sweeps)`` on fresh arrays; the inputs are not modified.
    ``Iterations(N)`` performs exactly N sweeps.  ``WallTime(dt)`` performs
    whole sweeps until at least ``dt`` seconds have elapsed, always at least
    one, so a run is replayable from its recorded sweep count.
    """
    kind = SolverKind(kind)
    X, W, H = _check_inputs(X, W, H)
    if kind in (SolverKind.AMU, SolverKind.AHALS):
        effective_cap = inner_pass_cap(X.shape[0], X.shape[1], W.shape[1]) if cap is None else cap
    else:
        effective_cap = 1
    if kind is SolverKind.ANLS:
        def one_sweep(W, H):
            return _anls_sweep(X, W, H)
    else:
        def one_sweep(W, H):
            return _sweep(kind, X, W, H, effective_cap, gamma)

    if isinstance(budget, Iterations):
        sweeps = budget.sweeps
        for _ in range(sweeps):
            W, H = one_sweep(W, H)
    elif isinstance(budget, WallTime):
        sweeps = 0
        start = time.perf_counter()
        while True:
            W, H = one_sweep(W, H)
            sweeps += 1
            if time.perf_counter() - start >= budget.seconds:
                break
    else:
        raise TypeError(f"budget must be Iterations or WallTime, got {type(budget).__name__}")
    return W, H, sweeps


def mu_sweep(X, W, H):
    """One multiplicative-update sweep; entries below 1e-16 are revived to
    1e-16 before each block so the update can move them."""
    W, H, _ = algo_nmf(SolverKind.MU, X, W, H, Iterations(1))
    return W, H


def hals_sweep(X, W, H):
    """One sweep of cyclic exact coordinate updates over rows of H, then
    columns of W.  Blocks with vanishing Gram diagonal are skipped."""
    W, H, _ = algo_nmf(SolverKind.HALS, X, W, H, Iterations(1))
    return W, H


def accelerated_sweep(kind, X, W, H, gamma: float = ACCEL_GAMMA, cap: int | None = None):
    """One accelerated sweep: each block update is repeated while the latest
    pass still decreases the block objective by at least ``gamma`` times the
    first pass's decrease, up to ``cap`` passes (default 1 + floor(rho))."""
    kind = SolverKind(kind)
    if kind not in (SolverKind.AMU, SolverKind.AHALS):
        raise ValueError("accelerated sweeps exist for 'amu' and 'ahals' only")
    W, H, _ = algo_nmf(kind, X, W, H, Iterations(1), gamma=gamma, cap=cap)
    return W, H


def anls_sweep(X, W, H):
    """One sweep of exact alternating nonnegative least squares."""
    W, H, _ = algo_nmf(SolverKind.ANLS, X, W, H, Iterations(1))
    return W, H
