"""Search heuristics for exact nonnegative factorizations.

Five entry points, each a pure function of (matrix, rank, configs, seed):

* ``ms1``  - one random start refined to convergence;
* ``ms2``  - many random starts, a few sweeps each, refine only the best;
* ``simulated_annealing`` - random resets of a few rank-one factors,
  accepted by the Metropolis rule under a geometric temperature ladder;
* ``rank_by_rank`` - grow the factorization one rank-one term at a time,
  starting from the optimal nonnegative rank-one approximation;
* ``hybrid`` - rank_by_rank output used as the annealer's warm start.

Every heuristic finishes with ``final_refinement``, which keeps running the
local solver while the relative error still shrinks by a factor ``alpha``
per budget period.  A factorization counts as exact when the relative error
reaches ``tol`` (1e-6 by default).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .initialization import InitStrategy, init_pair, make_rng
from .linalg import FactorPair, ZeroMatrixError, as_matrix, leading_singular_triplet
from .solvers import Budget, Iterations, SolverKind, WallTime, algo_nmf

__all__ = [
    "RefineConfig",
    "MS2Config",
    "SAConfig",
    "RBRConfig",
    "RefineResult",
    "HeuristicResult",
    "temperature_ladder",
    "accept_move",
    "final_refinement",
    "ms1",
    "ms2",
    "simulated_annealing",
    "rank_by_rank",
    "hybrid",
]

DEFAULT_TOL = 1e-6
DETERMINISTIC_SWEEPS = 10000  # iteration-mode stand-in for a one-second budget


@dataclass(frozen=True)
class RefineConfig:
    """Stop rule for the final refinement loop.

    Refinement continues while each budget period shrinks the relative error
    below ``alpha`` times its previous value and the error stays above
    ``tol``.  ``max_rounds`` optionally caps the number of budget periods.
    """

    alpha: float = 0.99
    budget: Budget = field(default_factory=lambda: WallTime(1.0))
    tol: float = DEFAULT_TOL
    max_rounds: int | None = None

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie strictly between 0 and 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")

    @classmethod
    def deterministic(cls, sweeps: int = DETERMINISTIC_SWEEPS, **kwargs) -> "RefineConfig":
        """Iteration-budget variant whose runs replay exactly; ``sweeps``
        per round matches what the wall-time default does in one second."""
        return cls(budget=Iterations(sweeps), **kwargs)


@dataclass(frozen=True)
class MS2Config:
    """Multi-start with candidate screening: ``n_starts`` random inits get
    ``sweeps_per_start`` solver sweeps each and only the best is refined."""

    n_starts: int = 200
    sweeps_per_start: int = 20
    init: InitStrategy = InitStrategy.SPARSE11

    def __post_init__(self):
        if self.n_starts < 1 or self.sweeps_per_start < 1:
            raise ValueError("n_starts and sweeps_per_start must be at least 1")


@dataclass(frozen=True)
class SAConfig:
    """Annealing schedule and neighborhood shape.

    The temperature ladder has ``n_levels`` geometric steps from
    ``temp_start`` down to ``temp_end`` inclusive; moves run at every level
    above ``temp_end``.  A move reinitializes ``reset_factors`` random
    rank-one factors and re-optimizes with ``sweeps_per_move`` sweeps.
    """

    temp_start: float = 0.1
    temp_end: float = 1e-4
    n_levels: int = 22
    moves_per_level: int = 50
    sweeps_per_move: int = 100
    reset_factors: int = 2
    init: InitStrategy = InitStrategy.SPARSE10

    def __post_init__(self):
        if not 0 < self.temp_end < self.temp_start:
            raise ValueError("need 0 < temp_end < temp_start")
        if self.n_levels < 2:
            raise ValueError("the ladder needs at least its two endpoints")
        if self.moves_per_level < 1 or self.sweeps_per_move < 1 or self.reset_factors < 1:
            raise ValueError("moves, sweeps and reset_factors must be at least 1")

    @property
    def cooling_ratio(self) -> float:
        return (self.temp_end / self.temp_start) ** (1.0 / (self.n_levels - 1))

    def ladder(self) -> np.ndarray:
        return temperature_ladder(self.temp_start, self.temp_end, self.n_levels)


@dataclass(frozen=True)
class RBRConfig:
    """Rank growth: per added rank-one factor, try ``attempts_per_stage``
    random appends with ``sweeps_per_attempt`` sweeps each, keep the best."""

    attempts_per_stage: int = 10
    sweeps_per_attempt: int = 50
    init: InitStrategy = InitStrategy.SPARSE10

    def __post_init__(self):
        if self.attempts_per_stage < 1 or self.sweeps_per_attempt < 1:
            raise ValueError("attempts and sweeps must be at least 1")


@dataclass(frozen=True)
class RefineResult:
    pair: FactorPair
    error: float
    trace: tuple[float, ...]  # relative error before refinement and after each round
    sweeps: int


@dataclass(frozen=True)
class HeuristicResult:
    pair: FactorPair
    error: float
    sweeps: int


def temperature_ladder(temp_start: float, temp_end: float, n_levels: int) -> np.ndarray:
    """Geometric ladder from ``temp_start`` to ``temp_end`` with exact
    endpoints and a constant ratio between consecutive levels."""
    if not 0 < temp_end < temp_start:
        raise ValueError("need 0 < temp_end < temp_start")
    if n_levels < 2:
        raise ValueError("need at least two levels")
    return np.geomspace(temp_start, temp_end, n_levels)


def accept_move(delta: float, temperature: float, u: float) -> bool:
    """Metropolis rule: accept iff ``u < exp(-delta / temperature)``.

    Improving moves (delta <= 0) are always accepted.  ``u`` is the caller's
    uniform draw so the decision stays a pure function.
    """
    if delta <= 0:
        return True
    return u < math.exp(-delta / temperature)


def _norm(X) -> float:
    norm_x = float(np.linalg.norm(X))
    if norm_x == 0.0:
        raise ZeroMatrixError("cannot factorize a zero matrix")
    return norm_x


def _relerr(X, W, H, norm_x: float) -> float:
    return float(np.linalg.norm(X - W @ H) / norm_x)


def final_refinement(X, W, H, cfg: RefineConfig = RefineConfig(),
                     solver: SolverKind = SolverKind.AHALS) -> RefineResult:
    """Run the solver while the error keeps shrinking by factor ``alpha``
    per budget period, or until it reaches ``tol``.

    Returns the refined pair, its relative error, the per-round error trace
    (first entry is the incoming error) and the total sweep count.  A pair
    already at ``tol`` returns unchanged with zero rounds.
    """
    X = as_matrix(X, "X")
    norm_x = _norm(X)
    W = np.ascontiguousarray(as_matrix(W, "W"))
    H = np.ascontiguousarray(as_matrix(H, "H"))
    error = _relerr(X, W, H, norm_x)
    previous = math.inf
    trace = [error]
    sweeps = 0
    rounds = 0
    while error > cfg.tol and error < cfg.alpha * previous:
        if cfg.max_rounds is not None and rounds >= cfg.max_rounds:
            break
        rounds += 1
        W, H, done = algo_nmf(solver, X, W, H, cfg.budget)
        sweeps += done
        previous, error = error, _relerr(X, W, H, norm_x)
        trace.append(error)
    return RefineResult(FactorPair(W, H), error, tuple(trace), sweeps)


def _check_rank_below_min(X, r: int):
    if r < 1:
        raise ValueError("rank must be at least 1")
    if r >= min(X.shape):
        raise ValueError(
            f"invalid rank {r}: must be below min(m, n) = {min(X.shape)} "
            "(larger ranks admit the trivial identity factorization)"
        )


def ms1(X, r: int, refine: RefineConfig = RefineConfig(),
        solver: SolverKind = SolverKind.AHALS,
        init: InitStrategy = InitStrategy.SPARSE11, seed=1) -> HeuristicResult:
    """One random start refined to convergence."""
    X = as_matrix(X, "X")
    _check_rank_below_min(X, r)
    rng = make_rng(seed)
    W, H = init_pair(init, X.shape[0], X.shape[1], r, rng)
    res = final_refinement(X, W, H, refine, solver)
    return HeuristicResult(res.pair, res.error, res.sweeps)


def ms2(X, r: int, cfg: MS2Config = MS2Config(),
        refine: RefineConfig = RefineConfig(),
        solver: SolverKind = SolverKind.AHALS, seed=1) -> HeuristicResult:
    """Screened multi-start: refine only the best of ``n_starts`` candidates."""
    X = as_matrix(X, "X")
    _check_rank_below_min(X, r)
    m, n = X.shape
    norm_x = _norm(X)
    rng = make_rng(seed)
    sweeps = 0
    best = None
    best_error = math.inf
    for _ in range(cfg.n_starts):
        W0, H0 = init_pair(cfg.init, m, n, r, rng)
        W1, H1, done = algo_nmf(solver, X, W0, H0, Iterations(cfg.sweeps_per_start))
        sweeps += done
        error = _relerr(X, W1, H1, norm_x)
        if error < best_error:
            best_error, best = error, (W1, H1)
    res = final_refinement(X, best[0], best[1], refine, solver)
    return HeuristicResult(res.pair, res.error, res.sweeps + sweeps)


def _sa_core(X, r, cfg: SAConfig, tol: float, solver: SolverKind, rng,
             warm_start=None):
    """Annealing loop without refinement.

    Returns (W, H, best_error, sweeps, best_trace) where best_trace holds
    the best-so-far error before any move and after every move tried.
    """
    m, n = X.shape
    if cfg.reset_factors > r:
        raise ValueError(
            f"reset_factors={cfg.reset_factors} exceeds the factorization rank {r}"
        )
    norm_x = _norm(X)
    if warm_start is None:
        W, H = init_pair(cfg.init, m, n, r, rng)
    else:
        W, H = warm_start
        W = np.ascontiguousarray(as_matrix(W, "W"))
        H = np.ascontiguousarray(as_matrix(H, "H"))
    error = _relerr(X, W, H, norm_x)
    best_error = error
    W_best, H_best = W.copy(), H.copy()
    sweeps = 0
    best_trace = [best_error]
    if best_error < tol:
        return W_best, H_best, best_error, sweeps, tuple(best_trace)
    found = False
    for temperature in cfg.ladder():
        if found or not temperature > cfg.temp_end:
            break
        for _ in range(cfg.moves_per_level):
            W_new, H_new = W.copy(), H.copy()
            picked = rng.choice(r, size=cfg.reset_factors, replace=False)
            w_j, h_j = init_pair(cfg.init, m, n, cfg.reset_factors, rng)
            W_new[:, picked] = w_j
            H_new[picked, :] = h_j
            W_new, H_new, done = algo_nmf(
                solver, X, W_new, H_new, Iterations(cfg.sweeps_per_move))
            sweeps += done
            new_error = _relerr(X, W_new, H_new, norm_x)
            if accept_move(new_error - error, temperature, rng.random()):
                W, H, error = W_new, H_new, new_error
                if error < best_error:
                    best_error = error
                    W_best, H_best = W, H
                if best_error < tol:
                    found = True
            best_trace.append(best_error)
            if found:
                break
    return W_best, H_best, best_error, sweeps, tuple(best_trace)


def simulated_annealing(X, r: int, cfg: SAConfig = SAConfig(),
                        refine: RefineConfig = RefineConfig(),
                        solver: SolverKind = SolverKind.AHALS, seed=1,
                        warm_start=None) -> HeuristicResult:
    """Annealed search over random rank-one resets, then final refinement.

    ``warm_start`` (a pair of arrays or a FactorPair) replaces the random
    initialization; a warm start already at ``tol`` returns after zero moves.
    """
    X = as_matrix(X, "X")
    _check_rank_below_min(X, r)
    rng = make_rng(seed)
    if isinstance(warm_start, FactorPair):
        warm_start = (warm_start.W, warm_start.H)
    W, H, _, sweeps, _ = _sa_core(X, r, cfg, refine.tol, solver, rng, warm_start)
    res = final_refinement(X, W, H, refine, solver)
    return HeuristicResult(res.pair, res.error, res.sweeps + sweeps)


def _rbr_core(X, r, cfg: RBRConfig, solver: SolverKind, rng, norm_x: float):
    """Grow a rank-r pair one factor at a time; no final refinement.

    Returns (W, H, error, sweeps, stage_errors) with one error per rank
    reached, starting at the rank-one stage.
    """
    m, n = X.shape
    triplet = leading_singular_triplet(X)
    W = np.abs(triplet.u)[:, None]
    H = triplet.sigma * np.abs(triplet.v)[None, :]
    sweeps = 0
    stage_errors = [_relerr(X, W, H, norm_x)]
    for _ in range(2, r + 1):
        best = None
        best_error = math.inf
        for _ in range(cfg.attempts_per_stage):
            w, h = init_pair(cfg.init, m, n, 1, rng)
            W_new = np.hstack([W, w])
            H_new = np.vstack([H, h])
            W_new, H_new, done = algo_nmf(
                solver, X, W_new, H_new, Iterations(cfg.sweeps_per_attempt))
            sweeps += done
            error = _relerr(X, W_new, H_new, norm_x)
            if error < best_error:
                best_error, best = error, (W_new, H_new)
        W, H = best
        stage_errors.append(best_error)
    return W, H, stage_errors[-1], sweeps, tuple(stage_errors)


def rank_by_rank(X, r: int, cfg: RBRConfig = RBRConfig(),
                 refine: RefineConfig = RefineConfig(),
                 solver: SolverKind = SolverKind.AHALS, seed=1) -> HeuristicResult:
    """Constructive heuristic: optimal rank-one start, then r - 1 stages of
    appending the best of several random rank-one extensions."""
    X = as_matrix(X, "X")
    if r < 1:
        raise ValueError("rank must be at least 1")
    rng = make_rng(seed)
    W, H, _, sweeps, _ = _rbr_core(X, r, cfg, solver, rng, _norm(X))
    res = final_refinement(X, W, H, refine, solver)
    return HeuristicResult(res.pair, res.error, res.sweeps + sweeps)


def hybrid(X, r: int, rbr_cfg: RBRConfig = RBRConfig(),
           sa_cfg: SAConfig = SAConfig(),
           refine: RefineConfig = RefineConfig(),
           solver: SolverKind = SolverKind.AHALS, seed=1) -> HeuristicResult:
    """Rank growth warm-starts the annealer; refinement runs once at the end.

    If the growth phase already lands at ``tol`` the annealer exits before
    its first move.
    """
    X = as_matrix(X, "X")
    if r < 1:
        raise ValueError("rank must be at least 1")
    rng = make_rng(seed)
    W, H, _, grow_sweeps, _ = _rbr_core(X, r, rbr_cfg, solver, rng, _norm(X))
    W, H, _, sa_sweeps, _ = _sa_core(X, r, sa_cfg, refine.tol, solver, rng,
                                     warm_start=(W, H))
    res = final_refinement(X, W, H, refine, solver)
    return HeuristicResult(res.pair, res.error, res.sweeps + grow_sweeps + sa_sweeps)
