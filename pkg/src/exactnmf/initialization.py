"""Random starting points for the factor pair (W0, H0).

Five strategies: RNDCUBE fills both factors with U[0,1] entries; the four
SPARSE variants place a single U[0,1] entry per row or per column of each
factor, which starts the search on the sparse boundary of the feasible set
where exact factorizations live.

All randomness flows through a numpy Generator (PCG64), so identical seeds
give bit-identical output on every platform.  Multi-run protocols derive the
seed of run ``i`` as ``base_seed + i``; workers never share a generator.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

__all__ = [
    "InitStrategy",
    "RandomSource",
    "make_rng",
    "run_seed",
    "init_pair",
    "init_rank_one",
]

RandomSource = np.random.Generator


class InitStrategy(str, Enum):
    RNDCUBE = "rndcube"
    SPARSE00 = "sparse00"
    SPARSE01 = "sparse01"
    SPARSE10 = "sparse10"
    SPARSE11 = "sparse11"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, name: str) -> "InitStrategy":
        try:
            return cls(name.strip().lower())
        except ValueError:
            valid = ", ".join(s.value for s in cls)
            raise ValueError(f"unknown init strategy {name!r}; expected one of: {valid}")


def make_rng(seed) -> np.random.Generator:
    """A PCG64 generator for ``seed``; generators pass through unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def run_seed(base_seed: int, run_index: int) -> int:
    """Seed for run ``run_index`` of a multi-run protocol."""
    return int(base_seed) + int(run_index)


def _sparse_factor(rows: int, cols: int, one_per_row: bool, rng) -> np.ndarray:
    """A (rows, cols) matrix with exactly one U[0,1] entry per row or column."""
    F = np.zeros((rows, cols))
    if one_per_row:
        F[np.arange(rows), rng.integers(0, cols, size=rows)] = rng.random(rows)
    else:
        F[rng.integers(0, rows, size=cols), np.arange(cols)] = rng.random(cols)
    return F


def init_pair(strategy: InitStrategy, m: int, n: int, r: int, rng) -> tuple[np.ndarray, np.ndarray]:
    """Draw (W0, H0) with W0 m-by-r and H0 r-by-n.

    For SPARSEij: i=0 puts one nonzero per row of W, i=1 one per column;
    j=0 puts one nonzero per row of H, j=1 one per column.  W is drawn before
    H, placements before values, so the stream layout is stable.
    """
    if m < 1 or n < 1 or r < 1:
        raise ValueError(f"invalid dimensions m={m}, n={n}, r={r}")
    strategy = InitStrategy(strategy)
    rng = make_rng(rng)
    if strategy is InitStrategy.RNDCUBE:
        return rng.random((m, r)), rng.random((r, n))
    i, j = strategy.value[-2] == "1", strategy.value[-1] == "1"
    W = _sparse_factor(m, r, one_per_row=not i, rng=rng)
    H = _sparse_factor(r, n, one_per_row=not j, rng=rng)
    return W, H


def init_rank_one(m: int, n: int, rng) -> tuple[np.ndarray, np.ndarray]:
    """A random rank-one factor: w (m-by-1) and h (1-by-n), one nonzero each.

    This is the single-column instance of SPARSE10, the strategy the
    annealing and rank-growing heuristics use for their random resets.
    """
    return init_pair(InitStrategy.SPARSE10, m, n, 1, rng)
