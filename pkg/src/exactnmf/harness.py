"""Multi-run experiment orchestration with deterministic seeding.

``run_trials`` executes a heuristic on one instance in batches, stopping
early once enough exact factorizations have been found; run ``i`` always
uses seed ``base_seed + i`` so the outcome is independent of the worker
count.  Reports render as the usual ``x/y (t)`` success-rate cells, and
``sweep`` crosses a parameter grid with a set of instances to reproduce the
published table layouts.
"""

from __future__ import annotations

import dataclasses
import json
import os
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .generators import benchmark_registry, conjectured_ngon_rank, regular_ngon_slack
from .heuristics import HeuristicResult, MS2Config, RBRConfig, RefineConfig, SAConfig, \
    hybrid, ms1, ms2, rank_by_rank, simulated_annealing
from .initialization import InitStrategy, run_seed
from .linalg import numeric_rank
from .solvers import SolverKind

__all__ = [
    "StopRule",
    "TABLE2_PROTOCOL",
    "TABLE5_PROTOCOL",
    "SMALL_PROTOCOL",
    "HeuristicSpec",
    "TrialRecord",
    "BenchmarkReport",
    "run_trials",
    "format_cell",
    "parse_cell",
    "spec_replace",
    "SweepTable",
    "sweep",
    "render_markdown",
    "render_csv",
    "write_trials_jsonl",
    "verify_registry",
    "benchmark_instances",
    "bench_table",
    "BENCH_TABLES",
    "default_workers",
]

HEURISTIC_NAMES = ("ms1", "ms2", "sa", "rbr", "hybrid")


@dataclass(frozen=True)
class StopRule:
    """Run at most ``max_runs`` trials in batches of ``check_every``,
    stopping after any batch that brings successes to ``target_successes``."""

    max_runs: int
    target_successes: int
    check_every: int

    def __post_init__(self):
        if not self.max_runs >= self.check_every >= 1:
            raise ValueError("need max_runs >= check_every >= 1")
        if self.target_successes < 1:
            raise ValueError("target_successes must be at least 1")


# at most 100 runs, stop once 5 exact factorizations are in, checked every 10
TABLE2_PROTOCOL = StopRule(max_runs=100, target_successes=5, check_every=10)
# at most 1000 runs, stop at 100 exact factorizations, checked every 50
TABLE5_PROTOCOL = StopRule(max_runs=1000, target_successes=100, check_every=50)
# desk-scale shrink for quick comparisons
SMALL_PROTOCOL = StopRule(max_runs=10, target_successes=2, check_every=5)


@dataclass(frozen=True)
class HeuristicSpec:
    """Declarative, picklable description of one heuristic configuration.

    The refinement budget defaults to the deterministic iteration mode so
    multi-run results replay exactly; pass a wall-time RefineConfig to match
    the one-second-period convention instead.
    """

    heuristic: str = "rbr"
    solver: SolverKind = SolverKind.AHALS
    refine: RefineConfig = field(default_factory=RefineConfig.deterministic)
    ms1_init: InitStrategy = InitStrategy.SPARSE11
    ms2: MS2Config = MS2Config()
    sa: SAConfig = SAConfig()
    rbr: RBRConfig = RBRConfig()

    def __post_init__(self):
        if self.heuristic not in HEURISTIC_NAMES:
            raise ValueError(
                f"unknown heuristic {self.heuristic!r}; expected one of {HEURISTIC_NAMES}"
            )

    def run(self, X, r: int, seed) -> HeuristicResult:
        if self.heuristic == "ms1":
            return ms1(X, r, self.refine, self.solver, self.ms1_init, seed)
        if self.heuristic == "ms2":
            return ms2(X, r, self.ms2, self.refine, self.solver, seed)
        if self.heuristic == "sa":
            return simulated_annealing(X, r, self.sa, self.refine, self.solver, seed)
        if self.heuristic == "rbr":
            return rank_by_rank(X, r, self.rbr, self.refine, self.solver, seed)
        return hybrid(X, r, self.rbr, self.sa, self.refine, self.solver, seed)


@dataclass(frozen=True)
class TrialRecord:
    run_index: int
    seed: int
    success: bool
    final_error: float
    elapsed: float
    sweeps: int

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class BenchmarkReport:
    matrix_name: str
    rank: int
    heuristic: str
    tol: float
    trials: tuple[TrialRecord, ...]
    budget: str = ""  # refinement budget mode that produced the numbers

    @property
    def successes(self) -> int:
        return sum(t.success for t in self.trials)

    @property
    def runs(self) -> int:
        return len(self.trials)

    @property
    def total_elapsed(self) -> float:
        return sum(t.elapsed for t in self.trials)

    @property
    def mean_time_per_success(self) -> float | None:
        """Total elapsed time across all runs (failures included) divided by
        the number of successes; None when nothing succeeded."""
        x = self.successes
        return self.total_elapsed / x if x else None


def _run_trial(spec, X, r, run_index, base_seed, tol) -> TrialRecord:
    seed = run_seed(base_seed, run_index)
    start = time.perf_counter()
    result = spec.run(X, r, seed) if isinstance(spec, HeuristicSpec) else spec(X, r, seed)
    elapsed = time.perf_counter() - start
    return TrialRecord(
        run_index=run_index,
        seed=seed,
        success=result.error <= tol,
        final_error=result.error,
        elapsed=elapsed,
        sweeps=result.sweeps,
    )


def default_workers() -> int:
    """Worker count from the EXACTNMF_WORKERS environment variable (else 1)."""
    value = os.environ.get("EXACTNMF_WORKERS", "")
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def run_trials(X, r: int, spec, stop: StopRule = TABLE2_PROTOCOL, *,
               matrix_name: str = "", tol: float = 1e-6, base_seed: int = 1,
               workers: int | None = None) -> BenchmarkReport:
    """Execute seeded runs in batches of ``stop.check_every``.

    ``spec`` is a HeuristicSpec or any picklable callable
    ``(X, r, seed) -> HeuristicResult``.  Run ``i`` uses seed
    ``base_seed + i`` regardless of worker assignment, so (x, y) and every
    per-run error are a pure function of the inputs; only wall-clock changes
    with ``workers``.
    """
    X = np.asarray(X, dtype=np.float64)
    if workers is None:
        workers = default_workers()
    if isinstance(spec, HeuristicSpec):
        name, budget = spec.heuristic, repr(spec.refine.budget)
    else:
        name, budget = getattr(spec, "__name__", "custom"), "custom"
    trials: list[TrialRecord] = []
    successes = 0
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        done = 0
        while done < stop.max_runs and successes < stop.target_successes:
            batch = range(done, min(done + stop.check_every, stop.max_runs))
            if pool is None:
                batch_records = [_run_trial(spec, X, r, i, base_seed, tol) for i in batch]
            else:
                futures = [pool.submit(_run_trial, spec, X, r, i, base_seed, tol)
                           for i in batch]
                batch_records = [f.result() for f in futures]
            trials.extend(batch_records)
            successes += sum(t.success for t in batch_records)
            done = len(trials)
    finally:
        if pool is not None:
            pool.shutdown()
    trials.sort(key=lambda t: t.run_index)
    return BenchmarkReport(matrix_name, r, name, tol, tuple(trials), budget)


def format_cell(report: BenchmarkReport) -> str:
    """``"x/y (t)"`` with t the mean time per success to one decimal;
    ``"x/y (~)"`` when nothing succeeded."""
    t = report.mean_time_per_success
    stamp = "~" if t is None else f"{t:.1f}"
    return f"{report.successes}/{report.runs} ({stamp})"


_CELL_RE = re.compile(r"^(\d+)/(\d+) \((~|\d+(?:\.\d+)?)\)$")


def parse_cell(text: str) -> tuple[int, int, float | None]:
    """Invert ``format_cell``: returns (successes, runs, mean_time or None)."""
    m = _CELL_RE.match(text.strip())
    if m is None:
        raise ValueError(f"not a benchmark cell: {text!r}")
    t = None if m.group(3) == "~" else float(m.group(3))
    return int(m.group(1)), int(m.group(2)), t


def spec_replace(spec, path: str, value):
    """Return a copy of a (possibly nested) config dataclass with the field
    at dotted ``path`` replaced, e.g. ``spec_replace(s, "sa.temp_end", 1e-5)``."""
    head, _, rest = path.partition(".")
    if not hasattr(spec, head):
        raise ValueError(f"{type(spec).__name__} has no field {head!r}")
    if not rest:
        return dataclasses.replace(spec, **{head: value})
    return dataclasses.replace(spec, **{head: spec_replace(getattr(spec, head), rest, value)})


@dataclass(frozen=True)
class SweepTable:
    """Grid of reports: rows are instances, columns are grid points."""

    row_names: tuple[str, ...]
    col_names: tuple[str, ...]
    cells: dict

    def report(self, row: str, col: str) -> BenchmarkReport:
        return self.cells[(row, col)]


def sweep(instances, axis, base_spec: HeuristicSpec = HeuristicSpec(),
          stop: StopRule = TABLE2_PROTOCOL, *, tol: float = 1e-6,
          base_seed: int = 1, workers: int | None = None) -> SweepTable:
    """Cross-product execution over instances and grid points.

    ``instances`` is a sequence of ``(name, matrix, rank)``.  ``axis`` is a
    sequence of ``(label, overrides)`` where overrides maps dotted config
    paths to values; a single-point axis reduces to ``run_trials``.
    """
    instances = list(instances)
    axis = list(axis)
    if not axis:
        raise ValueError("the parameter grid must be nonempty")
    cells = {}
    for label, overrides in axis:
        spec = base_spec
        for path, value in overrides.items():
            spec = spec_replace(spec, path, value)
        for name, X, r in instances:
            cells[(name, label)] = run_trials(
                X, r, spec, stop, matrix_name=name, tol=tol,
                base_seed=base_seed, workers=workers)
    return SweepTable(tuple(name for name, _, _ in instances),
                      tuple(label for label, _ in axis), cells)


def render_markdown(table: SweepTable) -> str:
    lines = ["| matrix | " + " | ".join(table.col_names) + " |",
             "| --- |" + " --- |" * len(table.col_names)]
    for row in table.row_names:
        cells = [format_cell(table.report(row, col)) for col in table.col_names]
        lines.append("| " + row + " | " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def render_csv(table: SweepTable) -> str:
    lines = ["matrix," + ",".join(table.col_names)]
    for row in table.row_names:
        cells = [format_cell(table.report(row, col)) for col in table.col_names]
        lines.append(row + "," + ",".join(cells))
    return "\n".join(lines) + "\n"


def write_trials_jsonl(report: BenchmarkReport, path) -> None:
    """One JSON object per trial, with the report context on every line."""
    with open(path, "w") as fh:
        for t in report.trials:
            record = {"matrix": report.matrix_name, "r": report.rank,
                      "heuristic": report.heuristic, "tol": report.tol,
                      "budget": report.budget}
            record.update(t.as_dict())
            fh.write(json.dumps(record) + "\n")


def verify_registry(entries=None) -> list[tuple[str, bool, str]]:
    """Check every registry entry's dimensions and numeric rank against its
    recorded metadata.  Nonnegative-rank values are metadata only; no
    factorization is attempted here."""
    results = []
    for entry in (benchmark_registry() if entries is None else entries):
        problems = []
        if entry.matrix.shape != entry.expected_shape:
            problems.append(f"shape {entry.matrix.shape} != {entry.expected_shape}")
        if entry.matrix.min() < 0:
            problems.append(f"negative entry {entry.matrix.min()}")
        rank = numeric_rank(entry.matrix)
        if rank != entry.known_rank:
            problems.append(f"numeric rank {rank} != {entry.known_rank}")
        ok = not problems
        detail = "ok" if ok else "; ".join(problems)
        results.append((entry.name, ok, detail))
    return results


def benchmark_instances(names=None) -> list[tuple[str, np.ndarray, int]]:
    """Registry instances as (name, matrix, rank) at their nonnegative rank."""
    registry = benchmark_registry()
    if names is not None:
        wanted = set(names)
        unknown = wanted - {e.name for e in registry}
        if unknown:
            raise KeyError(f"unknown benchmark names: {sorted(unknown)}")
        registry = [e for e in registry if e.name in wanted]
    return [(e.name, e.matrix, e.nnrank) for e in registry]


_INIT_AXIS = [(s.value, s) for s in (
    InitStrategy.SPARSE00, InitStrategy.SPARSE10, InitStrategy.SPARSE01,
    InitStrategy.SPARSE11, InitStrategy.RNDCUBE)]

# table id -> (axis builder, protocol kind); "ms" tables check every 10 runs
# for 5 successes, "final" tables every 50 runs for 100
BENCH_TABLES = {
    "t2": ("multi-start variants", [
        ("MS1", {"heuristic": "ms1"}),
        ("MS2(100,20)", {"heuristic": "ms2", "ms2.n_starts": 100, "ms2.sweeps_per_start": 20}),
        ("MS2(200,20)", {"heuristic": "ms2", "ms2.n_starts": 200, "ms2.sweeps_per_start": 20}),
        ("MS2(100,40)", {"heuristic": "ms2", "ms2.n_starts": 100, "ms2.sweeps_per_start": 40}),
        ("MS2(200,40)", {"heuristic": "ms2", "ms2.n_starts": 200, "ms2.sweeps_per_start": 40}),
    ], "ms"),
    "t3": ("initialization strategies under ms2",
           [(lbl, {"heuristic": "ms2", "ms2.init": s}) for lbl, s in _INIT_AXIS], "ms"),
    "t4": ("local solvers under ms2",
           [(k.value, {"heuristic": "ms2", "solver": k}) for k in (
               SolverKind.ANLS, SolverKind.MU, SolverKind.AMU,
               SolverKind.HALS, SolverKind.AHALS)], "ms"),
    "t5": ("all heuristics",
           [(h.upper(), {"heuristic": h}) for h in HEURISTIC_NAMES], "final"),
    "t6": ("hybrid on large regular n-gons", [("Hybrid", {"heuristic": "hybrid"})], "final"),
    "a": ("refinement shrink factor under ms2",
          [(f"alpha={a}", {"heuristic": "ms2", "refine.alpha": a})
           for a in (0.9999, 0.99, 0.9, 0.5)], "ms"),
    "b": ("annealing end temperature",
          [(f"temp_end={t:g}", {"heuristic": "sa", "sa.temp_end": t})
           for t in (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)], "ms"),
    "c": ("rank growth attempts and sweeps",
          [(f"K={k},N={n}", {"heuristic": "rbr", "rbr.attempts_per_stage": k,
                             "rbr.sweeps_per_attempt": n})
           for k in (1, 10, 50, 100) for n in (10, 50, 100)], "ms"),
    "d": ("initialization strategies under hybrid",
          [(lbl, {"heuristic": "hybrid", "rbr.init": s, "sa.init": s})
           for lbl, s in _INIT_AXIS], "ms"),
}


def bench_table(table: str, scale: str = "small", *, matrices=None,
                base_seed: int = 1, workers: int | None = None,
                base_spec: HeuristicSpec = HeuristicSpec()) -> SweepTable:
    """Reproduce one published table layout.

    ``scale="paper"`` uses the published run counts; ``"small"`` shrinks them
    for desk-scale smoke runs.  ``matrices`` restricts the registry rows
    (ignored for t6, which runs on large regular n-gons).
    """
    if table not in BENCH_TABLES:
        raise ValueError(f"unknown table {table!r}; expected one of {sorted(BENCH_TABLES)}")
    if scale not in ("small", "paper"):
        raise ValueError("scale must be 'small' or 'paper'")
    _, axis, kind = BENCH_TABLES[table]
    if table == "t6":
        ns = (110, 120, 130, 140, 150, 160, 170) if scale == "paper" else (110, 120)
        instances = [(f"{n}-G", regular_ngon_slack(n), conjectured_ngon_rank(n))
                     for n in ns]
    else:
        instances = benchmark_instances(matrices)
    if scale == "paper":
        stop = TABLE5_PROTOCOL if kind == "final" else TABLE2_PROTOCOL
    else:
        stop = SMALL_PROTOCOL
    return sweep(instances, axis, base_spec, stop,
                 base_seed=base_seed, workers=workers)
