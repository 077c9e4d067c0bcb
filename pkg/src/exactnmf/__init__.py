"""Exact nonnegative matrix factorization: find W, H >= 0 with X = W H.

The package bundles the search heuristics (multi-start, simulated
annealing, rank-by-rank growth and their hybrid), the local NMF solvers
they drive, generators for the standard benchmark matrices, and a
deterministic multi-run harness that renders success-rate tables.
"""

from .generators import (
    BenchmarkEntry,
    ConstructionError,
    benchmark_registry,
    cell24_slack,
    conjectured_ngon_rank,
    corr_submatrix,
    dodecahedron_slack,
    kronecker_gap_matrix,
    generic_ngon_slack,
    ledm,
    ledm_integer,
    nested_squares,
    polygon_slack,
    random_product,
    regular_ngon_slack,
    registry_entry,
    registry_names,
    udisj_y,
)
from .harness import (
    SMALL_PROTOCOL,
    TABLE2_PROTOCOL,
    TABLE5_PROTOCOL,
    BenchmarkReport,
    HeuristicSpec,
    StopRule,
    SweepTable,
    TrialRecord,
    bench_table,
    format_cell,
    parse_cell,
    render_csv,
    render_markdown,
    run_trials,
    sweep,
    verify_registry,
    write_trials_jsonl,
)
from .heuristics import (
    HeuristicResult,
    MS2Config,
    RBRConfig,
    RefineConfig,
    RefineResult,
    SAConfig,
    accept_move,
    final_refinement,
    hybrid,
    ms1,
    ms2,
    rank_by_rank,
    simulated_annealing,
    temperature_ladder,
)
from .initialization import InitStrategy, init_pair, init_rank_one, make_rng, run_seed
from .linalg import (
    FactorPair,
    SingularTriplet,
    SizeOverflowError,
    ZeroMatrixError,
    frobenius_norm,
    kronecker,
    leading_singular_triplet,
    numeric_rank,
    relative_error,
)
from .matrixio import read_matrix, write_matrix
from .solvers import (
    ACCEL_GAMMA,
    MU_EPS,
    Iterations,
    NNLSStallWarning,
    SolverKind,
    WallTime,
    accelerated_sweep,
    algo_nmf,
    anls_sweep,
    hals_sweep,
    inner_pass_cap,
    mu_sweep,
)

__version__ = "0.1.0"
