"""Command-line interface.

Subcommands: ``generate`` benchmark matrices, ``rank`` a matrix file,
``factorize`` one instance, ``bench`` a published table layout, ``sweep`` a
parameter grid, and ``verify`` the generator registry.

Exit codes: 0 success, 1 runtime error, 2 usage error, and 3 when
``factorize`` exhausts its run budget without reaching the tolerance (a
legitimate "no exact factorization found" outcome scripts can branch on).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import generators, harness, heuristics, matrixio
from .initialization import InitStrategy
from .linalg import numeric_rank
from .solvers import Iterations, SolverKind, WallTime

USAGE_ERROR, RUNTIME_ERROR, NO_FACTORIZATION = 2, 1, 3

_FAMILIES = ("ledm", "ngon", "generic-ngon", "dodecahedron", "cell24",
             "udisj", "corr", "nested-squares", "kronecker-gap", "random-product")


def _add_generate(sub):
    p = sub.add_parser("generate", help="emit a benchmark matrix")
    p.add_argument("--name", help="registry name, e.g. LEDM6 or 24-C")
    p.add_argument("--family", choices=_FAMILIES, help="parametric family")
    p.add_argument("--n", type=int, help="size parameter of the family")
    p.add_argument("--m", type=int, default=50, help="rows (random-product)")
    p.add_argument("--r", type=int, default=10, help="rank (random-product)")
    p.add_argument("--density", type=float, default=0.1, help="perturbation density")
    p.add_argument("--a", type=float, default=None, help="nested-squares parameter")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", help="output path (.csv for CSV, else text format)")
    p.add_argument("--list", action="store_true", help="list registry names and exit")


def _add_factorize(sub):
    p = sub.add_parser("factorize", help="search for an exact factorization")
    p.add_argument("--matrix", help="matrix file, or a registry name")
    p.add_argument("--name", help="registry name (alias for --matrix)")
    p.add_argument("--r", type=int, required=True, help="factorization rank")
    p.add_argument("--heuristic", choices=harness.HEURISTIC_NAMES, default="rbr")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--runs", type=int, default=1,
                   help="try seeds seed, seed+1, ... until one run succeeds")
    p.add_argument("--init", choices=[s.value for s in InitStrategy], default=None,
                   help="override the heuristic's default initialization")
    p.add_argument("--solver", choices=[s.value for s in SolverKind], default="ahals")
    p.add_argument("--alpha", type=float, default=0.99)
    p.add_argument("--tol", type=float, default=1e-6)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--fr-seconds", type=float, default=None,
                       help="wall-time refinement period (default 1.0)")
    group.add_argument("--fr-sweeps", type=int, default=None,
                       help="deterministic refinement period in sweeps")
    p.add_argument("--ms2-starts", type=int, default=200)
    p.add_argument("--ms2-sweeps", type=int, default=20)
    p.add_argument("--sa-t0", type=float, default=0.1)
    p.add_argument("--sa-tend", type=float, default=1e-4)
    p.add_argument("--sa-levels", type=int, default=22)
    p.add_argument("--sa-moves", type=int, default=50)
    p.add_argument("--sa-sweeps", type=int, default=100)
    p.add_argument("--sa-reset", type=int, default=2)
    p.add_argument("--rbr-attempts", type=int, default=10)
    p.add_argument("--rbr-sweeps", type=int, default=50)
    p.add_argument("--out", default=".", help="directory for W, H and the run record")


def _add_bench(sub):
    p = sub.add_parser("bench", help="reproduce a published table layout")
    p.add_argument("--table", choices=sorted(harness.BENCH_TABLES), required=True)
    p.add_argument("--scale", choices=("small", "paper"), default="small")
    p.add_argument("--matrices", help="comma-separated registry names to keep")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", required=True, help="output directory")


def _add_sweep(sub):
    p = sub.add_parser("sweep", help="sweep one config parameter over instances")
    p.add_argument("--param", required=True,
                   help="dotted config path, e.g. refine.alpha or sa.temp_end")
    p.add_argument("--values", required=True, help="comma-separated values")
    p.add_argument("--heuristic", choices=harness.HEURISTIC_NAMES, default="ms2")
    p.add_argument("--matrices", help="comma-separated registry names (default: all)")
    p.add_argument("--max-runs", type=int, default=harness.SMALL_PROTOCOL.max_runs)
    p.add_argument("--target", type=int, default=harness.SMALL_PROTOCOL.target_successes)
    p.add_argument("--check-every", type=int, default=harness.SMALL_PROTOCOL.check_every)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", help="output directory (default: print to stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exactnmf",
        description="exact nonnegative matrix factorization heuristics and benchmarks")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_generate(sub)
    _add_factorize(sub)
    _add_bench(sub)
    _add_sweep(sub)
    p = sub.add_parser("verify", help="self-check the generator registry")
    p.add_argument("--quiet", action="store_true")
    p = sub.add_parser("rank", help="numeric rank of a matrix file")
    p.add_argument("--matrix", required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    return parser


def _generate_matrix(args):
    if args.name:
        try:
            return generators.registry_entry(args.name).matrix, args.name
        except KeyError as exc:
            raise SystemExit(str(exc.args[0]))
    if not args.family:
        raise SystemExit("generate: provide --name, --family or --list")
    fam = args.family
    if fam in ("ledm", "ngon", "generic-ngon", "udisj", "corr") and args.n is None:
        raise SystemExit(f"generate: --family {fam} needs --n")
    if fam == "ledm":
        return generators.ledm_integer(args.n), f"ledm{args.n}"
    if fam == "ngon":
        return generators.regular_ngon_slack(args.n), f"{args.n}gon"
    if fam == "generic-ngon":
        return generators.generic_ngon_slack(args.n, args.seed), f"generic{args.n}gon"
    if fam == "dodecahedron":
        return generators.dodecahedron_slack(), "dodecahedron"
    if fam == "cell24":
        return generators.cell24_slack(), "cell24"
    if fam == "udisj":
        return generators.udisj_y(args.n), f"udisj{args.n}"
    if fam == "corr":
        return generators.corr_submatrix(args.n), f"corr{args.n}"
    if fam == "nested-squares":
        a = (2**0.5 - 0.9) if args.a is None else args.a
        return generators.nested_squares(a), "nested_squares"
    if fam == "kronecker-gap":
        return generators.kronecker_gap_matrix(), "kronecker-gap"
    X, _, _ = generators.random_product(args.m, args.n or 50, args.r,
                                        args.density, args.seed)
    return X, f"rnd{args.density:g}"


def _cmd_generate(args) -> int:
    if args.list:
        for name in generators.registry_names():
            print(name)
        return 0
    M, stem = _generate_matrix(args)
    out = args.out or f"{stem}.txt"
    matrixio.write_matrix(M, out)
    print(f"wrote {M.shape[0]}x{M.shape[1]} matrix to {out}")
    return 0


def _resolve_matrix(spec_text: str):
    """A registry name or a path to a matrix file."""
    try:
        return generators.registry_entry(spec_text).matrix, spec_text
    except KeyError:
        path = Path(spec_text)
        if not path.exists():
            raise SystemExit(
                f"{spec_text!r} is neither a registry name nor a file; "
                f"registry names: {', '.join(generators.registry_names())}")
        return matrixio.read_matrix(path), path.stem


def _factorize_spec(args) -> harness.HeuristicSpec:
    if args.fr_sweeps is not None:
        budget = Iterations(args.fr_sweeps)
    else:
        budget = WallTime(args.fr_seconds if args.fr_seconds is not None else 1.0)
    refine = heuristics.RefineConfig(alpha=args.alpha, budget=budget, tol=args.tol)
    spec = harness.HeuristicSpec(
        heuristic=args.heuristic,
        solver=SolverKind(args.solver),
        refine=refine,
        ms2=heuristics.MS2Config(args.ms2_starts, args.ms2_sweeps),
        sa=heuristics.SAConfig(args.sa_t0, args.sa_tend, args.sa_levels,
                               args.sa_moves, args.sa_sweeps, args.sa_reset),
        rbr=heuristics.RBRConfig(args.rbr_attempts, args.rbr_sweeps),
    )
    if args.init is not None:
        strategy = InitStrategy(args.init)
        for path in ("ms1_init", "ms2.init", "sa.init", "rbr.init"):
            spec = harness.spec_replace(spec, path, strategy)
    return spec


def _effective_init(spec: harness.HeuristicSpec) -> str:
    return {"ms1": spec.ms1_init, "ms2": spec.ms2.init, "sa": spec.sa.init,
            "rbr": spec.rbr.init, "hybrid": spec.rbr.init}[spec.heuristic].value


def _cmd_factorize(args) -> int:
    if not (args.name or args.matrix):
        raise SystemExit("factorize: provide --matrix FILE or --name REGISTRY_NAME")
    X, stem = _resolve_matrix(args.name or args.matrix)
    spec = _factorize_spec(args)
    result = None
    seed = args.seed
    start = time.perf_counter()
    for attempt in range(args.runs):
        seed = args.seed + attempt
        result = spec.run(X, args.r, seed)
        if result.error <= args.tol:
            break
    elapsed = time.perf_counter() - start
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    success = result.error <= args.tol
    record = {
        "matrix": stem, "m": X.shape[0], "n": X.shape[1], "r": args.r,
        "heuristic": args.heuristic, "init": _effective_init(spec),
        "solver": args.solver, "seed": seed, "error": result.error,
        "sweeps": result.sweeps, "elapsed_s": elapsed, "success": success,
    }
    with open(out_dir / f"{stem}_run.json", "w") as fh:
        json.dump(record, fh, indent=2)
        fh.write("\n")
    if success:
        matrixio.write_matrix(result.pair.W, out_dir / f"{stem}_W.txt")
        matrixio.write_matrix(result.pair.H, out_dir / f"{stem}_H.txt")
        print(f"exact factorization at r={args.r}: relative error {result.error:.3e} "
              f"(seed {seed})")
        return 0
    print(f"no exact factorization found at r={args.r} within {args.runs} run(s); "
          f"best relative error {result.error:.3e}", file=sys.stderr)
    return NO_FACTORIZATION


def _write_table(table, out_dir: Path, stem: str) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / f"{stem}.md").write_text(harness.render_markdown(table))
    (out_dir / f"{stem}.csv").write_text(harness.render_csv(table))
    for (row, col), report in table.cells.items():
        safe = f"{stem}_{row}_{col}".replace("/", "-").replace(" ", "")
        harness.write_trials_jsonl(report, out_dir / f"{safe}.jsonl")


def _cmd_bench(args) -> int:
    matrices = args.matrices.split(",") if args.matrices else None
    table = harness.bench_table(args.table, args.scale, matrices=matrices,
                                base_seed=args.seed, workers=args.workers)
    _write_table(table, Path(args.out), f"table_{args.table}_{args.scale}")
    print(harness.render_markdown(table))
    return 0


def _parse_value(text: str):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    try:
        return InitStrategy(text.lower())
    except ValueError:
        return text


def _cmd_sweep(args) -> int:
    values = [_parse_value(v) for v in args.values.split(",")]
    axis = [(f"{args.param}={v}", {args.param: v}) for v in values]
    matrices = args.matrices.split(",") if args.matrices else None
    instances = harness.benchmark_instances(matrices)
    stop = harness.StopRule(args.max_runs, args.target, args.check_every)
    base = harness.HeuristicSpec(heuristic=args.heuristic)
    table = harness.sweep(instances, axis, base, stop,
                          base_seed=args.seed, workers=args.workers)
    if args.out:
        _write_table(table, Path(args.out), f"sweep_{args.param.replace('.', '_')}")
    print(harness.render_markdown(table))
    return 0


def _cmd_verify(args) -> int:
    results = harness.verify_registry()
    ok = True
    for name, passed, detail in results:
        ok &= passed
        if not args.quiet or not passed:
            print(f"{name}: {'ok' if passed else 'FAIL: ' + detail}")
    return 0 if ok else 1


def _cmd_rank(args) -> int:
    M = matrixio.read_matrix(args.matrix)
    print(f"rank {numeric_rank(M, args.tol)}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    handlers = {
        "generate": _cmd_generate,
        "factorize": _cmd_factorize,
        "bench": _cmd_bench,
        "sweep": _cmd_sweep,
        "verify": _cmd_verify,
        "rank": _cmd_rank,
    }
    try:
        return handlers[args.command](args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return USAGE_ERROR
        return exc.code if exc.code is not None else 0
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return RUNTIME_ERROR


if __name__ == "__main__":
    sys.exit(main())
