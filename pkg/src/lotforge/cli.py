"""Command-line front end.

Exit codes: 0 ok, 1 verification mismatch, 2 input error, 3 horizon guard,
4 instance too small for tabu search.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from pathlib import Path

from .enumerator import (
    MAX_HORIZON,
    HorizonError,
    check_horizon,
    default_workers,
    exhaustive_optimize,
    strategy_count,
)
from .golden import golden_checks
from .model import ModelError, fmt_money
from .problem import ProblemFileError, RunReport, load_problem
from .tabu import PAPER_ITERATIONS, InstanceTooSmallError, TabuConfig, run_experiments

log = logging.getLogger("lotforge")

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_HORIZON = 3
EXIT_TOO_SMALL = 4


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def write_landscape(path, landscape) -> None:
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["j", "ct"])
        for j, ct in landscape.records():
            w.writerow([j, fmt_money(ct)])


def write_convergence(path, stats) -> None:
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["k", "avg_min_cost", "hit_rate", "evaluations"])
        for r in stats.records:
            w.writerow([r.k, fmt_money(r.avg_min_cost), fmt_money(r.hit_rate), r.evaluations])


def write_frequency(path, stats) -> None:
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["period"] + [f"k{r.k}" for r in stats.records])
        for p in range(len(stats.records[0].frequency)):
            w.writerow([p + 1] + [r.frequency[p] for r in stats.records])


def _parse_k_list(text: str) -> list[int]:
    try:
        ks = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad iteration list {text!r}") from None
    if not ks or any(k < 1 for k in ks):
        raise argparse.ArgumentTypeError("iterations must be positive integers")
    return ks


def cmd_solve(args) -> int:
    req, params = load_problem(args.file)
    check_horizon(req.horizon, args.force)
    t0 = time.perf_counter()
    result = exhaustive_optimize(req, params, emit_landscape=bool(args.landscape),
                                 workers=args.workers, force=args.force)
    elapsed = time.perf_counter() - t0
    report = RunReport.from_result(result, req, wall_time=elapsed)
    if args.json:
        print(json.dumps(report.to_dict(timing=args.timing), indent=2))
    else:
        print(report.render())
    if args.landscape:
        write_landscape(args.landscape, result.landscape)
        log.info("landscape written to %s", args.landscape)
    log.info("solved in %.4f s with %d worker(s)", elapsed, args.workers)
    return EXIT_OK


def cmd_landscape(args) -> int:
    req, params = load_problem(args.file)
    check_horizon(req.horizon, args.force)
    result = exhaustive_optimize(req, params, emit_landscape=True, workers=args.workers, force=args.force)
    write_landscape(args.out, result.landscape)
    print(f"{strategy_count(req.horizon)} strategies written to {args.out}; "
          f"minimum {fmt_money(result.breakdown.total)} at j = {result.index}")
    return EXIT_OK


def _run_tabu(args, req, params):
    z = 10000 if args.full_scale else args.experiments
    cfg = TabuConfig(tenure=args.tenure)
    optimum = None
    if req.horizon <= 20:
        optimum = exhaustive_optimize(req, params)
    stats = run_experiments(req, params, args.iterations, experiments=z, base_seed=args.seed, cfg=cfg,
                            optimum_cost=optimum.breakdown.total if optimum else None, workers=args.workers)
    return stats, optimum


def cmd_tabu(args) -> int:
    req, params = load_problem(args.file)
    stats, optimum = _run_tabu(args, req, params)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_convergence(out / "convergence.csv", stats)
    write_frequency(out / "frequency.csv", stats)
    for r in stats.records:
        line = f"k={r.k:<6} avg min cost {fmt_money(r.avg_min_cost)}  evaluations {r.evaluations}"
        if optimum is not None:
            line += f"  hit rate {fmt_money(r.hit_rate)}"
        print(line)
    if optimum is not None:
        print(f"exhaustive optimum {fmt_money(optimum.breakdown.total)} at j = {optimum.index} "
              f"({optimum.evaluations} evaluations)")
    return EXIT_OK


def cmd_compare(args) -> int:
    req, params = load_problem(args.file)
    check_horizon(req.horizon, args.force)
    optimum = exhaustive_optimize(req, params, workers=args.workers, force=args.force)
    z = 10000 if args.full_scale else args.experiments
    stats = run_experiments(req, params, args.iterations, experiments=z, base_seed=args.seed,
                            cfg=TabuConfig(tenure=args.tenure), optimum_cost=optimum.breakdown.total,
                            workers=args.workers)
    print(f"exhaustive  minimum {fmt_money(optimum.breakdown.total)} at j = {optimum.index}  "
          f"evaluations {optimum.evaluations}")
    for r in stats.records:
        print(f"tabu k={r.k:<6} z={r.experiments}  avg min cost {fmt_money(r.avg_min_cost)}  "
              f"hit rate {fmt_money(r.hit_rate)}  evaluations {r.evaluations}")
    print(f"tabu total evaluations {stats.evaluations}")
    return EXIT_OK


def cmd_growth(args) -> int:
    if not 1 <= args.max_n <= MAX_HORIZON:
        log.error("--max-n must be in [1, %d]", MAX_HORIZON)
        return EXIT_INPUT
    w = _writer(sys.stdout)
    w.writerow(["n", "strategy_count"])
    for n in range(1, args.max_n + 1):
        w.writerow([n, strategy_count(n)])
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = golden_checks()
    failed = [c for c in checks if not c.ok]
    for c in checks:
        status = "PASS" if c.ok else "FAIL"
        print(f"{status}  {c.label}: expected {c.expected}, got {c.actual}")
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return EXIT_MISMATCH if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lotforge", description="Exhaustive lot-sizing optimizer.")
    parser.add_argument("-v", "--verbose", action="store_true", help="diagnostics on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def workers(p):
        p.add_argument("--workers", type=int, default=default_workers(),
                       help="parallel processes (default: $LOTFORGE_WORKERS or 1)")

    def tabu_opts(p):
        p.add_argument("--iterations", type=_parse_k_list, default=list(PAPER_ITERATIONS),
                       help="comma-separated iteration counts k")
        p.add_argument("--experiments", type=int, default=1000, help="runs per k (z)")
        p.add_argument("--full-scale", action="store_true", help="use z = 10000")
        p.add_argument("--tenure", type=int, default=5)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("solve", help="find the global optimum by full enumeration")
    p.add_argument("file")
    p.add_argument("--landscape", metavar="PATH", help="write j,ct for every strategy")
    p.add_argument("--json", action="store_true")
    p.add_argument("--timing", action="store_true", help="include wall time in the JSON report")
    p.add_argument("--force", action="store_true", help="allow horizons above 30")
    workers(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("landscape", help="write the cost of every strategy as CSV")
    p.add_argument("file")
    p.add_argument("--out", required=True)
    p.add_argument("--force", action="store_true")
    workers(p)
    p.set_defaults(func=cmd_landscape)

    p = sub.add_parser("tabu", help="repeated tabu-search experiments")
    p.add_argument("file")
    p.add_argument("--out", required=True, help="directory for convergence.csv and frequency.csv")
    tabu_opts(p)
    workers(p)
    p.set_defaults(func=cmd_tabu)

    p = sub.add_parser("compare", help="evaluation counts: enumeration vs tabu search")
    p.add_argument("file")
    p.add_argument("--force", action="store_true")
    tabu_opts(p)
    workers(p)
    p.set_defaults(func=cmd_compare, iterations=[10000])

    p = sub.add_parser("growth", help="number of strategies per horizon")
    p.add_argument("--max-n", type=int, required=True)
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("verify", help="recompute the reference instances")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
    log.handlers[:] = [handler]
    log.propagate = False
    log.setLevel(logging.INFO if args.verbose else logging.WARNING)
    if getattr(args, "workers", 1) < 1:
        log.error("--workers must be >= 1")
        return EXIT_INPUT
    try:
        return args.func(args)
    except HorizonError as exc:
        log.error("%s", exc)
        return EXIT_HORIZON
    except InstanceTooSmallError as exc:
        log.error("%s", exc)
        return EXIT_TOO_SMALL
    except (ProblemFileError, ModelError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
