"""Command-line interface for dataset generation, solving, and the scans.

Every subcommand is deterministic given --seed and --config; CSV outputs
are byte-identical across repeated invocations.  The optional JSON config
mirrors the dataclass field names, e.g.::

    {"solver": {"num_reads": 1000, "sweeps_per_unit_time": 50},
     "spvar": {"num_starts": 10, "fixing_threshold": 0.65},
     "chain": {"rcs": 0.2, "chain_length": 3},
     "method_params": {"time": 100.0},
     "generator": {"n_min": 17, "n_max": 95}}
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bench
from .events import GeneratorConfig, generate_dataset, load_events, save_events
from .solvers import SolverConfig


def _load_config(path) -> dict:
    if not path:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _solver_config(config: dict, seed: int) -> SolverConfig | None:
    section = config.get("solver")
    if not section:
        return None
    return SolverConfig(rng_seed=seed, **section)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--events", required=True, help="event file (see events module format)")
    parser.add_argument("--config", default=None, help="JSON config file")
    parser.add_argument("--seed", type=int, default=0, help="master RNG seed")
    parser.add_argument("--out", required=True, help="output CSV path")
    parser.add_argument("--threads", type=int, default=1, help="event-level parallelism")


def _emit(out_path, rows: list[dict], config_echo: dict, events_path, metrics: dict) -> None:
    bench.write_csv(out_path, rows)
    bench.write_summary(str(out_path) + ".summary.json", config_echo, events_path, metrics)
    print(f"wrote {len(rows)} rows to {out_path}")


def _records_run(args, methods) -> None:
    config = _load_config(args.config)
    events = load_events(args.events)
    specs = [
        bench.MethodSpec(m, dict(config.get("method_params", {}))) if m != "exact" else bench.MethodSpec(m)
        for m in methods
    ]
    records = bench.run_dataset(events, specs, seed=args.seed, threads=args.threads)
    rows = [r.to_row() for r in records]
    metrics = bench.aggregate_records(records)
    echo = {"methods": methods, "seed": args.seed, **config}
    _emit(args.out, rows, echo, args.events, metrics)


def cmd_gen(args) -> None:
    config = _load_config(args.config).get("generator", {})
    overrides = {
        "n_min": args.n_min,
        "n_max": args.n_max,
        "com_energy": args.com_energy,
        "transverse_smear": args.smear,
    }
    config.update({k: v for k, v in overrides.items() if v is not None})
    gen = GeneratorConfig(rng_seed=args.seed, **config)
    events = generate_dataset(gen, args.n_events)
    save_events(args.out, events)
    print(f"wrote {len(events)} events to {args.out}")


def cmd_exact(args) -> None:
    _records_run(args, ["exact"])


def cmd_solve(args) -> None:
    _records_run(args, ["exact", args.method])


def cmd_compare(args) -> None:
    methods = [
        "exact",
        "sa_default",
        "sa_tuned",
        "reverse",
        "spvar",
        "chained",
        "hybrid_seed_iterate",
        "sphericity_iterate",
    ]
    _records_run(args, methods)


def cmd_scan_rcs(args) -> None:
    config = _load_config(args.config)
    events = load_events(args.events)
    chain = config.get("chain", {})
    rows = bench.scan_rcs(
        events,
        rcs_grid=config.get("rcs_grid"),
        n_executions=config.get("n_executions", 40),
        solver_config=_solver_config(config, args.seed),
        chain_length=chain.get("chain_length", 3),
        seed=args.seed,
        threads=args.threads,
    )
    rates = [r["success_rate"] for r in rows]
    metrics = {"mean_success_rate": sum(rates) / len(rates)}
    _emit(args.out, rows, {"seed": args.seed, **config}, args.events, metrics)


def cmd_scan_time(args) -> None:
    config = _load_config(args.config)
    events = load_events(args.events)
    rows = bench.scan_time(
        events,
        time_grid=config.get("time_grid"),
        n_executions=config.get("n_executions", 20),
        solver_config=_solver_config(config, args.seed),
        seed=args.seed,
        threads=args.threads,
    )
    rates = [r["success_rate"] for r in rows]
    metrics = {"mean_success_rate": sum(rates) / len(rates)}
    _emit(args.out, rows, {"seed": args.seed, **config}, args.events, metrics)


def cmd_scan_reads(args) -> None:
    config = _load_config(args.config)
    events = load_events(args.events)
    rows = bench.scan_reads(
        events,
        reads_grid=config.get("reads_grid"),
        solver_config=_solver_config(config, args.seed),
        seed=args.seed,
        threads=args.threads,
    )
    defined = [r for r in rows if r["deviation_defined"]]
    by_budget: dict = {}
    for r in defined:
        by_budget.setdefault(r["num_reads"], []).append(abs(r["percent_deviation"]))
    metrics = {
        "mean_abs_percent_deviation": {
            str(k): sum(v) / len(v) for k, v in sorted(by_budget.items())
        }
    }
    _emit(args.out, rows, {"seed": args.seed, **config}, args.events, metrics)


def cmd_iters(args) -> None:
    config = _load_config(args.config)
    events = load_events(args.events)
    rows, summary = bench.iteration_histogram(
        events,
        seed_methods=tuple(config.get("seed_methods", ["sa_default_seed", "sphericity_seed"])),
        seed=args.seed,
        threads=args.threads,
    )
    _emit(args.out, rows, {"seed": args.seed, **config}, args.events, summary)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thrustjet", description="Hemisphere jet clustering via thrust optimization"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a toy dijet dataset")
    p.add_argument("--n-events", type=int, default=100)
    p.add_argument("--n-min", type=int, default=None)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--com-energy", type=float, default=None)
    p.add_argument("--smear", type=float, default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("exact", help="exact thrust per event")
    _add_common(p)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("solve", help="run one method (plus the exact reference)")
    _add_common(p)
    p.add_argument("--method", required=True, choices=[m for m in bench.METHOD_NAMES if m != "exact"])
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("compare", help="run the full method comparison")
    _add_common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("scan-rcs", help="chain strength scan (success rate)")
    _add_common(p)
    p.set_defaults(func=cmd_scan_rcs)

    p = sub.add_parser("scan-time", help="annealing time scan (success rate)")
    _add_common(p)
    p.set_defaults(func=cmd_scan_time)

    p = sub.add_parser("scan-reads", help="sample size scan (percent deviation)")
    _add_common(p)
    p.set_defaults(func=cmd_scan_reads)

    p = sub.add_parser("iters", help="iteration-count histogram for seeded search")
    _add_common(p)
    p.set_defaults(func=cmd_iters)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.func(args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
