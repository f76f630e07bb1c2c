#!/usr/bin/env python3
"""Full method comparison on a toy dijet dataset.

Generates (or loads) a dataset, runs every solving method against the exact
reference, and writes a per-(event, method) CSV plus a JSON summary.
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from thrustjet import bench
from thrustjet.events import GeneratorConfig, generate_dataset, load_events, save_events


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--events", default=None, help="existing event file (default: generate)")
    ap.add_argument("--n-events", type=int, default=50)
    ap.add_argument("--n-min", type=int, default=10)
    ap.add_argument("--n-max", type=int, default=40)
    ap.add_argument("--smear", type=float, default=0.6)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", default="comparison.csv")
    args = ap.parse_args()

    if args.events:
        events = load_events(args.events)
        events_path = args.events
    else:
        cfg = GeneratorConfig(
            n_min=args.n_min, n_max=args.n_max,
            transverse_smear=args.smear, rng_seed=args.seed,
        )
        events = generate_dataset(cfg, args.n_events)
        events_path = args.out + ".events"
        save_events(events_path, events)
        print(f"generated {len(events)} events -> {events_path}")

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
    records = bench.run_dataset(events, methods, seed=args.seed, threads=args.threads)
    bench.write_csv(args.out, [r.to_row() for r in records])
    metrics = bench.aggregate_records(records)
    bench.write_summary(args.out + ".summary.json", {"seed": args.seed}, events_path, metrics)

    print(f"wrote {len(records)} records -> {args.out}")
    for method, stats in metrics.items():
        dev = stats["mean_abs_percent_deviation"]
        dev_s = f"{dev:8.3f}%" if dev is not None else "     n/a"
        print(
            f"  {method:22s} success {stats['success_rate']:.3f}  "
            f"mean |dev| {dev_s}  wall {stats['total_wall_time']:.1f}s"
        )


if __name__ == "__main__":
    main()
