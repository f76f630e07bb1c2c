#!/usr/bin/env python3
"""Annealing parameter scans: chain strength, annealing time, read budget.

Reproduces the three scan studies on a small toy dataset and writes one CSV
per scan.  Expect the chain-strength scan to dominate the runtime.
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

import numpy as np

from thrustjet import bench
from thrustjet.events import GeneratorConfig, generate_dataset, save_events
from thrustjet.solvers import AnnealSchedule, SolverConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-events", type=int, default=5)
    ap.add_argument("--n-min", type=int, default=20)
    ap.add_argument("--n-max", type=int, default=40)
    ap.add_argument("--smear", type=float, default=0.6)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out-prefix", default="scan")
    ap.add_argument("--skip", nargs="*", default=[], choices=["rcs", "time", "reads"])
    args = ap.parse_args()

    cfg = GeneratorConfig(
        n_min=args.n_min, n_max=args.n_max, transverse_smear=args.smear, rng_seed=args.seed
    )
    events = generate_dataset(cfg, args.n_events)
    save_events(f"{args.out_prefix}.events", events)

    if "rcs" not in args.skip:
        rows = bench.scan_rcs(events, seed=args.seed, threads=args.threads)
        out = f"{args.out_prefix}_rcs.csv"
        bench.write_csv(out, rows)
        by_rcs = {}
        for r in rows:
            by_rcs.setdefault(r["rcs"], []).append(r["success_rate"])
        print(f"chain strength scan -> {out}")
        for rcs, rates in sorted(by_rcs.items()):
            print(f"  rcs {rcs:5.3f}  mean success {np.mean(rates):.3f}")

    if "time" not in args.skip:
        rows = bench.scan_time(events, seed=args.seed, threads=args.threads)
        out = f"{args.out_prefix}_time.csv"
        bench.write_csv(out, rows)
        by_t = {}
        for r in rows:
            by_t.setdefault(r["time"], []).append(r["success_rate"])
        print(f"annealing time scan -> {out}")
        for t, rates in sorted(by_t.items()):
            print(f"  time {t:7.1f}  mean success {np.mean(rates):.3f}")

    if "reads" not in args.skip:
        rows = bench.scan_reads(
            events,
            solver_config=SolverConfig(num_reads=1, sweeps_per_unit_time=1),
            schedule=AnnealSchedule.forward(2.0),
            seed=args.seed,
            threads=args.threads,
        )
        out = f"{args.out_prefix}_reads.csv"
        bench.write_csv(out, rows)
        by_budget = {}
        for r in rows:
            if r["deviation_defined"]:
                by_budget.setdefault(r["num_reads"], []).append(abs(r["percent_deviation"]))
        print(f"read budget scan -> {out}")
        for budget, devs in sorted(by_budget.items()):
            print(f"  reads {budget:6d}  mean |dev| {np.mean(devs):7.3f}%")


if __name__ == "__main__":
    main()
