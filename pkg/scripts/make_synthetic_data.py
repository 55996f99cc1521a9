#!/usr/bin/env python3
"""Write the synthetic benchmark CSVs into data/.

Shapes match the engine's two reference workloads: a 1430 x 10 maintenance
table (classification / regression variants) and a 100000 x 13 network-aware
task table for anomaly runs.
"""

import argparse
from pathlib import Path

from rxmflow.synth import failure_frame, maintenance_frame, network_frame, write_csv


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="data")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--network-rows", type=int, default=100_000)
    args = parser.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    write_csv(maintenance_frame(seed=args.seed), out / "maintenance_priority.csv")
    print(f"wrote {out / 'maintenance_priority.csv'} (1430 x 10, classification)")

    write_csv(failure_frame(seed=args.seed + 4), out / "failure_probability.csv")
    print(f"wrote {out / 'failure_probability.csv'} (1430 x 10, regression)")

    write_csv(
        network_frame(n_rows=args.network_rows, seed=args.seed + 6),
        out / "network_tasks.csv",
    )
    print(f"wrote {out / 'network_tasks.csv'} ({args.network_rows} x 13, anomaly)")


if __name__ == "__main__":
    main()
