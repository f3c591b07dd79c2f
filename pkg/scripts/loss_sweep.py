#!/usr/bin/env python3
"""Sweep detector efficiency and compare detection rates against the η² model.

Writes one line per efficiency point: measured post-selected success rate, the
η_d² prediction, the binomial 3σ band, and the conditional fidelity, which
stays at 1 for every point with any detections at all.
"""

import argparse
import csv
import math
import sys

import numpy as np

from hyper_rsp.runtime import sample_with_loss
from hyper_rsp.states import ProtocolKind, TargetParams


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--protocol", choices=["pf", "tb"], default="pf")
    parser.add_argument("--trials", type=int, default=50000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--points", type=int, default=11)
    parser.add_argument("--csv", default=None, help="write results to a CSV file")
    args = parser.parse_args()

    kind = ProtocolKind.parse(args.protocol)
    params = TargetParams.random(np.random.Generator(np.random.Philox(key=args.seed)))

    rows = []
    for eta in np.linspace(0.0, 1.0, args.points):
        stats = sample_with_loss(kind, params, float(eta), args.trials, args.seed)
        predicted = eta * eta
        sigma = math.sqrt(predicted * (1 - predicted) / args.trials) if 0 < predicted < 1 else 0.0
        fid = stats.mean_fidelity_on_detected
        rows.append(
            {
                "eta_d": f"{eta:.3f}",
                "success_rate": f"{stats.success_rate:.6f}",
                "predicted": f"{predicted:.6f}",
                "three_sigma": f"{3 * sigma:.6f}",
                "conditional_fidelity": "n/a" if math.isnan(fid) else f"{fid:.12f}",
            }
        )

    header = list(rows[0])
    print("  ".join(f"{name:>20}" for name in header))
    for row in rows:
        print("  ".join(f"{row[name]:>20}" for name in header))

    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as handle:
            writer = csv.DictWriter(handle, fieldnames=header)
            writer.writeheader()
            writer.writerows(rows)
        print(f"wrote {args.csv}", file=sys.stderr)


if __name__ == "__main__":
    main()
