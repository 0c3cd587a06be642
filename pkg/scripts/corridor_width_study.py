"""Corridor width comparison between the Boxes and Hills map families.

Plans low-exposure paths with the binary planner on matched query sets and
compares the corridor width distributions. Box worlds leave wide silent
lanes behind their walls; smooth hills usually pinch the corridor down to
the path itself.

    python3 scripts/corridor_width_study.py --queries 40
"""

import argparse
import sys

import numpy as np

from stealthpath import ExperimentConfig, run_experiment


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--size", type=int, default=50)
    ap.add_argument("--boxes-seed", type=int, default=7)
    ap.add_argument("--hills-seed", type=int, default=11)
    ap.add_argument("--queries", type=int, default=40, help="queries per map")
    ap.add_argument("--query-seed", type=int, default=0)
    args = ap.parse_args()

    medians = {}
    for kind, seed in (("boxes", args.boxes_seed), ("hills", args.hills_seed)):
        config = ExperimentConfig(
            kinds=(kind,), sizes=(args.size,), seeds=(seed,),
            queries=args.queries, algorithms=("binary",),
            query_seed=args.query_seed,
        )
        records = run_experiment(
            config, progress=lambda m, i, t: print(f"building {m}", file=sys.stderr))
        widths = [r["avg_width"] for r in records if r["avg_width"] is not None]
        medians[kind] = float(np.median(widths))
        print(f"{kind:>6}: median width {np.median(widths):5.2f}  "
              f"q1 {np.percentile(widths, 25):5.2f}  "
              f"q3 {np.percentile(widths, 75):5.2f}  (n={len(widths)})")
    wider = max(medians, key=medians.get)
    print(f"wider corridors: {wider}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
