"""Runtime-ratio study: planner wall clock normalized by the baseline A*.

Each query runs the exposure-agnostic baseline plus the requested planners
on the same 50x50 maps; ratios are per-query planner time over baseline
time. The exact planner gets a deliberately small budget here: the point is
the ordering of the medians, not finishing every query.

    python3 scripts/runtime_study.py --queries 12 --exact-budget 60000
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
    ap.add_argument("--queries", type=int, default=12, help="queries per map")
    ap.add_argument("--exact-budget", type=int, default=60_000)
    ap.add_argument("--query-seed", type=int, default=0)
    args = ap.parse_args()

    pooled: dict[str, list[float]] = {}
    for kind, seed in (("boxes", args.boxes_seed), ("hills", args.hills_seed)):
        config = ExperimentConfig(
            kinds=(kind,), sizes=(args.size,), seeds=(seed,),
            queries=args.queries,
            algorithms=("shortest", "ess", "binary", "exact"),
            node_budget=args.exact_budget,
            query_seed=args.query_seed,
        )
        records = run_experiment(
            config, progress=lambda m, i, t: print(f"building {m}", file=sys.stderr))
        print(f"{kind}-{args.size} seed {seed}:")
        for alg in ("shortest", "ess", "binary", "exact"):
            ratios = [r["runtime_ratio"] for r in records if r["algorithm"] == alg]
            pooled.setdefault(alg, []).extend(ratios)
            print(f"  {alg:>8}: median ratio {np.median(ratios):9.2f}  "
                  f"q1 {np.percentile(ratios, 25):8.2f}  "
                  f"q3 {np.percentile(ratios, 75):8.2f}")
    print("pooled medians:")
    for alg, ratios in pooled.items():
        print(f"  {alg:>8}: {np.median(ratios):9.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
