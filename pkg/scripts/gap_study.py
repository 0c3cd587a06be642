"""Optimality-gap study on small maps where the exact planner can finish.

Runs the experiment protocol on 20x20 Boxes and Hills maps and prints the
per-algorithm gap distribution, counting only queries the exact planner
completed within budget.

    python3 scripts/gap_study.py --seeds 1 2 3 --queries 30 --out-dir results/gaps
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from stealthpath import (ExperimentConfig, run_experiment,
                         write_records_jsonl, write_summary_csv)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--size", type=int, default=20)
    ap.add_argument("--seeds", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--queries", type=int, default=30, help="queries per map")
    ap.add_argument("--budget", type=int, default=500_000,
                    help="exact planner expansion budget")
    ap.add_argument("--query-seed", type=int, default=0)
    ap.add_argument("--out-dir", default=None, help="also write JSONL + CSV here")
    args = ap.parse_args()

    config = ExperimentConfig(
        kinds=("boxes", "hills"),
        sizes=(args.size,),
        seeds=tuple(args.seeds),
        queries=args.queries,
        algorithms=("shortest", "ess", "binary", "exact"),
        node_budget=args.budget,
        query_seed=args.query_seed,
    )
    records = run_experiment(
        config, progress=lambda m, i, t: print(f"[{i}/{t}] {m}", file=sys.stderr))

    exact = [r for r in records if r["algorithm"] == "exact"]
    done = sum(1 for r in exact if r["status"] == "found")
    print(f"exact completed {done}/{len(exact)} queries "
          f"(budget {args.budget})")
    for alg in ("exact", "binary", "ess", "shortest"):
        gaps = [r["optimality_gap"] for r in records
                if r["algorithm"] == alg and r["optimality_gap"] is not None]
        if gaps:
            print(f"  {alg:>8}: median gap {np.median(gaps):6.3f}  "
                  f"mean {np.mean(gaps):6.3f}  max {np.max(gaps):6.3f}  "
                  f"(n={len(gaps)})")

    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_records_jsonl(out / "records.jsonl", records, config)
        write_summary_csv(out / "summary.csv", records)
        print(f"wrote {out}/records.jsonl and summary.csv", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
