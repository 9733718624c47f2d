"""Rate of recovering the true (d, K) on direct mixture draws as n grows.

Usage: python3 scripts/consistency.py [--out results/consistency]
"""
from __future__ import annotations

import argparse
from pathlib import Path

from smsclust.harness import load_config, run_pipeline

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/consistency")
    ap.add_argument("--replicates", type=int)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)
    cfg = load_config(CONFIGS / "consistency.yaml", {"output_dir": args.out,
                                                     "replicates": args.replicates,
                                                     "workers": args.workers})
    res = run_pipeline(cfg)
    for row in res.summary:
        print(f"n={row['n']:6d}  correct d {row['correct_d_rate']:.2f}  correct K "
              f"{row['correct_K_rate']:.2f}  both {row['correct_rate']:.2f}")


if __name__ == "__main__":
    main()
