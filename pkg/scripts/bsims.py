"""Selection frequency tables for the two- and three-block models.

Usage: python3 scripts/bsims.py [--out results] [--replicates 100] [--workers 1]
"""
from __future__ import annotations

import argparse
from collections import Counter
from pathlib import Path

from smsclust.harness import load_config, run_pipeline

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def print_table(cfg, records):
    d0, K0 = cfg.truth_dims()
    print(f"\n{cfg.name}: truth (d, K) = ({d0}, {K0})")
    for n in cfg.n:
        rs = [r for r in records if r.n == n and r.ok]
        cells = Counter((r.d_hat, r.K_hat) for r in rs)
        k_rate = sum(r.K_hat == K0 for r in rs) / max(len(rs), 1)
        print(f"  n={n:5d}  K correct {k_rate:.2f}  " +
              "  ".join(f"({d},{K}):{c}" for (d, K), c in sorted(cells.items())))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--replicates", type=int)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)
    for name in ("bsims_two_block", "bsims_three_block"):
        cfg = load_config(CONFIGS / f"{name}.yaml", {"output_dir": str(Path(args.out) / name),
                                                     "replicates": args.replicates,
                                                     "workers": args.workers})
        res = run_pipeline(cfg)
        print_table(cfg, res.records)


if __name__ == "__main__":
    main()
