"""Within-block statistics of the redundant embedding columns as n grows.

Usage: python3 scripts/obsstats.py [--out results/obsstats] [--n 200 2000]
"""
from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

from smsclust.harness import load_config, run_obsstats

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/obsstats")
    ap.add_argument("--n", type=int, nargs="+")
    ap.add_argument("--replicates", type=int)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)
    cfg = load_config(CONFIGS / "obsstats.yaml", {"output_dir": args.out, "n": args.n,
                                                  "replicates": args.replicates, "workers": args.workers})
    res = run_obsstats(cfg)
    dims = np.array([row[:6] for row in res.dims], dtype=float)
    for n in cfg.n:
        summ = [s for s in res.summary if s["n"] == n]
        line = (f"n={n:6d}  median |mean| {np.median([s['median_abs_mean'] for s in summ]):.2e}"
                f"  mean |offdiag| {np.median([s['mean_abs_offdiag'] for s in summ]):.2e}")
        for block in np.unique(dims[:, 2]).astype(int):
            v = dims[(dims[:, 0] == n) & (dims[:, 2] == block), 5] * n
            line += f"  n*var[{block}] median {np.median(v):.4f}"
        print(line)


if __name__ == "__main__":
    main()
