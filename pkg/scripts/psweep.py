"""Mean ARI of every method as the between-block probability varies, plus
paired sign tests of the simultaneous methods against the elbow baselines.

Usage: python3 scripts/psweep.py [--out results/psweep] [--replicates 100]
"""
from __future__ import annotations

import argparse
from pathlib import Path

from smsclust.harness import load_config, run_pipeline, sign_tests

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/psweep")
    ap.add_argument("--replicates", type=int)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)
    cfg = load_config(CONFIGS / "psweep.yaml", {"output_dir": args.out, "replicates": args.replicates,
                                                "workers": args.workers})
    res = run_pipeline(cfg)
    print("p       " + "".join(f"{m:>13s}" for m in cfg.methods))
    for p in cfg.sweep.values:
        row = {s["method"]: s["mean_ari_block"] for s in res.summary if s["param"] == p}
        print(f"{p:<8.3f}" + "".join(f"{row[m]:13.3f}" for m in cfg.methods))
    print("\nsign tests (method_a better than method_b):")
    for t in sign_tests(res.records, "block"):
        print(f"  p={t['param']:.3f} {t['method_a']:>11s} vs {t['method_b']}: "
              f"{t['wins']}-{t['losses']} (ties {t['ties']}), p-value {t['pvalue']:.2e}")


if __name__ == "__main__":
    main()
