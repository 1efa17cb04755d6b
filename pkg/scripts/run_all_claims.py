#!/usr/bin/env python3
"""Run every verification claim and write the full report to a JSON file.

Usage: python scripts/run_all_claims.py [--out report.json] [--trials N]
       [--seed S] [--prec N] [--trunc M]
"""

import argparse
import json
import sys
import time

from umbral_flow.config import Config
from umbral_flow.verify import CLAIMS, run_claim


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="report.json")
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--prec", type=int, default=64)
    ap.add_argument("--trunc", type=int, default=16)
    ap.add_argument("--p", type=int, default=2)
    args = ap.parse_args()

    cfg = Config(p=args.p, prec=args.prec, trunc=args.trunc,
                 trials=args.trials, seed=args.seed)
    claims = []
    t_all = time.time()
    for name in CLAIMS:
        t0 = time.time()
        rep = run_claim(name, cfg)
        dt = time.time() - t0
        claims.append(rep.to_json())
        status = "pass" if rep.passed else "FAIL"
        print(f"[{status}] {name:18s} trials={rep.trials:5d} "
              f"min_agreement={rep.min_agreement_valuation} ({dt:.1f}s)",
              file=sys.stderr)
    report = {"config": cfg.to_json(), "claims": claims,
              "passed": all(c["passed"] for c in claims)}
    with open(args.out, "w") as fh:
        json.dump(report, fh, sort_keys=True, indent=2)
    print(f"wrote {args.out}; total {time.time() - t_all:.1f}s",
          file=sys.stderr)
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
