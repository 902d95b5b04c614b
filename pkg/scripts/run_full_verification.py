#!/usr/bin/env python3
"""Run every verification suite over its full (n, m) sweep and write one
combined JSON report.

Usage: python scripts/run_full_verification.py [--samples K] [--seed S]
       [--exact] [--out report.json]
"""

import argparse
import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from areaflow import campaigns


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=campaigns.DEFAULT_SAMPLES)
    ap.add_argument("--seed", type=int, default=campaigns.DEFAULT_SEED)
    ap.add_argument("--exact", action="store_true")
    ap.add_argument("--out", default="verification_report.json")
    args = ap.parse_args()

    combined = {"samples": args.samples, "seed": args.seed, "suites": []}
    ok = True
    for name in campaigns.SUITES:
        t0 = time.perf_counter()
        report = campaigns.run_suite(name, samples=args.samples, seed=args.seed,
                                     exact=args.exact)
        dt = time.perf_counter() - t0
        combined["suites"].append(report)
        ok &= report["passed"]
        worst = [c["worst"] for c in report["configs"]]
        print(f"{name:16s} {'PASS' if report['passed'] else 'FAIL':4s} "
              f"configs={len(report['configs'])} "
              f"worst={min(worst) if report['configs'][0]['kind'] == 'min_gap' else max(worst):+.3e} "
              f"({dt:.1f}s)")
    combined["passed"] = ok
    Path(args.out).write_text(json.dumps(combined, indent=2, sort_keys=True) + "\n")
    print(f"report -> {args.out}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
