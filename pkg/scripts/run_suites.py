"""Run every verification suite over several seeds and budgets.

    python scripts/run_suites.py --seeds 7 11 --budgets 10 16 --cases 300
"""

import argparse
import json
import sys

from tacs.generate import GenConfig
from tacs.suites import SUITE_NAMES, run_suite


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, nargs="+", default=[7])
    ap.add_argument("--budgets", type=int, nargs="+", default=[10])
    ap.add_argument("--cases", type=int, default=300)
    ap.add_argument("--limit", type=int, default=2000)
    ap.add_argument("--suites", nargs="+", default=list(SUITE_NAMES), choices=SUITE_NAMES)
    ap.add_argument("--json", help="write all reports to this file")
    args = ap.parse_args()

    reports = []
    for seed in args.seeds:
        for budget in args.budgets:
            cfg = GenConfig(seed=seed, size_budget=budget, count=args.cases)
            for name in args.suites:
                r = run_suite(name, cfg, args.limit)
                print(f"seed={seed:<4} budget={budget:<3} {r.summary()}")
                reports.append({"seed": seed, "budget": budget, **r.to_obj()})
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(reports, fh, indent=2)
    return 0 if all(r["passed"] for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
