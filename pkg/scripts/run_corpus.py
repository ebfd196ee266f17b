#!/usr/bin/env python3
"""Run the randomized equivalence corpus and print the JSON summary.

Any counterexample candidate is embedded in full for replay; the process
exits nonzero when one appears.
"""

import argparse
import sys

from rdiv.theorems import corpus_run, summary_to_json


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--which", choices=("A", "B", "both"), default="both")
    args = ap.parse_args()

    summary = corpus_run(args.seed, args.count, which=args.which)
    print(summary_to_json(summary))
    sys.exit(0 if not summary["candidates"] else 4)


if __name__ == "__main__":
    main()
