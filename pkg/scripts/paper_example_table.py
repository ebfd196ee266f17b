#!/usr/bin/env python3
"""Print the irrational-twist section-count table on F_e.

The twist C + (F1-F2) + sqrt(2)(F3-F4) is R-linearly equivalent to C yet
has strictly fewer sections at every positive multiple; this script tabulates
both counts along a mixed rational/irrational grid.
"""

import argparse
from fractions import Fraction

from rdiv.scalars import Scalar
from rdiv.surface import paper_example


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--e", type=int, default=1)
    ap.add_argument("--max-m", type=int, default=6)
    args = ap.parse_args()

    samples = []
    for k in range(1, args.max_m + 1):
        samples.append(Scalar(k))
        samples.append(Scalar(Fraction(2 * k + 1, 2)))
        samples.append(Scalar(0, k, 2))

    rows = paper_example(args.e, samples=samples)
    print(f"F_{args.e}:  D' = C + (F1-F2) + sqrt(2)(F3-F4)")
    head_s, head_t = "floor(mD').E", "h0(mD')"
    print(f"{'m':>12} {head_s:>14} {head_t:>9} {'h0(mC)':>8}")
    for r in rows:
        print(f"{str(r.m):>12} {r.floor_dot_e:>14} {r.h0_twisted:>9} {r.h0_straight:>8}")


if __name__ == "__main__":
    main()
