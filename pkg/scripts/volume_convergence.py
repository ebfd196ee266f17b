#!/usr/bin/env python3
"""Watch n! h0(mD) / m^n converge to the exact polytope volume.

Samples a few big divisors on P2 and F1 and tabulates the normalized
section counts against the exact volume, demonstrating the limit they
approach and the 1/m decay of the error.
"""

import argparse
import random
from fractions import Fraction

from rdiv.scalars import Scalar
from rdiv.toric import h0, is_big, preset_fan, volume


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--divisors", type=int, default=4)
    ap.add_argument("--multiples", default="10,20,40,80")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    multiples = [int(m) for m in args.multiples.split(",")]
    fans = [preset_fan("P2"), preset_fan("F1")]
    shown = 0
    while shown < args.divisors:
        fan = fans[shown % 2]
        D = fan.divisor([Fraction(rng.randint(-4, 6), rng.choice((1, 2))) for _ in fan.rays])
        if not is_big(D):
            continue
        vol = volume(D)
        print(f"\nD = {{{', '.join(f'{k}: {v}' for k, v in D.coeff_map().items() if v)}}}"
              f"   vol = {vol}")
        print(f"{'m':>5} {'h0(mD)':>9} {'2 h0/m^2':>24} {'error':>24}")
        for m in multiples:
            count = h0(D.scale(m))
            approx = Scalar(Fraction(2 * count, m * m))
            err = abs(approx - vol)
            print(f"{m:>5} {count:>9} {approx.decimal(12):>24} {err.decimal(12):>24}")
        shown += 1


if __name__ == "__main__":
    main()
