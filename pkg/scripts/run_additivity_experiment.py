#!/usr/bin/env python3
"""Seeded sweep of rank additivity on random direct sums.

Draws pairs of random tensors, computes the rank of each part and of their
direct sum independently, and tallies the results. Any inequality would be
an implementation bug, so the summary should always end with 0 violations.
"""

import argparse
import time
from collections import Counter

import numpy as np

from slicerank import PrimeField, check_additivity, random_tensor


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--shape", default="2,2,2", help="shape of each summand")
    parser.add_argument("--prime", type=int, default=2)
    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    field = PrimeField(args.prime)
    shape = tuple(int(x) for x in args.shape.split(","))
    totals = Counter()
    violations = 0
    start = time.time()
    for trial in range(args.trials):
        rng = np.random.default_rng([args.seed, trial])
        t1 = random_tensor(field, shape, rng)
        t2 = random_tensor(field, shape, rng)
        rep = check_additivity(t1, t2)
        totals[rep["sigma_total"]] += 1
        if rep["status"] != "equal":
            violations += 1
            print(f"trial {trial}: VIOLATION {rep['sigma_parts']} vs {rep['sigma_total']}")
    elapsed = time.time() - start
    print(f"shape {shape} over GF({args.prime}), {args.trials} trials, {elapsed:.1f}s")
    for sigma in sorted(totals):
        print(f"  sigma(sum) = {sigma}: {totals[sigma]} pairs")
    print(f"violations: {violations}")
    return 1 if violations else 0


if __name__ == "__main__":
    raise SystemExit(main())
