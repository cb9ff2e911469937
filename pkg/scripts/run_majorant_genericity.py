#!/usr/bin/env python3
"""Genericity of the majorant property under frequency randomization.

For each set size, realizes random frequency sets from a process, maximizes
the L^p norm over unimodular coefficients, and reports how often the ratio
against the unit-coefficient norm exceeds size^epsilon.  For even p the
exceedance probability is identically zero (the unit choice is optimal);
pass a non-even p to probe the regime where majorant failures live, at the
cost of a quadrature (approximate) objective.

Example:
    python scripts/run_majorant_genericity.py --p 4 --epsilon 0.2 --samples 40
"""

import argparse
import sys

from expsumlab import SeedSpec
from expsumlab.majorant import genericity_experiment
from expsumlab.moments import TimeMap


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--process", choices=("poisson", "walk"), default="poisson")
    ap.add_argument("--map", dest="time_map", default="identity")
    ap.add_argument("--sizes", default="8,16,32,64")
    ap.add_argument("--p", type=int, default=4)
    ap.add_argument("--epsilon", type=float, default=0.2)
    ap.add_argument("--samples", type=int, default=40)
    ap.add_argument("--restarts", type=int, default=2)
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()

    if args.time_map == "identity":
        tmap = TimeMap("identity")
    elif args.time_map.startswith("power:"):
        tmap = TimeMap("power", d=int(args.time_map.split(":")[1]))
    else:
        tmap = TimeMap("arith", r=float(args.time_map.split(":")[1]))

    sizes = [int(s) for s in args.sizes.split(",")]
    points = genericity_experiment(
        args.process, tmap, sizes, args.p, args.epsilon,
        samples=args.samples, restarts=args.restarts, seed=SeedSpec(args.seed),
    )
    print("size  threshold  exceedance +- SE      (lower bounds: optimizer is a lower bound)")
    for pt in points:
        print(f"{pt.size:4d}  {pt.threshold:9.4f}  {pt.probability:.4f} +- {pt.std_error:.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
