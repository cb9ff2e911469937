#!/usr/bin/env python3
"""Survey of lattice counts near the power-difference surface.

For each d, reports the sup shell count over D <= E <= D^2 against the
D^{2/d} scale, and fits the leading area constant of the two-sided count
R_d(x) / x^{2/d} from a geometric ladder of x values.

Example:
    python scripts/run_shell_survey.py --d 3 --D-values 10,20,50,100,200
"""

import argparse
import sys

from expsumlab import slope_fit
from expsumlab.lattice import hyperbolic_count, shell_sup_ratio


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d", type=int, default=3)
    ap.add_argument("--D-values", dest="d_values", default="10,20,50,100,200")
    ap.add_argument("--e-samples", type=int, default=50_000)
    ap.add_argument("--x-max", type=float, default=1e6)
    args = ap.parse_args()

    d = args.d
    points = []
    print(f"shell sup counts for d={d} (window |k^d - j^d - E| < D, D <= E <= D^2)")
    for tok in args.d_values.split(","):
        D = float(tok)
        count, ratio, argmax_e = shell_sup_ratio(d, D, args.e_samples)
        points.append((D, float(count)))
        print(f"  D={D:8.0f}  sup count {count:6d}  count/D^(2/d) {ratio:7.3f}  at E={argmax_e:.0f}")
    fit = slope_fit(points)
    print(f"  fitted growth exponent {fit.slope:.3f} (scale-invariance predicts {2/d:.3f})")

    print(f"two-sided count R_{d}(x): empirical area constant")
    x = 1000.0
    while x <= args.x_max:
        r = hyperbolic_count(d, x)
        print(f"  x={x:10.0f}  R={r:10d}  R/x^(2/d) = {r / x ** (2 / d):.4f}")
        x *= 10.0
    return 0


if __name__ == "__main__":
    sys.exit(main())
