"""Where does the a >= 0 Mill's-ratio bound fail, and by how much?

Prints, per nu, the largest violating a and the worst lhs/rhs ratio on the
default grid, then the same ratio against the bound with 1/2 replaced by
sqrt(pi/2) (the exact value of the Gaussian integral over [0, inf)).
Optionally writes the per-nu table as CSV.
"""

import argparse
import math
import sys

from tmills.serialize import csv_table
from tmills.verify import default_config, run_sweep


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--csv", default=None)
    args = ap.parse_args()

    rep = run_sweep(default_config("theorem1_pos"))
    half_gauss = math.sqrt(math.pi / 2)
    table = []
    by_nu = {}
    for r in rep.rows:
        by_nu.setdefault(r.nu, []).append(r)
    for nu, rows in by_nu.items():
        bad = [r.a for r in rows if r.flag == "violation"]
        worst = max(r.lhs / r.rhs for r in rows)
        alt = max(r.lhs / (math.sqrt(1 + r.a * r.a / nu) * (half_gauss + 1 / math.sqrt(nu))) for r in rows)
        table.append((nu, len(bad), max(bad) if bad else None, worst, alt))

    header = ("nu", "violations", "max_violating_a", "max_ratio", "max_ratio_sqrt_pi_over_2")
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(csv_table(header, table))
    print(f"total violations: {rep.violations}/{rep.points_checked}")
    for nu, n, amax, worst, alt in table:
        if n:
            print(f"nu={nu:10.4g}  violations={n:3d}  up to a={amax:.3g}  max ratio={worst:.4f}  "
                  f"with sqrt(pi/2): {alt:.4f}")
    print(f"worst ratio against the sqrt(pi/2) variant: {max(t[4] for t in table):.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
