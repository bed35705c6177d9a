"""Run every suite on its default grid and write CSV + JSON reports.

    python scripts/run_all_suites.py --out results/
"""

import argparse
import pathlib
import time

from tmills.serialize import sweep_csv, to_json
from tmills.verify import SUITES, default_config, run_sweep


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results")
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    print(f"{'suite':15s} {'mode':7s} {'points':>7s} {'viol':>6s} {'min slack':>12s} {'max lhs/rhs':>12s} {'sec':>6s}")
    for suite in SUITES:
        t0 = time.perf_counter()
        rep = run_sweep(default_config(suite))
        dt = time.perf_counter() - t0
        (out / f"{suite}.csv").write_text(sweep_csv(rep))
        (out / f"{suite}.json").write_text(to_json(rep))
        mode = "probe" if rep.probe else "assert"
        print(f"{suite:15s} {mode:7s} {rep.points_checked:7d} {rep.violations:6d} "
              f"{rep.min_slack:12.4g} {rep.max_tightness_ratio:12.4g} {dt:6.2f}")
        if rep.notes:
            print(f"{'':15s} notes: {rep.notes}")


if __name__ == "__main__":
    main()
