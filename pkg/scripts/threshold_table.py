"""Color thresholds by max degree: closed forms next to the series fixpoints.

    python3 scripts/threshold_table.py --max-delta 12 --out thresholds.json
"""

import argparse
import json

from lalkit.conditions import nonrep_color_threshold, solve_series_fixpoint
from lalkit.problems import acyclic_series, nonrep_coloring_series, proper_series


def first_feasible(series_for, start=1, limit=10**6):
    for c in range(start, limit):
        if solve_series_fixpoint(series_for(c)).feasible:
            return c
    return None


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-delta", type=int, default=10)
    ap.add_argument("--out")
    args = ap.parse_args()

    rows = []
    print(f"{'delta':>5} {'proper':>7} {'acyc-r':>7} {'acyc-u':>7} {'nonrep':>8} {'nonrep-fix':>10}")
    for d in range(2, args.max_delta + 1):
        row = {
            "delta": d,
            "proper": first_feasible(lambda c: proper_series(d, c)),
            "acyclic_restricted": first_feasible(lambda c: acyclic_series(d, c, "restricted")),
            "acyclic_uniform": first_feasible(lambda c: acyclic_series(d, c, "uniform")),
            "nonrep_closed_form": nonrep_color_threshold(d) if d >= 3 else None,
            "nonrep_fixpoint": first_feasible(lambda c: nonrep_coloring_series(d, c), start=d * d),
        }
        rows.append(row)
        print(f"{d:>5} {row['proper']:>7} {row['acyclic_restricted']:>7} {row['acyclic_uniform']:>7} "
              f"{str(row['nonrep_closed_form']):>8} {row['nonrep_fixpoint']:>10}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(rows, fh, indent=1)


if __name__ == "__main__":
    main()
