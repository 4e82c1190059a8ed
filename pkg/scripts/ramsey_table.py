"""Largest certified K_n per clique order k, with the certificate values.

    python3 scripts/ramsey_table.py --k-max 30
"""

import argparse
import json
import math

from lalkit.conditions import ramsey_certify, ramsey_max_n


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k-min", type=int, default=3)
    ap.add_argument("--k-max", type=int, default=20)
    ap.add_argument("--out")
    args = ap.parse_args()

    rows = []
    print(f"{'k':>4} {'n*':>6} {'x*':>9} {'y*':>9} {'p*':>9} {'f*':>9} {'n*/(k/ln k)^2':>14}")
    for k in range(args.k_min, args.k_max + 1):
        n = ramsey_max_n(k)
        c = ramsey_certify(k, n)
        scale = n / (k / math.log(k)) ** 2
        rows.append({"k": k, "n": n, "x": c.x, "y": c.y, "p": c.p, "f": c.f, "scaled": scale})
        print(f"{k:>4} {n:>6} {c.x:>9.5f} {c.y:>9.5f} {c.p:>9.5f} {c.f:>9.5f} {scale:>14.4f}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(rows, fh, indent=1)


if __name__ == "__main__":
    main()
