"""Steps-to-termination statistics for the solvers across sizes.

Each run is checked with the independent validators; the JSON output keeps
one summary row per (problem, size).

    python3 scripts/solver_sweep.py --seeds 20 --out sweep.json
"""

import argparse
import json
import statistics
import warnings

from lalkit.engine import ConditionUnsatisfiable, run_many
from lalkit.graphs import random_bounded_degree_graph, random_regular_graph
from lalkit.problems import (acyclic_edge_instance, nonrep_sequence_instance,
                             proper_coloring_instance, uniform_lists)
from lalkit.validators import find_violation


def instances(sizes):
    for n in sizes:
        yield "nonrep-seq", n, nonrep_sequence_instance(uniform_lists(n, 4))
        g = random_regular_graph(n - n % 2, 4, seed=n)
        yield "proper", n, proper_coloring_instance(g, 5)
        g = random_bounded_degree_graph(n, 5, 2 * n, seed=n)
        for strategy in ("restricted", "uniform"):
            yield f"acyclic-{strategy}", n, acyclic_edge_instance(g, 4 * (g.max_degree - 1), strategy)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200, 400])
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--budget", type=int, default=10**7)
    ap.add_argument("--out")
    args = ap.parse_args()

    rows = []
    warnings.simplefilter("ignore", ConditionUnsatisfiable)
    for problem, n, inst in instances(args.sizes):
        summary = run_many(inst, range(args.seeds), args.budget)
        valid = sum(r.terminated and find_violation(inst.descriptor(), r.final_state) is None
                    for r in summary.reports)
        steps = [r.steps_used for r in summary.reports]
        row = {"problem": problem, "size": n, "slots": len(inst.slots), "valid": valid,
               "runs": summary.runs, "mean_steps": statistics.fmean(steps),
               "steps_per_slot": statistics.fmean(steps) / max(len(inst.slots), 1),
               "events": summary.events_by_class}
        rows.append(row)
        print(f"{problem:>18} n={n:<5} slots={row['slots']:<5} valid={valid}/{summary.runs} "
              f"steps/slot={row['steps_per_slot']:.3f}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(rows, fh, indent=1)


if __name__ == "__main__":
    main()
