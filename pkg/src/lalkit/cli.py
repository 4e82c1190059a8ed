"""Command-line front end.

Exit codes: 0 success, 1 domain failure (condition fails, run or validation
fails, degenerate parameters), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path
from typing import Optional, Sequence

from . import problems as P
from .conditions import (DegenerateDelta, InvalidOrder, check_lal_inequality, default_nonrep_y,
                         nonrep_color_threshold, ramsey_certify, ramsey_max_n, solve_series_fixpoint)
from .config import ExperimentConfig, build_report, read_runs, write_json
from .engine import ConditionUnsatisfiable, DEFAULT_BUDGET, run, run_many
from .graphs import FAMILIES, GraphParseError, generate, random_tree, read_edge_list, star_graph
from .monoid import trace_decodes
from .validators import find_violation

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# building instances from flags


def _graph_from(params: dict):
    if params.get("graph"):
        return read_edge_list(params["graph"])
    family = params.get("family")
    if family is None:
        raise UsageError("give --graph FILE or --family")
    if family == "tree":
        return random_tree(int(params["n"]), int(params.get("degree", 3)), int(params.get("graph_seed", 0)))
    if params.get("n") is None and family != "petersen":
        raise UsageError(f"--family {family} needs --n")
    return generate(family, int(params.get("n") or 0), int(params.get("degree", 3)),
                    int(params.get("graph_seed", 0)))


def build_instance(problem: str, params: dict):
    """Instance from a flat parameter dict (CLI flags or a config file)."""
    if problem == "nonrep-seq":
        if params.get("lists"):
            lists = json.loads(Path(params["lists"]).read_text())
        else:
            if params.get("n") is None:
                raise UsageError("nonrep-seq needs --n or --lists")
            lists = P.uniform_lists(int(params["n"]), int(params.get("alphabet") or 4))
        return P.nonrep_sequence_instance(lists)
    if problem == "ramsey":
        if params.get("k") is None:
            raise UsageError("ramsey needs --k")
        k = int(params["k"])
        n = int(params["n"]) if params.get("n") is not None else ramsey_max_n(k)
        return P.ramsey_instance(n, k, params.get("p"))
    if problem == "choice" and params.get("system"):
        data = json.loads(Path(params["system"]).read_text())
        return P.choice_function_instance(P.ChoiceSystem.from_json(data))
    g = _graph_from(params)
    colors = params.get("colors")
    if problem == "nonrep-color" and colors is None:
        colors = nonrep_color_threshold(g.max_degree)
    if colors is None:
        raise UsageError(f"{problem} needs --colors")
    colors = int(colors)
    if problem == "proper":
        return P.proper_coloring_instance(g, colors)
    if problem == "nonrep-color":
        cap = params.get("max_half_length", 8)
        return P.nonrep_coloring_instance(g, colors, None if cap in (None, 0) else int(cap))
    if problem == "acyclic":
        return P.acyclic_edge_instance(g, colors, params.get("strategy") or "restricted")
    if problem == "choice":
        return P.choice_function_instance(P.coloring_choice_system(g, colors, float(params.get("q") or 1.0 / colors)))
    raise UsageError(f"unknown problem {problem!r}")


def _representative(args):
    """An instance whose condition depends only on the degree-level parameters."""
    problem = args.problem
    if problem == "nonrep-seq":
        return P.nonrep_sequence_instance(P.uniform_lists(1, args.alphabet or 4))
    if problem == "ramsey":
        if args.k is None:
            raise UsageError("ramsey needs --k")
        n = args.n if args.n is not None else ramsey_max_n(args.k)
        return P.ramsey_instance(n, args.k, args.p)
    if args.graph or args.family:
        return build_instance(problem, _params(args))
    if args.delta is None:
        raise UsageError(f"{problem} needs --delta or a graph")
    g = star_graph(args.delta)
    colors = args.colors
    if colors is None:
        if problem == "proper":
            colors = args.delta + 1
        elif problem == "acyclic":
            colors = 4 * (args.delta - 1)
        elif problem == "nonrep-color":
            colors = nonrep_color_threshold(args.delta)
        else:
            raise UsageError(f"{problem} needs --colors")
    if problem == "proper":
        return P.proper_coloring_instance(g, colors)
    if problem == "acyclic":
        return P.acyclic_edge_instance(g, colors, args.strategy or "restricted")
    if problem == "nonrep-color":
        return P.nonrep_coloring_instance(g, colors)
    if problem == "choice":
        return P.choice_function_instance(P.coloring_choice_system(g, colors, args.q or 1.0 / colors))
    raise UsageError(f"unknown problem {problem!r}")


_PARAM_KEYS = ("graph", "family", "n", "degree", "graph_seed", "colors", "strategy", "alphabet",
               "lists", "k", "p", "max_half_length", "system", "q")


def _params(args) -> dict:
    return {k: getattr(args, k) for k in _PARAM_KEYS if getattr(args, k, None) is not None}


# ---------------------------------------------------------------------------
# subcommands


def cmd_solve(args) -> int:
    if args.config:
        config = ExperimentConfig.load(args.config)
    else:
        if not args.problem:
            raise UsageError("solve needs --problem or --config")
        seeds = args.seed_list or list(range(args.seed_base, args.seed_base + args.seeds))
        config = ExperimentConfig(args.problem, _params(args), seeds, args.budget, args.out)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConditionUnsatisfiable)
        instance = build_instance(config.problem, config.params)
    summary = run_many(instance, config.seeds, config.budget, args.workers)
    validated = [r.terminated and instance.goal(r.final_state) for r in summary.reports]
    agg = summary.aggregate()
    print(f"{config.problem}: {agg['runs']} runs, success {agg['success_rate']:.3f}, "
          f"validated {sum(validated)}/{len(validated)}, mean steps {agg['mean_steps']:.1f}, "
          f"max steps {agg['max_steps']}")
    for tag, count in agg["events_by_class"].items():
        print(f"  {tag}: {count}")
    out = args.out or config.out
    if out:
        write_json(out, build_report(config, instance.descriptor(), summary, instance.slots, validated))
    return EXIT_OK if all(validated) else EXIT_DOMAIN


def cmd_check(args) -> int:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConditionUnsatisfiable)
        instance = _representative(args)
    f = instance.weight()
    if args.f is not None:
        f = {g: args.f for g in f}
    report = check_lal_inequality(f, instance.condition_table())
    values = sorted(set(f.values()))
    print(f"{instance.problem}: {len(report.slacks)} generators, weight "
          + ", ".join(f"{v:.15g}" for v in values))
    if args.verbose:
        for g in sorted(report.slacks):
            print(f"  generator {g}: f={f[g]:.15g} slack={report.slacks[g]:.3e}")
    print(f"min slack {report.min_slack:.3e} at generator {report.worst_generator}: "
          + ("holds" if report.holds else "FAILS"))
    if args.out:
        write_json(args.out, {"problem": instance.problem, "weight": {str(g): v for g, v in f.items()},
                              "slacks": {str(g): s for g, s in report.slacks.items()},
                              "holds": report.holds, "table": instance.condition_table().to_json()})
    return EXIT_OK if report.holds else EXIT_DOMAIN


def _min_colors(series_for, start: int, limit: int = 10**5) -> Optional[int]:
    for c in range(max(start, 1), limit):
        if solve_series_fixpoint(series_for(c)).feasible:
            return c
    return None


def cmd_threshold(args) -> int:
    out = {"problem": args.problem}
    if args.problem == "nonrep-color":
        if args.delta is None:
            raise UsageError("needs --delta")
        c = nonrep_color_threshold(args.delta, args.y)
        y = args.y if args.y is not None else default_nonrep_y(args.delta)
        fixed = _min_colors(lambda k: P.nonrep_coloring_series(args.delta, k), args.delta**2)
        out.update(delta=args.delta, colors=c, y=y, f=y * c / args.delta**2, series_min_colors=fixed)
        print(f"delta={args.delta}: {c} colors suffice (y={y:.6f}, f={out['f']:.6f}); "
              f"series fixpoint first feasible at {fixed}")
    elif args.problem == "ramsey":
        if args.k is None:
            raise UsageError("needs --k")
        n = args.n if args.n is not None else ramsey_max_n(args.k)
        cert = ramsey_certify(args.k, n)
        out.update(k=args.k, n=n, certified=cert.certified, x=cert.x, y=cert.y, p=cert.p,
                   f=cert.f, h1=cert.h1, h2=cert.h2)
        print(f"k={args.k}: n={n} {'certified' if cert.certified else 'NOT certified'} "
              f"x*={cert.x:.6f} y*={cert.y:.6f} p*={cert.p:.6f} f*={cert.f:.6f} "
              f"h1+h2={cert.total:.6f}")
        if not cert.certified:
            return _finish(args, out, EXIT_DOMAIN)
    elif args.problem in ("proper", "acyclic", "nonrep-seq"):
        if args.problem == "nonrep-seq":
            series_for = P.nonrep_sequence_series
            size, start, label = args.alphabet, 1, "list size"
        else:
            if args.delta is None:
                raise UsageError("needs --delta")
            d = args.delta
            if args.problem == "proper":
                series_for, start = (lambda c: P.proper_series(d, c)), 1
            else:
                strategy = args.strategy or "restricted"
                series_for, start = (lambda c: P.acyclic_series(d, c, strategy)), 1
            size, label = args.colors, "colors"
        if size is None:
            size = _min_colors(series_for, start)
            print(f"smallest feasible {label}: {size}")
            out["min_" + label.replace(" ", "_")] = size
            if size is None:
                return EXIT_DOMAIN
        res = solve_series_fixpoint(series_for(size))
        out.update(size=size, feasible=res.feasible, best_f=res.best_f, slack=res.slack)
        print(f"{label}={size}: feasible={res.feasible} f={res.best_f:.12g} slack={res.slack:.3e}")
        if not res.feasible:
            return _finish(args, out, EXIT_DOMAIN)
    else:
        raise UsageError(f"no threshold for {args.problem!r}")
    return _finish(args, out, EXIT_OK)


def _finish(args, out: dict, code: int) -> int:
    if args.out:
        write_json(args.out, out)
    return code


def _load_report(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: not JSON ({exc})") from None


def cmd_validate(args) -> int:
    report = _load_report(args.report)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConditionUnsatisfiable)
        instance = P.from_descriptor(report["instance"])
    ok_all = True
    for i, (rep, trace) in enumerate(read_runs(report)):
        witness = find_violation(instance.descriptor(), rep.final_state)
        decodes = trace_decodes(trace)
        ok = rep.terminated and witness is None and decodes
        ok_all &= ok
        line = f"run {i} seed {rep.seed}: {'valid' if ok else 'INVALID'}"
        if witness is not None:
            line += f" witness={witness}"
        if not decodes:
            line += " trace does not decode"
        print(line)
    return EXIT_OK if ok_all else EXIT_DOMAIN


def cmd_replay(args) -> int:
    report = _load_report(args.report)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConditionUnsatisfiable)
        instance = P.from_descriptor(report["instance"])
    budget = report.get("config", {}).get("budget", DEFAULT_BUDGET)
    ok_all = True
    for i, run_data in enumerate(report["runs"]):
        if args.run is not None and i != args.run:
            continue
        rep, trace = read_runs({"runs": [run_data]})[0]
        decodes = trace_decodes(trace)
        again, again_trace = run(instance, rep.seed, budget)
        identical = (again_trace.to_json() == run_data["trace"]
                     and again.to_json(instance.slots) == run_data["report"])
        ok_all &= decodes and identical
        print(f"run {i} seed {rep.seed}: decodes={decodes} identical={identical}")
    return EXIT_OK if ok_all else EXIT_DOMAIN


# ---------------------------------------------------------------------------
# parser


def _add_globals(p, default):
    d = (lambda v: v) if default else (lambda v: argparse.SUPPRESS)
    p.add_argument("--seed-base", type=int, default=d(0), help="first seed (default 0)")
    p.add_argument("--budget", type=int, default=d(DEFAULT_BUDGET), help="step budget per run")
    p.add_argument("--out", default=d(None), help="write JSON output here")


def _add_problem_args(p, required=False):
    p.add_argument("--problem", choices=P.PROBLEMS, required=required)
    p.add_argument("--graph", help="edge-list file, one 'u v' pair per line")
    p.add_argument("--family", choices=FAMILIES + ("tree",), help="generated graph family")
    p.add_argument("--n", type=int, help="vertices, sequence length, or K_n order")
    p.add_argument("--degree", type=int, help="degree for regular graphs, max degree for trees")
    p.add_argument("--graph-seed", type=int, dest="graph_seed")
    p.add_argument("--colors", type=int)
    p.add_argument("--strategy", choices=P.acyclic.STRATEGIES)
    p.add_argument("--alphabet", type=int, help="list size for nonrep-seq")
    p.add_argument("--k", type=int, help="red clique order for ramsey")
    p.add_argument("--p", type=float, help="blue probability for ramsey")
    p.add_argument("--q", type=float, help="marginal for the coloring choice system")
    p.add_argument("--delta", type=int, help="max degree (check/threshold)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lalkit", description=__doc__.splitlines()[0])
    _add_globals(parser, True)
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="run the resampling engine")
    _add_globals(s, False)
    _add_problem_args(s)
    s.add_argument("--lists", help="JSON file with one list per position (nonrep-seq)")
    s.add_argument("--system", help="JSON choice system (blocks, forbidden, marginals)")
    s.add_argument("--max-half-length", type=int, dest="max_half_length",
                   help="nonrep-color witness cap; 0 means none")
    s.add_argument("--seeds", type=int, default=1, help="number of runs")
    s.add_argument("--seed-list", type=int, nargs="+", dest="seed_list")
    s.add_argument("--config", help="ExperimentConfig JSON instead of flags")
    s.add_argument("--workers", type=int, default=None)
    s.set_defaults(func=cmd_solve)

    for name, aliases in (("check-condition", ["check"]),):
        c = sub.add_parser(name, aliases=aliases, help="evaluate the weight condition")
        _add_globals(c, False)
        _add_problem_args(c, required=True)
        c.add_argument("--f", type=float, help="check this weight instead of the default")
        c.add_argument("--verbose", "-v", action="store_true", help="one line per generator")
        c.set_defaults(func=cmd_check)

    t = sub.add_parser("threshold", help="colors, max n, or fixpoint weight")
    _add_globals(t, False)
    _add_problem_args(t, required=True)
    t.add_argument("--y", type=float, help="free parameter for nonrep-color")
    t.set_defaults(func=cmd_threshold)

    v = sub.add_parser("validate", help="re-check a solve report with the independent validators")
    _add_globals(v, False)
    v.add_argument("report")
    v.set_defaults(func=cmd_validate)

    r = sub.add_parser("replay", help="decode traces and rerun seeds bit-for-bit")
    _add_globals(r, False)
    r.add_argument("report")
    r.add_argument("--run", type=int)
    r.set_defaults(func=cmd_replay)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, GraphParseError, FileNotFoundError, IsADirectoryError,
            json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DegenerateDelta, InvalidOrder, ValueError, ArithmeticError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
