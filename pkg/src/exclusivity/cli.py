"""Command-line front end.

Exit codes: 0 success / certified, 1 negative domain verdict, 2 input
error, 3 solver failure.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import fixtures
from .bounds import GraphTooLargeError, SolverError, bounds_report
from .exact import format_fraction
from .expsim import (DEFAULT_BIN_WIDTH, DEFAULT_HIST_UPPER, NoiseModel, certify_from_report,
                     run_experiment)
from .graph import ExclusivityGraph, GraphFormatError
from .realization import RealizationFormatError, load_realization, realization_report

DEFAULT_SEED = 1729
DEFAULT_SHOTS = 1_000_000

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_SOLVER = 0, 1, 2, 3

SCHEMAS = """\
file formats:
  graph        {"n": <int>, "edges": [[i, j], ...]}   1-based, no loops or duplicates
  realization  {"dimension": d, "state": [a_1, ..., a_d],
                "vectors": {"1": [a_1, ..., a_d], ...}}
               each amplitude is an integer, a "p/q" string or a
               ["re", "im"] pair of those
  report       JSON written by `simulate` (input of `certify --report`)
  csv output   bounds: vertex,weight,in_witness   verify: vertex,probability
               simulate: bin_left,bin_right,occurrences
               certify: i,j,epsilon

Without --graph / --realization the bundled ten-vertex fixtures are used.
exit codes: 0 ok/certified, 1 negative verdict, 2 input error, 3 solver failure
"""


class InputError(Exception):
    pass


def _load_graph(path) -> ExclusivityGraph:
    if path is None:
        return fixtures.ten_vertex_graph()
    try:
        return ExclusivityGraph.load(path)
    except OSError as exc:
        raise InputError(f"graph: cannot read {path} ({exc.strerror})") from exc
    except GraphFormatError as exc:
        raise InputError(f"graph {path}: {exc}") from exc


def _load_realization(path):
    if path is None:
        return fixtures.ten_vertex_realization()
    try:
        return load_realization(path)
    except OSError as exc:
        raise InputError(f"realization: cannot read {path} ({exc.strerror})") from exc
    except RealizationFormatError as exc:
        raise InputError(f"realization {path}: {exc}") from exc


def _noise(args) -> NoiseModel:
    try:
        return NoiseModel(args.depolarizing, args.misalign_sigma, args.shots)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _emit(args, text: str):
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def _compatible_inputs(args):
    g = _load_graph(args.graph)
    psi, fam = _load_realization(args.realization)
    if fam.size != g.n:
        raise InputError(f"index mismatch: realization has {fam.size} vectors, graph has {g.n} vertices")
    if psi.dimension != fam.dimension:
        raise InputError(f"dimension mismatch: state {psi.dimension}, vectors {fam.dimension}")
    return g, psi, fam


def cmd_bounds(args) -> int:
    g = _load_graph(args.graph)
    report = bounds_report(g, tol=args.tol)
    if args.format == "csv":
        lines = ["vertex,weight,in_witness"]
        lines += [f"{v},{format_fraction(report.alpha_star.weights[v])},{int(v in report.alpha_witness.members)}"
                  for v in g.vertices]
        _emit(args, "\n".join(lines))
    else:
        _emit(args, _dump(report.to_dict()))
    return EXIT_OK


def cmd_verify(args) -> int:
    g, psi, fam = _compatible_inputs(args)
    rep = realization_report(psi, fam, g, tol=args.tol)
    if args.format == "csv":
        d = rep.to_dict()["per_vertex_probabilities"]
        _emit(args, "\n".join(["vertex,probability"] + [f"{k},{p}" for k, p in d.items()]))
    else:
        _emit(args, _dump(rep.to_dict()))
    return EXIT_OK if rep.compatible else EXIT_NEGATIVE


def _simulate(args):
    g, psi, fam = _compatible_inputs(args)
    noise = _noise(args)
    return run_experiment(psi, fam, g, noise, args.seed, workers=args.workers,
                          bin_width=args.bin_width, hist_upper=args.hist_upper)


def cmd_simulate(args) -> int:
    report = _simulate(args)
    if args.format == "csv":
        _emit(args, f"# seed={args.seed}\n" + report.hist.to_csv())
    else:
        _emit(args, _dump(report.to_dict()))
    return EXIT_OK


def cmd_certify(args) -> int:
    if args.report:
        try:
            data = json.loads(Path(args.report).read_text())
            eps = certify_from_report(data)
            seed = data.get("seed")
        except OSError as exc:
            raise InputError(f"report: cannot read {args.report} ({exc.strerror})") from exc
        except (json.JSONDecodeError, KeyError, TypeError, ValueError, IndexError) as exc:
            raise InputError(f"report {args.report}: malformed ({exc!r})") from exc
    else:
        eps = _simulate(args).epsilon
        seed = args.seed
    if args.format == "csv":
        lines = [f"# seed={seed}", "i,j,epsilon"]
        lines += [f"{i},{j},{v:.12g}" for (i, j), v in sorted(eps.per_edge_epsilon.items())]
        _emit(args, "\n".join(lines))
    else:
        _emit(args, _dump({"seed": seed, **eps.to_dict()}))
    return EXIT_OK if eps.certified else EXIT_NEGATIVE


BENCH_BUDGETS = {"bounds": 5.0, "simulate": 60.0}


def cmd_bench(args) -> int:
    """Time the bounds and simulation pipelines against their runtime budgets.

    Only verdicts go to the report (keeping it reproducible); timings go to stderr.
    """
    g = _load_graph(args.graph)
    t0 = time.perf_counter()
    rep = bounds_report(g, tol=args.tol)
    t_bounds = time.perf_counter() - t0
    t0 = time.perf_counter()
    sim = _simulate(args)
    t_sim = time.perf_counter() - t0
    print(f"bounds: {t_bounds:.3f} s, simulate: {t_sim:.3f} s", file=sys.stderr)
    out = {
        "seed": args.seed,
        "bounds": {"alpha": rep.alpha, "alpha_star": format_fraction(rep.alpha_star.value),
                   "theta": float(f"{rep.theta.value:.6f}"),
                   "budget_s": BENCH_BUDGETS["bounds"], "within_budget": t_bounds < BENCH_BUDGETS["bounds"]},
        "simulate": {"shots_per_setting": args.shots, "certified": sim.epsilon.certified,
                     "budget_s": BENCH_BUDGETS["simulate"], "within_budget": t_sim < BENCH_BUDGETS["simulate"]},
    }
    _emit(args, _dump(out))
    ok = out["bounds"]["within_budget"] and out["simulate"]["within_budget"]
    return EXIT_OK if ok else EXIT_NEGATIVE


COMMANDS = {"bounds": cmd_bounds, "verify": cmd_verify, "simulate": cmd_simulate,
            "certify": cmd_certify, "bench": cmd_bench}

HELP = {
    "bounds": "independence number, Lovász number and fractional packing number of a graph",
    "verify": "check a quantum realization against a graph; exit 1 on orthogonality violations",
    "simulate": "Monte Carlo photon-counting run: per-vertex table, exclusivity matrix, histogram",
    "certify": "epsilon-robustness verdict from a fresh run or a saved report; exit 0 iff certified",
    "bench": "runtime check of the bounds and simulation pipelines",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", metavar="PATH", help="graph JSON (default: bundled fixture)")
    common.add_argument("--realization", metavar="PATH", help="realization JSON (default: bundled fixture)")
    common.add_argument("--shots", type=int, default=DEFAULT_SHOTS, metavar="N",
                        help=f"detections per setting (default {DEFAULT_SHOTS})")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, metavar="N",
                        help=f"random seed (default {DEFAULT_SEED})")
    common.add_argument("--depolarizing", type=float, default=0.0, metavar="W",
                        help="depolarizing weight of the prepared states")
    common.add_argument("--misalign-sigma", type=float, default=0.0, metavar="RAD",
                        help="analyzer misalignment scale in radians")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--tol", type=float, default=None,
                        help="SDP tolerance for bounds/bench (default 1e-6); overlap tolerance for verify (default 0)")
    common.add_argument("--report", metavar="PATH", help="certify: saved simulate report to read")
    common.add_argument("--bin-width", type=float, default=DEFAULT_BIN_WIDTH)
    common.add_argument("--hist-upper", type=float, default=DEFAULT_HIST_UPPER)
    common.add_argument("--workers", type=int, default=1, help="threads for Monte Carlo settings")

    parser = argparse.ArgumentParser(
        prog="exclusivity", description="Bounds, realizations and photon-counting simulation "
                                        "for exclusivity-graph tasks.",
        epilog=SCHEMAS, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=HELP[name], description=HELP[name],
                       epilog=SCHEMAS, formatter_class=argparse.RawDescriptionHelpFormatter)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.tol is None:
        args.tol = 0.0 if args.command == "verify" else 1e-6
    try:
        return COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GraphTooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
