"""Command-line front end: solve, generate, extract substrings, inspect walk constants.

Exit codes: 0 solution, 1 unreadable input, 2 refusal or bad parameters,
3 no solution within the budget.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import approx, exact, fpt, kmers, planted, reductions, walks
from .core import Alphabet, Instance, Solution, comment_lines, format_instance, parse_instance
from .errors import InstanceFormatError, RefusalError

EXIT_OK, EXIT_PARSE, EXIT_REFUSED, EXIT_NO_SOLUTION = 0, 1, 2, 3

ALGORITHMS = ("exact-subsets", "exact-centers", "ptas", "eptas", "max-nonoutliers", "fpt")


class _Refused(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InstanceFormatError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


# --- solve ----------------------------------------------------------------


def _run_solver(args, instance: Instance) -> Solution | None:
    algo = args.algorithm
    if algo == "exact-subsets":
        return exact.solve_exact_subsets(instance, args.cap or exact.DEFAULT_CAP)
    if algo == "exact-centers":
        return exact.solve_exact_centers(instance, args.cap or exact.DEFAULT_CAP)
    if algo == "ptas":
        return approx.ptas_min_distance(instance, args.epsilon, args.r, args.cap or approx.DEFAULT_PTAS_CAP)
    if algo == "eptas":
        params = approx.ApproxParams(
            epsilon=args.epsilon,
            r=args.r,
            repetitions=args.repetitions,
            c=args.c,
            seed=args.seed,
            threads=args.threads,
        )
        return approx.eptas_min_distance(instance, params)
    if algo == "max-nonoutliers":
        return approx.ptas_max_nonoutliers(
            instance, None, args.epsilon, args.r, args.cap or approx.DEFAULT_PTAS_CAP
        )
    config = fpt.FptConfig(delta_cap=args.delta_cap, cross_check=args.cross_check)
    return fpt.solve_fpt(instance, config)


def result_document(algorithm: str, instance: Instance, solution: Solution | None, elapsed_ms: float | None) -> dict:
    if solution is None:
        doc = {"algorithm": algorithm, "value": None, "consensus": None, "retained": [],
               "outliers": list(range(instance.n))}
        flags = ["no-solution"]
    else:
        doc = {
            "algorithm": algorithm,
            "value": solution.value,
            "consensus": solution.consensus,
            "retained": list(solution.retained),
            "outliers": list(solution.outliers(instance.n)),
        }
        flags = list(solution.flags)
    if elapsed_ms is not None:
        doc["wall_time_ms"] = round(elapsed_ms, 3)
    doc["flags"] = flags
    return doc


def cmd_solve(args) -> int:
    instance = parse_instance(_read_text(args.instance))
    start = time.perf_counter()
    solution = _run_solver(args, instance)
    elapsed = None if args.no_timing else (time.perf_counter() - start) * 1000.0
    doc = result_document(args.algorithm, instance, solution, elapsed)
    _emit(json.dumps(doc) + "\n", args.out)
    if solution is None:
        _log(f"{args.algorithm}: no solution with total distance <= {instance.d}")
        return EXIT_NO_SOLUTION
    _log(
        f"{args.algorithm}: value {solution.value}, kept {len(solution.retained)} of {instance.n}, "
        f"consensus {solution.consensus}"
        + (f" [{', '.join(solution.flags)}]" if solution.flags else "")
    )
    return EXIT_OK


# --- gen ------------------------------------------------------------------


def cmd_gen(args) -> int:
    mode = args.mode
    if mode == "planted":
        result = planted.planted_instance(
            args.n, args.length, args.k, sigma=args.sigma, p=args.p, seed=args.seed, d=args.d
        )
        comments = [result.ground_truth(), f"planted n={args.n} l={args.length} k={args.k} sigma={args.sigma} p={args.p} seed={args.seed}"]
        text = format_instance(result.instance, comments)
    elif mode == "mcc":
        graph = reductions.parse_partitioned_graph(_read_text(args.graph))
        consts = walks.gap_constants(graph.k, max(len(graph.edges), 1), l1=args.l1)
        cells = 2 * len(graph.edges) * consts.length
        if cells > args.max_cells:
            raise _Refused(
                f"construction would hold {cells} symbols (L={consts.length}), above --max-cells={args.max_cells}; "
                "pass a smaller --l1"
            )
        built = reductions.mcc_to_csw_random(graph, seed=args.seed, l1=args.l1)
        c = built.constants
        comments = [
            f"mcc k={c.k} m={c.m} n*={c.n_star} l1={c.l1} l1_required={c.l1_required} l2={c.l2} seed={args.seed}",
            f"D_yes={c.d_yes} D_no={c.d_no} E_yes={c.e_yes} d=ceil(D_yes)",
        ]
        text = format_instance(built.instance(), comments)
    elif mode == "k-hardness":
        source = parse_instance(_read_text(args.instance))
        text = format_instance(reductions.k_hardness_reduction(source), [f"k-hardness image of n={source.n} l={source.length} k={source.k} d={source.d}"])
    else:
        graph, _, _ = reductions.parse_graph(_read_text(args.graph))
        inst = reductions.clique_to_csw_unbounded(graph, args.t)
        text = format_instance(inst, [f"clique t={args.t} |V|={len(graph.vertices)} |E|={len(graph.edges)}"])
    _emit(text, args.out)
    return EXIT_OK


# --- kmers ----------------------------------------------------------------


def cmd_kmers(args) -> int:
    alphabet = Alphabet.of(args.alphabet)
    reads = kmers.parse_reads(_read_text(args.reads))
    strings = kmers.extract(reads, args.length, alphabet)
    if (args.k is None) != (args.d is None):
        raise _Refused("--k and --d must be given together")
    if args.k is not None and strings and not 0 <= args.k < len(strings):
        raise _Refused(f"--k must lie in [0, {len(strings)})")
    _emit(kmers.format_kmers(strings, args.length, alphabet, args.k, args.d), args.out)
    _log(f"{len(strings)} substrings of length {args.length} from {len(reads)} reads")
    return EXIT_OK


# --- walks ----------------------------------------------------------------


def cmd_walks(args) -> int:
    what = args.quantity
    if what == "x":
        print(walks.expected_abs_offset(args.i, args.r, args.t))
    elif what == "w":
        print(walks.walk_count(args.i, args.r, args.t))
    elif what == "delta":
        if args.n_star % 4:
            _log(f"warning: n*={args.n_star} is not divisible by 4, so the gap need not be positive")
        print(walks.delta_gap(args.n_star))
    elif what == "delta2":
        print(walks.delta2_gap(args.k))
    else:
        consts = walks.gap_constants(args.k, args.m, l1=args.l1, literal=args.literal)
        sys.stdout.write(consts.report())
    return EXIT_OK


# --- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="csoutliers", description="Consensus strings with outliers")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("instance", help="instance file, or - for stdin")
    p.add_argument("--algorithm", "-a", choices=ALGORITHMS, required=True)
    p.add_argument("--epsilon", type=_fraction, default=Fraction(1, 4))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=None, help="enumeration cap (exact: 1e7, ptas: 1e6)")
    p.add_argument("--delta-cap", type=int, default=4)
    p.add_argument("--repetitions", type=int, default=None, help="eptas trials (default: derived, capped at 10000)")
    p.add_argument("--r", type=int, default=None, help="sample size override")
    p.add_argument("--c", type=_fraction, default=None, help="eptas outlier fraction bound")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default $CSOUTLIERS_THREADS or 1)")
    p.add_argument("--no-cross-check", dest="cross_check", action="store_false")
    p.add_argument("--no-timing", action="store_true", help="omit wall_time_ms from the result")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_solve)

    g = sub.add_parser("gen", help="generate an instance")
    gsub = g.add_subparsers(dest="mode", required=True)
    gp = gsub.add_parser("planted")
    gp.add_argument("--n", type=int, required=True)
    gp.add_argument("--length", "-l", type=int, required=True)
    gp.add_argument("--k", type=int, required=True)
    gp.add_argument("--sigma", type=int, default=4)
    gp.add_argument("--p", type=float, default=0.1)
    gp.add_argument("--d", type=int, default=None)
    gm = gsub.add_parser("mcc")
    gm.add_argument("graph", help="partitioned graph file")
    gm.add_argument("--l1", type=int, default=None, help="vertex block length (default: concentration bound)")
    gm.add_argument("--max-cells", type=int, default=10**8)
    gk = gsub.add_parser("k-hardness")
    gk.add_argument("instance")
    gc = gsub.add_parser("clique")
    gc.add_argument("graph")
    gc.add_argument("--t", type=int, required=True)
    for sp in (gp, gm, gk, gc):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None)
    g.set_defaults(func=cmd_gen)

    km = sub.add_parser("kmers", help="substrings of reads as instance strings")
    km.add_argument("reads")
    km.add_argument("--length", "-l", type=int, required=True)
    km.add_argument("--alphabet", default="ACGT")
    km.add_argument("--k", type=int, default=None)
    km.add_argument("--d", type=int, default=None)
    km.add_argument("--out", default=None)
    km.set_defaults(func=cmd_kmers)

    w = sub.add_parser("walks", help="exact walk expectations and gap constants")
    wsub = w.add_subparsers(dest="quantity", required=True)
    for name in ("x", "w"):
        wx = wsub.add_parser(name)
        wx.add_argument("i", type=int)
        wx.add_argument("r", type=int)
        wx.add_argument("t", type=int)
    wd = wsub.add_parser("delta")
    wd.add_argument("n_star", type=int)
    wd2 = wsub.add_parser("delta2")
    wd2.add_argument("k", type=int)
    wg = wsub.add_parser("gap")
    wg.add_argument("k", type=int)
    wg.add_argument("m", type=int)
    wg.add_argument("--l1", type=int, default=None)
    wg.add_argument("--literal", action="store_true", help="use n*/2 - |X| as the column cost")
    w.set_defaults(func=cmd_walks)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InstanceFormatError as exc:
        _log(f"error: {exc}")
        return EXIT_PARSE
    except (RefusalError, _Refused, ValueError) as exc:
        _log(f"refused: {exc}")
        return EXIT_REFUSED


if __name__ == "__main__":
    sys.exit(main())
