"""Command-line interface.

Exit codes are a stable contract: 0 success (or verdict true), 1 input
error, 2 verdict false (no entanglement or no usable angle), 3 internal
consistency failure.  All outputs are deterministic functions of the
input file, flags and seed; wall-clock timings go to stderr only.
"""
from __future__ import annotations

import argparse
import csv
import json
import statistics
import sys
import time

import numpy as np

from . import __version__
from .bell import CertifyOptions, certify
from .gme import alpha_grid, concurrence_coefficients, poly_eval, residual_margins
from .hardy import DegenerateGeometryError, assemble, hardy_vectors, residual_coeffs
from .oracle import classical_gaps, enumerate_bilocal_extremes, nosignaling_bilocal_vertices
from .states import (
    NearSymmetricState,
    dicke_split,
    ghz_state,
    random_near_symmetric,
    state_from_dict,
    w_state,
)

GAP_SLACK = 1e-12


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors, which this tool
    # reserves for verdict-false; remap to the input-error code.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_tolerance_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol-residual", type=float, default=1e-10, help="Hardy residual tolerance")
    parser.add_argument("--tol-purity", type=float, default=1e-9, help="bipartition purity tolerance")
    parser.add_argument("--eps-ent", type=float, default=1e-8, help="entanglement margin threshold")
    parser.add_argument("--eps-max", type=float, default=1e-6, help="non-maximality margin threshold")
    parser.add_argument("--eps-norm", type=float, default=1e-10, help="residual norm threshold")
    parser.add_argument("--grid", type=int, default=1024, help="angle grid size")


def _options_from_args(args, forced_alpha=None) -> CertifyOptions:
    return CertifyOptions(
        tol_residual=args.tol_residual,
        tol_purity=args.tol_purity,
        eps_ent=args.eps_ent,
        eps_max=args.eps_max,
        eps_norm=args.eps_norm,
        grid_points=args.grid,
        forced_alpha=forced_alpha,
    )


def _load_state(path: str) -> NearSymmetricState:
    with open(path, "r", encoding="utf-8") as handle:
        doc = json.load(handle)
    return state_from_dict(doc)


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    else:
        print(text)


def _demo_state(family: str, n: int) -> NearSymmetricState:
    if family == "ghz":
        return ghz_state(n)
    if family == "w":
        return w_state(n)
    if family.startswith("dicke-"):
        try:
            k = int(family.split("-", 1)[1])
        except ValueError:
            raise ValueError(f"unknown demo family {family!r}")
        if not 0 <= k <= n:
            raise ValueError(f"dicke weight {k} out of range 0..{n}")
        return dicke_split(n, k)
    raise ValueError(f"unknown demo family {family!r}")


def cmd_certify(args) -> int:
    try:
        state = _load_state(args.state)
        options = _options_from_args(args, forced_alpha=args.alpha)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report = certify(state, options)
    _emit(report.to_dict(), args.out)
    return 0 if report.verdict else 2


def cmd_sweep(args) -> int:
    try:
        state = _load_state(args.state)
        options = _options_from_args(args)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    alphas = alpha_grid(args.grid)
    coeffs = concurrence_coefficients(state)
    poly_abs = np.abs(poly_eval(coeffs, alphas))
    ent, nonmax, norm_sq = residual_margins(state, alphas)
    passing = (ent > options.eps_ent) & (nonmax > options.eps_max) & (norm_sq > options.eps_norm)

    from .bell import catalonia_lhs
    from .states import embed

    psi = embed(state)
    psi = psi / np.linalg.norm(psi)

    rows = []
    for i, alpha in enumerate(alphas):
        lhs = ""
        if passing[i]:
            try:
                vectors = hardy_vectors(residual_coeffs(state, float(alpha)), eps_norm=options.eps_norm)
                lhs = repr(catalonia_lhs(psi, assemble(state.n, vectors)))
            except (DegenerateGeometryError, ValueError):
                lhs = ""
        rows.append([repr(float(alpha)), repr(float(poly_abs[i])), repr(float(ent[i])),
                     repr(float(nonmax[i])), lhs])

    handle = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.writer(handle)
        writer.writerow(["alpha", "poly_abs", "ent_margin", "nonmax_margin", "catalonia_lhs"])
        writer.writerows(rows)
    finally:
        if args.out:
            handle.close()
    return 0


def cmd_random(args) -> int:
    if args.n < 3:
        print("error: --n must be >= 3", file=sys.stderr)
        return 1
    try:
        options = _options_from_args(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    start = time.perf_counter()
    verdicts_true = 0
    hardy_probs = []
    max_residual = 0.0
    for i in range(args.count):
        state = random_near_symmetric(args.n, seed=args.seed + i, purity_tol=options.tol_purity)
        report = certify(state, options)
        if report.verdict:
            verdicts_true += 1
        if report.hardy_probability is not None:
            hardy_probs.append(report.hardy_probability)
        if report.hardy_residuals is not None:
            max_residual = max(max_residual, max(report.hardy_residuals))
    elapsed = time.perf_counter() - start

    summary = {
        "n": args.n,
        "count": args.count,
        "seed": args.seed,
        "verdicts_true": verdicts_true,
        "verdicts_false": args.count - verdicts_true,
        "hardy_probability_min": min(hardy_probs) if hardy_probs else None,
        "hardy_probability_median": statistics.median(hardy_probs) if hardy_probs else None,
        "max_residual": max_residual,
    }
    # stderr only, to keep the summary byte-identical across reruns
    print(f"certified {args.count} states in {elapsed:.3f}s", file=sys.stderr)
    _emit(summary, args.out)
    return 0 if verdicts_true == args.count else 2


def cmd_demo(args) -> int:
    if args.n < 3:
        print("error: --n must be >= 3", file=sys.stderr)
        return 1
    try:
        state = _demo_state(args.family, args.n)
        options = _options_from_args(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report = certify(state, options)
    _emit(report.to_dict(), args.out)
    return 0 if report.verdict else 2


def cmd_check_bilocal(args) -> int:
    if args.n != 3:
        print("error: exhaustive bilocal checking supports --n 3 only", file=sys.stderr)
        return 1
    if args.model == "general":
        strategies = ((s.describe(), s.accessor()) for s in enumerate_bilocal_extremes(args.n))
    else:
        strategies = nosignaling_bilocal_vertices(args.n)

    count = 0
    for description, accessor in strategies:
        count += 1
        gap_sum, gap_pairs = classical_gaps(accessor, args.n, args.variant)
        if gap_sum > GAP_SLACK or gap_pairs > GAP_SLACK:
            print(
                json.dumps(
                    {
                        "violation": description,
                        "improved_gap": gap_sum,
                        "curchod_gap": gap_pairs,
                        "variant": args.variant,
                        "model": args.model,
                        "checked_before_violation": count,
                    },
                    indent=2,
                    sort_keys=True,
                )
            )
            return 3
    print(f"checked {count} strategies: no violation ({args.model} model, {args.variant} variant)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gmnlcert", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", parents=[], help="certify a state file")
    p.add_argument("--state", required=True, help="path to the state JSON file")
    p.add_argument("--alpha", type=float, default=None, help="force this measurement angle")
    p.add_argument("--out", default=None, help="write the report JSON here instead of stdout")
    _add_tolerance_flags(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("sweep", help="angle sweep of polynomial magnitude and margins (CSV)")
    p.add_argument("--state", required=True)
    p.add_argument("--out", default=None, help="output CSV path (default stdout)")
    _add_tolerance_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("random", help="certify a batch of random states")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    _add_tolerance_flags(p)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("demo", help="certify a built-in state family")
    p.add_argument("--family", required=True, help="ghz, w, or dicke-<k>")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", default=None)
    _add_tolerance_flags(p)
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("check-bilocal", help="exhaustive classical-bound check at n = 3")
    p.add_argument("--n", type=int, default=3)
    p.add_argument(
        "--variant",
        required=True,
        choices=["literal", "generalized"],
        help="pair scoring of the summed expression (must be chosen explicitly)",
    )
    p.add_argument(
        "--model",
        choices=["general", "nosignaling"],
        default="general",
        help="general: deterministic group strategies (may violate); "
        "nosignaling: vertices of the no-signaling bilocal set",
    )
    p.set_defaults(func=cmd_check_bilocal)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


def entry() -> None:
    sys.exit(main())
