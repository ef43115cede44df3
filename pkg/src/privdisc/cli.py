"""Command-line surface: solve scenario files, run presets, emit CSV reports.

Exit codes: 0 on success, 1 on parse/solver errors, 2 when a verification
or reference check fails.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import geometry
from .closedform import TwoBinaryParams, two_binary_scenario, two_binary_solve
from .engine import (DisclosureReport, self_disclosure, solve_capacity)
from .errors import PrivDiscError
from .heuristics import partial_processing, preprocess_chain
from .oracle import verify_mapping
from .presets import PRESET_NAMES, random_latent_channel, run_preset
from .probability import Channel
from .scenario_io import parse_mapping_file, parse_scenario_file

__all__ = ["main", "emit_csv"]


def emit_csv(records, path: str | Path, columns=None) -> None:
    """Write records as CSV: header row, 10 significant digits, stable order."""
    records = list(records)
    if not records:
        raise PrivDiscError("refusing to write an empty CSV")
    if columns is None:
        columns = list(records[0].keys())

    def fmt(v) -> str:
        if isinstance(v, bool):
            return str(v)
        if isinstance(v, (int, np.integer)):
            return str(int(v))
        if isinstance(v, (float, np.floating)):
            return f"{float(v):.10g}"
        return str(v)

    lines = [",".join(columns)]
    for rec in records:
        lines.append(",".join(fmt(rec.get(c, "")) for c in columns))
    Path(path).write_text("\n".join(lines) + "\n")


def _print_report(report: DisclosureReport, out) -> None:
    print(f"capacity            : {report.capacity:.10g} bits", file=out)
    print(f"upper bound         : {report.upper_bound:.10g} bits", file=out)
    print(f"feasible            : {report.feasible}", file=out)
    print(f"output cardinality  : {report.y_cardinality}", file=out)
    print(f"rank / nullity      : {report.rank} / {report.nullity}", file=out)
    print(f"alternative optimum : {report.alternative_optimum}", file=out)
    print("mapping P(y | dataset outcome), one row per output symbol:", file=out)
    for row in report.mapping.cond_y_given_dataset.matrix:
        print("  [" + "  ".join(f"{v:.6f}" for v in row) + "]", file=out)
    print("privacy residuals   : "
          + "  ".join(f"{v:.3e}" for v in report.residuals), file=out)


def _check_report(scenario, report: DisclosureReport, tol: float) -> bool:
    result = verify_mapping(scenario, report.mapping, tol=tol)
    status = "PASS" if result.passed else "FAIL"
    print(f"verification ({tol:g}) : {status} "
          f"(tv {max(result.per_sample_tv):.3e}, "
          f"marginal {result.marginal_preservation_error:.3e}, "
          f"bayes {result.markov_consistency_error:.3e})")
    return result.passed


def _cmd_solve(args) -> int:
    scenario = parse_scenario_file(args.scenario).scenario
    report = solve_capacity(scenario, cap=args.cap)
    _print_report(report, sys.stdout)
    return 0 if _check_report(scenario, report, args.tol) else 2


def _cmd_self(args) -> int:
    scenario = parse_scenario_file(args.scenario).scenario
    sd = self_disclosure(scenario, cap=args.cap)
    _print_report(sd.report, sys.stdout)
    print(f"efficiency          : {sd.efficiency:.10g}")
    print(f"efficiency bound    : {sd.efficiency_bound:.10g}")
    return 0 if _check_report(scenario, sd.report, args.tol) else 2


def _cmd_two_binary(args) -> int:
    params = TwoBinaryParams(args.alpha, args.beta, args.r)
    rng = np.random.default_rng(args.seed)
    if args.latent == "xor":
        latent = Channel(np.array([[1.0, 0.0, 0.0, 1.0], [0.0, 1.0, 1.0, 0.0]]))
    else:
        latent = random_latent_channel(rng, 2, 4)
    closed = two_binary_solve(params, latent)
    lp = solve_capacity(two_binary_scenario(params, latent), cap=args.cap)
    print(f"closed-form capacity: {closed.capacity:.10g} bits")
    print(f"LP capacity         : {lp.capacity:.10g} bits")
    print(f"|difference|        : {abs(closed.capacity - lp.capacity):.3e}")
    _print_report(closed, sys.stdout)
    scenario = two_binary_scenario(params, latent)
    return 0 if _check_report(scenario, closed, args.tol) else 2


def _cmd_scan(args) -> int:
    from .asymptotics import capacity_scan
    sf = parse_scenario_file(args.scenario)
    if sf.kind != "generative":
        print("scan requires a generative scenario file", file=sys.stderr)
        return 1
    from .probability import Pmf
    from .scenario_io import _parse_matrix, _parse_vector
    p_floats, _ = _parse_vector(sf.body["p_latent"])
    obs_floats, _ = _parse_matrix(sf.body["observation_channel"])
    scan = capacity_scan(Pmf(p_floats, atol=1e-9), Channel(obs_floats, atol=1e-9),
                         args.n_max, cap=args.cap)
    print(f"learnable information: {scan.c_x_w:.10g} bits")
    print(f"zero-leakage limit   : {scan.c1_zero:.10g} bits")
    for (n, info, capacity), bound in zip(scan.rows, scan.upper_bounds):
        print(f"n={n}: I(latent; dataset) = {info:.10g}, "
              f"capacity = {capacity:.10g}, bound = {bound:.10g}")
    if scan.truncated_at is not None:
        print(f"scan truncated at n={scan.truncated_at} (enumeration cap)")
    if args.output:
        records = [{"n": n, "latent_dataset_information": info,
                    "capacity_bits": capacity, "upper_bound": bound}
                   for (n, info, capacity), bound in zip(scan.rows, scan.upper_bounds)]
        emit_csv(records, args.output)
        print(f"wrote {args.output}")
    return 0


def _cmd_heuristic(args) -> int:
    if args.method == "preprocess":
        if args.q is None or args.n is None:
            print("preprocess needs --q and --n", file=sys.stderr)
            return 1
        report = preprocess_chain(args.q, args.n)
    else:
        if not args.scenario:
            print("partial needs a scenario file", file=sys.stderr)
            return 1
        scenario = parse_scenario_file(args.scenario).scenario
        report = partial_processing(scenario, args.k, cap=args.cap)
    print(f"method              : {args.method}")
    print(f"windows             : {report.windows}")
    print(f"total information   : {report.total_information:.10g} bits")
    print(f"efficiency          : {report.efficiency:.10g}")
    print("per-window terms    : "
          + "  ".join(f"{v:.10g}" for v in report.per_window_terms))
    return 0


def _cmd_verify(args) -> int:
    scenario = parse_scenario_file(args.scenario).scenario
    mapping = parse_mapping_file(args.mapping, scenario.p_dataset)
    result = verify_mapping(scenario, mapping, tol=args.tol)
    print(f"per-sample TV residuals : "
          + "  ".join(f"{v:.3e}" for v in result.per_sample_tv))
    print(f"marginal preservation   : {result.marginal_preservation_error:.3e}")
    print(f"bayes consistency       : {result.markov_consistency_error:.3e}")
    print(f"passed (tol {args.tol:g})     : {result.passed}")
    return 0 if result.passed else 2


def _cmd_preset(args) -> int:
    outcome = run_preset(args.name, cap=args.cap, seed=args.seed)
    out_dir = Path(args.output) if args.output else Path.cwd()
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{outcome.name}.csv"
    emit_csv(outcome.records, csv_path, columns=list(outcome.columns))
    print(f"preset {outcome.name}: wrote {csv_path}")
    for line in outcome.summary:
        print("  " + line)
    print(f"overall: {'PASS' if outcome.passed else 'FAIL'}")
    return 0 if outcome.passed else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="privdisc",
        description="Data-disclosure mappings with exact per-sample privacy")
    parser.add_argument("--cap", type=int, default=geometry.DEFAULT_SUBSET_CAP,
                        help="vertex enumeration subset cap")
    parser.add_argument("--tol", type=float, default=1e-9,
                        help="verification tolerance")
    parser.add_argument("--output", type=str, default=None,
                        help="output file or directory for CSV results")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for any randomized component")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="optimal disclosure for a scenario file")
    p.add_argument("scenario")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("self", help="self-disclosure for a scenario file")
    p.add_argument("scenario")
    p.set_defaults(func=_cmd_self)

    p = sub.add_parser("two-binary", help="closed form vs LP for two binary samples")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--latent", choices=("xor", "random"), default="xor")
    p.set_defaults(func=_cmd_two_binary)

    p = sub.add_parser("scan", help="capacity versus dataset size")
    p.add_argument("scenario")
    p.add_argument("--n-max", type=int, default=4)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("heuristic", help="windowed or pre-processing heuristics")
    p.add_argument("--method", choices=("partial", "preprocess"), required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("scenario", nargs="?")
    p.set_defaults(func=_cmd_heuristic)

    p = sub.add_parser("verify", help="verify a mapping file against a scenario")
    p.add_argument("scenario")
    p.add_argument("--mapping", required=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("preset", help="run a reference-reproduction preset")
    p.add_argument("name", help=f"one of {', '.join(PRESET_NAMES)}")
    p.set_defaults(func=_cmd_preset)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PrivDiscError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
