"""incidence-lab command line.

Subcommands: gen, count, kkkfree, hilbert, partition, cutting, sweep, fit,
verify.  Exit code 0 only when every selected check passes or is explicitly
skipped; 1 on a failed check; 2 when a budget left the question undecided.
All file outputs are deterministic functions of the arguments, so reruns
are bit-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from fractions import Fraction
from pathlib import Path

from .budgeted import BudgetExceeded
from .constructions import GENERATORS, GeneratorSpec
from .cutting import Circle, Line, default_sample_size, planar_cutting
from .harness import (
    ExperimentConfig,
    PartitionRunStats,
    fit_constant,
    fit_exponent,
    fit_partition_envelope,
    run_sweep,
    sweep_csv,
    sweep_dat,
    sweep_json,
    sweep_result_from_json,
    verify_bounds,
)
from .ideals import NonStabilizingRange, estimate_hilbert_polynomial, hilbert_function, parse_ideal
from .partition import ResolutionTooCoarse, partitioning_polynomial, verify_partition
from .poly import format_polynomial, format_scalar, parse_point
from .predicates import edge_count, instance_from_json, instance_to_json, is_kkk_free

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_UNDECIDED = 2

CSV_COLUMNS_HELP = (
    "CSV columns, in order: generator, size, m, n, edges, "
    "gate_<bound> per selected bound, bound_<bound> per selected bound, "
    "then wall_time only under --timings."
)


def _fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _read(path):
    return Path(path).read_text()


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_points(path):
    """One point per line, coordinates as space-separated rationals."""
    rows = []
    for line in _read(path).splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append(line)
    if not rows:
        raise SystemExit(f"no points in {path}")
    dim = len(rows[0].split())
    return [parse_point(row, dim) for row in rows]


def _load_curves(path):
    """One curve per line: 'line A B C' for Ax+By+C=0, 'circle CX CY R2'."""
    curves = []
    for lineno, raw in enumerate(_read(path).splitlines(), start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        fields = text.split()
        kind, coeffs = fields[0], [Fraction(f) for f in fields[1:]]
        if kind == "line" and len(coeffs) == 3:
            curves.append(Line(*coeffs))
        elif kind == "circle" and len(coeffs) == 3:
            curves.append(Circle(*coeffs))
        else:
            raise SystemExit(f"{path}:{lineno}: expected 'line A B C' or 'circle CX CY R2'")
    if not curves:
        raise SystemExit(f"no curves in {path}")
    return curves


def _json_text(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args):
    params = {}
    for key in ("N", "n", "m", "d"):
        value = getattr(args, key)
        if value is not None:
            params[key] = value
    inst = GeneratorSpec(args.name, params, seed=args.seed).build()
    _emit(instance_to_json(inst), args.out)
    return EXIT_PASS


def cmd_count(args):
    inst = instance_from_json(_read(args.instance))
    try:
        print(edge_count(inst, args.pair_budget))
    except BudgetExceeded as exc:
        print(f"undecided at budget: {exc}")
        return EXIT_UNDECIDED
    return EXIT_PASS


def cmd_kkkfree(args):
    inst = instance_from_json(_read(args.instance))
    verdict = is_kkk_free(inst, args.k, args.budget)
    if verdict.is_true():
        print(f"K_{{{args.k},{args.k}}}-free: yes (explored {verdict.explored})")
        return EXIT_PASS
    if verdict.is_false():
        side, vertices, neighbors = verdict.witness
        print(
            f"K_{{{args.k},{args.k}}}-free: no "
            f"(side {side}, vertices {list(vertices)}, common neighbors {list(neighbors)})"
        )
        return EXIT_FAIL
    print(f"undecided at budget (explored {verdict.explored})")
    return EXIT_UNDECIDED


def cmd_hilbert(args):
    ideal = parse_ideal(_read(args.ideal))
    for m in args.m:
        print(f"h({m}) = {hilbert_function(ideal, m)}")
    if args.fit:
        lo, hi = args.fit
        try:
            est = estimate_hilbert_polynomial(ideal, lo, hi)
        except NonStabilizingRange as exc:
            print(f"no stable difference order on [{lo}, {hi}]: {exc}")
            return EXIT_UNDECIDED
        print(f"degree {est.degree}")
        print(f"leading coefficient {format_scalar(est.leading_coefficient)}")
        print(f"stabilized at m = {est.stabilization_m}")
    return EXIT_PASS


def cmd_partition(args):
    points = _load_points(args.points)
    ideal = parse_ideal(_read(args.ideal)) if args.ideal else None
    try:
        pp = partitioning_polynomial(
            points,
            args.r,
            ideal=ideal,
            resolution=args.grid_res,
            auto_refine=args.auto_refine,
        )
    except ResolutionTooCoarse as exc:
        print(f"grid too coarse: {exc}", file=sys.stderr)
        return EXIT_FAIL
    m = len(points)
    cap = -(-m // args.r)
    counts = sorted(pp.per_component_counts.values())
    heaviest = counts[-1] if counts else 0
    ok = heaviest <= cap and verify_partition(pp, points)
    if ideal is not None and ideal.declared_variety_dim is not None:
        dprime = ideal.declared_variety_dim
    else:
        dprime = len(points[0])
    first_round = pp.per_round_degrees[0] if pp.per_round_degrees else 0
    run = PartitionRunStats(
        m=m, r=args.r, dprime=dprime,
        degree=pp.degree_certificate, first_round_degree=first_round,
    )
    envelope = fit_partition_envelope([run])
    doc = {
        "schema": "incidence-partition/v1",
        "m": m,
        "r": args.r,
        "dim": len(points[0]),
        "resolution": pp.resolution,
        "polynomial": format_polynomial(pp.g),
        "degree": pp.degree_certificate,
        "per_round_bisector_degrees": list(pp.per_round_degrees),
        "rounds": pp.rounds,
        "component_histogram": {str(size): mult for size, mult in sorted(Counter(counts).items())},
        "max_component_count": heaviest,
        "count_cap": cap,
        "envelope": {"c1": envelope.c1, "c_d": envelope.c_d, "dprime": dprime},
        "within_cap": ok,
    }
    _emit(_json_text(doc), args.out)
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_cutting(args):
    curves = _load_curves(args.curves)
    result = planar_cutting(
        curves,
        args.r,
        seed=args.seed,
        sample_size=args.sample_size,
        acceptance_factor=args.factor,
        max_retries=args.retries,
    )
    doc = {
        "schema": "incidence-cutting/v1",
        "curves": result.curve_count,
        "r": result.r,
        "seed": result.seed,
        "sample_size_default": default_sample_size(args.r, len(curves)),
        "sample_size": result.sample_size,
        "acceptance_factor": format_scalar(result.acceptance_factor),
        "threshold": format_scalar(result.threshold),
        "attempts": result.attempts,
        "accepted": result.accepted,
        "cell_count": result.cell_count,
        "max_crossing": result.max_crossing,
        "crossing_counts": list(result.crossing_counts),
        "sampled_indices": list(result.sampled_indices),
    }
    _emit(_json_text(doc), args.out)
    return EXIT_PASS if result.accepted else EXIT_FAIL


def _build_config(args):
    bound_params = {}
    for item in args.bound_param:
        name, _, value = item.partition("=")
        if not value:
            raise SystemExit(f"--bound-param wants NAME=INT, got {item!r}")
        bound_params[name] = int(value)
    return ExperimentConfig(
        generator=GeneratorSpec(args.generator, {}, seed=args.seed),
        sizes=tuple(int(s) for s in args.sizes.split(",") if s),
        k=args.k,
        epsilon=args.epsilon,
        bounds=tuple(b for b in args.bounds.split(",") if b),
        seed=args.seed,
        grid_resolution=args.grid_res,
        pair_budget=args.pair_budget,
        kkk_budget=args.kkk_budget,
        sphere_budget=args.sphere_budget,
        bound_params=bound_params,
    )


def cmd_sweep(args):
    cfg = _build_config(args)
    result = run_sweep(cfg)
    wrote = False
    if args.csv:
        Path(args.csv).write_text(sweep_csv(result, timings=args.timings))
        wrote = True
    if args.json:
        Path(args.json).write_text(sweep_json(result, timings=args.timings))
        wrote = True
    if args.dat:
        Path(args.dat).write_text(sweep_dat(result))
        wrote = True
    if not wrote:
        sys.stdout.write(sweep_json(result, timings=args.timings))
    if result.aborted:
        print(f"aborted: {result.aborted}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_PASS


def cmd_fit(args):
    result = sweep_result_from_json(_read(args.report))
    rows = [(row.m, row.edges) for row in result.rows if row.edges]
    fit = fit_exponent(rows)
    print(f"rows {len(rows)}")
    print(f"slope {fit.slope!r}")
    print(f"intercept {fit.intercept!r}")
    print(f"stderr {'-' if fit.stderr is None else repr(fit.stderr)}")
    if args.target is not None:
        ok = abs(fit.slope - args.target) <= args.tolerance
        print(f"target {args.target!r} tolerance {args.tolerance!r}: {'pass' if ok else 'fail'}")
        return EXIT_PASS if ok else EXIT_FAIL
    return EXIT_PASS


def cmd_verify(args):
    result = sweep_result_from_json(_read(args.report))
    if args.fit_constant:
        constant = fit_constant(result)
        print(f"fitted constant {_scalar_text(constant)}")
    else:
        constant = args.constant
    report = verify_bounds(result, constant)
    for check in report.checks:
        allowed = "-" if check.allowed is None else _scalar_text(check.allowed)
        edges = "-" if check.edges is None else check.edges
        print(f"size {check.size} {check.bound}: {check.status} (edges {edges}, allowed {allowed})")
    statuses = [check.status for check in report.checks]
    if "fail" in statuses:
        print("verdict: fail")
        return EXIT_FAIL
    if "undecided" in statuses:
        print("verdict: undecided")
        return EXIT_UNDECIDED
    print("verdict: pass")
    return EXIT_PASS


def _scalar_text(value):
    if isinstance(value, (int, Fraction)):
        return format_scalar(Fraction(value))
    return repr(value)


# ---------------------------------------------------------------------------
# parser


def build_parser():
    parser = argparse.ArgumentParser(
        prog="incidence-lab",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("--name", required=True, choices=sorted(GENERATORS))
    p.add_argument("--N", type=int, help="grid side (st_grid, unit_grid)")
    p.add_argument("--n", type=int, help="point count (unit_r4, scattered_unit_r4, hyperplane_dual)")
    p.add_argument("--m", type=int, help="left count (hyperplane_dual)")
    p.add_argument("--d", type=int, help="ambient dimension (hyperplane_dual)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write here instead of stdout")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("count", help="count edges of an instance exactly")
    p.add_argument("--instance", required=True)
    p.add_argument("--pair-budget", type=int, default=20_000_000)
    p.set_defaults(fn=cmd_count)

    p = sub.add_parser("kkkfree", help="decide K_{k,k}-freeness within a budget")
    p.add_argument("--instance", required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--budget", type=int, default=2_000_000)
    p.set_defaults(fn=cmd_kkkfree)

    p = sub.add_parser("hilbert", help="Hilbert function values and growth fit")
    p.add_argument("--ideal", required=True, help="ideal file, one polynomial per line")
    p.add_argument("--m", type=int, action="append", default=[], help="degree to evaluate (repeatable)")
    p.add_argument("--fit", type=int, nargs=2, metavar=("LO", "HI"), help="estimate degree and leading coefficient on [LO, HI]")
    p.set_defaults(fn=cmd_hilbert)

    p = sub.add_parser("partition", help="partitioning polynomial for a point file")
    p.add_argument("--points", required=True, help="one point per line, rational coordinates")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--ideal", help="restrict to this variety")
    p.add_argument("--grid-res", type=int, default=16)
    p.add_argument("--auto-refine", action="store_true")
    p.add_argument("--out", help="write report JSON here instead of stdout")
    p.set_defaults(fn=cmd_partition)

    p = sub.add_parser("cutting", help="1/r cutting of a line/circle family")
    p.add_argument("--curves", required=True, help="one per line: 'line A B C' or 'circle CX CY R2'")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sample-size", type=int, help="override the default sample size")
    p.add_argument("--factor", type=_fraction, default=Fraction(8), help="acceptance constant c in c*n/r")
    p.add_argument("--retries", type=int, default=3)
    p.add_argument("--out", help="write report JSON here instead of stdout")
    p.set_defaults(fn=cmd_cutting)

    p = sub.add_parser(
        "sweep",
        help="size sweep with bounds and hypothesis gates",
        epilog=CSV_COLUMNS_HELP,
    )
    p.add_argument("--generator", required=True, choices=sorted(GENERATORS))
    p.add_argument("--sizes", required=True, help="comma-separated, strictly increasing")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--epsilon", type=_fraction, default=Fraction(1, 10))
    p.add_argument("--bounds", default="planar", help="comma-separated bound names")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid-res", type=int, default=16)
    p.add_argument("--pair-budget", type=int, default=20_000_000)
    p.add_argument("--kkk-budget", type=int, default=2_000_000)
    p.add_argument("--sphere-budget", type=int, default=200_000)
    p.add_argument("--bound-param", action="append", default=[], metavar="NAME=INT")
    p.add_argument("--csv", help="write CSV here")
    p.add_argument("--json", help="write JSON report here")
    p.add_argument("--dat", help="write gnuplot data here")
    p.add_argument("--timings", action="store_true", help="include wall times in outputs")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("fit", help="fit the edge-growth exponent of a sweep report")
    p.add_argument("--report", required=True, help="sweep JSON file")
    p.add_argument("--target", type=float, help="expected slope")
    p.add_argument("--tolerance", type=float, default=0.06)
    p.set_defaults(fn=cmd_fit)

    p = sub.add_parser("verify", help="check edges <= c*bound rows of a sweep report")
    p.add_argument("--report", required=True, help="sweep JSON file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--constant", type=_fraction, help="corpus-wide constant c")
    group.add_argument("--fit-constant", action="store_true", help="fit the smallest passing c")
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
