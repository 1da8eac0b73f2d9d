"""Batch command line front end.

Every command reads flags, runs the corresponding library call, and emits a
text report (envelope, separator, payload). Payload bytes are deterministic
for fixed flags and seed. Exit codes: 0 on success, 1 when --strict is set
and the scientific verdict is a failure, 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import figures, io
from .bounds import connected_component_bound, critical_point_bound, lojasiewicz_exponent
from .critical import SolverConfig, all_critical_points
from .errors import PolyselError
from .genericity import certify_1d, genericity_report, random_instance
from .growth import (
    coercivity_check,
    error_bound_check,
    goodness_at_infinity,
    sublevel_set_1d,
    verify_loja,
)
from .selections import (
    UnivariateSelection,
    collapse_duplicates,
    decompose_1d,
    enumerate_selections_1d,
    resolve_selection,
)

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_USAGE = 2


def _fmt_set(indices) -> str:
    return ",".join(str(i) for i in indices)


def _fmt_classes(classes) -> str:
    return "|".join(_fmt_set(cls) for cls in classes)


def _fig_path(out: str) -> str:
    stem, _ = os.path.splitext(out)
    return stem + ".png"


def _load(args):
    return io.load_instance(args.instance)


def _selection_for(args, instance, dec=None):
    spec = getattr(args, "selection", None) or "max"
    return resolve_selection(spec, instance, dec)


def _parse_floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise PolyselError(f"bad float list {text!r}") from exc


def _parse_grid(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise PolyselError(f"grid must be lo:hi:step, got {text!r}")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError as exc:
        raise PolyselError(f"bad grid {text!r}") from exc
    return lo, hi, step


def cmd_selections(args) -> int:
    instance = _load(args)
    if instance.n != 1:
        print("error: exact enumeration requires n=1", file=sys.stderr)
        return EXIT_USAGE
    collapsed, groups = collapse_duplicates(instance)
    enum = enumerate_selections_1d(collapsed, cap=args.cap)
    dec = enum.selections[0].decomposition if enum.selections else decompose_1d(collapsed)
    lines = [
        io.kv("n", collapsed.n),
        io.kv("d", collapsed.d),
        io.kv("r", collapsed.r),
        io.kv("duplicates_collapsed", _fmt_classes(g for g in groups if len(g) > 1) or "-"),
        io.kv("count", enum.total_count),
        io.kv("cap", enum.cap),
        io.kv("truncated", enum.truncated),
    ]
    lines += io.table(
        "breakpoints",
        ["index", "value", "enclosure_width", "classes"],
        [
            (k + 1, bp.value, bp.width, _fmt_classes(bp.classes))
            for k, bp in enumerate(dec.points)
        ],
    )
    lines += io.table(
        "labelings",
        ["index", "labels"],
        [(k + 1, _fmt_set(sel.labels)) for k, sel in enumerate(enum.selections)],
    )
    report = io.Report(
        command="selections",
        payload="\n".join(lines) + "\n",
        digest=io.instance_digest(instance),
    )
    io.emit(report, args.out)
    if args.plot:
        figures.instance_figure(
            collapsed, _fig_path(args.out), selections=enum.selections[:8],
            title="enumerated selections",
        )
    return EXIT_OK


def _critical_payload(instance, catalog) -> list[str]:
    lines = [
        io.kv("n", catalog.n),
        io.kv("d", catalog.d),
        io.kv("r", catalog.r),
        io.kv("critical_point_bound", catalog.bound_b0),
        io.kv("count", len(catalog.points)),
        io.kv("non_isolated_suspected", catalog.non_isolated_suspected),
    ]
    lines += io.table(
        "per_active_set",
        ["active_set", "count"],
        [
            (_fmt_set(J), catalog.per_J_counts[J])
            for J in sorted(catalog.per_J_counts, key=lambda j: (len(j), j))
        ],
    )
    lines += io.table(
        "points",
        ["index", "x", "value", "active_set", "mu", "residual",
         "strict_complementarity", "affine_independent",
         "second_order_nondegenerate", "local_type"],
        [
            (
                k + 1,
                io.fmt_seq(p.x),
                p.value,
                _fmt_set(p.J),
                io.fmt_seq(p.mu, sep=";"),
                p.residual,
                p.strict_complementarity,
                p.affine_independent,
                p.second_order_nondegenerate,
                p.local_type,
            )
            for k, p in enumerate(catalog.points)
        ],
    )
    return lines


def cmd_critical(args) -> int:
    instance = _load(args)
    collapsed, groups = collapse_duplicates(instance)
    cfg = SolverConfig(newton_tol=args.newton_tol, tol_active=args.tol_active)
    catalog = all_critical_points(collapsed, cfg)
    lines = [io.kv("duplicates_collapsed",
                   _fmt_classes(g for g in groups if len(g) > 1) or "-")]
    lines += _critical_payload(collapsed, catalog)
    report = io.Report(
        command="critical",
        payload="\n".join(lines) + "\n",
        digest=io.instance_digest(instance),
    )
    io.emit(report, args.out)
    if args.plot:
        figures.instance_figure(collapsed, _fig_path(args.out), catalog=catalog,
                                title="stationary points")
    return EXIT_OK


def cmd_genericity(args) -> int:
    instance = _load(args)
    collapsed, _ = collapse_duplicates(instance)
    catalog = all_critical_points(collapsed, SolverConfig())
    enum = None
    if collapsed.n == 1:
        enum = enumerate_selections_1d(collapsed)
    report_obj = genericity_report(collapsed, catalog, selections=enum)
    lines = [
        io.kv("overall", "PASS" if report_obj.overall else "FAIL"),
        io.kv("selection_count", report_obj.selection_count),
        io.kv("strict_tol", report_obj.strict_tol),
        io.kv("value_tol", report_obj.value_tol),
    ]
    lines += io.table(
        "checks",
        ["name", "passed", "witnesses"],
        [(c.name, c.passed, len(c.witnesses)) for c in report_obj.checks],
    )
    for check in report_obj.checks:
        for w in check.witnesses:
            pairs = " ".join(f"{k}={io.fmt(v) if not isinstance(v, tuple) else io.fmt_seq(v)}"
                             for k, v in w.items())
            lines.append(f"witness {check.name}: {pairs}")
    if collapsed.n == 1:
        cert = certify_1d(collapsed)
        lines += io.table(
            "pair_certificates",
            ["i", "j", "kind", "value", "nonzero"],
            [(c.i, c.j, c.kind, c.value, c.nonzero) for c in cert.pairs],
        )
        lines += io.table(
            "triple_certificates",
            ["i", "j", "k", "value", "nonzero"],
            [(c.i, c.j, c.k, c.value, c.nonzero) for c in cert.triples],
        )
        lines.append(io.kv("exact_certificates_all_nonzero", cert.all_nonzero))
    report = io.Report(
        command="genericity",
        payload="\n".join(lines) + "\n",
        digest=io.instance_digest(instance),
    )
    io.emit(report, args.out)
    if args.plot:
        figures.instance_figure(collapsed, _fig_path(args.out), catalog=catalog,
                                title="PASS" if report_obj.overall else "FAIL")
    if args.strict and not report_obj.overall:
        return EXIT_VERDICT
    return EXIT_OK


def cmd_bounds(args) -> int:
    try:
        lines = [
            io.kv("n", args.n),
            io.kv("d", args.d),
            io.kv("r", args.r),
            io.kv("l", args.l),
            io.kv("critical_point_bound", critical_point_bound(args.n, args.d, args.r)),
            io.kv("connected_component_bound",
                  connected_component_bound(args.n, args.d, args.l)),
            io.kv("lojasiewicz_exponent", lojasiewicz_exponent(args.n, args.d, args.r)),
        ]
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = io.Report(command="bounds", payload="\n".join(lines) + "\n")
    io.emit(report, args.out)
    return EXIT_OK


def _auto_center(instance, selection) -> list[float]:
    if instance.n != 1:
        raise PolyselError("--center is required when n >= 2")
    s = sublevel_set_1d(instance, selection)
    finite = [v for lo, hi in s.intervals for v in (lo, hi) if abs(v) != float("inf")]
    if not finite:
        raise PolyselError("no finite zero found; give --center explicitly")
    return [min(finite, key=lambda v: (abs(v), v))]


def cmd_loja(args) -> int:
    instance = _load(args)
    dec = decompose_1d(collapse_duplicates(instance)[0]) if instance.n == 1 else None
    selection = _selection_for(args, instance, dec)
    if args.center is not None:
        center = list(_parse_floats(args.center))
    else:
        center = _auto_center(instance, selection)
    radii = _parse_floats(args.radii) if args.radii else None
    rep = verify_loja(instance, selection, center, radii=radii,
                      samples_per_radius=args.samples, seed=args.seed,
                      tol_active=args.tol_active)
    lines = [
        io.kv("center", io.fmt_seq(rep.center)),
        io.kv("lojasiewicz_exponent", rep.exponent_denominator),
        io.kv("exponent_used", rep.exponent_used),
        io.kv("samples_per_radius", rep.samples_per_radius),
        io.kv("seed", rep.seed),
        io.kv("overall_min_ratio", rep.overall_min),
        io.kv("verdict", rep.verdict),
        io.kv("note", rep.note),
    ]
    lines += io.table(
        "ratios",
        ["radius", "min_ratio"],
        list(zip(rep.radii, rep.min_ratios)),
    )
    report = io.Report(
        command="loja",
        payload="\n".join(lines) + "\n",
        digest=io.instance_digest(instance),
        seed=str(args.seed),
    )
    io.emit(report, args.out)
    if args.plot:
        figures.loja_figure(rep, _fig_path(args.out))
    if args.strict and rep.verdict != "positive-bounded-below":
        return EXIT_VERDICT
    return EXIT_OK


def cmd_errorbound(args) -> int:
    instance = _load(args)
    dec = decompose_1d(collapse_duplicates(instance)[0]) if instance.n == 1 else None
    selection = _selection_for(args, instance, dec)
    grid = _parse_grid(args.grid) if args.grid else None
    rep = error_bound_check(instance, selection, alpha=args.alpha, grid=grid)
    s = sublevel_set_1d(instance, selection)
    lines = [
        io.kv("alpha", rep.alpha),
        io.kv("alpha_is_default", rep.alpha_is_default),
        io.kv("lojasiewicz_exponent", rep.exponent_denominator),
        io.kv("grid", f"{io.fmt(rep.grid_lo)}:{io.fmt(rep.grid_hi)}:{io.fmt(rep.grid_step)}"),
        io.kv("points_outside", rep.points_outside),
        io.kv("min_local_ratio", rep.min_local_ratio),
        io.kv("min_global_ratio", rep.min_global_ratio),
        io.kv("cbar_estimate", rep.cbar_estimate),
        io.kv("argmin_x", rep.argmin_x),
        io.kv("verdict", rep.verdict),
    ]
    lines += io.table(
        "sublevel_set",
        ["lo", "hi"],
        list(s.intervals),
    )
    report = io.Report(
        command="errorbound",
        payload="\n".join(lines) + "\n",
        digest=io.instance_digest(instance),
    )
    io.emit(report, args.out)
    if args.plot:
        figures.errorbound_figure(instance, selection, s, rep, _fig_path(args.out))
    if args.strict and rep.verdict != "positive":
        return EXIT_VERDICT
    return EXIT_OK


def cmd_goodness(args) -> int:
    instance = _load(args)
    dec = decompose_1d(collapse_duplicates(instance)[0]) if instance.n == 1 else None
    selection = _selection_for(args, instance, dec)
    radii = _parse_floats(args.radii) if args.radii else None
    rep = goodness_at_infinity(instance, selection, radii=radii,
                               samples_per_radius=args.samples, seed=args.seed,
                               tol_active=args.tol_active)
    lines = [
        io.kv("good_at_infinity", rep.good),
        io.kv("c_estimate", rep.c_estimate),
        io.kv("r_estimate", rep.r_estimate),
        io.kv("samples_per_radius", rep.samples_per_radius),
        io.kv("seed", rep.seed),
        io.kv("note", rep.note),
    ]
    lines += io.table(
        "slopes",
        ["radius", "min_slope"],
        list(zip(rep.radii, rep.min_slopes)),
    )
    report = io.Report(
        command="goodness",
        payload="\n".join(lines) + "\n",
        digest=io.instance_digest(instance),
        seed=str(args.seed),
    )
    io.emit(report, args.out)
    if args.plot:
        figures.goodness_figure(rep, _fig_path(args.out))
    if args.strict and not rep.good:
        return EXIT_VERDICT
    return EXIT_OK


def cmd_coercivity(args) -> int:
    instance = _load(args)
    dec = decompose_1d(collapse_duplicates(instance)[0]) if instance.n == 1 else None
    selection = _selection_for(args, instance, dec)
    verdict = coercivity_check(instance, selection)
    lines = [
        io.kv("bounded_below", verdict.bounded_below),
        io.kv("coercive", verdict.coercive),
        io.kv("c_witness", verdict.c_witness),
        io.kv("r_witness", verdict.r_witness),
        io.kv("method", verdict.method),
    ]
    for key in sorted(verdict.details):
        value = verdict.details[key]
        if isinstance(value, (list, tuple)):
            lines.append(io.kv(f"detail_{key}", io.fmt_seq(value)))
        else:
            lines.append(io.kv(f"detail_{key}", value))
    report = io.Report(
        command="coercivity",
        payload="\n".join(lines) + "\n",
        digest=io.instance_digest(instance),
    )
    io.emit(report, args.out)
    if args.plot:
        figures.coercivity_figure(instance, selection, verdict, _fig_path(args.out))
    if args.strict and verdict.bounded_below and not verdict.coercive:
        return EXIT_VERDICT
    return EXIT_OK


def cmd_random(args) -> int:
    if min(args.n, args.d, args.r) < 1:
        print("error: n, d, r must be positive", file=sys.stderr)
        return EXIT_USAGE
    instance = random_instance(args.n, args.d, args.r, args.seed)
    text = io.dumps_instance(instance)
    if args.out:
        io.write_text_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _add_common(parser, instance_required=True, selection=False, strict=False):
    if instance_required:
        parser.add_argument("--instance", required=True,
                            help="instance JSON file")
    parser.add_argument("--out", default=None, help="write the report here")
    parser.add_argument("--plot", action="store_true",
                        help="render a PNG figure next to --out")
    if selection:
        parser.add_argument("--selection", default="max",
                            help='selection spec: "max", "min", "index:i", '
                                 'a max-min expression, or "piecewise1d:l1,l2,..."')
    if strict:
        parser.add_argument("--strict", action="store_true",
                            help="exit 1 when the scientific verdict fails")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polysel",
        description="Continuous selections of polynomials: enumeration, "
                    "stationary points, genericity audits, growth checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("selections", help="enumerate all selections (n=1)")
    _add_common(p)
    p.add_argument("--cap", type=int, default=10000,
                   help="list at most this many labelings")
    p.set_defaults(func=cmd_selections)

    p = sub.add_parser("critical", help="catalog stationary points of all selections")
    _add_common(p)
    p.add_argument("--tol-active", dest="tol_active", type=float, default=1e-7)
    p.add_argument("--newton-tol", dest="newton_tol", type=float, default=1e-11)
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("genericity", help="audit genericity conditions at computed points")
    _add_common(p, strict=True)
    p.set_defaults(func=cmd_genericity)

    p = sub.add_parser("bounds", help="print the closed-form bounds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bounds, plot=False)

    p = sub.add_parser("loja", help="corroborate the slope-value inequality at a zero")
    _add_common(p, selection=True, strict=True)
    p.add_argument("--center", default=None, help="comma-separated center point")
    p.add_argument("--radii", default=None, help="comma-separated decreasing radii")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol-active", dest="tol_active", type=float, default=1e-7)
    p.set_defaults(func=cmd_loja)

    p = sub.add_parser("errorbound", help="check distance bounds outside the sublevel set")
    _add_common(p, selection=True, strict=True)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--grid", default=None, help="lo:hi:step")
    p.set_defaults(func=cmd_errorbound)

    p = sub.add_parser("goodness", help="sample the slope floor at infinity")
    _add_common(p, selection=True, strict=True)
    p.add_argument("--radii", default=None, help="comma-separated increasing radii")
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol-active", dest="tol_active", type=float, default=1e-7)
    p.set_defaults(func=cmd_goodness)

    p = sub.add_parser("coercivity", help="decide boundedness and coercivity")
    _add_common(p, selection=True, strict=True)
    p.set_defaults(func=cmd_coercivity)

    p = sub.add_parser("random", help="write a reproducible random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_random)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "plot", False) and not getattr(args, "out", None):
        print("error: --plot needs --out", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (PolyselError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
