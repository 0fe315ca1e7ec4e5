"""Command-line interface: one subcommand per engine operation.

Every command can emit a JSON report (--json), and surfaces additionally a
CSV grid and an SVG heatmap.  Invalid parameters exit nonzero; a proof
containing gaps is still a successful run (exit 0, verdict "open") because
the absence of a proof is data, not a failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

from . import report as rpt
from .bounds import (
    BoundSpec,
    GeneralBoundObjective,
    HBoundObjective,
    MuSmallObjective,
    e_max,
    general_bound,
    h_bound,
    range_min,
    s_bound,
)
from .certify import cover_range, prove_dimension
from .search import SearchParams, optimize_bound
from .targets import (
    ehk_quadric_dim7,
    m_coeffs,
    verify_quadric_identities,
    wy_target,
)
from .volume import (
    MAX_CACHED_DIMENSION,
    nu_density,
    nu_exact,
    nu_float,
    to_rational,
)

# Reference witnesses for the dimension-7 single-multiplicity table: for each
# e, a near-optimal (s, t) as exact decimals.
TABLE1_POINTS: dict[int, tuple[str, str]] = {
    6: ("2.84243", "0.8"),
    7: ("2.74118", "0.779643"),
    8: ("2.65255", "0.739206"),
    9: ("2.58286", "0.710503"),
    10: ("2.52575", "0.688955"),
    11: ("2.47759", "0.672106"),
    12: ("2.43609", "0.658519"),
}

TABLE2_RANGE = (13, 5340)
DIM7_TARGET = Fraction(71, 67)


def _rational(text: str) -> Fraction:
    try:
        return to_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r} ({exc})")


def _grid(text: str) -> tuple[int, int]:
    try:
        a, b = text.lower().split("x")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 200x100, got {text!r}")


def _range_pair(text: str) -> tuple[Fraction, Fraction]:
    try:
        a, b = text.split(":")
        return to_rational(a), to_rational(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must look like lo:hi, got {text!r}")


def _check_dim(d: int) -> int:
    if not 1 <= d <= MAX_CACHED_DIMENSION:
        raise ValueError(f"dimension must be in [1, {MAX_CACHED_DIMENSION}]")
    return d


def parse_config(path: str | Path) -> dict[str, str]:
    """Simple ``key = value`` file; '#' starts a comment."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value, got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


_CONFIG_KEYS = {
    "s_lo",
    "s_hi",
    "t_lo",
    "t_hi",
    "grid_s",
    "grid_t",
    "rounds",
    "shrink",
    "max_denominator",
}


def search_params(args) -> SearchParams:
    """Defaults, overridden by the config file, overridden by CLI flags."""
    cfg = parse_config(args.config) if getattr(args, "config", None) else {}
    unknown = set(cfg) - _CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    params = SearchParams()
    if "s_lo" in cfg or "s_hi" in cfg:
        if not ("s_lo" in cfg and "s_hi" in cfg):
            raise ValueError("config must set both s_lo and s_hi or neither")
        params = replace(params, s_range=(to_rational(cfg["s_lo"]), to_rational(cfg["s_hi"])))
    if "t_lo" in cfg or "t_hi" in cfg:
        params = replace(
            params,
            t_range=(
                to_rational(cfg.get("t_lo", "0")),
                to_rational(cfg.get("t_hi", "1")),
            ),
        )
    if "grid_s" in cfg or "grid_t" in cfg:
        params = replace(
            params,
            grid=(int(cfg.get("grid_s", 200)), int(cfg.get("grid_t", 100))),
        )
    if "rounds" in cfg:
        params = replace(params, refine_rounds=int(cfg["rounds"]))
    if "shrink" in cfg:
        params = replace(params, shrink_factor=int(cfg["shrink"]))
    if "max_denominator" in cfg:
        params = replace(params, max_denominator=int(cfg["max_denominator"]))

    if getattr(args, "s_range", None) is not None:
        params = replace(params, s_range=args.s_range)
    if getattr(args, "t_range", None) is not None:
        params = replace(params, t_range=args.t_range)
    if getattr(args, "grid", None) is not None:
        params = replace(params, grid=args.grid)
    if getattr(args, "rounds", None) is not None:
        params = replace(params, refine_rounds=args.rounds)
    if getattr(args, "max_denominator", None) is not None:
        params = replace(params, max_denominator=args.max_denominator)
    return params


def _emit(args, doc: rpt.ReportDocument, extra_lines=()):
    for line in extra_lines:
        print(line)
    if getattr(args, "json", None):
        Path(args.json).write_text(rpt.dumps(doc) + "\n")
        print(f"wrote {args.json}")
    return 0


def _write_rows_csv(path: str, columns, rows) -> None:
    import csv

    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([str(row[c]) for c in columns])


def _plan_csv_rows(plan):
    columns = ("e_lo", "e_hi", "s0", "t0", "certified_min")
    rows = [
        {
            "e_lo": iv.e_lo,
            "e_hi": iv.e_hi,
            "s0": iv.s0,
            "t0": iv.t0,
            "certified_min": iv.certified_min,
        }
        for iv in plan.intervals
    ]
    return columns, rows


def _doc(args, command: str, params: dict, payload, verdict=None) -> rpt.ReportDocument:
    return rpt.ReportDocument.build(
        command,
        params,
        payload,
        verdict=verdict,
        timestamp=not args.no_timestamp,
    )


def _fmt(x: Fraction) -> str:
    return f"{x} ({float(x):.9g})"


def _search_echo(params: SearchParams) -> dict:
    s_range = params.s_range
    return {
        "s_range": None if s_range is None else (str(s_range[0]), str(s_range[1])),
        "t_range": (str(params.t_range[0]), str(params.t_range[1])),
        "grid": params.grid,
        "refine_rounds": params.refine_rounds,
        "shrink_factor": params.shrink_factor,
        "max_denominator": params.max_denominator,
    }


# --------------------------------------------------------------------------
# Handlers.


def cmd_nu(args) -> int:
    _check_dim(args.d)
    s = args.s
    value = nu_density(s, args.d) if args.density else nu_exact(s, args.d)
    name = "nu-density" if args.density else "nu"
    lines = [f"{name}(s={s}, d={args.d}) = {_fmt(value)}"]
    if not args.density:
        lines.append(f"float path: {nu_float(float(s), args.d)!r}")
    doc = _doc(args, "nu", {"d": args.d, "s": str(s), "density": args.density},
               rpt.ScalarResult(name, value))
    return _emit(args, doc, lines)


def cmd_bound(args) -> int:
    _check_dim(args.d)
    spec = BoundSpec(args.d, args.e, args.mu, args.k)
    value = general_bound(spec, args.s, args.t)
    lines = [f"bound(d={args.d}, e={args.e}, mu={args.mu}, k={args.k}, "
             f"s={args.s}, t={args.t}) = {_fmt(value)}"]
    if args.pre_rescale:
        lines.append(f"pre-rescaling form = {_fmt(s_bound(spec, args.s, args.t))}")
    doc = _doc(
        args, "bound",
        {"d": args.d, "e": str(args.e), "mu": args.mu, "k": args.k,
         "s": str(args.s), "t": str(args.t)},
        rpt.ScalarResult("general-bound", value),
    )
    return _emit(args, doc, lines)


def cmd_hbound(args) -> int:
    _check_dim(args.d)
    value = h_bound(args.e, args.s, args.t, args.d)
    doc = _doc(args, "hbound",
               {"d": args.d, "e": str(args.e), "s": str(args.s), "t": str(args.t)},
               rpt.ScalarResult("h-bound", value))
    return _emit(args, doc, [f"H(e={args.e}; s={args.s}, t={args.t}; d={args.d}) = {_fmt(value)}"])


def cmd_emax(args) -> int:
    _check_dim(args.d)
    value = e_max(args.s0, args.t0, args.d)
    doc = _doc(args, "emax", {"d": args.d, "s0": str(args.s0), "t0": str(args.t0)},
               rpt.ScalarResult("e-max", value))
    return _emit(args, doc, [f"apex multiplicity at (s0={args.s0}, t0={args.t0}): {_fmt(value)}"])


def cmd_rangemin(args) -> int:
    _check_dim(args.d)
    value = range_min(args.e1, args.e2, args.s0, args.t0, args.d)
    doc = _doc(
        args, "rangemin",
        {"d": args.d, "e1": str(args.e1), "e2": str(args.e2),
         "s0": str(args.s0), "t0": str(args.t0)},
        rpt.ScalarResult("range-min", value),
    )
    return _emit(args, doc, [f"min over [{args.e1}, {args.e2}] at (s0, t0): {_fmt(value)}"])


def _objective_from_args(args):
    if args.kind == "h":
        return HBoundObjective(args.e, args.d)
    if args.kind == "general":
        if args.mu is None:
            raise ValueError("--mu is required for the general bound")
        return GeneralBoundObjective(BoundSpec(args.d, args.e, args.mu, args.k))
    if args.kind == "mu-small":
        if args.mu is None:
            raise ValueError("--mu is required for the mu-small bound")
        return MuSmallObjective(args.e, args.mu, args.d)
    raise ValueError(f"unknown objective kind {args.kind!r}")


def cmd_optimize(args) -> int:
    _check_dim(args.d)
    objective = _objective_from_args(args)
    params = search_params(args)
    cand = optimize_bound(objective, params, workers=args.workers)
    exact = objective.exact(cand.s_exact, cand.t_exact)
    lines = [
        f"best value {cand.value!r} at s={cand.s_exact} t={cand.t_exact}",
        f"exact value there: {_fmt(exact)}",
    ]
    doc = _doc(args, "optimize",
               {"kind": args.kind, "d": args.d, "e": str(args.e),
                "mu": args.mu, "k": args.k, "seed": args.seed,
                "search": _search_echo(params)},
               cand)
    return _emit(args, doc, lines)


def cmd_cover(args) -> int:
    _check_dim(args.dim)
    params = search_params(args)
    plan = cover_range(args.dim, args.k, args.e_lo, args.e_hi, args.target,
                       params, workers=args.workers)
    lines = [
        f"covering e in [{args.e_lo}, {args.e_hi}] against {args.target} "
        f"(d={args.dim}, k={args.k}):"
    ]
    for iv in plan.intervals:
        lines.append(
            f"  [{iv.e_lo:>6}, {iv.e_hi:>6}] at (s0={iv.s0}, t0={iv.t0}) "
            f"certified min {float(iv.certified_min):.6f}"
        )
    for gap in plan.gaps:
        lines.append(f"  gap at e={gap.e}: {gap.reason}")
    verdict = "complete" if plan.complete else "gaps"
    lines.append(f"verdict: {verdict}")
    if args.csv:
        _write_rows_csv(args.csv, *_plan_csv_rows(plan))
        lines.append(f"wrote {args.csv}")
    doc = _doc(args, "cover",
               {"dim": args.dim, "k": args.k, "e_lo": args.e_lo,
                "e_hi": args.e_hi, "target": str(args.target),
                "search": _search_echo(params)},
               plan, verdict=verdict)
    return _emit(args, doc, lines)


def cmd_prove(args) -> int:
    _check_dim(args.dim)
    target = None
    if args.target is not None:
        from .targets import TargetValue

        target = TargetValue(args.dim, None, args.target, "user-supplied")
    params = search_params(args)
    report = prove_dimension(args.dim, args.k, params,
                             target=target, workers=args.workers)
    lines = [
        f"dimension {args.dim}, k={args.k}, target {report.target.value} "
        f"({report.target.provenance})"
    ]
    for case in report.cases:
        if case.kind == "coverage":
            plan = case.plan
            lines.append(
                f"  coverage [{plan.e_lo}, {plan.e_hi}]: {len(plan.intervals)} "
                f"interval(s), {len(plan.gaps)} gap(s)"
            )
        elif case.kind == "mu-small":
            c = case.certificate
            lines.append(
                f"  mu-small mu={case.parameters['mu']}: value "
                f"{float(c.value):.6f} > target? {c.verdict}"
            )
        elif case.kind == "gap":
            lines.append(f"  gap: {case.parameters} ({case.citation})")
        else:
            lines.append(f"  {case.kind}: {case.parameters or case.citation}")
    lines.append(f"verdict: {report.verdict}")
    doc = _doc(args, "prove",
               {"dim": args.dim, "k": args.k, "search": _search_echo(params)},
               report, verdict=report.verdict)
    return _emit(args, doc, lines)


def cmd_table1(args) -> int:
    params = search_params(args)
    rows = []
    lines = ["single-multiplicity table, dimension 7:"]
    for e, (s_txt, t_txt) in TABLE1_POINTS.items():
        s, t = to_rational(s_txt), to_rational(t_txt)
        reference = h_bound(e, s, t, 7)
        cand = optimize_bound(HBoundObjective(e, 7), params, workers=args.workers)
        found = HBoundObjective(e, 7).exact(cand.s_exact, cand.t_exact)
        rows.append(
            {
                "e": e,
                "s_ref": s,
                "t_ref": t,
                "value_at_ref": reference,
                "s_found": cand.s_exact,
                "t_found": cand.t_exact,
                "value_found": found,
                "exceeds_target": found > DIM7_TARGET,
            }
        )
        lines.append(
            f"  e={e:>2}: ref ({s_txt}, {t_txt}) -> {float(reference):.6f}; "
            f"search -> {float(found):.6f}"
        )
    payload = rpt.TableResult(
        name="h-bound-single-e",
        columns=("e", "s_ref", "t_ref", "value_at_ref",
                 "s_found", "t_found", "value_found", "exceeds_target"),
        rows=tuple(rows),
    )
    if args.csv:
        _write_rows_csv(args.csv, payload.columns, payload.rows)
        lines.append(f"wrote {args.csv}")
    doc = _doc(args, "table1",
               {"d": 7, "target": str(DIM7_TARGET),
                "search": _search_echo(params)},
               payload)
    return _emit(args, doc, lines)


def cmd_table2(args) -> int:
    e_lo, e_hi = TABLE2_RANGE
    params = search_params(args)
    plan = cover_range(7, 1, e_lo, e_hi, DIM7_TARGET,
                       params, workers=args.workers)
    lines = [f"certified covering of [{e_lo}, {e_hi}] against {DIM7_TARGET}:"]
    for iv in plan.intervals:
        lines.append(
            f"  [{iv.e_lo:>5}, {iv.e_hi:>5}] at (s0={iv.s0}, t0={iv.t0}) "
            f"min {float(iv.certified_min):.6f}"
        )
    verdict = "complete" if plan.complete else "gaps"
    lines.append(f"verdict: {verdict}")
    if args.csv:
        _write_rows_csv(args.csv, *_plan_csv_rows(plan))
        lines.append(f"wrote {args.csv}")
    doc = _doc(args, "table2",
               {"d": 7, "k": 1, "e_lo": e_lo, "e_hi": e_hi,
                "target": str(DIM7_TARGET), "search": _search_echo(params)},
               plan, verdict=verdict)
    return _emit(args, doc, lines)


def cmd_series(args) -> int:
    coeffs = m_coeffs(args.max)
    lines = [f"m_{i + 1} = {c} ({float(c):.9g})" for i, c in enumerate(coeffs)]
    doc = _doc(args, "series", {"max": args.max}, rpt.SeriesResult(tuple(coeffs)))
    return _emit(args, doc, lines)


def cmd_quadric(args) -> int:
    if args.check_identities:
        outcome = verify_quadric_identities()
        lines = [
            f"decomposition identity: {outcome.decomposition_identity}",
            f"derivative identity:    {outcome.derivative_identity}",
            f"derivative negative:    {outcome.derivative_negative}",
            f"strictly decreasing:    {outcome.strictly_decreasing}",
        ]
        verdict = "verified" if outcome.all_hold else "failed"
        doc = _doc(args, "quadric", {"check_identities": True}, outcome, verdict=verdict)
        return _emit(args, doc, lines)
    value = ehk_quadric_dim7(args.p)
    doc = _doc(args, "quadric", {"p": str(args.p)},
               rpt.ScalarResult("quadric-dim7", value))
    return _emit(args, doc, [f"{value}"])


def cmd_surface(args) -> int:
    _check_dim(args.dim)
    grid = rpt.surface_grid(
        args.dim,
        args.e,
        mu=args.mu,
        k=args.k,
        grid=args.grid or (120, 120),
        s_range=args.s_range,
        t_range=args.t_range or (Fraction(0), Fraction(1)),
    )
    value, s_at, t_at = grid.max_cell()
    lines = [f"grid max {value!r} at s={s_at} t={t_at}"]
    if args.out:
        Path(args.out).write_text(rpt.surface_csv(grid))
        lines.append(f"wrote {args.out}")
    if args.svg:
        target = args.target
        if target is None and args.dim == 7:
            target = DIM7_TARGET
        elif target is None:
            target = wy_target(args.dim).value
        Path(args.svg).write_text(rpt.surface_svg(grid, target))
        lines.append(f"wrote {args.svg}")
    doc = _doc(args, "surface",
               {"dim": args.dim, "e": str(args.e), "mu": args.mu, "k": args.k},
               grid)
    return _emit(args, doc, lines)


# --------------------------------------------------------------------------
# Parser assembly.


def _add_common(sub, search=False):
    sub.add_argument("--json", help="write the full JSON report here")
    sub.add_argument("--no-timestamp", action="store_true",
                     help="omit the timestamp (byte-identical reruns)")
    if search:
        sub.add_argument("--grid", type=_grid, default=None, metavar="NSxNT")
        sub.add_argument("--s-range", type=_range_pair, default=None, metavar="LO:HI")
        sub.add_argument("--t-range", type=_range_pair, default=None, metavar="LO:HI")
        sub.add_argument("--rounds", type=int, default=None,
                         help="refinement rounds")
        sub.add_argument("--max-denominator", type=int, default=None)
        sub.add_argument("--workers", type=int, default=1,
                         help="parallel grid chunks (result is identical)")
        sub.add_argument("--config", help="key = value file overriding search defaults")
        sub.add_argument("--seed", type=int, default=None,
                         help="reserved; the default search is deterministic")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hkcert",
        description="Certified lower bounds for Hilbert-Kunz multiplicities.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("nu", help="exact and float slice volume")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--s", type=_rational, required=True)
    p.add_argument("--density", action="store_true", help="slope instead of volume")
    _add_common(p)
    p.set_defaults(handler=cmd_nu)

    p = subs.add_parser("bound", help="master bound at one point")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--e", type=_rational, required=True)
    p.add_argument("--mu", type=int, required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--s", type=_rational, required=True)
    p.add_argument("--t", type=_rational, required=True)
    p.add_argument("--pre-rescale", action="store_true",
                   help="also print the 1 - t + 2^k e (...) form")
    _add_common(p)
    p.set_defaults(handler=cmd_bound)

    p = subs.add_parser("hbound", help="worst-generator-count family H_e")
    p.add_argument("--e", type=_rational, required=True)
    p.add_argument("--s", type=_rational, required=True)
    p.add_argument("--t", type=_rational, required=True)
    p.add_argument("--d", type=int, default=7)
    _add_common(p)
    p.set_defaults(handler=cmd_hbound)

    p = subs.add_parser("emax", help="apex of the parabola in e")
    p.add_argument("--s0", type=_rational, required=True)
    p.add_argument("--t0", type=_rational, required=True)
    p.add_argument("--d", type=int, default=7)
    _add_common(p)
    p.set_defaults(handler=cmd_emax)

    p = subs.add_parser("rangemin", help="endpoint minimum over a multiplicity range")
    p.add_argument("--e1", type=_rational, required=True)
    p.add_argument("--e2", type=_rational, required=True)
    p.add_argument("--s0", type=_rational, required=True)
    p.add_argument("--t0", type=_rational, required=True)
    p.add_argument("--d", type=int, default=7)
    _add_common(p)
    p.set_defaults(handler=cmd_rangemin)

    p = subs.add_parser("optimize", help="grid search a bound family")
    p.add_argument("--kind", choices=("h", "general", "mu-small"), default="h")
    p.add_argument("--e", type=_rational, required=True)
    p.add_argument("--mu", type=int, default=None)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--d", type=int, default=7)
    _add_common(p, search=True)
    p.set_defaults(handler=cmd_optimize)

    p = subs.add_parser("cover", help="certified covering of a multiplicity range")
    p.add_argument("--csv", help="write the certified intervals as CSV")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--e-lo", type=int, required=True)
    p.add_argument("--e-hi", type=int, required=True)
    p.add_argument("--target", type=_rational, required=True)
    _add_common(p, search=True)
    p.set_defaults(handler=cmd_cover)

    p = subs.add_parser("prove", help="full case ladder for one dimension")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--target", type=_rational, default=None,
                   help="override the default target")
    _add_common(p, search=True)
    p.set_defaults(handler=cmd_prove)

    p = subs.add_parser("table1", help="regenerate the single-e table (d=7)")
    p.add_argument("--csv", help="write the rows as CSV")
    _add_common(p, search=True)
    p.set_defaults(handler=cmd_table1)

    p = subs.add_parser("table2", help="regenerate the range covering (d=7)")
    p.add_argument("--csv", help="write the certified intervals as CSV")
    _add_common(p, search=True)
    p.set_defaults(handler=cmd_table2)

    p = subs.add_parser("series", help="zigzag series coefficients m_1..m_n")
    p.add_argument("--max", type=int, required=True)
    _add_common(p)
    p.set_defaults(handler=cmd_series)

    p = subs.add_parser("quadric", help="dimension-7 quadric closed form")
    p.add_argument("--p", type=_rational, default=Fraction(3))
    p.add_argument("--check-identities", action="store_true")
    _add_common(p)
    p.set_defaults(handler=cmd_quadric)

    p = subs.add_parser("surface", help="bound values on an (s, t) grid")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--e", type=_rational, required=True)
    p.add_argument("--mu", type=int, default=None)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--out", "--csv", dest="out", help="CSV output path")
    p.add_argument("--svg", help="SVG heatmap output path")
    p.add_argument("--target", type=_rational, default=None,
                   help="level to mark in the heatmap")
    _add_common(p, search=True)
    p.set_defaults(handler=cmd_surface)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
