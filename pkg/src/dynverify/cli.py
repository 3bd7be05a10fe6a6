"""Command-line entry point.

Subcommands run the verification suites, write JSON reports and SVG/CSV
files, and exit 0 only when every check passes (2 on usage or parameter
errors, 1 on a failing check).
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import checks, planar
from .errors import ConfigurationError, DomainError
from .figures import FIGURE_IDS, FigureSpec, emit_all_figures, emit_figure
from .report import all_passed, emit_report

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dynverify", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_ann = sub.add_parser("annulus", help="certify the annulus displacement construction")
    p_ann.add_argument("--eps1", type=float, default=0.05, help="radial shear amplitude (0, 1/16)")
    p_ann.add_argument("--eps2", type=float, default=0.4, help="angular shear amplitude (0, 1/2)")
    p_ann.add_argument("--samples", type=int, default=4096, help="initial samples per curve")
    p_ann.add_argument("--report", type=Path, default=None, help="write the JSON report here")

    p_tor = sub.add_parser("torus", help="certify the displaceable non-Lagrangian torus")
    p_tor.add_argument("--k", type=int, choices=(1, 3), default=None, help="profile exponent; default runs both")
    p_tor.add_argument("--eps", type=float, default=0.1, help="graph amplitude")
    p_tor.add_argument("--v1", type=float, default=math.pi, help="first rotation angle")
    p_tor.add_argument("--gridn", type=int, default=1024, help="angle grid size")
    p_tor.add_argument("--n", type=int, default=2, help="torus dimension")
    p_tor.add_argument("--report", type=Path, default=None)

    p_por = sub.add_parser("portrait", help="certify a planar family at one parameter value")
    p_por.add_argument("--family", choices=("linear", "f1", "f2"), required=True)
    p_por.add_argument("--mu", type=float, default=None, help="family parameter (required for f1/f2)")
    p_por.add_argument("--a", type=float, default=None, help="export only this level curve to CSV")
    p_por.add_argument("--gridn", type=int, default=400, help="CSV sampling grid size")
    p_por.add_argument("--report", type=Path, default=None)
    p_por.add_argument("--out", type=Path, default=None, help="CSV file for curve samples")

    p_fig = sub.add_parser("figures", help="emit deterministic SVG figures")
    p_fig.add_argument("--id", choices=FIGURE_IDS, default=None, help="one figure; default emits all")
    p_fig.add_argument("--out", type=Path, required=True, help="output file (with --id) or directory")

    p_all = sub.add_parser("all", help="run every suite and emit all figures")
    p_all.add_argument("--report", type=Path, default=None)
    p_all.add_argument("--outdir", type=Path, default=None, help="directory for the SVG figures")
    return parser


def _finish(reports, report_path) -> int:
    for r in sorted(reports, key=lambda r: r.id):
        print(f"[{r.status:>4}] {r.id}  margin={r.margin:.6g} tolerance={r.tolerance:.6g}")
    if report_path is not None:
        emit_report(reports, report_path)
        print(f"report written to {report_path}")
    return EXIT_OK if all_passed(reports) else EXIT_CHECK_FAILED


def _cmd_annulus(args) -> int:
    reports = checks.annulus_suite(args.eps1, args.eps2, args.samples)
    return _finish(reports, args.report)


def _cmd_torus(args) -> int:
    ks = (args.k,) if args.k is not None else (1, 3)
    reports = []
    for k in ks:
        reports += checks.torus_suite(k=k, eps=args.eps, v1=args.v1, grid_n=args.gridn, n=args.n)
    return _finish(reports, args.report)


def _cmd_portrait(args) -> int:
    if args.family == "linear":
        reports = checks.linear_suite()
        return _finish(reports, args.report)
    if args.mu is None:
        print("--mu is required for the quadratic families", file=sys.stderr)
        return EXIT_USAGE
    reports = checks.portrait_suite(args.family, args.mu)
    if args.out is not None:
        if args.a is not None:
            levels = [args.a]
        else:
            levels = planar.admissible_probe_levels(args.family, args.mu)
        curves = [planar.InvariantCurve(args.family, args.mu, a) for a in levels]
        y_grid = np.linspace(0.0, 4.0, args.gridn)
        planar.write_curve_csv(curves, y_grid, args.out)
        print(f"curve samples written to {args.out}")
    sig = planar.portrait_signature(planar.PlanarSystem(args.family, args.mu))
    print(
        f"signature: homoclinic={sig.has_homoclinic} origin-to-infinity={sig.has_origin_to_infinity} "
        f"asymptotic-to-O={sig.has_asymptotic_to_o}"
    )
    return _finish(reports, args.report)


def _cmd_figures(args) -> int:
    if args.id is not None:
        emit_figure(FigureSpec(args.id), args.out)
        print(f"{args.id} written to {args.out}")
    else:
        for path in emit_all_figures(args.out):
            print(f"written {path}")
    return EXIT_OK


def _cmd_all(args) -> int:
    reports = checks.full_suite()
    if args.outdir is not None:
        for path in emit_all_figures(args.outdir):
            print(f"written {path}")
    return _finish(reports, args.report)


_COMMANDS = {
    "annulus": _cmd_annulus,
    "torus": _cmd_torus,
    "portrait": _cmd_portrait,
    "figures": _cmd_figures,
    "all": _cmd_all,
}


def run_cli(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except (ConfigurationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
