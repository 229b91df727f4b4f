"""Command line interface: ``lqdepth {depth,hull,contour,scenario}``.

Exit codes: 0 success, 2 bad input or arguments, 3 solver failure.
"""

import argparse
import sys

import numpy as np

from . import data
from .contour import contour_set
from .depths import DepthOrder, in_convex_hull, lq_depth, mahalanobis_depth, zonoid_depth
from .exceptions import DepthError, SolverFailure
from .render import render_svg

EXIT_USAGE = 2
EXIT_SOLVER = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _order(text):
    try:
        return DepthOrder(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _levels(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid level list {text!r}") from None


def build_parser():
    parser = _Parser(prog="lqdepth", description="L_q-norm zonoid depths and contours.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("depth", help="depth of query points")
    p.add_argument("--data", required=True, help="CSV of observations")
    p.add_argument("--log", action="store_true", help="natural log of the data before use")
    p.add_argument("--points", required=True, help="CSV of query points ('-' for stdin)")
    p.add_argument("--q", type=_order, default=DepthOrder(1), help="order in [1, inf] (default 1)")
    p.add_argument("--q-mode", choices=("lq", "mahalanobis", "zonoid"), default="lq",
                   help="lq: L_q zonoid depth; mahalanobis or zonoid: the classical depths")
    p.set_defaults(func=cmd_depth)

    p = sub.add_parser("hull", help="convex hull membership of query points")
    p.add_argument("--data", required=True)
    p.add_argument("--log", action="store_true")
    p.add_argument("--points", required=True)
    p.set_defaults(func=cmd_hull)

    p = sub.add_parser("contour", help="trace depth contours and write SVG/CSV")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--data", help="CSV of planar observations")
    src.add_argument("--scenario", choices=data.SCENARIOS)
    p.add_argument("--n", type=int, default=1000, help="scenario sample size")
    p.add_argument("--seed", type=int, default=42, help="scenario seed")
    p.add_argument("--log", action="store_true")
    p.add_argument("--q", type=_order, default=DepthOrder(1))
    lv = p.add_mutually_exclusive_group()
    lv.add_argument("--levels", type=_levels, help="comma-separated depth levels")
    lv.add_argument("--levels-from", type=float, metavar="LOW",
                    help="10 equally spaced levels from LOW to 1")
    p.add_argument("--rays", type=int, default=72)
    p.add_argument("--method", choices=("scaling", "bisection"), default="scaling")
    p.add_argument("--out", help="SVG output path")
    p.add_argument("--csv", help="CSV output path for contour vertices")
    p.add_argument("--size", type=int, default=600, help="canvas size in pixels")
    p.add_argument("--no-hull", action="store_true")
    p.add_argument("--no-mean", action="store_true")
    p.set_defaults(func=cmd_contour)

    p = sub.add_parser("scenario", help="write a seeded synthetic cloud as CSV")
    p.add_argument("--scenario", choices=data.SCENARIOS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_scenario)
    return parser


def _read_points(path, d):
    pts = data.read_points(sys.stdin if path == "-" else path)
    if pts.shape[1] != d:
        raise UsageError(f"query points have {pts.shape[1]} columns, data has {d}")
    return pts


def _header(d):
    return ["x"] if d == 1 else [f"x{j + 1}" for j in range(d)]


def cmd_depth(args, out):
    cloud = data.load_csv(args.data, log=args.log)
    pts = _read_points(args.points, cloud.d)
    fmt = data.format_number
    out.write(",".join(_header(cloud.d) + ["depth", "s_q"]) + "\n")
    for x in pts:
        if args.q_mode == "mahalanobis":
            res = mahalanobis_depth(cloud, x)
        elif args.q_mode == "zonoid":
            res = zonoid_depth(cloud, x)
        else:
            res = lq_depth(cloud, x, args.q)
        s = "" if res.discrepancy is None else fmt(res.discrepancy)
        out.write(",".join([fmt(v) for v in x] + [fmt(res.depth), s]) + "\n")
    return 0


def cmd_hull(args, out):
    cloud = data.load_csv(args.data, log=args.log)
    pts = _read_points(args.points, cloud.d)
    out.write(",".join(_header(cloud.d) + ["inside"]) + "\n")
    for x in pts:
        flag = "true" if in_convex_hull(cloud, x) else "false"
        out.write(",".join([data.format_number(v) for v in x] + [flag]) + "\n")
    return 0


def default_levels(low=0.25, count=10):
    return list(np.linspace(low, 1.0, count))


def _check_levels(levels):
    if not levels:
        raise UsageError("no contour levels given")
    if any(not 0 < a <= 1 for a in levels):
        raise UsageError("levels must lie in (0, 1]")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise UsageError("levels must be strictly increasing")


def cmd_contour(args, out):
    if args.scenario:
        cloud = data.generate(data.ScenarioSpec(args.scenario, args.n, args.seed))
        label = f"{args.scenario} n={args.n} seed={args.seed}"
    else:
        cloud = data.load_csv(args.data, log=args.log)
        label = args.data
    if cloud.d != 2:
        raise UsageError(f"contours need planar data, got d = {cloud.d}")
    if args.levels is not None:
        levels = args.levels
    elif args.levels_from is not None:
        levels = default_levels(args.levels_from)
    else:
        levels = default_levels()
    _check_levels(levels)
    if args.rays < 8:
        raise UsageError("--rays must be at least 8")
    if not args.out and not args.csv:
        raise UsageError("give --out and/or --csv")
    polys = contour_set(cloud, args.q, levels, args.rays, method=args.method)
    if args.out:
        svg = render_svg(cloud.points, polys, mean=cloud.mean, size=args.size,
                         show_hull=not args.no_hull, show_mean=not args.no_mean,
                         title=f"L_{args.q} zonoid depth contours, {label}")
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(svg)
    if args.csv:
        fmt = data.format_number
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write("level,q,angle,x1,x2\n")
            for poly in polys:
                for ang, (vx, vy) in zip(poly.angles, poly.vertices):
                    fh.write(f"{fmt(poly.level)},{poly.order},{fmt(ang)},{fmt(vx)},{fmt(vy)}\n")
    out.write(f"wrote {len(polys)} contour levels\n")
    return 0


def cmd_scenario(args, out):
    try:
        spec = data.ScenarioSpec(args.scenario, args.n, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    pts = data.generate_points(spec)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            data.write_csv(pts, fh)
    else:
        data.write_csv(pts, out)
    return 0


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except SolverFailure as exc:
        print(f"lqdepth: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (DepthError, UsageError, ValueError, OSError) as exc:
        print(f"lqdepth: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
