"""Command-line front end.  Every solver prints one JSON document on stdout.

Exit codes: 0 success, 1 runtime error (bad input, geometry error), 2 usage.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

from . import formats
from .annulus import build_gamma, solve_fixed_fixed, solve_fixed_phi, solve_general
from .constrained import DynamicState, StateError, solve_constrained
from .double_strip import solve_all_orientations, solve_fixed
from .geom import GeometryError, normalize_angle
from .hull import extreme_points
from .oracle import oracle_annulus_grid, oracle_constrained, oracle_double_strip, oracle_gamma_vertices
from .render import render_png, render_svg


class UsageError(Exception):
    pass


def _angle(args, value):
    if value is None:
        return None
    return normalize_angle(math.radians(value) if args.deg else value)


def _base(problem, solver, points):
    return {"problem": problem, "solver": solver, "n": len(points), "duplicates": points.duplicates}


def _ds_geometry(points, ds):
    return {"kind": "double-strip", "double_strip": formats.double_strip_doc(points.xy, ds, formats.tolerance(points))}


def _ann_geometry(points, ann):
    if ann is None:
        return None
    return {"kind": "annulus", "annulus": formats.annulus_doc(points.xy, ann, formats.tolerance(points))}


def cmd_strip(args, points):
    theta = _angle(args, args.theta)
    _, _, strip = extreme_points(points, theta)
    doc = _base("strip", "extreme_points", points)
    doc.update(width=strip.width, theta=theta)
    doc["geometry"] = {"kind": "strip", "strip": formats.strip_doc(points.xy, strip, formats.tolerance(points))}
    return doc


def cmd_double_strip(args, points):
    doc = _base("double-strip", "", points)
    if args.theta is not None:
        theta = _angle(args, args.theta)
        ds, w = solve_fixed(points, theta)
        doc.update(solver="solve_fixed", width=w, theta=theta)
    else:
        sol = solve_all_orientations(points)
        ds = sol.double_strip
        doc.update(solver="solve_all_orientations", width=sol.width, theta=sol.theta)
        doc["tuple"] = list(sol.tuple) if sol.tuple else None
    doc["geometry"] = _ds_geometry(points, ds)
    return doc


def cmd_constrained(args, points):
    subset = formats.parse_subset(args.subset, points)
    doc = _base("constrained", "", points)
    doc["subset"] = subset
    if args.theta is not None:
        theta = _angle(args, args.theta)
        ds, w = solve_fixed(points, theta, subset)
        doc.update(solver="solve_fixed", width=w, theta=theta)
    else:
        sol = solve_constrained(points, subset)
        ds = sol.double_strip
        doc.update(solver="solve_constrained", width=sol.width, theta=sol.theta)
    doc["geometry"] = _ds_geometry(points, ds)
    return doc


def cmd_dynamic(args, points):
    threshold, ops = formats.parse_script(args.script)
    if args.decide is not None:
        threshold = args.decide
    state = DynamicState(points, threshold=threshold)
    steps = []
    last = None
    for op in ops:
        rec = {"line": op.line, "op": op.op}
        try:
            if op.op in ("insert", "delete"):
                pid = points.index(op.point)
                rec["point"] = list(op.point)
                (state.insert if op.op == "insert" else state.delete)(pid)
            elif op.op == "query":
                sol = state.query_min()
                rec.update(width=sol.width, theta=sol.theta)
                last = sol
            else:
                rec["decision"] = state.decide()
        except KeyError as exc:
            raise GeometryError(f"script line {op.line}: {exc}") from None
        except StateError as exc:
            raise GeometryError(f"script line {op.line}: {exc}") from None
        rec["size"] = len(state.subset)
        steps.append(rec)
    doc = _base("dynamic", "DynamicState", points)
    doc.update(mode="decision" if threshold is not None else "optimization", threshold=threshold, steps=steps)
    doc["subset"] = sorted(state.subset)
    if last is not None:
        doc.update(width=last.width, theta=last.theta)
        doc["geometry"] = _ds_geometry(points, last.double_strip)
    return doc


def cmd_annulus(args, points):
    doc = _base("annulus", "", points)
    if args.free:
        sol = solve_general(points)
        doc.update(solver="solve_general", validated=sol.validated)
    elif args.theta is not None:
        sol = solve_fixed_fixed(points, _angle(args, args.theta), _angle(args, args.phi))
        doc["solver"] = "solve_fixed_fixed"
    else:
        sol = solve_fixed_phi(points, _angle(args, args.phi))
        doc["solver"] = "solve_fixed_phi"
    doc.update(width=sol.width, theta=sol.theta, phi=sol.phi)
    doc["geometry"] = _ann_geometry(points, sol.annulus)
    return doc


def cmd_oracle(args, points):
    doc = _base(f"oracle-{args.problem}", "", points)
    if args.problem == "double-strip":
        rep = oracle_double_strip(points)
    elif args.problem == "constrained":
        if args.subset is None:
            raise UsageError("oracle constrained needs --subset")
        subset = formats.parse_subset(args.subset, points)
        doc["subset"] = subset
        rep = oracle_constrained(points, subset)
    elif args.problem == "annulus":
        rep = oracle_annulus_grid(points, args.resolution)
    else:
        verts, overlap = oracle_gamma_vertices(points)
        main = build_gamma(points)
        doc.update(solver="oracle_gamma_vertices", vertices=sorted(set(verts)), overlap=overlap)
        doc["build_gamma_vertices"] = sorted({(v.theta, v.y) for v in main.vertices})
        return doc
    doc.update(solver=rep.method, width=rep.value, argmin=list(rep.argmin), certified=rep.certified, tolerance=rep.tolerance)
    return doc


def cmd_gen(args):
    xy, facts = formats.generate(args.n, args.seed, args.dist, args.thickness)
    text = formats.format_points(xy, facts)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_render(args, points):
    with open(args.result, encoding="utf-8") as fh:
        doc = json.load(fh)
    if not args.svg and not args.png:
        raise UsageError("render needs --svg and/or --png")
    _figures(args, points, doc)
    return None


def _figures(args, points, doc):
    if getattr(args, "svg", None):
        with open(args.svg, "wb") as fh:
            fh.write(render_svg(points, doc))
    if getattr(args, "png", None):
        render_png(points, doc, args.png)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="parannulus", description="Minimum-width strips, double-strips and parallelogram annuli.")
    sub = p.add_subparsers(dest="command", required=True)

    def solver(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("points", help="point file ('-' for stdin): one 'x y' per line")
        sp.add_argument("--deg", action="store_true", help="angles given in degrees")
        sp.add_argument("-o", "--output", help="write the JSON document here instead of stdout")
        sp.add_argument("--svg", help="also render an SVG figure")
        sp.add_argument("--png", help="also render a PNG figure (matplotlib)")
        return sp

    sp = solver("strip", "minimum-width strip of one orientation")
    sp.add_argument("--theta", type=float, required=True)

    sp = solver("double-strip", "minimum-width double-strip")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--theta", type=float)
    g.add_argument("--all", action="store_true", help="optimize over all orientations")

    sp = solver("constrained", "P-constrained double-strip enclosing a subset")
    sp.add_argument("--subset", required=True, help="file of point ids or 'x y' lines")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--theta", type=float)
    g.add_argument("--all", action="store_true", help="optimize over all orientations (default)")

    sp = solver("dynamic", "run a JSONL insert/delete/query/decide script")
    sp.add_argument("--script", required=True)
    sp.add_argument("--decide", type=float, metavar="W", help="decision mode with threshold W")

    sp = solver("annulus", "minimum-width parallelogram annulus")
    sp.add_argument("--theta", type=float)
    sp.add_argument("--phi", type=float)
    sp.add_argument("--free", action="store_true", help="optimize both orientations")

    sp = solver("oracle", "brute-force reference values")
    sp.add_argument("--problem", choices=["double-strip", "constrained", "annulus", "gamma"], required=True)
    sp.add_argument("--subset")
    sp.add_argument("--resolution", type=int, default=2000)

    sp = solver("render", "render a saved JSON result")
    sp.add_argument("--result", required=True, help="JSON document produced by a solver command")

    gp = sub.add_parser("gen", help="generate a random instance")
    gp.add_argument("--n", type=int, required=True)
    gp.add_argument("--seed", type=int, default=0)
    gp.add_argument("--dist", choices=["uniform", "ring", "parallelogram-ring"], default="uniform")
    gp.add_argument("--thickness", type=float)
    gp.add_argument("-o", "--output")
    return p


COMMANDS = {
    "strip": cmd_strip,
    "double-strip": cmd_double_strip,
    "constrained": cmd_constrained,
    "dynamic": cmd_dynamic,
    "annulus": cmd_annulus,
    "oracle": cmd_oracle,
    "render": cmd_render,
}


def _check_usage(args):
    if args.command == "annulus":
        modes = [args.free, args.theta is not None and args.phi is not None, args.theta is None and args.phi is not None]
        if args.free and (args.theta is not None or args.phi is not None):
            raise UsageError("--free conflicts with --theta/--phi")
        if args.theta is not None and args.phi is None:
            raise UsageError("--theta needs --phi")
        if not any(modes):
            raise UsageError("choose --free, --phi F, or --theta T --phi F")
    if args.command == "gen" and args.n < 1:
        raise UsageError("--n must be positive")


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _check_usage(args)
        if args.command == "gen":
            cmd_gen(args)
            return 0
        points = formats.parse_points(sys.stdin if args.points == "-" else args.points)
        if points.duplicates:
            print(f"warning: dropped {points.duplicates} duplicate point(s)", file=sys.stderr)
        start = time.perf_counter()
        doc = COMMANDS[args.command](args, points)
        if doc is None:
            return 0
        doc["timing_s"] = time.perf_counter() - start
        text = formats.dumps(doc)
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        _figures(args, points, doc)
        return 0
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (GeometryError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
