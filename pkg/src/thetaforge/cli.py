"""theta-forge: command-line front end.

Subcommands: build, theta, expand, check {consistency, wall-positivity,
positivity, atomicity, cluster-agreement, transition}, svg.  All inputs
and outputs are files or inline JSON; exit code 0 on success/pass, 1 on
a failed check (with a machine-readable witness on stdout), 2 on usage
or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import cluster, scatter, series, theta
from .scatter import (ScatteringDiagram, chamber_of, chambers, complete,
                      diagram_from_json, initial_diagram)


class UsageError(Exception):
    pass


def _load_diagram(path):
    try:
        with open(path) as fh:
            return diagram_from_json(fh.read())
    except OSError as exc:
        raise UsageError("cannot read diagram file: %s" % exc)
    except scatter.DiagramError as exc:
        raise UsageError(str(exc))


def _load_combo(spec_or_path, cutoff):
    text = spec_or_path
    if not spec_or_path.lstrip().startswith("{"):
        try:
            with open(spec_or_path) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError("cannot read combo: %s" % exc)
    try:
        return theta.expansion_from_json(text, cutoff=cutoff)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError("malformed combo JSON (field %s)" % exc)


def _parse_pair(text, name):
    try:
        a, b = text.split(",")
        return (int(a), int(b))
    except ValueError:
        raise UsageError("%s must be 'INT,INT', got %r" % (name, text))


def _emit(obj, pretty=False):
    print(json.dumps(obj, indent=2 if pretty else None, sort_keys=True))


# --------------------------------------------------------------------------
# svg export


def _fmt_fun(wall, max_terms=3):
    f = wall.function(series.delta(wall.direction) *
                      max(1, len(wall.coeffs)))
    return series.format_series(f, max_terms=max_terms)


def export_svg(diagram, chamber_list=None, size=640):
    """Deterministic SVG: wall rays from the origin with function labels,
    cluster chambers shaded when flagged."""
    half = size // 2
    scale = size / 2.6
    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
        'viewBox="0 0 %d %d">' % (size, size, size, size),
        '<rect width="%d" height="%d" fill="white"/>' % (size, size),
    ]

    def to_px(v):
        import math
        n = math.hypot(v[0], v[1])
        return (half + scale * v[0] / n, half - scale * v[1] / n)

    if chamber_list:
        for ch in chamber_list:
            if not ch.is_cluster:
                continue
            a = to_px(ch.low_ray)
            b = to_px(ch.representative)
            c = to_px(ch.high_ray)
            lines.append(
                '<path d="M %d %d L %.1f %.1f L %.1f %.1f L %.1f %.1f Z" '
                'fill="#dde8ff" stroke="none"/>'
                % (half, half, a[0], a[1], b[0], b[1], c[0], c[1]))
    drawn = diagram.drawn_rays(include_trivial=True)
    if not drawn:
        drawn = [((1, 0), diagram.walls[0], False),
                 ((-1, 0), diagram.walls[0], True),
                 ((0, 1), diagram.walls[1], False),
                 ((0, -1), diagram.walls[1], True)]
    for r, w, negative in drawn:
        x, y = to_px(r)
        trivial = w.is_trivial()
        lines.append(
            '<line x1="%d" y1="%d" x2="%.1f" y2="%.1f" stroke="%s" '
            'stroke-width="%s"/>' % (half, half, x, y,
                                     "#bbbbbb" if trivial else "#222222",
                                     "1" if trivial else "2"))
        if not negative:
            lx = half + (x - half) * 1.08 - 10
            ly = half + (y - half) * 1.08
            lines.append('<text x="%.1f" y="%.1f" font-size="11" '
                         'font-family="monospace">%s</text>'
                         % (lx, ly, _fmt_fun(w)))
    lines.append('<circle cx="%d" cy="%d" r="2.5" fill="#000"/>'
                 % (half, half))
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# subcommands


def _cmd_build(args):
    d = complete(initial_diagram(args.b, args.c, args.order))
    text = d.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _cmd_theta(args):
    d = _load_diagram(args.diagram)
    p = _parse_pair(args.p, "--p")
    q = _parse_pair(args.chamber, "--chamber")
    try:
        ch = chamber_of(d, q)
    except scatter.OnWallError as exc:
        raise UsageError(str(exc))
    th = theta.theta_local(d, p, ch)
    if args.pretty:
        print(series.format_series(th))
    else:
        out = series.to_json_dict(th)
        out["p"] = list(p)
        out["chamber"] = list(ch.representative)
        _emit(out)
    return 0


def _cmd_expand(args):
    d = _load_diagram(args.diagram)
    q = _parse_pair(args.chamber, "--chamber")
    try:
        with open(args.series) as fh:
            f = series.from_json(fh.read())
    except OSError as exc:
        raise UsageError("cannot read series: %s" % exc)
    except (KeyError, ValueError) as exc:
        raise UsageError("malformed series JSON: %s" % exc)
    try:
        ch = chamber_of(d, q)
        combo = theta.expand(d, f, ch)
    except (scatter.OnWallError, theta.NotInSpanError) as exc:
        raise UsageError(str(exc))
    _emit(combo.to_json_dict())
    return 0


def _cmd_svg(args):
    d = _load_diagram(args.diagram)
    chs = None
    if args.shade_clusters:
        chs = cluster.check_cluster_theta_agreement(
            d.b, d.c, d.cutoff, depth=args.depth, diagram=d).chambers
    text = export_svg(d, chamber_list=chs)
    with open(args.out, "w") as fh:
        fh.write(text)
    return 0


def _report_exit(report_dict, passed):
    _emit(report_dict)
    return 0 if passed else 1


def _cmd_check(args):
    t0 = time.monotonic()
    suite = args.suite
    if suite in ("consistency", "wall-positivity", "transition",
                 "positivity", "atomicity"):
        d = _load_diagram(args.diagram)
    if suite == "consistency":
        rep = scatter.check_consistency(d)
    elif suite == "wall-positivity":
        rep = scatter.check_wall_positivity(d)
    elif suite == "positivity":
        combo = _load_combo(args.combo, d.cutoff)
        verdict = theta.check_universal_positivity(d, combo)
        out = verdict.to_json_dict()
        out["duration_s"] = round(time.monotonic() - t0, 3)
        return _report_exit(out, verdict.is_positive)
    elif suite == "atomicity":
        combo = _load_combo(args.combo, d.cutoff)
        verdict = theta.check_atomicity(d, combo)
        out = verdict.to_json_dict()
        out["duration_s"] = round(time.monotonic() - t0, 3)
        return _report_exit(out,
                            verdict.verdict == theta.AtomicityVerdict.ATOMIC)
    elif suite == "transition":
        frm = _parse_pair(args.frm, "--from")
        to = _parse_pair(args.to, "--to")
        gens = [(1, 0), (0, 1), (-1, 0), (0, -1)]
        rep = theta.check_transition_positivity(d, frm, to, gens)
    elif suite == "cluster-agreement":
        rep = cluster.check_cluster_theta_agreement(
            args.b, args.c, args.order, depth=args.depth)
    else:
        raise UsageError("unknown check suite %r" % suite)
    out = rep.to_json_dict()
    out["duration_s"] = round(time.monotonic() - t0, 3)
    return _report_exit(out, rep.passed)


def build_parser():
    ap = argparse.ArgumentParser(
        prog="theta-forge",
        description="rank-2 cluster scattering diagrams, theta functions, "
                    "and positivity/atomicity checks (exact arithmetic)")
    ap.add_argument("--jobs", type=int, default=1,
                    help="worker cap; execution is deterministic regardless")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a completed diagram")
    b.add_argument("--b", type=int, required=True)
    b.add_argument("--c", type=int, required=True)
    b.add_argument("--order", type=int, default=8)
    b.add_argument("--out", default=None)
    b.set_defaults(func=_cmd_build)

    t = sub.add_parser("theta", help="local theta expansion")
    t.add_argument("--diagram", required=True)
    t.add_argument("--p", required=True, help="M1,M2")
    t.add_argument("--chamber", required=True, help="Q1,Q2")
    mode = t.add_mutually_exclusive_group()
    mode.add_argument("--json", action="store_true", default=True)
    mode.add_argument("--pretty", action="store_true", default=False)
    t.set_defaults(func=_cmd_theta)

    e = sub.add_parser("expand", help="theta-basis expansion of a series")
    e.add_argument("--diagram", required=True)
    e.add_argument("--series", required=True)
    e.add_argument("--chamber", required=True, help="Q1,Q2")
    e.set_defaults(func=_cmd_expand)

    ck = sub.add_parser("check", help="run a check suite")
    ck.add_argument("suite", choices=["consistency", "wall-positivity",
                                      "positivity", "atomicity",
                                      "cluster-agreement", "transition"])
    ck.add_argument("--diagram")
    ck.add_argument("--combo")
    ck.add_argument("--from", dest="frm")
    ck.add_argument("--to", dest="to")
    ck.add_argument("--b", type=int, default=1)
    ck.add_argument("--c", type=int, default=1)
    ck.add_argument("--order", type=int, default=8)
    ck.add_argument("--depth", type=int, default=12)
    ck.set_defaults(func=_cmd_check)

    s = sub.add_parser("svg", help="export the diagram as SVG")
    s.add_argument("--diagram", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--shade-clusters", action="store_true")
    s.add_argument("--depth", type=int, default=12)
    s.set_defaults(func=_cmd_svg)
    return ap


def run(argv):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return 2
    try:
        needs_diagram = args.command in ("theta", "expand", "svg") or (
            args.command == "check" and args.suite in (
                "consistency", "wall-positivity", "positivity",
                "atomicity", "transition"))
        if needs_diagram and not getattr(args, "diagram", None):
            raise UsageError("--diagram is required for this command")
        if args.command == "check" and args.suite in ("positivity",
                                                      "atomicity") \
                and not args.combo:
            raise UsageError("--combo is required for this suite")
        if args.command == "check" and args.suite == "transition" \
                and (not args.frm or not args.to):
            raise UsageError("--from and --to are required for transition")
        return args.func(args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except (scatter.DiagramError, scatter.OnWallError,
            series.CutoffError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
