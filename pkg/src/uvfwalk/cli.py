"""Command-line interface.

Exit status: 0 on success, 1 on a processing error, 2 on a usage error.
"""

import argparse
import sys
from pathlib import Path

from . import __version__
from .bench import cumulative_rows, run_benchmark, scene_seeds, table_rows
from .errors import UVFError
from .evaluation import (DEFAULT_PROPORTIONS, ContourError, quantile_report,
                         rms_closest_point)
from .geometry import square_resize_map
from .io import (Contour, LandmarkDocument, read_field, read_grid, read_heatmap,
                 read_landmarks, write_csv, write_field, write_heatmap, write_json,
                 write_landmarks)
from .render import render_overlay
from .synth import NoiseSpec, make_scene
from .targets import build_endpoint_heatmaps, build_uvf
from .walker import WalkConfig, walk_closed, walk_open

DIRECTIONS = {"gt2pred": "gt_to_pred", "pred2gt": "pred_to_gt", "sym": "symmetric"}


def _floats(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _walk_options(p):
    p.add_argument("--step", type=float, default=1.0, help="walk step in pixels")
    p.add_argument("--stop-threshold", type=float, default=0.5,
                   help="end-heatmap activation that stops an open walk")
    p.add_argument("--max-steps", type=int, default=None)


def _walk_config(args):
    return WalkConfig(step=args.step, stop_threshold=args.stop_threshold, max_steps=args.max_steps)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_help(sys.stderr)
        self.exit(2, f"\n{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="uvfwalk",
                     description="Unit-vector-field contour targets, walking and evaluation.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("targets", help="landmarks JSON -> field and heatmap grid files")
    p.add_argument("landmarks")
    p.add_argument("-o", "--out", required=True, help="output directory")
    p.add_argument("--mode", choices=["vertex", "segment"], default="vertex")
    p.add_argument("--resize", type=int, default=None,
                   help="pad to square and rescale to this many pixels first")
    p.add_argument("--area", type=float, default=None,
                   help="scale heatmap variance by this object area (px^2) instead of contour length")
    p.add_argument("--k", type=float, default=None, help="heatmap proportionality constant")

    p = sub.add_parser("walk", help="grid files -> contour JSON")
    p.add_argument("--field", required=True)
    p.add_argument("--start", help="start heatmap grid (open contours)")
    p.add_argument("--end", help="end heatmap grid (open contours)")
    p.add_argument("--closed", action="store_true", help="search for a loop instead")
    p.add_argument("--from", dest="seed_point", nargs=2, type=float, metavar=("X", "Y"),
                   help="seed point for --closed")
    p.add_argument("--label", default="contour")
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--overlay", help="also write a PNG overlay")
    _walk_options(p)

    p = sub.add_parser("eval", help="contours + landmarks -> RMS report")
    p.add_argument("--pred", action="append", required=True,
                   help="predicted contours JSON (repeatable, paired with --gt in order)")
    p.add_argument("--gt", action="append", required=True, help="ground-truth landmarks JSON")
    p.add_argument("--direction", choices=list(DIRECTIONS), default="gt2pred")
    p.add_argument("--pixel-spacing", type=float, default=None,
                   help="mm per pixel; adds an error_mm column")
    p.add_argument("--proportions", type=_floats, default=list(DEFAULT_PROPORTIONS))
    p.add_argument("-o", "--out", required=True, help="report path (.json or .csv)")

    p = sub.add_parser("synth", help="seeded synthetic scene bundles")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--kind", choices=["open", "circle"], default="open")
    p.add_argument("--width", type=int, default=224)
    p.add_argument("--height", type=int, default=224)
    p.add_argument("--mode", choices=["vertex", "segment"], default="vertex")
    p.add_argument("--angular-noise", type=float, default=0.0, help="degrees")
    p.add_argument("--shift-noise", type=float, default=0.0, help="pixels")
    p.add_argument("-o", "--out", required=True)

    p = sub.add_parser("bench", help="round-trip benchmark with a noise sweep")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--noise", type=_floats, default=[0.0, 5.0, 15.0],
                   help="comma-separated angular noise levels in degrees")
    p.add_argument("--shift-noise", type=float, default=0.0)
    p.add_argument("--mode", choices=["vertex", "segment"], default="vertex")
    p.add_argument("--direction", choices=list(DIRECTIONS), default="gt2pred")
    p.add_argument("--no-baseline", action="store_true")
    p.add_argument("-o", "--out", required=True, help="output directory")
    _walk_options(p)

    p = sub.add_parser("render", help="PNG overlay of grids and contours")
    p.add_argument("--image", help="grayscale grid file")
    p.add_argument("--field")
    p.add_argument("--heatmap", action="append", default=[])
    p.add_argument("--landmarks", action="append", default=[], help="drawn in yellow")
    p.add_argument("--contours", action="append", default=[], help="drawn in label colours")
    p.add_argument("--size", nargs=2, type=int, metavar=("W", "H"))
    p.add_argument("-o", "--out", required=True)
    return parser


def cmd_targets(args):
    doc = read_landmarks(args.landmarks)
    w, h = doc.width, doc.height
    contours = [(c.label, c.polyline) for c in doc.contours]
    if args.resize:
        m = square_resize_map(w, h, args.resize)
        contours = [(label, m.apply_polyline(poly)) for label, poly in contours]
        w = h = args.resize
    out = Path(args.out)
    manifest = {"width": w, "height": h, "mode": args.mode, "contours": []}
    for label, poly in contours:
        entry = {"label": label, "closed": poly.closed, "field": f"{label}.uvf.uvfg"}
        write_field(out / entry["field"], build_uvf(poly, w, h, args.mode))
        if not poly.closed:
            start, end = build_endpoint_heatmaps(poly, w, h, area=args.area, k=args.k)
            entry.update(start=f"{label}.start.uvfg", end=f"{label}.end.uvfg", sigma=start.sigma)
            write_heatmap(out / entry["start"], start)
            write_heatmap(out / entry["end"], end)
        manifest["contours"].append(entry)
    write_json(out / "targets.json", manifest)


def cmd_walk(args):
    field = read_field(args.field)
    cfg = _walk_config(args)
    if args.closed:
        if args.seed_point is None:
            raise SystemExit("walk: --closed needs --from X Y")
        walked = walk_closed(field, args.seed_point, cfg)
    else:
        if not (args.start and args.end):
            raise SystemExit("walk: open contours need --start and --end")
        walked = walk_open(field, read_heatmap(args.start), read_heatmap(args.end), cfg)
    poly = walked.to_polyline()
    doc = LandmarkDocument(field.width, field.height, [Contour(
        args.label, poly, {"termination": walked.termination, "steps": walked.steps})])
    write_landmarks(args.out, doc)
    if args.overlay:
        render_overlay(args.overlay, field.shape, field=field, polylines=[(poly, args.label)])
    print(f"{args.label}: {walked.termination} after {walked.steps} steps")
    if walked.termination not in ("reached_end", "loop_closed"):
        print(f"warning: walk ended with {walked.termination}", file=sys.stderr)


def cmd_eval(args):
    if len(args.pred) != len(args.gt):
        raise SystemExit("eval: --pred and --gt must be given the same number of times")
    direction = DIRECTIONS[args.direction]
    errors, per_contour = [], []
    for pred_path, gt_path in zip(args.pred, args.gt):
        pred, gt = read_landmarks(pred_path), read_landmarks(gt_path)
        for c in gt.contours:
            try:
                p = pred.get(c.label)
            except KeyError:
                raise UVFError(f"{pred_path}: no contour labelled {c.label!r}") from None
            rms = rms_closest_point(p.polyline, c.polyline, direction)
            sample = f"{gt_path}:{c.label}"
            errors.append(ContourError(rms, sample, "uvf"))
            per_contour.append({"sample_id": sample, "rms_px": rms})
    report = quantile_report(errors, args.proportions)
    spacing = args.pixel_spacing
    if str(args.out).endswith(".csv"):
        header = ["proportion", "error_px"] + (["error_mm"] if spacing else [])
        rows = [(q, e) + ((e * spacing,) if spacing else ()) for q, e in report.rows()]
        write_csv(args.out, header, rows)
    else:
        out = {"direction": direction, "proportions": list(report.proportions),
               "error_px": list(report.errors), "contours": per_contour}
        if spacing:
            out["error_mm"] = list(report.scaled(spacing).errors)
        write_json(args.out, out)


def cmd_synth(args):
    out = Path(args.out)
    index = []
    for i, s in enumerate(scene_seeds(args.seed, args.count)):
        noise = None
        if args.angular_noise or args.shift_noise:
            noise = NoiseSpec(args.angular_noise, args.shift_noise, s)
        scene = make_scene(s, args.width, args.height, args.kind, mode=args.mode, noise=noise)
        d = out / f"scene_{i:04d}"
        label = "gt"
        extra = {"seed": s, "kind": scene.kind}
        if scene.kind == "circle":
            extra.update(center=list(scene.circle_center), radius=scene.circle_radius)
        write_landmarks(d / "landmarks.json", LandmarkDocument(
            scene.width, scene.height, [Contour(label, scene.gt)], extra=extra))
        if scene.kind == "open":
            pred = scene.prediction()
            write_field(d / "field.uvfg", pred.uvf)
            write_heatmap(d / "start.uvfg", pred.start)
            write_heatmap(d / "end.uvfg", pred.end)
        else:
            write_field(d / "field.uvfg", scene.field)
        index.append({"dir": d.name, "seed": s})
    write_json(out / "index.json", {"seed": args.seed, "count": args.count, "kind": args.kind,
                                    "scenes": index})


def cmd_bench(args):
    result = run_benchmark(args.count, args.seed, args.noise, args.shift_noise,
                           mode=args.mode, cfg=_walk_config(args),
                           direction=DIRECTIONS[args.direction], baseline=not args.no_baseline)
    out = Path(args.out)
    write_json(out / "report.json", result)
    write_csv(out / "table.csv", ["method", "proportion", "error_px"], table_rows(result))
    write_csv(out / "cumulative.csv", ["method", "error_px", "proportion"], cumulative_rows(result))
    for level in result["levels"]:
        print(f"noise {level['angular_sigma_deg']:g} deg: mean RMS {level['mean_rms']:.3f} px")
        print("  proportion " + " ".join(f"{q:>5g}" for q in level["uvf"]["proportions"]))
        for method in ("baseline", "uvf"):
            if method in level:
                print(f"  {method:<10} " + " ".join(f"{e:5.2f}" for e in level[method]["errors"]))


def cmd_render(args):
    field = read_field(args.field) if args.field else None
    image = read_grid(args.image)[0] if args.image else None
    heatmaps = [(read_heatmap(p), "start" if i == 0 else "end") for i, p in enumerate(args.heatmap)]
    polylines = []
    shape = None
    for path in args.landmarks:
        doc = read_landmarks(path)
        shape = shape or (doc.height, doc.width)
        polylines += [(c.polyline, "gt") for c in doc.contours]
    for path in args.contours:
        doc = read_landmarks(path)
        shape = shape or (doc.height, doc.width)
        polylines += [(c.polyline, c.label) for c in doc.contours]
    for g in [field, image] + [h for h, _ in heatmaps]:
        if g is not None:
            shape = g.shape
            break
    if args.size:
        shape = (args.size[1], args.size[0])
    if shape is None:
        raise SystemExit("render: nothing to size the image from; pass --size")
    render_overlay(args.out, shape, image=image, field=field, heatmaps=heatmaps,
                   polylines=polylines)


COMMANDS = {"targets": cmd_targets, "walk": cmd_walk, "eval": cmd_eval,
            "synth": cmd_synth, "bench": cmd_bench, "render": cmd_render}


def _subparser(parser, name):
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    return sub.choices[name]


def main(argv=None):
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    if extra:
        # Report stray flags against the subcommand so its own help is shown.
        _subparser(parser, args.command).error(f"unrecognized arguments: {' '.join(extra)}")
    try:
        COMMANDS[args.command](args)
    except SystemExit as e:
        if isinstance(e.code, str):
            _subparser(parser, args.command).print_usage(sys.stderr)
            print(f"error: {e.code}", file=sys.stderr)
            return 2
        raise
    except (UVFError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
