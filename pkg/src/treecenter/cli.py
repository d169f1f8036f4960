"""Command-line entry point.

Subcommands cover the whole pipeline: averaging (center), pairwise distance,
label reconciliation, uncertainty reports, animation frames, scalar-field
extraction, the locality-parameter sweep, and the HTTP service.  Report
commands print a short human summary and, given --out, write the JSON
report, CSV tables, and PNG figures into that directory; outputs are
byte-stable across runs.

Exit codes: 0 on success, 1 for usage problems, 2 for bad data or broken
invariants (with a one-line JSON diagnostic on stderr).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__
from .center import ensemble_summary, one_center_tree
from .consistency import consistency_report, variational_consistency
from .documents import (
    center_to_doc,
    consistency_to_doc,
    dump_json,
    fmt12,
    geodesic_to_doc,
    parse_tree,
    relabel_report_to_doc,
    serialize_tree,
    tree_to_doc,
)
from .errors import AgreementError, InputError, TreeToolkitError
from .geodesic import geodesic_frames
from .labeling import complete_internal_labels, harmonize
from .matrices import interleaving_distance
from .scalarfield import extract_merge_tree, parse_grid
from .trees import Ensemble


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage problems; this tool reserves 2 for data errors."""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _load(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    return parse_tree(data)


def _prepare(paths: list[str], mode: str, lam: float):
    ensemble = Ensemble([_load(p) for p in paths])
    if mode == "full":
        if ensemble.agreement != "full":
            raise AgreementError(
                "members carry different label domains; rerun with --mode partial "
                "or --mode disagree, or run the relabel command first"
            )
        return ensemble, []
    return harmonize(ensemble, lam)


def _outdir(args) -> Path | None:
    if args.out is None:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt12(x) if isinstance(x, float) else x for x in row])


def cmd_center(args) -> int:
    ensemble, reports = _prepare(args.trees, args.mode, args.lam)
    result = one_center_tree(ensemble)
    summary = ensemble_summary(result)
    doc = center_to_doc(result, summary, reports if reports else None)
    out = _outdir(args)
    if out is None:
        sys.stdout.write(dump_json(doc))
        return 0
    (out / "center.json").write_text(dump_json(doc))
    _write_csv(
        out / "distances.csv",
        ["member", "distance", "normalized"],
        [[i, d, n] for i, d, n in summary.links],
    )
    if not args.no_figures:
        from .plots import star_plot

        star_plot(summary, str(out / "star.png"))
    print(f"radius {fmt12(result.radius)}")
    for i, d, _ in summary.links:
        print(f"member {i} distance {fmt12(d)}")
    return 0


def cmd_distance(args) -> int:
    a, b = _load(args.a), _load(args.b)
    print(fmt12(interleaving_distance(a, b)))
    return 0


def cmd_relabel(args) -> int:
    ensemble = Ensemble([_load(p) for p in args.trees])
    harmonized, reports = harmonize(ensemble, args.lam)
    docs = [tree_to_doc(m) for m in harmonized.members]
    report_docs = [relabel_report_to_doc(r) for r in reports]
    out = _outdir(args)
    if out is None:
        sys.stdout.write(dump_json({"members": docs, "reports": report_docs}))
        return 0
    for i, m in enumerate(harmonized.members):
        (out / f"member_{i}.json").write_text(serialize_tree(m))
    (out / "reports.json").write_text(dump_json({"reports": report_docs}))
    print(f"relabeled {len(reports)} of {len(docs)} members")
    return 0


def _completed_pipeline(args):
    ensemble, reports = _prepare(args.trees, args.mode, args.lam)
    result = one_center_tree(ensemble)
    completed, center, _ = complete_internal_labels(ensemble, result.center, args.lam)
    return completed, center, result, reports


def cmd_consistency(args) -> int:
    completed, center, _, _ = _completed_pipeline(args)
    report = consistency_report(
        center, completed.members, args.delta, args.lam, args.g
    )
    doc = consistency_to_doc(report)
    out = _outdir(args)
    if out is None:
        sys.stdout.write(dump_json(doc))
        return 0
    (out / "consistency.json").write_text(dump_json(doc))
    rows = [
        [i, lab, alpha[lab]]
        for i, alpha in enumerate(report.alphas)
        for lab in sorted(alpha)
    ]
    _write_csv(out / "vertex.csv", ["member", "label", "consistency"], rows)
    if not args.no_figures:
        from .plots import statistical_plot, variational_plot

        variational_plot(center, report.variational, str(out / "variational.png"))
        statistical_plot(report.statistical, str(out / "statistical.png"))
    for lab, rec in sorted(report.variational.per_label.items()):
        print(f"label {lab} mean {fmt12(rec.mean)}")
    return 0


def cmd_geodesic(args) -> int:
    a, b = _load(args.a), _load(args.b)
    path = geodesic_frames(
        a, b, args.steps, with_consistency=args.with_consistency, delta=args.delta
    )
    doc = geodesic_to_doc(path)
    out = _outdir(args)
    if out is None:
        sys.stdout.write(dump_json(doc))
        return 0
    (out / "frames.json").write_text(dump_json(doc))
    rows = []
    for i, frame in enumerate(path.frames):
        rows.append(
            [
                i,
                frame.lam,
                interleaving_distance(a, frame.tree),
                interleaving_distance(frame.tree, b),
            ]
        )
    _write_csv(out / "frames.csv", ["frame", "lambda", "d_source", "d_target"], rows)
    if not args.no_figures:
        from .plots import geodesic_plot

        geodesic_plot(path, str(out / "frames.png"))
    print(f"{args.steps} frames, total distance {fmt12(interleaving_distance(a, b))}")
    return 0


def cmd_extract(args) -> int:
    try:
        data = Path(args.grid).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {args.grid}: {exc.strerror or exc}") from None
    grid = parse_grid(data, connectivity=args.connectivity)
    tree, records = extract_merge_tree(grid, augmented=args.augmented)
    meta = {
        "criticals": [
            {
                "vertex": r.vertex,
                "kind": r.kind,
                "position": list(r.position),
                "value": r.value,
            }
            for r in records
        ]
    }
    text = serialize_tree(tree, metadata=meta)
    if args.out is None:
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
        print(f"{len(tree.labeling.assign)} leaves, {tree.tree.size()} vertices")
    return 0


def cmd_sweep_delta(args) -> int:
    try:
        deltas = [float(x) for x in args.deltas.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"bad --deltas list: {args.deltas!r}") from None
    if not deltas:
        raise InputError("--deltas needs at least one value")
    completed, center, _, _ = _completed_pipeline(args)

    means = []
    reports = {}
    for d in deltas:
        summary = variational_consistency(
            center, completed.members, d, args.lam, args.g
        )
        devs = [x for rec in summary.per_label.values() for x in rec.deviations]
        means.append(sum(devs) / len(devs) if devs else 0.0)
        reports[fmt12(d)] = consistency_to_doc(
            consistency_report(center, completed.members, d, args.lam, args.g)
        )
    doc = {"deltas": deltas, "mean_deviation": means, "reports": reports}
    out = _outdir(args)
    if out is None:
        sys.stdout.write(dump_json(doc))
        return 0
    (out / "sweep.json").write_text(dump_json(doc))
    _write_csv(
        out / "sweep.csv",
        ["delta", "mean_deviation"],
        [[d, m] for d, m in zip(deltas, means)],
    )
    if not args.no_figures:
        from .plots import sweep_plot

        sweep_plot(deltas, means, str(out / "sweep.png"))
    for d, m in zip(deltas, means):
        print(f"delta {fmt12(d)} mean-deviation {fmt12(m)}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import build_app

    app = build_app(state_dir=args.state_dir, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="treecenter", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_report_flags(p, with_mode=True):
        if with_mode:
            p.add_argument(
                "--mode",
                choices=["full", "partial", "disagree"],
                default="full",
                help="how to treat label mismatches: refuse (full) or reconcile",
            )
        p.add_argument("--lambda", dest="lam", type=float, default=1.0,
                       help="blend between tree distance (1) and embedded distance (0)")
        p.add_argument("--out", help="directory for report files")
        p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")

    p = sub.add_parser("center", help="average an ensemble of tree documents")
    p.add_argument("trees", nargs="+")
    add_report_flags(p)
    p.set_defaults(func=cmd_center)

    p = sub.add_parser("distance", help="interleaving distance between two trees")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("relabel", help="bring all trees onto one label set")
    p.add_argument("trees", nargs="+")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--out", help="directory for the relabeled documents")
    p.set_defaults(func=cmd_relabel)

    p = sub.add_parser("consistency", help="per-vertex agreement with the center")
    p.add_argument("trees", nargs="+")
    p.add_argument("--delta", type=float, default=0.05, help="locality parameter")
    p.add_argument("--g", type=float, default=1.0, help="glyph spacing")
    add_report_flags(p)
    p.set_defaults(func=cmd_consistency)

    p = sub.add_parser("geodesic", help="animation frames between two trees")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--with-consistency", action="store_true",
                   help="attach per-frame consistency against the target")
    p.add_argument("--out", help="directory for report files")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("extract", help="merge tree of a gridded scalar field")
    p.add_argument("grid", help="CSV rows or binary width/height/float64 layout")
    p.add_argument("--connectivity", type=int, choices=[4, 8], default=4)
    p.add_argument("--augmented", action="store_true",
                   help="keep a vertex for every grid point")
    p.add_argument("--out", help="output tree document path")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("sweep-delta", help="consistency reports across delta values")
    p.add_argument("trees", nargs="+")
    p.add_argument("--deltas", default="0.05,0.07,0.10,0.15")
    p.add_argument("--g", type=float, default=1.0)
    add_report_flags(p)
    p.set_defaults(func=cmd_sweep_delta)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--state-dir", help="persist sessions to this directory")
    p.add_argument("--ui-dir", help="serve a built web client from this directory at /ui")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except TreeToolkitError as exc:
        diag = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(diag), file=sys.stderr)
        return 2
    except OSError as exc:
        diag = {"error": "IOError", "message": str(exc)}
        print(json.dumps(diag), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
