"""Reading and writing trees and reports as JSON documents.

A tree document is a flat list of nodes, each carrying its id, value
(``"inf"`` for the root), optional parent, optional integer labels, and
optional coordinates.  Serialization is deterministic: nodes are ordered
root first and then by ascending (value, id), keys are sorted, and floats
keep full precision so a parse of a serialize is the identity.
"""

from __future__ import annotations

import json
import math
from typing import Any

from .center import CenterResult, StarSummary
from .consistency import ConsistencyReport
from .errors import DocumentError
from .geodesic import GeodesicPath
from .labeling import RelabelReport
from .trees import (
    INF,
    LabeledMergeTree,
    Labeling,
    MergeTree,
    validate_merge_tree,
)

FORMAT_VERSION = 1


def fmt12(x: float) -> str:
    """Numbers for human-facing output, 12 significant digits."""
    return f"{x:.12g}"


def tree_to_doc(t: LabeledMergeTree, metadata: dict | None = None) -> dict:
    by_vertex = t.labeling.vertices_of()
    order = sorted(
        t.tree.f,
        key=lambda v: (v != t.tree.root, t.tree.f.get(v, 0.0), v),
    )
    nodes = []
    for v in order:
        node: dict[str, Any] = {"id": v}
        fv = t.tree.f[v]
        node["f"] = "inf" if math.isinf(fv) else fv
        if v in t.tree.parent:
            node["parent"] = t.tree.parent[v]
        labs = by_vertex.get(v)
        if labs:
            node["labels"] = labs
        if t.embedding is not None and v in t.embedding:
            coords = t.embedding[v]
            for key, val in zip(("x", "y", "z"), coords):
                node[key] = val
        nodes.append(node)
    return {"version": FORMAT_VERSION, "nodes": nodes, "metadata": metadata or {}}


def doc_to_tree(doc: dict) -> LabeledMergeTree:
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    if doc.get("version") != FORMAT_VERSION:
        raise DocumentError(f"unsupported document version {doc.get('version')!r}")
    nodes = doc.get("nodes")
    if not isinstance(nodes, list) or not nodes:
        raise DocumentError("document needs a nonempty 'nodes' list")

    f: dict[str, float] = {}
    parent: dict[str, str] = {}
    assign: dict[int, str] = {}
    coords: dict[str, tuple[float, ...]] = {}
    roots = []
    for node in nodes:
        if not isinstance(node, dict) or "id" not in node:
            raise DocumentError("every node needs an 'id'")
        vid = node["id"]
        if not isinstance(vid, str) or not vid:
            raise DocumentError(f"node id must be a nonempty string, got {vid!r}")
        if vid in f:
            raise DocumentError(f"duplicate node id {vid!r}")
        fv = node.get("f")
        if fv == "inf":
            f[vid] = INF
        elif isinstance(fv, (int, float)) and not isinstance(fv, bool):
            f[vid] = float(fv)
        else:
            raise DocumentError(f"node {vid!r} needs a numeric 'f' or \"inf\"")
        if "parent" in node:
            if not isinstance(node["parent"], str):
                raise DocumentError(f"node {vid!r} has a non-string parent")
            parent[vid] = node["parent"]
        else:
            roots.append(vid)
        labs = node.get("labels", [])
        if not isinstance(labs, list):
            raise DocumentError(f"node {vid!r} labels must be a list")
        for lab in labs:
            if not isinstance(lab, int) or isinstance(lab, bool):
                raise DocumentError(f"label {lab!r} on node {vid!r} is not an integer")
            if lab in assign:
                raise DocumentError(f"label {lab} appears on more than one node")
            assign[lab] = vid
        if "x" in node and "y" in node:
            pt = [node["x"], node["y"]]
            if "z" in node:
                pt.append(node["z"])
            for c in pt:
                if not isinstance(c, (int, float)) or isinstance(c, bool):
                    raise DocumentError(f"node {vid!r} has non-numeric coordinates")
            coords[vid] = tuple(float(c) for c in pt)

    if len(roots) != 1:
        raise DocumentError(f"document must have exactly one root node, found {len(roots)}")
    tree = MergeTree(root=roots[0], parent=parent, f=f)
    problems = validate_merge_tree(tree)
    if problems:
        listed = "; ".join(str(p) for p in problems[:5])
        raise DocumentError(f"tree fails validation: {listed}")
    embedding = coords if coords else None
    return LabeledMergeTree(tree, Labeling(assign), embedding)


def serialize_tree(t: LabeledMergeTree, metadata: dict | None = None) -> str:
    return json.dumps(tree_to_doc(t, metadata), sort_keys=True, indent=2) + "\n"


def parse_tree(data: bytes | str) -> LabeledMergeTree:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError:
            raise DocumentError("document is not valid UTF-8") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"document is not valid JSON: {exc}") from None
    return doc_to_tree(doc)


def relabel_report_to_doc(r: RelabelReport) -> dict:
    return {
        "member": r.member,
        "mode": r.mode,
        "renamed": {str(k): v for k, v in sorted(r.renamed.items())},
        "extra": {str(k): v for k, v in sorted(r.extra.items())},
        "cost": r.cost,
    }


def center_to_doc(
    result: CenterResult,
    summary: StarSummary,
    reports: list[RelabelReport] | None = None,
) -> dict:
    doc: dict[str, Any] = {
        "center": tree_to_doc(result.center),
        "radius": result.radius,
        "member_distances": list(result.member_distances),
        "normalized_distances": [link[2] for link in summary.links],
        "center_matrix_ultra": result.center_matrix_ultra,
    }
    if reports is not None:
        doc["relabel_reports"] = [relabel_report_to_doc(r) for r in reports]
    return doc


def consistency_to_doc(report: ConsistencyReport) -> dict:
    return {
        "delta": report.delta,
        "lambda": report.lam,
        "g": report.g,
        "labels": report.labels,
        "vertex": [
            {str(l): a[l] for l in sorted(a)} for a in report.alphas
        ],
        "variational": {
            "max_deviation": report.variational.max_deviation,
            "per_label": {
                str(l): {
                    "mean": rec.mean,
                    "deviations": rec.deviations,
                    "radii": rec.radii,
                }
                for l, rec in sorted(report.variational.per_label.items())
            },
        },
        "statistical": {
            str(l): {
                "min": s.min,
                "q1": s.q1,
                "median": s.median,
                "q3": s.q3,
                "max": s.max,
            }
            for l, s in sorted(report.statistical.items())
        },
        "edge_pc": report.edge_pc,
        "edge_pl": [
            {v: list(pair) for v, pair in member.items()} for member in report.edge_pl
        ],
    }


def geodesic_to_doc(path: GeodesicPath) -> dict:
    frames = []
    for fr in path.frames:
        entry: dict[str, Any] = {"lambda": fr.lam, "tree": tree_to_doc(fr.tree)}
        if fr.consistency is not None:
            entry["consistency"] = {str(l): c for l, c in sorted(fr.consistency.items())}
        frames.append(entry)
    return {"steps": path.steps, "frames": frames}


def dump_json(doc: dict) -> str:
    """Canonical JSON text for any report document."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
