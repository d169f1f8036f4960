"""Figure rendering for the report commands.

Everything here draws to files through the Agg backend, with the PNG
software tag stripped so identical inputs produce identical bytes.  Trees
without an embedding get a simple deterministic layout: leaves spaced left
to right in traversal order, inner vertices centered over their children,
height equal to the function value.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import Circle

from .center import StarSummary
from .consistency import FiveNumber, VariationalSummary
from .geodesic import GeodesicPath
from .trees import Coords, LabeledMergeTree

_SAVE = {"dpi": 100, "metadata": {"Software": None}}


def simple_layout(t: LabeledMergeTree) -> Coords:
    tree = t.tree
    kids = tree.children()
    for v in kids:
        kids[v].sort(key=lambda u: (tree.f[u], u))
    coords: Coords = {}
    next_x = 0.0
    # Recursion depth equals tree height; fine for report-sized trees.
    xs: dict[str, float] = {}

    def walk(v: str) -> float:
        nonlocal next_x
        if not kids[v]:
            xs[v] = next_x
            next_x += 1.0
        else:
            xs[v] = sum(walk(c) for c in kids[v]) / len(kids[v])
        return xs[v]

    walk(tree.root)
    finite = [f for f in tree.f.values() if math.isfinite(f)]
    lo, hi = min(finite), max(finite)
    span = (hi - lo) or 1.0
    for v in tree.f:
        y = tree.f[v]
        if math.isinf(y):
            y = hi + 0.1 * span
        coords[v] = (xs[v], y)
    return coords


def _draw_tree(ax, t: LabeledMergeTree, coords: Coords | None = None) -> Coords:
    pos = coords or t.embedding or simple_layout(t)
    if t.tree.root not in pos:
        pos = dict(pos)
        finite = [f for f in t.tree.f.values() if math.isfinite(f)]
        span = (max(finite) - min(finite)) or 1.0
        apex = max(
            (v for v in t.tree.f if v != t.tree.root), key=lambda v: t.tree.f[v]
        )
        pos[t.tree.root] = (pos[apex][0], pos[apex][1] + 0.1 * span)
    for v, p in sorted(t.tree.parent.items()):
        x0, y0 = pos[v][0], pos[v][1]
        x1, y1 = pos[p][0], pos[p][1]
        ax.plot([x0, x1], [y0, y1], color="0.4", linewidth=1.2, zorder=1)
    by_vertex = t.labeling.vertices_of()
    for v in sorted(t.tree.f):
        if v == t.tree.root:
            continue
        x, y = pos[v][0], pos[v][1]
        ax.plot([x], [y], marker="o", markersize=3, color="0.15", zorder=2)
        labs = by_vertex.get(v)
        if labs:
            ax.annotate(
                ",".join(str(l) for l in labs),
                (x, y),
                textcoords="offset points",
                xytext=(4, -2),
                fontsize=7,
            )
    ax.set_xticks([])
    return pos


def star_plot(summary: StarSummary, path: str) -> None:
    """Center in the middle, one spoke per member, length = distance."""
    fig, ax = plt.subplots(figsize=(5, 5))
    k = len(summary.links)
    cmap = plt.get_cmap("viridis")
    for idx, dist, norm in summary.links:
        angle = 2.0 * math.pi * idx / max(k, 1)
        x, y = dist * math.cos(angle), dist * math.sin(angle)
        ax.plot([0, x], [0, y], color=cmap(norm), linewidth=1.5, zorder=1)
        ax.plot([x], [y], marker="o", color=cmap(norm), zorder=2)
        ax.annotate(str(idx), (x, y), textcoords="offset points", xytext=(5, 3), fontsize=8)
    ax.plot([0], [0], marker="*", markersize=12, color="black", zorder=3)
    lim = max([abs(d) for _, d, _ in summary.links] + [1e-9]) * 1.25
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    ax.set_aspect("equal")
    ax.set_title("distance of each member to the center")
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def variational_plot(
    center: LabeledMergeTree, summary: VariationalSummary, path: str
) -> None:
    """Center tree with one circle per member at each label, radius showing
    how far that member's consistency strays from the label's mean."""
    fig, ax = plt.subplots(figsize=(6, 5))
    pos = _draw_tree(ax, center)
    for lab, rec in sorted(summary.per_label.items()):
        v = center.labeling.assign[lab]
        x, y = pos[v][0], pos[v][1]
        for r in sorted(rec.radii, reverse=True):
            if r > 0:
                ax.add_patch(
                    Circle((x, y), r, fill=False, color="tab:red", linewidth=0.8)
                )
    ax.set_title(f"variation of vertex consistency (delta={summary.delta:g})")
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def statistical_plot(stats: dict[int, FiveNumber], path: str) -> None:
    """Five-number boxes of per-member consistency for every label."""
    fig, ax = plt.subplots(figsize=(max(4, 0.6 * len(stats)), 4))
    boxes = []
    for lab, s in sorted(stats.items()):
        boxes.append(
            {
                "label": str(lab),
                "whislo": s.min,
                "q1": s.q1,
                "med": s.median,
                "q3": s.q3,
                "whishi": s.max,
            }
        )
    ax.bxp(boxes, showfliers=False)
    ax.set_xlabel("label")
    ax.set_ylabel("consistency")
    ax.set_ylim(-0.05, 1.05)
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def geodesic_plot(gpath: GeodesicPath, path: str, max_frames: int = 10) -> None:
    """Small multiples of the animation frames, left to right."""
    frames = gpath.frames
    if len(frames) > max_frames:
        stride = (len(frames) - 1) / (max_frames - 1)
        frames = [frames[round(i * stride)] for i in range(max_frames)]
    fig, axes = plt.subplots(
        1, len(frames), figsize=(2.2 * len(frames), 3), squeeze=False
    )
    for ax, frame in zip(axes[0], frames):
        _draw_tree(ax, frame.tree)
        ax.set_title(f"lam={frame.lam:.3g}", fontsize=8)
    fig.savefig(path, **_SAVE)
    plt.close(fig)


def sweep_plot(deltas: list[float], mean_devs: list[float], path: str) -> None:
    """Mean variational deviation as the locality parameter grows."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(deltas, mean_devs, marker="o", color="tab:blue")
    ax.set_xlabel("delta")
    ax.set_ylabel("mean variational deviation")
    fig.savefig(path, **_SAVE)
    plt.close(fig)
