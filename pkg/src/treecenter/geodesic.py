"""Animation frames between two same-labeled merge trees.

The straight line between two induced matrices stays inside the valid
matrices, and the tree of each intermediate matrix realizes a geodesic for
the interleaving distance: distances along the path add up exactly.  Frames
come from evenly spaced points on that line.  A second, purely geometric
mode interpolates vertex coordinates between two embedded trees without
touching the structure, and a third helper places the center tree on the
canvas from its members' positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .consistency import max_label_distance, vertex_consistency
from .errors import AgreementError, ConfigurationError, InputError
from .matrices import SymMatrix, induced_matrix, merge_tree_of_matrix
from .trees import Coords, LabeledMergeTree


@dataclass
class GeodesicFrame:
    lam: float
    tree: LabeledMergeTree
    consistency: dict[int, float] | None = None


@dataclass
class GeodesicPath:
    source: LabeledMergeTree
    target: LabeledMergeTree
    steps: int
    frames: list[GeodesicFrame]


def _first_label(t: LabeledMergeTree) -> dict[str, int]:
    """Smallest label on each labeled vertex."""
    out: dict[str, int] = {}
    for lab in sorted(t.labeling.assign, reverse=True):
        out[t.labeling.assign[lab]] = lab
    return out


def _x_of(t: LabeledMergeTree, label: int) -> float | None:
    if t.embedding is None:
        return None
    v = t.labeling.assign.get(label)
    if v is None or v not in t.embedding:
        return None
    return t.embedding[v][0]


def _frame_embedding(
    frame: LabeledMergeTree, pool: list[LabeledMergeTree]
) -> Coords | None:
    """Layout for an intermediate tree: y is each vertex's own value, x the
    midpoint of the pooled x-coordinates of all labels in its subtree.
    Returns None when the pool lacks coordinates."""
    tree = frame.tree
    by_vertex = frame.labeling.vertices_of()
    kids = tree.children()
    order: list[str] = []
    stack = [tree.root]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(kids[v])

    coords: Coords = {}
    below: dict[str, list[int]] = {}
    for v in reversed(order):
        labs = list(by_vertex.get(v, []))
        for c in kids[v]:
            labs.extend(below[c])
        below[v] = labs
        if v == tree.root:
            continue
        xs = []
        for lab in labs:
            for t in pool:
                x = _x_of(t, lab)
                if x is not None:
                    xs.append(x)
        if not xs:
            return None
        coords[v] = ((min(xs) + max(xs)) / 2.0, tree.f[v])
    finite = [f for f in tree.f.values() if math.isfinite(f)]
    span = (max(finite) - min(finite)) or 1.0
    apex = max((v for v in tree.f if v != tree.root), key=lambda v: tree.f[v])
    coords[tree.root] = (coords[apex][0], tree.f[apex] + 0.1 * span)
    return coords


def geodesic_frames(
    source: LabeledMergeTree,
    target: LabeledMergeTree,
    steps: int = 10,
    with_consistency: bool = False,
    delta: float = 0.05,
    lambda_metric: float = 1.0,
) -> GeodesicPath:
    """Trees along the matrix line from source to target.

    Frame k sits at lam = k/(steps-1); its tree realizes the convex
    combination of the two induced matrices, so the interleaving distances
    from source and to target always sum to the total.  When asked for,
    each frame carries its per-label consistency against the target, which
    animates toward exactly 1.  Frames are laid out on the canvas whenever
    both endpoints carry full coordinates.
    """
    if source.labeling.domain != target.labeling.domain:
        raise AgreementError("source and target carry different label domains")
    if steps < 2:
        raise InputError("need at least 2 steps (the two endpoints)")
    m1 = induced_matrix(source)
    m2 = induced_matrix(target)
    scale = max_label_distance([source, target], lambda_metric)

    frames: list[GeodesicFrame] = []
    for k in range(steps):
        lam = k / (steps - 1)
        mix = SymMatrix(list(m1.labels), (1.0 - lam) * m1.entries + lam * m2.entries)
        bare = merge_tree_of_matrix(mix)
        tree = LabeledMergeTree(
            bare.tree, bare.labeling, _frame_embedding(bare, [source, target])
        )
        cons = None
        if with_consistency:
            cons = vertex_consistency(
                tree, target, delta, lambda_metric, scale=scale
            )
        frames.append(GeodesicFrame(lam=lam, tree=tree, consistency=cons))
    return GeodesicPath(source=source, target=target, steps=steps, frames=frames)


def linear_embedding_frames(
    source: LabeledMergeTree, target: LabeledMergeTree, steps: int = 10
) -> list[LabeledMergeTree]:
    """Frames that keep the source's structure and slide its coordinates.

    Every source vertex must carry a label that also exists in the target
    (the correspondence), and both trees must be embedded in the same
    dimension.  Frame k moves each vertex a fraction k/(steps-1) of the way
    to its corresponding target position.
    """
    if steps < 2:
        raise InputError("need at least 2 steps (the two endpoints)")
    if source.embedding is None or target.embedding is None:
        raise ConfigurationError("both trees must be embedded")
    first = _first_label(source)
    pairs: dict[str, tuple[tuple[float, ...], tuple[float, ...]]] = {}
    for v in source.tree.f:
        if v == source.tree.root:
            # roots carry no label; they correspond to each other directly
            if v not in source.embedding or target.tree.root not in target.embedding:
                continue
            w = target.tree.root
        else:
            lab = first.get(v)
            if lab is None:
                raise ConfigurationError(
                    f"vertex {v!r} carries no label, so it has no counterpart"
                )
            w = target.labeling.assign.get(lab)
            if w is None:
                raise ConfigurationError(f"label {lab} is missing from the target")
        try:
            a, b = source.embedding[v], target.embedding[w]
        except KeyError as exc:
            raise ConfigurationError(
                f"vertex {exc.args[0]!r} has no coordinates"
            ) from None
        if len(a) != len(b):
            raise ConfigurationError("embeddings have different dimensions")
        pairs[v] = (a, b)

    out = []
    for k in range(steps):
        t = k / (steps - 1)
        coords = {
            v: tuple((1.0 - t) * p + t * q for p, q in zip(a, b))
            for v, (a, b) in pairs.items()
        }
        out.append(LabeledMergeTree(source.tree, source.labeling, coords))
    return out


def center_embedding(
    center: LabeledMergeTree, members: list[LabeledMergeTree]
) -> Coords:
    """Canvas position for every center vertex from its members' positions.

    A vertex's x-coordinate is the midpoint of the least and greatest
    x-coordinate its labels take across the members; its y-coordinate is its
    own value.  The root hovers a tenth of the value range above its child.
    """
    if not members:
        raise InputError("need at least one member")
    tree = center.tree
    by_vertex = center.labeling.vertices_of()
    coords: Coords = {}
    for v in tree.f:
        if v == tree.root:
            continue
        xs: list[float] = []
        for lab in by_vertex.get(v, []):
            for m in members:
                if m.embedding is None:
                    raise ConfigurationError("every member must be embedded")
                w = m.labeling.assign.get(lab)
                if w is None:
                    raise ConfigurationError(
                        f"label {lab} is missing from a member; complete labels first"
                    )
                if w not in m.embedding:
                    raise ConfigurationError(f"vertex {w!r} has no coordinates")
                xs.append(m.embedding[w][0])
        if not xs:
            raise ConfigurationError(
                f"center vertex {v!r} carries no label; complete labels first"
            )
        coords[v] = ((min(xs) + max(xs)) / 2.0, tree.f[v])

    finite = [f for f in tree.f.values() if math.isfinite(f)]
    span = (max(finite) - min(finite)) or 1.0
    apex = max((v for v in tree.f if v != tree.root), key=lambda v: tree.f[v])
    coords[tree.root] = (coords[apex][0], tree.f[apex] + 0.1 * span)
    return coords
