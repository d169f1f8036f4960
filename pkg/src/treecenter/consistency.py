"""Per-vertex agreement between ensemble members and their center.

The consistency of a labeled vertex compares its vector of distances to all
other labeled vertices in a member against the same vector in the center,
through a Gaussian-weighted cosine similarity.  The weight parameter delta
acts as a locality knob: distances much larger than delta are damped away,
so small delta focuses on local structure and delta = infinity recovers the
plain cosine.  Delta is always interpreted relative to the largest pairwise
label distance of the trees involved, which makes values comparable across
differently scaled inputs.

On top of the raw per-vertex values sit three summaries: variational
(deviation from the per-label mean, scaled to glyph radii), statistical
(five-number summaries per label) and per-edge values for coloring.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AgreementError, InputError
from .trees import LabeledMergeTree, blended_distance


def weighted_cosine(a, b, delta: float) -> float:
    """Gaussian-weighted cosine similarity of two nonnegative vectors.

    Every entry is damped by exp(-(x/delta)^2) before the usual cosine is
    taken, so entries beyond a few delta stop contributing.  Identical
    vectors give exactly 1.  A pair of zero vectors counts as 1 (identical
    configurations), a single zero vector as 0.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise InputError(f"vector lengths differ: {a.shape} vs {b.shape}")
    if not (delta > 0):
        raise InputError("delta must be positive (or infinity)")
    if np.array_equal(a, b):
        return 1.0
    if math.isinf(delta):
        u, v = a, b
    else:
        u = np.exp(-np.square(a / delta)) * a
        v = np.exp(-np.square(b / delta)) * b
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 and nv == 0.0:
        return 1.0
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(min(max(np.dot(u, v) / (nu * nv), 0.0), 1.0))


def _label_vertices(t: LabeledMergeTree) -> dict[int, str]:
    return {lab: t.labeling.assign[lab] for lab in t.labels()}


def max_label_distance(trees: list[LabeledMergeTree], lam: float) -> float:
    """Largest blended distance between any two labeled vertices of any tree."""
    best = 0.0
    for t in trees:
        verts = sorted(set(t.labeling.assign.values()))
        for u, v in itertools.combinations(verts, 2):
            best = max(best, blended_distance(t, u, v, lam))
    return best


def _effective_delta(delta: float, scale: float) -> float:
    if math.isinf(delta) or scale == 0.0:
        return math.inf
    return delta * scale


def vertex_consistency(
    member: LabeledMergeTree,
    center: LabeledMergeTree,
    delta: float = 0.05,
    lam: float = 1.0,
    scale: float | None = None,
) -> dict[int, float]:
    """Similarity of each label's distance signature between member and center.

    Both trees must carry the same label domain.  For label l the signature
    lists blended distances from l's vertex to every other label, in label
    order; the result maps l to the weighted cosine of the two signatures.
    ``scale`` overrides the normalization base (the max pairwise distance),
    which ensemble-level summaries use to share one base across members.
    """
    if member.labeling.domain != center.labeling.domain:
        raise AgreementError("member and center carry different label domains")
    labels = member.labels()
    if scale is None:
        scale = max_label_distance([member, center], lam)
    eff = _effective_delta(delta, scale)

    vm = _label_vertices(member)
    vc = _label_vertices(center)
    out: dict[int, float] = {}
    for l in labels:
        others = [m for m in labels if m != l]
        a = [blended_distance(member, vm[l], vm[m], lam) for m in others]
        b = [blended_distance(center, vc[l], vc[m], lam) for m in others]
        out[l] = weighted_cosine(a, b, eff)
    return out


@dataclass
class LabelVariation:
    mean: float
    deviations: list[float]
    radii: list[float]


@dataclass
class VariationalSummary:
    """Per-label deviation of member consistencies from their mean.

    ``max_deviation`` is the largest deviation anywhere in the ensemble and
    normalizes every glyph radius, so the biggest glyph always has radius
    g/2 (or 0 when all members agree exactly).
    """

    delta: float
    lam: float
    g: float
    max_deviation: float
    per_label: dict[int, LabelVariation] = field(default_factory=dict)


def variational_consistency(
    center: LabeledMergeTree,
    members: list[LabeledMergeTree],
    delta: float = 0.05,
    lam: float = 1.0,
    g: float = 1.0,
) -> VariationalSummary:
    if not members:
        raise InputError("need at least one member")
    scale = max_label_distance(members + [center], lam)
    alphas = [vertex_consistency(m, center, delta, lam, scale=scale) for m in members]
    labels = center.labels()

    means = {l: float(np.mean([a[l] for a in alphas])) for l in labels}
    devs = {l: [abs(a[l] - means[l]) for a in alphas] for l in labels}
    # One normalizer for the whole ensemble, not one per label.
    big = max((d for ds in devs.values() for d in ds), default=0.0)
    out = VariationalSummary(delta=delta, lam=lam, g=g, max_deviation=big)
    for l in labels:
        radii = [g * d / (2.0 * big) if big > 0 else 0.0 for d in devs[l]]
        out.per_label[l] = LabelVariation(mean=means[l], deviations=devs[l], radii=radii)
    return out


@dataclass
class FiveNumber:
    min: float
    q1: float
    median: float
    q3: float
    max: float

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.min, self.q1, self.median, self.q3, self.max)


def statistical_consistency(
    center: LabeledMergeTree,
    members: list[LabeledMergeTree],
    delta: float = 0.05,
    lam: float = 1.0,
) -> dict[int, FiveNumber]:
    """Five-number summary of each label's consistency across the members.

    Quartiles interpolate linearly between the closest order statistics.
    """
    if not members:
        raise InputError("need at least one member")
    scale = max_label_distance(members + [center], lam)
    alphas = [vertex_consistency(m, center, delta, lam, scale=scale) for m in members]
    out: dict[int, FiveNumber] = {}
    for l in center.labels():
        vals = np.array([a[l] for a in alphas])
        q = np.quantile(vals, [0.0, 0.25, 0.5, 0.75, 1.0], method="linear")
        out[l] = FiveNumber(*(float(x) for x in q))
    return out


def _vertex_alpha(t: LabeledMergeTree, alpha: dict[int, float]) -> dict[str, float]:
    """Value per vertex; a vertex with several labels takes their minimum."""
    by_vertex = t.labeling.vertices_of()
    out: dict[str, float] = {}
    for v, labs in by_vertex.items():
        missing = [l for l in labs if l not in alpha]
        if missing:
            raise InputError(f"no consistency value for label {missing[0]}")
        out[v] = min(alpha[l] for l in labs)
    return out


def edge_consistency(
    tree: LabeledMergeTree, alpha: dict[int, float], mode: str = "PC"
) -> dict[str, object]:
    """Per-edge consistency values, keyed by the lower endpoint's vertex id.

    PC gives each edge the minimum of its endpoint values; PL gives the
    (lower, upper) endpoint pair for interpolation along the edge.  Edges
    into the root are skipped because the root carries no label.
    """
    if mode not in ("PC", "PL"):
        raise InputError(f"mode must be PC or PL, not {mode!r}")
    values = _vertex_alpha(tree, alpha)
    out: dict[str, object] = {}
    for v, p in tree.tree.parent.items():
        if p == tree.tree.root:
            continue
        if v not in values:
            raise InputError(f"vertex {v!r} carries no label, so no value")
        if p not in values:
            raise InputError(f"vertex {p!r} carries no label, so no value")
        if mode == "PC":
            out[v] = min(values[v], values[p])
        else:
            out[v] = (values[v], values[p])
    return out


@dataclass
class ConsistencyReport:
    """Everything the uncertainty views need, for one ensemble and center."""

    delta: float
    lam: float
    g: float
    labels: list[int]
    alphas: list[dict[int, float]]
    variational: VariationalSummary
    statistical: dict[int, FiveNumber]
    edge_pc: list[dict[str, float]]
    edge_pl: list[dict[str, tuple[float, float]]]


def consistency_report(
    center: LabeledMergeTree,
    members: list[LabeledMergeTree],
    delta: float = 0.05,
    lam: float = 1.0,
    g: float = 1.0,
) -> ConsistencyReport:
    """Bundle vertex, variational, statistical and edge consistency."""
    if not members:
        raise InputError("need at least one member")
    scale = max_label_distance(members + [center], lam)
    alphas = [vertex_consistency(m, center, delta, lam, scale=scale) for m in members]
    variational = variational_consistency(center, members, delta, lam, g)
    statistical = statistical_consistency(center, members, delta, lam)
    edge_pc = [edge_consistency(m, a, "PC") for m, a in zip(members, alphas)]
    edge_pl = [edge_consistency(m, a, "PL") for m, a in zip(members, alphas)]
    return ConsistencyReport(
        delta=delta,
        lam=lam,
        g=g,
        labels=center.labels(),
        alphas=alphas,
        variational=variational,
        statistical=statistical,
        edge_pc=edge_pc,
        edge_pl=edge_pl,
    )
