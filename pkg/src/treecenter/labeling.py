"""Reconciling the labelings of an ensemble.

Members of an ensemble rarely agree on labels out of the box.  This module
selects a pivot member, renames the labels of every other member to the
pivot's label set by solving small assignment problems over row-distance
signatures, attaches leftover pivot labels greedily, and can push a leaf
labeling down to every vertex of every tree so that members and the center
become vertex-to-vertex comparable.

All operations return new trees; inputs are never mutated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import (
    AgreementError,
    ConfigurationError,
    InputError,
    PivotError,
    TreeToolkitError,
)
from .trees import Ensemble, LabeledMergeTree, Labeling, blended_distance


@dataclass
class AssignmentProblem:
    """Rectangular min-cost assignment: every row must get its own column."""

    rows: list
    cols: list
    cost: np.ndarray

    def __post_init__(self) -> None:
        self.cost = np.asarray(self.cost, dtype=float)


@dataclass
class RelabelReport:
    """What one relabeling did to one member."""

    member: int
    renamed: dict[int, int] = field(default_factory=dict)
    extra: dict[int, str] = field(default_factory=dict)
    cost: float = 0.0
    mode: str = ""


def select_pivot(ensemble: Ensemble, criterion: str = "leaves") -> int:
    """Index of the member with the most leaves (or vertices), lowest index on ties."""
    if not ensemble.members:
        raise InputError("cannot pick a pivot from an empty ensemble")
    if criterion == "leaves":
        counts = [len(m.tree.leaves()) for m in ensemble.members]
    elif criterion == "vertices":
        counts = [m.tree.size() for m in ensemble.members]
    else:
        raise InputError(f"unknown pivot criterion {criterion!r}")
    return counts.index(max(counts))


def solve_assignment(p: AssignmentProblem) -> dict:
    """Min-cost injective map row→col, lexicographically smallest among optima.

    Rows and columns are taken in the given order; among all assignments of
    minimum total cost the one whose column-choice vector (read row by row)
    is smallest wins, so reruns and platform changes cannot flip ties.
    """
    nr, nc = len(p.rows), len(p.cols)
    if p.cost.shape != (nr, nc):
        raise InputError(f"cost shape {p.cost.shape} does not match {nr}x{nc}")
    if nr > nc:
        raise InputError("more rows than columns; the assignment cannot saturate rows")
    if nr == 0:
        return {}
    if not np.isfinite(p.cost).all():
        raise InputError("assignment costs must be finite")

    cost = p.cost
    ri, ci = linear_sum_assignment(cost)
    best = float(cost[ri, ci].sum())
    slack = 1e-9 * max(1.0, abs(best))

    free = list(range(nc))
    chosen: list[int] = []
    fixed = 0.0
    for r in range(nr):
        for pos, j in enumerate(free):
            if r + 1 < nr:
                rest_cols = free[:pos] + free[pos + 1 :]
                sub = cost[np.ix_(range(r + 1, nr), rest_cols)]
                si, sj = linear_sum_assignment(sub)
                rest = float(sub[si, sj].sum())
            else:
                rest = 0.0
            if fixed + cost[r, j] + rest <= best + slack:
                chosen.append(j)
                fixed += float(cost[r, j])
                free.pop(pos)
                break
        else:
            raise TreeToolkitError("assignment refinement failed to extend an optimum")
    return {p.rows[r]: p.cols[chosen[r]] for r in range(nr)}


def _row(t: LabeledMergeTree, v: str, cols: list[int], lam: float) -> np.ndarray:
    return np.array(
        [blended_distance(t, v, t.labeling.assign[s], lam) for s in cols]
    )


def _greedy_attach(
    member: LabeledMergeTree,
    assign: dict[int, str],
    pivot: LabeledMergeTree,
    leftovers: list[int],
    matched: list[int],
    lam: float,
) -> tuple[dict[int, str], float]:
    """Attach each leftover pivot label to the member vertex whose distance
    signature over the matched labels comes closest.

    Signatures are computed once; labels added here do not become columns
    for later leftovers.  Ties go to the smallest matched label.
    """
    cols = sorted(matched)
    tmp = LabeledMergeTree(member.tree, Labeling(dict(assign)), member.embedding)
    sig = {x: _row(tmp, assign[x], cols, lam) for x in cols}
    extra: dict[int, str] = {}
    total = 0.0
    for y in sorted(leftovers):
        target = _row(pivot, pivot.labeling.assign[y], cols, lam)
        best_x = None
        best_c = math.inf
        for x in cols:
            c = float(np.linalg.norm(sig[x] - target))
            if c < best_c:
                best_x, best_c = x, c
        extra[y] = assign[best_x]
        assign[y] = assign[best_x]
        total += best_c
    return extra, total


def relabel_partial(
    member: LabeledMergeTree, pivot: LabeledMergeTree, lam: float = 1.0
) -> tuple[LabeledMergeTree, RelabelReport]:
    """Rename a member's unshared labels onto the pivot's label set.

    Every label the two trees share stays put.  Each unshared member label
    is matched to an unshared pivot label by comparing their distance
    signatures over the shared labels; pivot labels left over afterwards are
    attached greedily.  The returned tree carries exactly the pivot's label
    domain.
    """
    shared = sorted(member.labeling.domain & pivot.labeling.domain)
    if not shared:
        raise AgreementError(
            "no shared labels; relabel_partial needs overlap, use relabel_disagreement"
        )
    if len(member.tree.leaves()) > len(pivot.tree.leaves()):
        raise PivotError("member has more leaves than the pivot")
    u_i = sorted(member.labeling.domain - pivot.labeling.domain)
    u_p = sorted(pivot.labeling.domain - member.labeling.domain)
    if len(u_i) > len(u_p):
        raise PivotError(
            f"member has {len(u_i)} unshared labels but the pivot offers {len(u_p)}"
        )

    d_i = {x: _row(member, member.labeling.assign[x], shared, lam) for x in u_i}
    d_p = {y: _row(pivot, pivot.labeling.assign[y], shared, lam) for y in u_p}
    cost = np.array([[np.linalg.norm(d_i[x] - d_p[y]) for y in u_p] for x in u_i])
    cost = cost.reshape(len(u_i), len(u_p))
    eta = solve_assignment(AssignmentProblem(u_i, u_p, cost))
    hung = sum(float(cost[u_i.index(x), u_p.index(y)]) for x, y in eta.items())

    assign = {s: member.labeling.assign[s] for s in shared}
    for x in u_i:
        assign[eta[x]] = member.labeling.assign[x]

    leftovers = [y for y in u_p if y not in set(eta.values())]
    matched = shared + [eta[x] for x in u_i]
    extra, _ = _greedy_attach(member, assign, pivot, leftovers, matched, lam)

    out = LabeledMergeTree(member.tree, Labeling(assign), member.embedding)
    report = RelabelReport(
        member=-1, renamed=dict(sorted(eta.items())), extra=extra, cost=hung,
        mode="partial",
    )
    return out, report


def relabel_disagreement(
    member: LabeledMergeTree, pivot: LabeledMergeTree
) -> tuple[LabeledMergeTree, RelabelReport]:
    """Rename a member that shares no labels with the pivot.

    Without common labels there are no distance signatures to compare, so
    the matching cost is the plain Euclidean distance between the embedded
    labeled vertices.  Leftover pivot labels are attached greedily using
    Euclidean signatures as well.
    """
    if member.labeling.domain & pivot.labeling.domain:
        raise AgreementError(
            "label domains overlap; use relabel_partial for partial agreement"
        )
    s_i = sorted(member.labeling.domain)
    s_p = sorted(pivot.labeling.domain)
    if not s_i or not s_p:
        raise InputError("both trees need at least one label")
    if len(s_i) > len(s_p):
        raise PivotError(
            f"member carries {len(s_i)} labels but the pivot only {len(s_p)}"
        )

    cost = np.zeros((len(s_i), len(s_p)))
    for a, x in enumerate(s_i):
        for b, y in enumerate(s_p):
            cost[a, b] = _cross_euclid(member, pivot, x, y)
    eta = solve_assignment(AssignmentProblem(s_i, s_p, cost))
    hung = sum(float(cost[s_i.index(x), s_p.index(y)]) for x, y in eta.items())

    assign = {eta[x]: member.labeling.assign[x] for x in s_i}
    leftovers = [y for y in s_p if y not in set(eta.values())]
    matched = [eta[x] for x in s_i]
    extra, _ = _greedy_attach(member, assign, pivot, leftovers, matched, 0.0)

    out = LabeledMergeTree(member.tree, Labeling(assign), member.embedding)
    report = RelabelReport(
        member=-1, renamed=dict(sorted(eta.items())), extra=extra, cost=hung,
        mode="disagreement",
    )
    return out, report


def _cross_euclid(
    member: LabeledMergeTree, pivot: LabeledMergeTree, x: int, y: int
) -> float:
    """Euclidean gap between a member label and a pivot label, across embeddings."""
    if member.embedding is None or pivot.embedding is None:
        raise ConfigurationError(
            "relabeling across disjoint label sets needs embedded trees"
        )
    vm = member.labeling.assign[x]
    vp = pivot.labeling.assign[y]
    try:
        cm, cp = member.embedding[vm], pivot.embedding[vp]
    except KeyError as exc:
        raise ConfigurationError(f"vertex {exc.args[0]!r} has no coordinates") from None
    return math.dist(cm, cp)


def harmonize(ensemble: Ensemble, lam: float = 1.0) -> tuple[Ensemble, list[RelabelReport]]:
    """Bring every member onto one label domain.

    The member with the most leaves becomes the pivot; every other member is
    relabeled against it, through shared labels when there are any and
    through embedded positions otherwise.  Members that already carry the
    pivot's exact domain pass through untouched.
    """
    pivot_idx = select_pivot(ensemble, "leaves")
    pivot = ensemble.members[pivot_idx]
    members: list[LabeledMergeTree] = []
    reports: list[RelabelReport] = []
    for i, m in enumerate(ensemble.members):
        if i == pivot_idx or m.labeling.domain == pivot.labeling.domain:
            members.append(m)
            continue
        if m.labeling.domain & pivot.labeling.domain:
            out, rep = relabel_partial(m, pivot, lam)
        else:
            out, rep = relabel_disagreement(m, pivot)
        rep.member = i
        members.append(out)
        reports.append(rep)
    return Ensemble(members), reports


def _unlabeled(t: LabeledMergeTree) -> list[str]:
    taken = set(t.labeling.assign.values())
    out = [v for v in t.tree.f if v != t.tree.root and v not in taken]
    return sorted(out, key=lambda v: (t.tree.f[v], v))


def _fresh_name(taken: dict, stem: str) -> str:
    k = 0
    while f"{stem}{k}" in taken:
        k += 1
    return f"{stem}{k}"


def _pad_center(
    ensemble: Ensemble, center: LabeledMergeTree, lam: float
) -> LabeledMergeTree:
    """Subdivide center edges with dummy vertices until the center is as big
    as the largest member, both in total vertices and in unlabeled ones.

    Each dummy mirrors one internal vertex of the largest member: it lands
    on the edge just above the center vertex holding the leaf label nearest
    that internal vertex, at the mirrored value clamped strictly inside the
    edge.
    """
    members = ensemble.members
    need = max(
        0,
        max(m.tree.size() for m in members) - center.tree.size(),
        max(len(_unlabeled(m)) for m in members) - len(_unlabeled(center)),
    )
    if need == 0:
        return center

    donor = ensemble.members[select_pivot(ensemble, "vertices")]
    mirrors = sorted(donor.tree.internal_vertices(), key=lambda v: (donor.tree.f[v], v))
    shared = sorted(center.labeling.domain & donor.labeling.domain)
    if not shared:
        raise AgreementError("center and members share no labels to anchor dummies")

    f = dict(center.tree.f)
    parent = dict(center.tree.parent)
    assign = dict(center.labeling.assign)
    coords = dict(center.embedding) if center.embedding is not None else None

    for k in range(need):
        w = mirrors[k % len(mirrors)] if mirrors else donor.tree.leaves()[0]
        nearest = min(
            shared,
            key=lambda s: (blended_distance(donor, w, donor.labeling.assign[s], lam), s),
        )
        below = assign[nearest]
        above = parent[below]
        lo, hi = f[below], f[above]
        target = donor.tree.f[w]
        if math.isinf(hi):
            val = max(target, lo + 1e-9)
        else:
            val = min(max(target, lo + 1e-9), hi - 1e-9)
            if not lo < val < hi:
                val = (lo + hi) / 2.0
        name = _fresh_name(f, "dummy")
        f[name] = val
        parent[below] = name
        parent[name] = above
        if coords is not None and below in coords:
            if above in coords and not math.isinf(hi) and hi > lo:
                t = (val - lo) / (hi - lo)
                coords[name] = tuple(
                    (1 - t) * a + t * b for a, b in zip(coords[below], coords[above])
                )
            else:
                coords[name] = tuple(coords[below])

    from .trees import MergeTree

    tree = MergeTree(root=center.tree.root, parent=parent, f=f)
    return LabeledMergeTree(tree, Labeling(assign), coords)


def _extend_labels(t: LabeledMergeTree) -> LabeledMergeTree:
    """Give every unlabeled nonroot vertex a fresh label, lowest value first."""
    assign = dict(t.labeling.assign)
    nxt = max(assign, default=0) + 1
    for v in _unlabeled(t):
        assign[nxt] = v
        nxt += 1
    return LabeledMergeTree(t.tree, Labeling(assign), t.embedding)


def _label_against(
    member: LabeledMergeTree, pivot: LabeledMergeTree, lam: float, index: int
) -> tuple[LabeledMergeTree, RelabelReport]:
    """Push the pivot's extra labels onto a member's unlabeled vertices."""
    rows = _unlabeled(member)
    cols = sorted(pivot.labeling.domain - member.labeling.domain)
    shared = sorted(member.labeling.domain)
    if len(rows) > len(cols):
        raise PivotError(
            f"member {index} has {len(rows)} unlabeled vertices but only "
            f"{len(cols)} labels are available"
        )
    d_i = {v: _row(member, v, shared, lam) for v in rows}
    d_p = {y: _row(pivot, pivot.labeling.assign[y], shared, lam) for y in cols}
    cost = np.array([[np.linalg.norm(d_i[v] - d_p[y]) for y in cols] for v in rows])
    cost = cost.reshape(len(rows), len(cols))
    eta = solve_assignment(AssignmentProblem(rows, cols, cost))
    hung = sum(float(cost[rows.index(v), cols.index(y)]) for v, y in eta.items())

    assign = dict(member.labeling.assign)
    extra: dict[int, str] = {}
    for v, y in eta.items():
        assign[y] = v
        extra[y] = v

    leftovers = [y for y in cols if y not in set(eta.values())]
    matched = shared + sorted(eta.values())
    more, _ = _greedy_attach(member, assign, pivot, leftovers, matched, lam)
    extra.update(more)

    out = LabeledMergeTree(member.tree, Labeling(assign), member.embedding)
    return out, RelabelReport(member=index, extra=extra, cost=hung, mode="internal")


def complete_internal_labels(
    ensemble: Ensemble, center: LabeledMergeTree, lam: float = 1.0
) -> tuple[Ensemble, LabeledMergeTree, list[RelabelReport]]:
    """Extend a leaf labeling to every vertex of every member and the center.

    The center is padded with dummy degree-2 vertices until it is at least
    as large as the biggest member, all its vertices get labels, and each
    member's unlabeled vertices are then matched to those labels by distance
    signatures over the shared leaf labels.  Afterwards all trees carry one
    vertex-covering label domain, which is what embedding transfer and
    animation need.
    """
    if not ensemble.members:
        raise InputError("cannot complete labels for an empty ensemble")
    dom = center.labeling.domain
    for i, m in enumerate(ensemble.members):
        if m.labeling.domain != dom:
            raise AgreementError(
                f"member {i} does not share the center's label domain; harmonize first"
            )
    padded = _pad_center(ensemble, center, lam)
    pivot = _extend_labels(padded)
    members: list[LabeledMergeTree] = []
    reports: list[RelabelReport] = []
    for i, m in enumerate(ensemble.members):
        out, rep = _label_against(m, pivot, lam, i)
        members.append(out)
        reports.append(rep)
    return Ensemble(members), pivot, reports
