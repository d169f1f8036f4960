"""Rooted merge trees, labelings, and distances between vertices of one tree.

A merge tree is a rooted tree whose vertices carry a scalar value that
strictly decreases away from the root; the root itself sits at +inf and has
exactly one child.  A labeling attaches integer labels to vertices (several
labels may share a vertex).  Two intra-tree metrics are provided: the
function-induced path distance and, when the tree is embedded, the Euclidean
distance between vertex coordinates, plus a convex blend of the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import AgreementError, ConfigurationError, InputError

INF = math.inf

# vertex -> point in R^d (d = 2 or 3, units arbitrary)
Coords = dict[str, tuple[float, ...]]


@dataclass
class Violation:
    """One broken structural rule, pointing at the vertex or edge at fault."""

    rule: str
    subject: str
    message: str

    def __str__(self) -> str:
        return f"[{self.rule}] {self.subject}: {self.message}"


@dataclass
class MergeTree:
    """Rooted tree plus a scalar value per vertex.

    ``parent`` maps every nonroot vertex to its unique neighbor with a
    higher value; the root carries +inf and is the only vertex without a
    parent.  Instances are treated as immutable after construction and are
    safe to share between threads.
    """

    root: str
    parent: dict[str, str]
    f: dict[str, float]

    @property
    def vertices(self) -> list[str]:
        return list(self.f)

    def children(self) -> dict[str, list[str]]:
        kids: dict[str, list[str]] = {v: [] for v in self.f}
        for v, p in self.parent.items():
            kids[p].append(v)
        return kids

    def leaves(self) -> list[str]:
        has_child = set(self.parent.values())
        return [v for v in self.f if v != self.root and v not in has_child]

    def internal_vertices(self) -> list[str]:
        """Nonroot vertices that are not leaves."""
        has_child = set(self.parent.values())
        return [v for v in self.f if v != self.root and v in has_child]

    def size(self) -> int:
        """Number of nonroot vertices."""
        return len(self.f) - 1


@dataclass
class Labeling:
    """Map from a finite set of positive integer labels to vertex ids."""

    assign: dict[int, str]

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(self.assign)

    def labels(self) -> list[int]:
        return sorted(self.assign)

    def vertices_of(self) -> dict[str, list[int]]:
        """Inverse map, vertex -> ascending labels attached to it."""
        out: dict[str, list[int]] = {}
        for lab in sorted(self.assign):
            out.setdefault(self.assign[lab], []).append(lab)
        return out


@dataclass
class LabeledMergeTree:
    """A merge tree together with a labeling and an optional embedding."""

    tree: MergeTree
    labeling: Labeling
    embedding: Coords | None = None

    def label_vertex(self, label: int) -> str:
        try:
            return self.labeling.assign[label]
        except KeyError:
            raise InputError(f"label {label} is not assigned in this tree") from None

    def labels(self) -> list[int]:
        return self.labeling.labels()


@dataclass
class Ensemble:
    """Ordered collection of labeled merge trees sharing a label universe."""

    members: list[LabeledMergeTree] = field(default_factory=list)

    @property
    def agreement(self) -> str:
        """One of ``full``, ``partial`` or ``disagreement``.

        ``full`` means every member has the same label domain, ``partial``
        that the domains differ but intersect, ``disagreement`` that their
        common intersection is empty.
        """
        if not self.members:
            raise InputError("agreement is undefined for an empty ensemble")
        domains = [m.labeling.domain for m in self.members]
        if all(d == domains[0] for d in domains):
            return "full"
        common = frozenset.intersection(*domains)
        return "partial" if common else "disagreement"


def validate_merge_tree(t: MergeTree) -> list[Violation]:
    """Check every structural rule; an empty list means the tree is well formed.

    Violations are data, not exceptions: each one names the offending vertex
    or edge and the rule it breaks.
    """
    out: list[Violation] = []
    verts = set(t.f)

    if t.root not in verts:
        out.append(Violation("no-root", t.root, "root id has no function value"))
        return out
    if t.root in t.parent:
        out.append(Violation("root-has-parent", t.root, "root must not have a parent"))
    if not math.isinf(t.f[t.root]):
        out.append(Violation("root-finite", t.root, "root value must be +inf"))

    for v in verts:
        if v == t.root:
            continue
        if v not in t.parent:
            out.append(Violation("multiple-roots", v, "nonroot vertex has no parent"))
        if math.isinf(t.f[v]):
            out.append(Violation("nonroot-infinite", v, "only the root may sit at +inf"))
    for v, p in t.parent.items():
        if v not in verts:
            out.append(Violation("unknown-vertex", v, "parent entry for unknown vertex"))
        if p not in verts:
            out.append(Violation("unknown-parent", v, f"parent {p!r} is not a vertex"))

    root_children = [v for v, p in t.parent.items() if p == t.root]
    if len(root_children) != 1:
        out.append(
            Violation(
                "root-degree",
                t.root,
                f"root must have exactly one child, found {len(root_children)}",
            )
        )

    for v, p in t.parent.items():
        if v not in verts or p not in verts:
            continue
        fv, fp = t.f[v], t.f[p]
        if fv == fp:
            out.append(Violation("equal-on-edge", f"{v}-{p}", "equal values across an edge"))
        elif fv > fp:
            out.append(
                Violation(
                    "inverted-edge",
                    f"{v}-{p}",
                    f"value must decrease away from the root ({fv} > {fp})",
                )
            )

    # Every vertex must reach the root without cycling.
    state: dict[str, int] = {}  # 0 in progress, 1 ok
    for v in verts:
        path = []
        u = v
        while True:
            if u == t.root or state.get(u) == 1:
                break
            if state.get(u) == 0:
                out.append(Violation("cycle", u, "parent pointers loop"))
                break
            state[u] = 0
            path.append(u)
            nxt = t.parent.get(u)
            if nxt is None or nxt not in verts:
                break
            u = nxt
        for w in path:
            state[w] = 1
    return out


def lca(t: MergeTree, u: str, v: str) -> str:
    """Lowest common ancestor: the shared ancestor of minimum value.

    Walks both vertices toward the root, always advancing the one with the
    strictly smaller value (both on a tie, which can only happen while the
    pointers sit in disjoint subtrees).
    """
    for x in (u, v):
        if x not in t.f:
            raise InputError(f"unknown vertex id {x!r}")
    a, b = u, v
    steps = 0
    limit = 2 * len(t.f) + 2
    while a != b:
        fa, fb = t.f[a], t.f[b]
        if fa < fb:
            a = t.parent.get(a, a)
        elif fb < fa:
            b = t.parent.get(b, b)
        else:
            a = t.parent.get(a, a)
            b = t.parent.get(b, b)
        steps += 1
        if steps > limit:
            raise InputError("vertices share no ancestor; tree is malformed")
    return a


def tree_distance(t: LabeledMergeTree, x: str, y: str) -> float:
    """Path length between two vertices when each edge weighs its value span."""
    a = lca(t.tree, x, y)
    fa = t.tree.f[a]
    if math.isinf(fa):
        raise InputError(f"ancestor of {x!r} and {y!r} has no finite value")
    return abs(t.tree.f[x] - fa) + abs(fa - t.tree.f[y])


def euclidean_distance(t: LabeledMergeTree, x: str, y: str) -> float:
    """L2 distance between the embedded coordinates of two vertices."""
    if t.embedding is None:
        raise ConfigurationError("tree has no embedding")
    try:
        px, py = t.embedding[x], t.embedding[y]
    except KeyError as exc:
        raise InputError(f"vertex {exc.args[0]!r} has no coordinates") from None
    return math.dist(px, py)


def blended_distance(t: LabeledMergeTree, x: str, y: str, lam: float) -> float:
    """Convex blend ``lam * d_tree + (1 - lam) * d_euclid``.

    ``lam = 1`` is the pure function-induced distance and needs no
    embedding; ``lam = 0`` is purely geometric.
    """
    if not 0.0 <= lam <= 1.0:
        raise InputError(f"blend weight must lie in [0, 1], got {lam}")
    if lam == 1.0:
        return tree_distance(t, x, y)
    if lam == 0.0:
        return euclidean_distance(t, x, y)
    return lam * tree_distance(t, x, y) + (1.0 - lam) * euclidean_distance(t, x, y)
