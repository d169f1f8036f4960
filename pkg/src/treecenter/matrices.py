"""Bridge between labeled merge trees and symmetric matrices.

A labeled tree induces a matrix whose (i, j) entry is the value of the
lowest common ancestor of the vertices carrying labels i and j; the diagonal
holds the vertex values themselves.  Going the other way, any valid matrix
determines a labeled merge tree through a sublevel sweep of the complete
graph on the labels.  The two directions are mutually inverse exactly on
ultra matrices, and the interleaving distance between two same-labeled trees
is the max-norm gap between their induced matrices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import AgreementError, InputError
from .trees import INF, LabeledMergeTree, Labeling, MergeTree


@dataclass
class SymMatrix:
    """Symmetric real matrix indexed by an ascending list of integer labels."""

    labels: list[int]
    entries: np.ndarray

    def __post_init__(self) -> None:
        self.entries = np.asarray(self.entries, dtype=float)
        _check_shape(self)

    @property
    def size(self) -> int:
        return len(self.labels)

    def copy(self) -> "SymMatrix":
        return SymMatrix(list(self.labels), self.entries.copy())


def _check_shape(m: SymMatrix) -> None:
    s = len(m.labels)
    if s == 0:
        raise InputError("matrix has no labels")
    if m.entries.shape != (s, s):
        raise InputError(f"expected a {s}x{s} matrix, got shape {m.entries.shape}")
    if not np.isfinite(m.entries).all():
        raise InputError("matrix entries must be finite")
    if not np.array_equal(m.entries, m.entries.T):
        raise InputError("matrix is not symmetric")


def is_valid(m: SymMatrix, tol: float = 0.0) -> bool:
    """True when every diagonal entry is at most its whole row.

    ``tol`` forgives violations up to that size; the default is an exact
    comparison.
    """
    _check_shape(m)
    diag = np.diag(m.entries)
    return bool((diag[:, None] - m.entries <= tol).all())


def is_ultra(m: SymMatrix, tol: float = 0.0) -> bool:
    """True when *m* is valid and every entry is dominated through any pivot.

    The three-point condition reads entries[i][j] <= max(entries[i][k],
    entries[k][j]) for all i, j, k.
    """
    if not is_valid(m, tol):
        return False
    e = m.entries
    for k in range(len(m.labels)):
        if (e - np.maximum.outer(e[:, k], e[k, :]) > tol).any():
            return False
    return True


def induced_matrix(t: LabeledMergeTree) -> SymMatrix:
    """Matrix of pairwise ancestor values over the tree's label set.

    Entry (i, j) is the value of lca(assign(i), assign(j)); the diagonal is
    the value of each labeled vertex.  Labels are ordered ascending.
    """
    labels = t.labels()
    if not labels:
        raise InputError("tree has an empty label domain")
    idx = {lab: k for k, lab in enumerate(labels)}
    tree = t.tree
    for lab in labels:
        v = t.labeling.assign[lab]
        if v not in tree.f:
            raise InputError(f"label {lab} maps to unknown vertex {v!r}")
        if math.isinf(tree.f[v]):
            raise InputError(f"label {lab} sits on a vertex without finite value")

    s = len(labels)
    out = np.zeros((s, s))
    for lab in labels:
        out[idx[lab], idx[lab]] = tree.f[t.labeling.assign[lab]]

    # One bottom-up pass; a pair of labels is filled in exactly once, at the
    # vertex where their subtrees first meet.
    kids = tree.children()
    own = {v: [] for v in tree.f}
    for lab in labels:
        own[t.labeling.assign[lab]].append(idx[lab])

    order: list[str] = []
    stack = [tree.root]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(kids[v])

    gathered: dict[str, list[int]] = {}
    for v in reversed(order):
        fv = tree.f[v]
        here = own[v]
        for a, b in itertools.combinations(here, 2):
            out[a, b] = out[b, a] = fv
        acc = list(here)
        for c in kids[v]:
            part = gathered.pop(c)
            for i in part:
                for j in acc:
                    out[i, j] = out[j, i] = fv
            acc.extend(part)
        gathered[v] = acc
    return SymMatrix(labels, out)


def merge_tree_of_matrix(m: SymMatrix) -> LabeledMergeTree:
    """Labeled merge tree of the sublevel sweep of the complete label graph.

    Vertices appear at their diagonal values, edges at the off-diagonal
    ones, all processed in ascending order (vertices first on ties, then
    lexicographic).  An edge whose endpoints lie in different components
    either merges them at a new internal vertex, hangs the lower component
    under a top that already sits at the edge value, or fuses two such tops
    into one; chains of degree-2 vertices never appear.
    """
    if not is_valid(m):
        raise InputError("matrix must be valid: each diagonal entry at most its row")
    labels = m.labels
    e = m.entries
    s = len(labels)

    events: list[tuple[float, int, tuple[int, ...]]] = []
    for i in range(s):
        events.append((float(e[i, i]), 0, (i,)))
    for i in range(s):
        for j in range(i + 1, s):
            events.append((float(e[i, j]), 1, (i, j)))
    events.sort()

    uf = list(range(s))

    def find(i: int) -> int:
        r = i
        while uf[r] != r:
            r = uf[r]
        while uf[i] != r:
            uf[i], i = r, uf[i]
        return r

    f: dict[str, float] = {}
    parent: dict[str, str] = {}
    kids: dict[str, list[str]] = {}
    at: dict[str, list[int]] = {}  # vertex -> label indices assigned to it
    top: dict[int, str] = {}  # component root -> current highest vertex
    counter = 0

    def fresh() -> str:
        nonlocal counter
        name = f"n{counter}"
        counter += 1
        f[name] = 0.0
        kids[name] = []
        at[name] = []
        return name

    for value, kind, key in events:
        if kind == 0:
            (i,) = key
            v = fresh()
            f[v] = value
            at[v].append(i)
            top[i] = v
            continue
        i, j = key
        ri, rj = find(i), find(j)
        if ri == rj:
            continue
        tu, tv = top[ri], top[rj]
        fu, fv = f[tu], f[tv]
        if fu == value and fv == value:
            # Two tops born at the sweep value collapse into one vertex.
            for c in kids[tv]:
                parent[c] = tu
            kids[tu].extend(kids[tv])
            at[tu].extend(at[tv])
            del f[tv], kids[tv], at[tv]
            keep = tu
        elif fu == value:
            parent[tv] = tu
            kids[tu].append(tv)
            keep = tu
        elif fv == value:
            parent[tu] = tv
            kids[tv].append(tu)
            keep = tv
        else:
            w = fresh()
            f[w] = value
            parent[tu] = w
            parent[tv] = w
            kids[w].extend((tu, tv))
            keep = w
        uf[ri] = rj
        top[find(i)] = keep

    apex = top[find(0)]
    root = "root"
    f[root] = INF
    parent[apex] = root

    assign: dict[int, str] = {}
    for v, indices in at.items():
        for i in indices:
            assign[labels[i]] = v
    tree = MergeTree(root=root, parent=parent, f=f)
    return LabeledMergeTree(tree=tree, labeling=Labeling(assign))


def matrix_linf(a: SymMatrix, b: SymMatrix) -> float:
    """Max absolute elementwise gap between two same-shaped matrices."""
    if a.labels != b.labels:
        raise AgreementError("matrices are indexed by different label lists")
    return float(np.max(np.abs(a.entries - b.entries)))


def interleaving_distance(t1: LabeledMergeTree, t2: LabeledMergeTree) -> float:
    """Max-norm gap between the induced matrices of two same-labeled trees."""
    if t1.labeling.domain != t2.labeling.domain:
        raise AgreementError(
            "trees carry different label domains; harmonize the labelings first"
        )
    return matrix_linf(induced_matrix(t1), induced_matrix(t2))
