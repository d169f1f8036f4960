"""Small hand-built trees reused across test modules."""

from treecenter import INF, LabeledMergeTree, Labeling, MergeTree


def build(spec, assign, embedding=None, root="root"):
    """Assemble a labeled tree from {vertex: (parent, value)} entries.

    The root is added automatically at +inf; it must not appear as a key.
    """
    parent = {}
    f = {root: INF}
    for v, (p, fv) in spec.items():
        parent[v] = p
        f[v] = float(fv)
    return LabeledMergeTree(
        tree=MergeTree(root=root, parent=parent, f=f),
        labeling=Labeling(assign=dict(assign)),
        embedding=embedding,
    )


def two_leaf(fa=0.0, fb=1.0, top=2.0):
    """Leaves labeled 1 and 2 merging at ``top``."""
    return build(
        {"s": ("root", top), "l1": ("s", fa), "l2": ("s", fb)},
        {1: "l1", 2: "l2"},
    )


def matching_member():
    """Three-leaf tree with labels {1, 2, 5}; leaf 5 hangs off the top merge."""
    return build(
        {
            "s2": ("root", 3.0),
            "s1": ("s2", 1.0),
            "l1": ("s1", 0.0),
            "l2": ("s1", 0.0),
            "l5": ("s2", 0.0),
        },
        {1: "l1", 2: "l2", 5: "l5"},
    )


def matching_pivot():
    """Four-leaf tree with labels {1, 2, 3, 4}; 3 and 4 join below the apex."""
    return build(
        {
            "s3": ("root", 3.0),
            "s2": ("s3", 1.0),
            "a43": ("s3", 2.0),
            "l1": ("s2", 0.0),
            "l2": ("s2", 0.0),
            "l3": ("a43", 0.0),
            "l4": ("a43", 1.0),
        },
        {1: "l1", 2: "l2", 3: "l3", 4: "l4"},
    )
