import math

import numpy as np
import pytest

from treecenter import (
    INF,
    Ensemble,
    InputError,
    ConfigurationError,
    LabeledMergeTree,
    Labeling,
    MergeTree,
    blended_distance,
    euclidean_distance,
    lca,
    tree_distance,
    validate_merge_tree,
)

import generators
import oracles
from sampletrees import build, two_leaf


def rules_of(violations):
    return sorted(v.rule for v in violations)


class TestValidate:
    def test_clean_two_leaf_tree(self):
        assert validate_merge_tree(two_leaf().tree) == []

    def test_equal_values_across_edge(self):
        t = build({"s": ("root", 2.0), "l1": ("s", 0.0), "l2": ("s", 2.0)}, {})
        assert rules_of(validate_merge_tree(t.tree)) == ["equal-on-edge"]

    def test_inverted_edge(self):
        t = build({"s": ("root", 2.0), "l1": ("s", 5.0), "l2": ("s", 0.0)}, {})
        assert rules_of(validate_merge_tree(t.tree)) == ["inverted-edge"]

    def test_root_must_sit_at_infinity(self):
        t = MergeTree(root="root", parent={"a": "root"}, f={"root": 5.0, "a": 0.0})
        assert "root-finite" in rules_of(validate_merge_tree(t))

    def test_root_with_parent_entry(self):
        t = MergeTree(
            root="root",
            parent={"a": "root", "root": "a"},
            f={"root": INF, "a": 0.0},
        )
        assert "root-has-parent" in rules_of(validate_merge_tree(t))

    def test_missing_root_value(self):
        t = MergeTree(root="root", parent={"a": "root"}, f={"a": 0.0})
        assert "no-root" in rules_of(validate_merge_tree(t))

    def test_orphaned_vertex(self):
        t = MergeTree(
            root="root",
            parent={"a": "root"},
            f={"root": INF, "a": 0.0, "b": 1.0},
        )
        assert "multiple-roots" in rules_of(validate_merge_tree(t))

    def test_nonroot_at_infinity(self):
        t = build({"s": ("root", 2.0), "l1": ("s", 0.0), "l2": ("s", 1.0)}, {})
        t.tree.f["l2"] = INF
        assert "nonroot-infinite" in rules_of(validate_merge_tree(t.tree))

    def test_unknown_parent_target(self):
        t = MergeTree(
            root="root", parent={"a": "ghost"}, f={"root": INF, "a": 0.0}
        )
        assert "unknown-parent" in rules_of(validate_merge_tree(t))

    def test_parent_entry_for_unknown_vertex(self):
        t = MergeTree(
            root="root",
            parent={"a": "root", "ghost": "a"},
            f={"root": INF, "a": 0.0},
        )
        assert "unknown-vertex" in rules_of(validate_merge_tree(t))

    def test_root_needs_exactly_one_child(self):
        t = MergeTree(
            root="root",
            parent={"a": "root", "b": "root"},
            f={"root": INF, "a": 0.0, "b": 1.0},
        )
        assert "root-degree" in rules_of(validate_merge_tree(t))

    def test_cycle_detection(self):
        t = MergeTree(
            root="root",
            parent={"a": "root", "b": "c", "c": "b"},
            f={"root": INF, "a": 0.0, "b": 1.0, "c": 2.0},
        )
        assert "cycle" in rules_of(validate_merge_tree(t))

    def test_violation_rendering_names_rule_and_subject(self):
        t = build({"s": ("root", 2.0), "l1": ("s", 0.0), "l2": ("s", 2.0)}, {})
        text = str(validate_merge_tree(t.tree)[0])
        assert "equal-on-edge" in text and "l2-s" in text

    def test_random_trees_are_clean(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            t = generators.random_tree(rng, int(rng.integers(2, 12)))
            assert validate_merge_tree(t.tree) == []


class TestStructure:
    def test_leaves_and_internal_split(self):
        t = two_leaf()
        assert sorted(t.tree.leaves()) == ["l1", "l2"]
        assert t.tree.internal_vertices() == ["s"]
        assert t.tree.size() == 3

    def test_children_map(self):
        t = two_leaf()
        kids = t.tree.children()
        assert sorted(kids["s"]) == ["l1", "l2"]
        assert kids["root"] == ["s"]
        assert kids["l1"] == []

    def test_labeling_accessors(self):
        lab = Labeling(assign={2: "a", 1: "b", 3: "a"})
        assert lab.labels() == [1, 2, 3]
        assert lab.domain == frozenset({1, 2, 3})
        assert lab.vertices_of() == {"a": [2, 3], "b": [1]}

    def test_label_vertex_lookup(self):
        t = two_leaf()
        assert t.label_vertex(1) == "l1"
        assert t.labels() == [1, 2]


class TestAgreement:
    def test_full(self):
        e = Ensemble(members=[two_leaf(), two_leaf(0.5, 0.7, 3.0)])
        assert e.agreement == "full"

    def test_partial(self):
        a = two_leaf()
        b = build(
            {"s": ("root", 2.0), "l1": ("s", 0.0), "l3": ("s", 1.0)},
            {1: "l1", 3: "l3"},
        )
        assert Ensemble(members=[a, b]).agreement == "partial"

    def test_disagreement(self):
        a = two_leaf()
        b = build(
            {"s": ("root", 2.0), "l3": ("s", 0.0), "l4": ("s", 1.0)},
            {3: "l3", 4: "l4"},
        )
        assert Ensemble(members=[a, b]).agreement == "disagreement"

    def test_empty_ensemble_rejected(self):
        with pytest.raises(InputError):
            Ensemble(members=[]).agreement


class TestLca:
    def test_two_leaf(self):
        t = two_leaf()
        assert lca(t.tree, "l1", "l2") == "s"
        assert lca(t.tree, "l1", "l1") == "l1"
        assert lca(t.tree, "l1", "s") == "s"

    def test_unknown_vertex(self):
        with pytest.raises(InputError):
            lca(two_leaf().tree, "l1", "nope")

    def test_matches_ancestor_set_walk_on_random_trees(self):
        rng = np.random.default_rng(11)
        for _ in range(40):
            t = generators.random_tree(rng, int(rng.integers(2, 14)))
            verts = t.tree.vertices
            for _ in range(20):
                u, v = (verts[i] for i in rng.integers(0, len(verts), 2))
                assert lca(t.tree, u, v) == oracles.lca_by_ancestors(t.tree, u, v)


class TestDistances:
    def test_two_leaf_path_length(self):
        t = two_leaf()  # leaves at 0 and 1 joining at 2
        assert tree_distance(t, "l1", "l2") == 3.0
        assert tree_distance(t, "l1", "l1") == 0.0

    def test_path_to_root_rejected(self):
        t = two_leaf()
        with pytest.raises(InputError):
            tree_distance(t, "l1", "root")

    def test_matches_edge_walk_on_random_trees(self):
        rng = np.random.default_rng(13)
        for _ in range(30):
            t = generators.random_tree(rng, int(rng.integers(2, 12)))
            verts = [v for v in t.tree.vertices if v != t.tree.root]
            for _ in range(15):
                u, v = (verts[i] for i in rng.integers(0, len(verts), 2))
                expect = oracles.path_length_by_edges(t.tree, u, v)
                assert tree_distance(t, u, v) == pytest.approx(expect, abs=1e-12)

    def test_euclidean(self):
        t = build(
            {"s": ("root", 2.0), "l1": ("s", 0.0), "l2": ("s", 1.0)},
            {1: "l1", 2: "l2"},
            embedding={"l1": (0.0, 0.0), "l2": (3.0, 4.0), "s": (1.0, 1.0)},
        )
        assert euclidean_distance(t, "l1", "l2") == 5.0

    def test_euclidean_without_embedding(self):
        with pytest.raises(ConfigurationError):
            euclidean_distance(two_leaf(), "l1", "l2")

    def test_euclidean_missing_coords(self):
        t = build(
            {"s": ("root", 2.0), "l1": ("s", 0.0), "l2": ("s", 1.0)},
            {1: "l1", 2: "l2"},
            embedding={"l1": (0.0, 0.0)},
        )
        with pytest.raises(InputError):
            euclidean_distance(t, "l1", "l2")

    def test_blend_mixes_both_metrics(self):
        t = build(
            {"s": ("root", 2.0), "l1": ("s", 0.0), "l2": ("s", 1.0)},
            {1: "l1", 2: "l2"},
            embedding={"l1": (0.0, 0.0), "l2": (3.0, 4.0), "s": (1.0, 1.0)},
        )
        # d_tree = 3, d_euclid = 5
        assert blended_distance(t, "l1", "l2", 1.0) == 3.0
        assert blended_distance(t, "l1", "l2", 0.0) == 5.0
        assert blended_distance(t, "l1", "l2", 0.5) == 4.0
        assert blended_distance(t, "l1", "l2", 0.25) == pytest.approx(4.5)

    def test_blend_weight_out_of_range(self):
        t = two_leaf()
        for bad in (-0.1, 1.1, math.nan):
            with pytest.raises(InputError):
                blended_distance(t, "l1", "l2", bad)

    def test_pure_tree_blend_needs_no_embedding(self):
        assert blended_distance(two_leaf(), "l1", "l2", 1.0) == 3.0
