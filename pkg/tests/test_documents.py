import json

import numpy as np
import pytest

from treecenter import (
    DocumentError,
    Ensemble,
    LabeledMergeTree,
    complete_internal_labels,
    consistency_report,
    ensemble_summary,
    geodesic_frames,
    harmonize,
    one_center_tree,
    parse_tree,
    serialize_tree,
)
from treecenter.documents import (
    center_to_doc,
    consistency_to_doc,
    dump_json,
    fmt12,
    geodesic_to_doc,
    relabel_report_to_doc,
    tree_to_doc,
)

import generators
from sampletrees import matching_member, matching_pivot, two_leaf


class TestTreeDocuments:
    def test_round_trip_two_leaf(self):
        t = two_leaf()
        back = parse_tree(serialize_tree(t))
        assert back.tree.f == t.tree.f
        assert back.tree.parent == t.tree.parent
        assert back.labeling.assign == t.labeling.assign
        assert back.embedding is None

    def test_round_trip_random_trees(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            t = generators.random_tree(
                rng,
                int(rng.integers(2, 10)),
                multi_labels=True,
                with_embedding=bool(rng.integers(0, 2)),
            )
            back = parse_tree(serialize_tree(t))
            assert back.tree.f == t.tree.f
            assert back.tree.parent == t.tree.parent
            assert back.labeling.assign == t.labeling.assign
            if t.embedding is None:
                assert back.embedding is None
            else:
                assert set(back.embedding) == set(t.embedding)
                for v, coords in t.embedding.items():
                    assert back.embedding[v] == tuple(coords)

    def test_serialization_is_stable(self):
        rng = np.random.default_rng(5)
        t = generators.random_tree(rng, 6, with_embedding=True)
        assert serialize_tree(t) == serialize_tree(t)
        again = parse_tree(serialize_tree(t))
        assert serialize_tree(again) == serialize_tree(t)

    def test_nodes_ordered_root_first_then_by_value(self):
        t = matching_pivot()
        doc = tree_to_doc(t)
        ids = [n["id"] for n in doc["nodes"]]
        assert ids[0] == "root"
        values = [n["f"] for n in doc["nodes"][1:]]
        assert values == sorted(values, key=lambda x: (x == "inf", x))

    def test_root_value_spelled_inf(self):
        doc = tree_to_doc(two_leaf())
        root = doc["nodes"][0]
        assert root["f"] == "inf"
        assert "parent" not in root

    def test_metadata_passes_through(self):
        doc = tree_to_doc(two_leaf(), metadata={"note": "hello"})
        assert doc["metadata"] == {"note": "hello"}
        text = serialize_tree(two_leaf(), metadata={"note": "hello"})
        assert json.loads(text)["metadata"]["note"] == "hello"

    def test_full_float_precision_survives(self):
        t = two_leaf(0.1 + 0.2, 1.0 / 3.0, 7.0 / 11.0)
        back = parse_tree(serialize_tree(t))
        assert back.tree.f["l1"] == 0.1 + 0.2
        assert back.tree.f["l2"] == 1.0 / 3.0
        assert back.tree.f["s"] == 7.0 / 11.0


class TestDocumentErrors:
    def doc(self):
        return json.loads(serialize_tree(two_leaf()))

    def test_not_an_object(self):
        with pytest.raises(DocumentError):
            parse_tree(json.dumps([1, 2, 3]))

    def test_bad_version(self):
        d = self.doc()
        d["version"] = 99
        with pytest.raises(DocumentError, match="version"):
            parse_tree(json.dumps(d))

    def test_missing_nodes(self):
        with pytest.raises(DocumentError, match="nodes"):
            parse_tree(json.dumps({"version": 1, "nodes": []}))

    def test_duplicate_node_id(self):
        d = self.doc()
        d["nodes"].append(dict(d["nodes"][-1]))
        with pytest.raises(DocumentError, match="duplicate"):
            parse_tree(json.dumps(d))

    def test_bad_f_value(self):
        d = self.doc()
        d["nodes"][1]["f"] = "tall"
        with pytest.raises(DocumentError, match="numeric"):
            parse_tree(json.dumps(d))

    def test_boolean_f_rejected(self):
        d = self.doc()
        d["nodes"][1]["f"] = True
        with pytest.raises(DocumentError, match="numeric"):
            parse_tree(json.dumps(d))

    def test_bad_labels(self):
        d = self.doc()
        for node in d["nodes"]:
            if node["id"] == "l1":
                node["labels"] = ["one"]
        with pytest.raises(DocumentError, match="integer"):
            parse_tree(json.dumps(d))

    def test_label_on_two_nodes(self):
        d = self.doc()
        for node in d["nodes"]:
            if node["id"] == "l2":
                node["labels"] = [1]
        with pytest.raises(DocumentError, match="more than one"):
            parse_tree(json.dumps(d))

    def test_two_roots(self):
        d = self.doc()
        for node in d["nodes"]:
            if node["id"] == "l1":
                node["f"] = "inf"
                node.pop("parent", None)
        with pytest.raises(DocumentError, match="root"):
            parse_tree(json.dumps(d))

    def test_validation_failures_are_reported(self):
        d = self.doc()
        for node in d["nodes"]:
            if node["id"] == "l2":
                node["f"] = 2.0  # equals its parent's value
        with pytest.raises(DocumentError, match="equal-on-edge"):
            parse_tree(json.dumps(d))

    def test_bad_json(self):
        with pytest.raises(DocumentError, match="JSON"):
            parse_tree("{nope")

    def test_bad_utf8(self):
        with pytest.raises(DocumentError, match="UTF-8"):
            parse_tree(b"\xff\xfe\x00tree")

    def test_non_string_parent(self):
        d = self.doc()
        d["nodes"][1]["parent"] = 7
        with pytest.raises(DocumentError, match="parent"):
            parse_tree(json.dumps(d))


class TestReportDocuments:
    def test_relabel_report_doc(self):
        _, rep = __import__("treecenter").relabel_partial(
            matching_member(), matching_pivot()
        )
        rep.member = 2
        doc = relabel_report_to_doc(rep)
        assert doc["member"] == 2
        assert doc["renamed"] == {"5": 3}
        assert doc["extra"] == {"4": "l5"}
        assert doc["mode"] == "partial"
        json.dumps(doc)

    def test_center_doc_shape(self):
        rng = np.random.default_rng(7)
        e = generators.random_full_ensemble(rng, 3, 4)
        res = one_center_tree(e)
        doc = center_to_doc(res, ensemble_summary(res))
        assert set(doc) >= {
            "center",
            "radius",
            "member_distances",
            "normalized_distances",
            "center_matrix_ultra",
        }
        assert len(doc["member_distances"]) == 3
        parsed = parse_tree(json.dumps(doc["center"]))
        assert parsed.labeling.domain == res.center.labeling.domain
        json.dumps(doc)

    def test_center_doc_with_reports(self):
        out, reports = harmonize(
            Ensemble(members=[matching_member(), matching_pivot()])
        )
        res = one_center_tree(out)
        doc = center_to_doc(res, ensemble_summary(res), reports)
        assert len(doc["relabel_reports"]) == 1
        assert doc["relabel_reports"][0]["member"] == 0

    def test_consistency_doc_shape(self):
        rng = np.random.default_rng(11)
        e = generators.random_full_ensemble(rng, 3, 4)
        res = one_center_tree(e)
        completed, pivot, _ = complete_internal_labels(e, res.center)
        rep = consistency_report(pivot, list(completed.members))
        doc = consistency_to_doc(rep)
        assert doc["delta"] == rep.delta
        assert doc["lambda"] == rep.lam
        assert doc["labels"] == rep.labels
        assert len(doc["vertex"]) == 3
        assert set(doc["variational"]) == {"max_deviation", "per_label"}
        for l in rep.labels:
            assert set(doc["statistical"][str(l)]) == {
                "min",
                "q1",
                "median",
                "q3",
                "max",
            }
        json.dumps(doc)

    def test_geodesic_doc_shape(self):
        rng = np.random.default_rng(13)
        e = generators.random_full_ensemble(rng, 2, 4)
        path = geodesic_frames(e.members[0], e.members[1], steps=4,
                               with_consistency=True)
        doc = geodesic_to_doc(path)
        assert doc["steps"] == 4
        assert len(doc["frames"]) == 4
        assert doc["frames"][0]["lambda"] == 0.0
        assert doc["frames"][-1]["lambda"] == 1.0
        for fr in doc["frames"]:
            parse_tree(json.dumps(fr["tree"]))
            assert "consistency" in fr
        json.dumps(doc)

    def test_dump_json_is_deterministic_and_sorted(self):
        doc = {"b": 1.5, "a": [1, 2], "c": {"y": 0.1, "x": 2}}
        text = dump_json(doc)
        assert text == dump_json(doc)
        assert text.index('"a"') < text.index('"b"') < text.index('"c"')
        assert text.endswith("\n")


class TestFmt12:
    def test_short_numbers_stay_short(self):
        assert fmt12(1.0) == "1"
        assert fmt12(0.5) == "0.5"

    def test_long_numbers_round_to_12_digits(self):
        assert fmt12(1.0 / 3.0) == "0.333333333333"
        assert fmt12(1234567.125) == "1234567.125"
