import json
import struct

import numpy as np
import pytest

from treecenter import serialize_tree
from treecenter.cli import main

import generators
from sampletrees import matching_member, matching_pivot, two_leaf


@pytest.fixture
def ensemble_files(tmp_path):
    rng = np.random.default_rng(42)
    e = generators.random_full_ensemble(rng, 3, 4)
    paths = []
    for i, t in enumerate(e.members):
        p = tmp_path / f"tree_{i}.json"
        p.write_text(serialize_tree(t))
        paths.append(str(p))
    return paths


@pytest.fixture
def pair_files(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    a.write_text(serialize_tree(two_leaf(0.0, 1.0, 2.0)))
    b.write_text(serialize_tree(two_leaf(0.0, 1.0, 6.0)))
    return str(a), str(b)


class TestBasics:
    def test_no_arguments_is_usage_error(self, capsys):
        assert main([]) == 1
        assert "error" in capsys.readouterr().err

    def test_unknown_command_is_usage_error(self, capsys):
        assert main(["polish"]) == 1

    def test_version_flag(self, capsys):
        assert main(["--version"]) == 0
        assert "treecenter" in capsys.readouterr().out

    def test_missing_file_reports_json_error(self, capsys):
        assert main(["distance", "/nope/a.json", "/nope/b.json"]) == 2
        err = json.loads(capsys.readouterr().err)
        assert err["error"] == "InputError"
        assert "cannot read" in err["message"]

    def test_bad_document_reports_json_error(self, tmp_path, capsys):
        p = tmp_path / "bad.json"
        p.write_text("{broken")
        assert main(["distance", str(p), str(p)]) == 2
        err = json.loads(capsys.readouterr().err)
        assert err["error"] == "DocumentError"


class TestDistance:
    def test_identical_trees(self, pair_files, capsys):
        a, _ = pair_files
        assert main(["distance", a, a]) == 0
        assert capsys.readouterr().out.strip() == "0"

    def test_known_gap(self, pair_files, capsys):
        a, b = pair_files
        assert main(["distance", a, b]) == 0
        assert capsys.readouterr().out.strip() == "4"


class TestCenter:
    def test_stdout_document(self, ensemble_files, capsys):
        assert main(["center", *ensemble_files]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert set(doc) >= {"center", "radius", "member_distances"}
        assert len(doc["member_distances"]) == 3

    def test_report_directory(self, ensemble_files, tmp_path, capsys):
        out = tmp_path / "report"
        assert main(["center", *ensemble_files, "--out", str(out)]) == 0
        assert (out / "center.json").is_file()
        assert (out / "distances.csv").is_file()
        assert (out / "star.png").is_file()
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("radius ")
        assert lines[1].startswith("member 0 distance ")
        csv_lines = (out / "distances.csv").read_text().splitlines()
        assert csv_lines[0] == "member,distance,normalized"
        assert len(csv_lines) == 4

    def test_no_figures_skips_png(self, ensemble_files, tmp_path):
        out = tmp_path / "bare"
        assert main(
            ["center", *ensemble_files, "--out", str(out), "--no-figures"]
        ) == 0
        assert not (out / "star.png").exists()
        assert (out / "center.json").is_file()

    def test_full_mode_refuses_mixed_domains(self, tmp_path, capsys):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        a.write_text(serialize_tree(matching_member()))
        b.write_text(serialize_tree(matching_pivot()))
        assert main(["center", str(a), str(b)]) == 2
        err = json.loads(capsys.readouterr().err)
        assert err["error"] == "AgreementError"
        assert "--mode partial" in err["message"]

    def test_partial_mode_reconciles(self, tmp_path, capsys):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        a.write_text(serialize_tree(matching_member()))
        b.write_text(serialize_tree(matching_pivot()))
        assert main(["center", str(a), str(b), "--mode", "partial"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert len(doc["relabel_reports"]) == 1

    def test_same_input_twice_is_byte_identical(self, ensemble_files, tmp_path):
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        assert main(["center", *ensemble_files, "--out", str(out1)]) == 0
        assert main(["center", *ensemble_files, "--out", str(out2)]) == 0
        assert (out1 / "center.json").read_bytes() == (out2 / "center.json").read_bytes()
        assert (out1 / "distances.csv").read_bytes() == (out2 / "distances.csv").read_bytes()


class TestRelabel:
    def test_stdout_document(self, tmp_path, capsys):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        a.write_text(serialize_tree(matching_member()))
        b.write_text(serialize_tree(matching_pivot()))
        assert main(["relabel", str(a), str(b)]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert len(doc["members"]) == 2
        assert len(doc["reports"]) == 1
        assert doc["reports"][0]["renamed"] == {"5": 3}

    def test_directory_output(self, tmp_path, capsys):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        a.write_text(serialize_tree(matching_member()))
        b.write_text(serialize_tree(matching_pivot()))
        out = tmp_path / "relabeled"
        assert main(["relabel", str(a), str(b), "--out", str(out)]) == 0
        assert (out / "member_0.json").is_file()
        assert (out / "member_1.json").is_file()
        assert (out / "reports.json").is_file()
        assert "relabeled 1 of 2 members" in capsys.readouterr().out


class TestConsistency:
    def test_stdout_document(self, ensemble_files, capsys):
        assert main(["consistency", *ensemble_files]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert set(doc) >= {"delta", "labels", "vertex", "variational", "statistical"}

    def test_report_directory(self, ensemble_files, tmp_path, capsys):
        out = tmp_path / "cons"
        assert main(
            ["consistency", *ensemble_files, "--out", str(out), "--delta", "0.1"]
        ) == 0
        for name in ("consistency.json", "vertex.csv", "variational.png",
                     "statistical.png"):
            assert (out / name).is_file(), name
        assert json.loads((out / "consistency.json").read_text())["delta"] == 0.1
        head = (out / "vertex.csv").read_text().splitlines()[0]
        assert head == "member,label,consistency"
        assert "mean" in capsys.readouterr().out


class TestGeodesic:
    def test_stdout_document(self, pair_files, capsys):
        a, b = pair_files
        assert main(["geodesic", a, b, "--steps", "4"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["steps"] == 4
        assert [f["lambda"] for f in doc["frames"]] == [0.0, 1 / 3, 2 / 3, 1.0]

    def test_report_directory(self, pair_files, tmp_path, capsys):
        a, b = pair_files
        out = tmp_path / "geo"
        assert main(
            ["geodesic", a, b, "--steps", "3", "--with-consistency",
             "--out", str(out)]
        ) == 0
        for name in ("frames.json", "frames.csv", "frames.png"):
            assert (out / name).is_file(), name
        lines = (out / "frames.csv").read_text().splitlines()
        assert lines[0] == "frame,lambda,d_source,d_target"
        assert len(lines) == 4
        # the half-way frame sits equidistant: total gap is 4
        assert lines[1].split(",")[2] == "0"
        assert "3 frames, total distance 4" in capsys.readouterr().out


class TestExtract:
    def test_stdout_tree(self, tmp_path, capsys):
        grid = tmp_path / "grid.csv"
        grid.write_text("0.0,2.0,1.0\n")
        assert main(["extract", str(grid)]) == 0
        doc = json.loads(capsys.readouterr().out)
        kinds = [c["kind"] for c in doc["metadata"]["criticals"]]
        assert kinds.count("minimum") == 2
        assert kinds.count("merge-saddle") == 1

    def test_output_file_and_counts(self, tmp_path, capsys):
        grid = tmp_path / "grid.csv"
        grid.write_text("0.0,2.0,1.0\n")
        out = tmp_path / "tree.json"
        assert main(["extract", str(grid), "--out", str(out)]) == 0
        assert out.is_file()
        assert "2 leaves" in capsys.readouterr().out

    def test_binary_grid_and_connectivity(self, tmp_path, capsys):
        vals = [0.0, 9.0, 9.0, 9.0, 1.0, 9.0, 9.0, 9.0, 0.5]
        blob = struct.pack("<II", 3, 3) + struct.pack("<9d", *vals)
        grid = tmp_path / "grid.bin"
        grid.write_bytes(blob)
        assert main(["extract", str(grid), "--connectivity", "8"]) == 0
        doc = json.loads(capsys.readouterr().out)
        values = [n["f"] for n in doc["nodes"] if n["f"] != "inf"]
        assert 9.0 not in values  # diagonal connectivity avoids the ridge

    def test_bad_connectivity_is_usage_error(self, tmp_path):
        grid = tmp_path / "grid.csv"
        grid.write_text("0,1\n")
        assert main(["extract", str(grid), "--connectivity", "5"]) == 1


class TestSweepDelta:
    def test_report_directory(self, ensemble_files, tmp_path, capsys):
        out = tmp_path / "sweep"
        assert main(
            ["sweep-delta", *ensemble_files, "--deltas", "0.05,0.1",
             "--out", str(out)]
        ) == 0
        for name in ("sweep.json", "sweep.csv", "sweep.png"):
            assert (out / name).is_file(), name
        doc = json.loads((out / "sweep.json").read_text())
        assert doc["deltas"] == [0.05, 0.1]
        assert len(doc["mean_deviation"]) == 2
        assert set(doc["reports"]) == {"0.05", "0.1"}
        out_text = capsys.readouterr().out
        assert "delta 0.05 mean-deviation" in out_text

    def test_bad_delta_list(self, ensemble_files, capsys):
        assert main(["sweep-delta", *ensemble_files, "--deltas", "abc"]) == 2
        assert json.loads(capsys.readouterr().err)["error"] == "InputError"
