import struct

import numpy as np
import pytest

from treecenter import (
    InputError,
    ScalarGrid,
    extract_merge_tree,
    gaussian_mixture_grid,
    induced_matrix,
    is_ultra,
    is_valid,
    parse_grid,
    validate_merge_tree,
)

import generators
import oracles


def extract(values, width, height, connectivity=4, augmented=False):
    grid = ScalarGrid(
        width=width, height=height, values=list(values), connectivity=connectivity
    )
    return extract_merge_tree(grid, augmented=augmented)


class TestScalarGrid:
    def test_at_uses_column_row(self):
        g = ScalarGrid(width=3, height=2, values=[0, 1, 2, 3, 4, 5])
        assert g.at(0, 0) == 0
        assert g.at(2, 0) == 2
        assert g.at(0, 1) == 3

    def test_size_mismatch_rejected(self):
        with pytest.raises(InputError):
            ScalarGrid(width=2, height=2, values=[0.0, 1.0, 2.0])

    def test_bad_connectivity_rejected(self):
        with pytest.raises(InputError):
            ScalarGrid(width=1, height=1, values=[0.0], connectivity=6)

    def test_nonfinite_rejected(self):
        with pytest.raises(InputError):
            ScalarGrid(width=2, height=1, values=[0.0, np.inf])


class TestExtraction:
    def test_three_pixel_strip(self):
        t, records = extract([0.0, 2.0, 1.0], 3, 1)
        assert validate_merge_tree(t.tree) == []
        assert sorted(t.labeling.assign) == [1, 2]
        m = induced_matrix(t)
        assert m.entries.tolist() == [[0.0, 2.0], [2.0, 1.0]]
        kinds = sorted(r.kind for r in records)
        assert kinds == ["merge-saddle", "minimum", "minimum"]
        saddle = next(r for r in records if r.kind == "merge-saddle")
        assert saddle.position == (1, 0)
        assert saddle.value == 2.0

    def test_monotone_grid_is_single_leaf(self):
        t, records = extract([0.0, 1.0, 2.0, 3.0], 4, 1)
        assert len(t.tree.leaves()) == 1
        assert [r.kind for r in records] == ["minimum"]
        assert t.labeling.assign == {1: t.tree.leaves()[0]}

    def test_constant_grid_collapses_to_one_component(self):
        t, records = extract([5.0] * 6, 3, 2)
        assert len([r for r in records if r.kind == "minimum"]) == 1
        assert sorted(t.labeling.assign) == [1]

    def test_labels_follow_ascending_minimum_values(self):
        #  wells at 0 (idx 4) and -1 (idx 0) separated by a ridge
        vals = [-1.0, 3.0, 0.0, 3.0, 3.0, 3.0, 0.5, 3.0, 2.0]
        t, _ = extract(vals, 3, 3)
        labels = sorted(t.labeling.assign)
        f_of = [t.tree.f[t.labeling.assign[l]] for l in labels]
        assert f_of == sorted(f_of)
        assert f_of[0] == -1.0

    def test_eight_connectivity_bridges_diagonals(self):
        # two low corners touching only diagonally through the center
        vals = [0.0, 9.0, 9.0, 9.0, 1.0, 9.0, 9.0, 9.0, 0.5]
        t4, _ = extract(vals, 3, 3, connectivity=4)
        t8, _ = extract(vals, 3, 3, connectivity=8)
        m4 = induced_matrix(t4)
        m8 = induced_matrix(t8)
        assert m4.entries.max() == 9.0   # must climb over the ridge
        assert m8.entries.max() < 9.0    # diagonals skip it

    def test_coordinates_are_column_row(self):
        t, records = extract([0.0, 2.0, 1.0], 3, 1)
        mins = {r.value: r.position for r in records if r.kind == "minimum"}
        assert mins[0.0] == (0, 0)
        assert mins[1.0] == (2, 0)
        v0 = t.labeling.assign[1]
        assert t.embedding[v0] == (0, 0)

    def test_matches_threshold_sweep_oracle_distinct_values(self):
        rng = np.random.default_rng(7)
        for trial in range(40):
            w = int(rng.integers(1, 9))
            h = int(rng.integers(1, 9))
            conn = 4 if trial % 2 == 0 else 8
            vals = generators.random_grid_values(rng, w, h)
            t, records = extract(vals, w, h, connectivity=conn)
            assert validate_merge_tree(t.tree) == []
            want, minima = oracles.grid_merge_matrix(vals, w, h, conn)
            got = induced_matrix(t)
            assert np.array_equal(got.entries, want)
            assert len(t.tree.leaves()) == len(minima)
            assert len([r for r in records if r.kind == "minimum"]) == len(minima)

    def test_matches_threshold_sweep_oracle_with_plateaus(self):
        rng = np.random.default_rng(11)
        for trial in range(40):
            w = int(rng.integers(1, 8))
            h = int(rng.integers(1, 8))
            conn = 4 if trial % 2 == 0 else 8
            vals = generators.random_grid_values(rng, w, h, ints=True)
            t, records = extract(vals, w, h, connectivity=conn)
            assert validate_merge_tree(t.tree) == []
            want, minima = oracles.grid_merge_matrix(vals, w, h, conn)
            got = induced_matrix(t)
            assert np.array_equal(got.entries, want)
            assert len([r for r in records if r.kind == "minimum"]) == len(minima)
            assert is_valid(got) and is_ultra(got)

    def test_augmented_keeps_every_pixel(self):
        rng = np.random.default_rng(13)
        vals = generators.random_grid_values(rng, 5, 4)
        plain, _ = extract(vals, 5, 4)
        aug, _ = extract(vals, 5, 4, augmented=True)
        assert aug.tree.size() == 20
        assert validate_merge_tree(aug.tree) == []
        assert np.array_equal(
            induced_matrix(aug).entries, induced_matrix(plain).entries
        )

    def test_unaugmented_has_no_anonymous_pass_throughs(self):
        rng = np.random.default_rng(17)
        for _ in range(10):
            vals = generators.random_grid_values(rng, 6, 5)
            t, _ = extract(vals, 6, 5)
            kids = t.tree.children()
            labeled = set(t.labeling.assign.values())
            for v in t.tree.f:
                if v == t.tree.root or v in labeled:
                    continue
                assert len(kids[v]) != 1

    def test_shift_moves_matrix_with_it(self):
        rng = np.random.default_rng(19)
        vals = generators.random_grid_values(rng, 4, 4)
        t0, _ = extract(vals, 4, 4)
        t1, _ = extract([v + 10.0 for v in vals], 4, 4)
        assert np.allclose(
            induced_matrix(t1).entries, induced_matrix(t0).entries + 10.0,
            atol=1e-12, rtol=0.0,
        )


class TestGaussianGrids:
    def test_single_well(self):
        g = gaussian_mixture_grid([((8.0, 8.0), 1.0, 2.5)], 17, 17)
        t, _ = extract_merge_tree(g)
        assert len(t.tree.leaves()) == 1

    def test_three_separated_wells(self):
        g = gaussian_mixture_grid(
            [
                ((5.0, 5.0), 1.0, 1.5),
                ((20.0, 5.0), 0.9, 1.5),
                ((12.0, 18.0), 1.1, 1.5),
            ],
            26,
            24,
        )
        t, _ = extract_merge_tree(g)
        assert len(t.tree.leaves()) == 3

    def test_flat_zero_spec(self):
        g = gaussian_mixture_grid([], 4, 4)
        assert set(g.values) == {0.0}

    def test_bad_sigma_rejected(self):
        with pytest.raises(InputError):
            gaussian_mixture_grid([((1.0, 1.0), 1.0, 0.0)], 4, 4)


class TestParseGrid:
    def test_csv_round_trip(self):
        text = "0.0,2.0,1.0\n3.5,4.0,0.25\n"
        g = parse_grid(text.encode())
        assert (g.width, g.height) == (3, 2)
        assert g.at(2, 1) == 0.25

    def test_csv_blank_lines_skipped(self):
        g = parse_grid(b"1,2\n\n3,4\n")
        assert (g.width, g.height) == (2, 2)

    def test_binary_round_trip(self):
        vals = [0.0, 2.0, 1.0, 5.0, 4.0, 3.0]
        blob = struct.pack("<II", 3, 2) + struct.pack("<6d", *vals)
        g = parse_grid(blob, connectivity=8)
        assert (g.width, g.height, g.connectivity) == (3, 2, 8)
        assert g.values == vals

    def test_binary_with_wrong_payload_falls_back_and_fails(self):
        blob = struct.pack("<II", 3, 2) + b"\xff" * 7
        with pytest.raises(InputError):
            parse_grid(blob)

    def test_garbage_text_rejected(self):
        with pytest.raises(InputError):
            parse_grid(b"1,2\n1,oops\n")

    def test_empty_rejected(self):
        with pytest.raises(InputError):
            parse_grid(b"")

    def test_ragged_rows_rejected(self):
        with pytest.raises(InputError):
            parse_grid(b"1,2\n3\n")

    def test_extraction_from_parsed_binary_matches_csv(self):
        vals = [0.0, 2.0, 1.0]
        blob = struct.pack("<II", 3, 1) + struct.pack("<3d", *vals)
        t_bin, _ = extract_merge_tree(parse_grid(blob))
        t_csv, _ = extract_merge_tree(parse_grid(b"0.0,2.0,1.0\n"))
        assert np.array_equal(
            induced_matrix(t_bin).entries, induced_matrix(t_csv).entries
        )
