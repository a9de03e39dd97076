import pytest

from sketchbench.bench import DatasetValidationError, load_dataset

from bench_fixtures import make_dataset, tiny_png


class TestLoadDataset:
    def test_grouping_and_order(self, tmp_path):
        root = make_dataset(tmp_path / "data", sample_ids=("b", "a"))
        (root / "b_sketch_2.png").write_bytes(tiny_png())
        records = load_dataset(root)
        assert [r.sample_id for r in records] == ["a", "b"]
        assert len(records[0].sketch_paths) == 1
        assert [p.name for p in records[1].sketch_paths] == ["b_sketch_1.png", "b_sketch_2.png"]

    def test_empty_dir(self, tmp_path):
        root = tmp_path / "empty"
        root.mkdir()
        assert load_dataset(root) == []

    def test_orphan_sketch_named_in_error(self, tmp_path):
        root = make_dataset(tmp_path / "data", sample_ids=("a",))
        (root / "c_sketch_1.png").write_bytes(tiny_png())
        with pytest.raises(DatasetValidationError) as err:
            load_dataset(root)
        assert "'c'" in str(err.value)

    def test_missing_screenshot_named(self, tmp_path):
        root = make_dataset(tmp_path / "data", sample_ids=("a",))
        (root / "a.png").unlink()
        with pytest.raises(DatasetValidationError) as err:
            load_dataset(root)
        assert "a.png" in str(err.value)

    def test_sketchless_page_allowed_when_requested(self, tmp_path):
        root = make_dataset(tmp_path / "data", sample_ids=("a",))
        for p in root.glob("*_sketch_*.png"):
            p.unlink()
        with pytest.raises(DatasetValidationError):
            load_dataset(root)
        records = load_dataset(root, require_sketches=False)
        assert records[0].sketch_paths == ()
