"""Tests for dataset loading, synthetic data, constraint files, QUBO export and result files."""

import json

import numpy as np
import pandas as pd
import pytest

from analysis.protocols import run_exact_protocol, run_single
from core.dataset import Dataset
from core.errors import ConfigError, ConstraintError, DataError
from core.polynomial import BinaryQuadraticForm, SpinPolynomial
from solvers import quadratize
from tools.constraint_file import load_constraint_file
from tools.data_loader import exclude_classes, load_csv, load_dataset, preprocess, save_dataset_csv
from tools.qubo_export import export_qubo, load_qubo, qubo_document
from tools.result_writer import RunConfig, result_document, write_results
from tools.synthetic import GaussianSpec, generate_gaussian


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadCsv:
    def test_features_and_labels(self, tiny_csv):
        data = load_csv(tiny_csv, label_column="class")
        assert data.points.shape == (5, 2)
        assert data.labels.tolist() == ["a", "a", "b", "b", "b"]
        assert data.name == "tiny"
        assert data.points[2].tolist() == [5.0, 5.1]

    def test_without_labels(self, tmp_path):
        data = load_csv(write(tmp_path, "plain.csv", "a,b\n1,2\n3,4\n"))
        assert not data.has_labels
        assert data.points.tolist() == [[1.0, 2.0], [3.0, 4.0]]

    def test_headerless(self, tmp_path):
        data = load_csv(write(tmp_path, "raw.csv", "1,2,x\n3,4,y\n"), label_column="2", header=False)
        assert data.labels.tolist() == ["x", "y"]
        assert data.num_features == 2

    def test_short_row_reports_line(self, tmp_path):
        path = write(tmp_path, "short.csv", "a,b\n1,2\n3\n")
        with pytest.raises(DataError, match="line 3"):
            load_csv(path)

    def test_non_numeric_cell_reports_line(self, tmp_path):
        path = write(tmp_path, "text.csv", "a,b\n1,2\n3,oops\n")
        with pytest.raises(DataError, match="line 3"):
            load_csv(path)

    def test_full_precision_values_parse_exactly(self, tmp_path):
        values = np.random.default_rng(8).normal(size=500)
        path = write(tmp_path, "exact.csv", "v\n" + "\n".join("%.17g" % v for v in values) + "\n")
        assert np.array_equal(load_csv(path).points[:, 0], values)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            load_csv(tmp_path / "absent.csv")

    def test_unknown_label_column(self, tiny_csv):
        with pytest.raises(DataError):
            load_csv(tiny_csv, label_column="species")


class TestPreprocess:
    data = Dataset(points=[[0.0, 5.0], [2.0, 5.0], [4.0, 5.0]])

    def test_minmax(self):
        scaled = preprocess(self.data, "minmax")
        assert scaled.points[:, 0].tolist() == [0.0, 0.5, 1.0]
        assert scaled.points[:, 1].tolist() == [0.0, 0.0, 0.0]

    def test_zscore_uses_sample_std(self):
        scaled = preprocess(Dataset(points=[[-1.0], [1.0]]), "zscore")
        assert scaled.points[:, 0] == pytest.approx([-np.sqrt(0.5), np.sqrt(0.5)])

    def test_zscore_constant_feature(self):
        assert preprocess(self.data, "zscore").points[:, 1].tolist() == [0.0, 0.0, 0.0]

    def test_pixel255(self):
        assert preprocess(Dataset(points=[[0.0], [255.0]]), "pixel255").points[:, 0].tolist() == [0.0, 1.0]

    def test_none_is_identity(self):
        assert preprocess(self.data, "none") is self.data

    def test_unknown_mode(self):
        with pytest.raises(ConfigError):
            preprocess(self.data, "whiten")


class TestLoadDataset:
    def test_exclude_classes(self, tiny_csv):
        data = exclude_classes(load_csv(tiny_csv, label_column="class"), ["a"])
        assert data.num_points == 3
        assert set(data.labels.tolist()) == {"b"}

    def test_exclusion_keeps_two_points(self, tiny_csv):
        assert exclude_classes(load_csv(tiny_csv, label_column="class"), ["b"]).num_points == 2

    def test_exclusion_needs_two_points_left(self, tmp_path):
        path = write(tmp_path, "lonely.csv", "x,class\n0,a\n1,b\n2,b\n")
        with pytest.raises(DataError):
            exclude_classes(load_csv(path, label_column="class"), ["b"])

    def test_profile_fills_options(self, tmp_path):
        path = write(
            tmp_path, "iris.csv",
            "a,b,class\n1,10,Iris-setosa\n2,20,Iris-versicolor\n4,30,Iris-virginica\n3,40,Iris-virginica\n",
        )
        data = load_dataset(path, profile="iris")
        assert data.num_points == 3
        assert data.name == "iris"
        assert data.points.min() == 0.0 and data.points.max() == 1.0

    def test_explicit_options_override_profile(self, tmp_path):
        path = write(tmp_path, "iris.csv", "a,class\n1,x\n3,y\n")
        data = load_dataset(path, profile="iris", preprocessing="none")
        assert data.points[:, 0].tolist() == [1.0, 3.0]

    def test_unknown_profile(self, tiny_csv):
        with pytest.raises(ConfigError):
            load_dataset(tiny_csv, profile="cifar")

    def test_save_and_reload(self, tmp_path, random_dataset):
        data = random_dataset(6, 3, seed=1)
        path = save_dataset_csv(Dataset(points=data.points, labels=[0, 1] * 3), tmp_path / "out.csv")
        back = load_csv(path, label_column="label")
        assert np.array_equal(back.points, data.points)
        assert back.labels.tolist() == ["0", "1"] * 3


class TestGaussian:
    spec = dict(
        means=[[0.0, 0.0], [5.0, 5.0]],
        covariances=[[[1.0, 0.0], [0.0, 1.0]], [[0.5, 0.1], [0.1, 0.5]]],
        counts=[3, 4],
        seed=12,
    )

    def test_seeded(self):
        first = generate_gaussian(**self.spec)
        second = generate_gaussian(**self.spec)
        assert np.array_equal(first.points, second.points)
        assert first.labels.tolist() == [0] * 3 + [1] * 4

    def test_zero_covariance_gives_the_mean(self):
        data = generate_gaussian(means=[[1.0, 2.0]], covariances=[[[0.0, 0.0], [0.0, 0.0]]], counts=[3])
        assert data.points.tolist() == [[1.0, 2.0]] * 3

    def test_rejects_non_psd(self):
        with pytest.raises(DataError):
            generate_gaussian(means=[[0.0, 0.0]], covariances=[[[1.0, 2.0], [2.0, 1.0]]], counts=[4])

    def test_rejects_shape_mismatch(self):
        with pytest.raises(DataError):
            generate_gaussian(means=[[0.0, 0.0]], covariances=[[[1.0]]], counts=[4])

    def test_config_default(self):
        data = generate_gaussian(GaussianSpec.from_config())
        assert data.num_points == 150
        assert data.name == "overlap-pair"

    def test_overlapping_clusters_are_partly_recoverable(self):
        from analysis.metrics import rand_index
        from solvers import kmeans_baseline

        data = generate_gaussian(GaussianSpec.from_config(seed=3))
        score = rand_index(data.labels, kmeans_baseline(data, 2))
        assert 0.7 <= score <= 0.9


class TestConstraintFile:
    def test_all_sections(self, tmp_path):
        path = write(tmp_path, "c.json", json.dumps({
            "labels": [[0, 1], {"i": 2, "s": -1}],
            "cardinality": {"C": 0, "lambda": 4.0},
            "links": [{"i": 1, "j": 3, "q": -1}],
            "link_lambda": 2.0,
        }))
        constraint_set = load_constraint_file(path, num_points=4)
        assert constraint_set.labels == [(0, 1), (2, -1)]
        assert constraint_set.cardinality.weight == 4.0
        assert constraint_set.links[0].q == -1
        assert constraint_set.link_lambda == 2.0

    def test_invalid_json(self, tmp_path):
        with pytest.raises(DataError):
            load_constraint_file(write(tmp_path, "c.json", "{labels: }"), num_points=4)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            load_constraint_file(tmp_path / "none.json", num_points=4)

    @pytest.mark.parametrize("document", [
        {"cardinality": {"C": 1}},
        {"labels": [[7, 1]]},
        {"links": [{"i": 2, "j": 1, "q": 1}]},
        [1, 2],
    ])
    def test_invalid_constraints(self, tmp_path, document):
        with pytest.raises(ConstraintError):
            load_constraint_file(write(tmp_path, "c.json", json.dumps(document)), num_points=4)


class TestQuboExport:
    def test_document_layout(self):
        form = BinaryQuadraticForm(2, offset=1.0, linear=[-2.0, -2.0], quadratic={(0, 1): 4.0})
        assert qubo_document(form) == {
            "num_vars": 2,
            "offset": 1.0,
            "linear": [-2.0, -2.0],
            "quadratic": [{"i": 0, "j": 1, "c": 4.0}],
        }

    def test_reload_is_exact(self, tmp_path):
        form, var_map = quadratize(SpinPolynomial(4, terms={(0, 1, 2, 3): 0.1, (0, 2): 1.0 / 3.0}))
        path = export_qubo(form, tmp_path / "sub" / "q.json", var_map)
        back, back_map = load_qubo(path)
        assert back.offset == form.offset
        assert back.linear.tolist() == form.linear.tolist()
        assert dict(back.quadratic) == dict(form.quadratic)
        assert back_map == var_map

    def test_empty_form(self, tmp_path):
        path = export_qubo(BinaryQuadraticForm(0, offset=2.5), tmp_path / "empty.json")
        document = json.loads(path.read_text(encoding="utf-8"))
        assert document == {"linear": [], "num_vars": 0, "offset": 2.5, "quadratic": []}
        form, var_map = load_qubo(path)
        assert form.num_vars == 0 and var_map is None

    def test_malformed(self, tmp_path):
        with pytest.raises(DataError):
            load_qubo(write(tmp_path, "bad.json", '{"num_vars": 1}'))


class TestRunConfig:
    def test_file_round_trip(self, tmp_path):
        run_config = RunConfig.build(data="iris.csv", objectives="combined,intra*", protocol="exact", trials=5)
        path = run_config.to_file(tmp_path / "run.yaml")
        assert RunConfig.from_file(path) == run_config
        assert run_config.objectives == ["combined", "intra_star"]

    def test_data_and_synthetic_conflict(self):
        with pytest.raises(ConfigError):
            RunConfig.build(data="x.csv", synthetic=True)

    def test_unknown_key(self, tmp_path):
        with pytest.raises(ConfigError):
            RunConfig.from_file(write(tmp_path, "run.yaml", "data: x.csv\nsweepz: 10\n"))

    def test_nested_mapping_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            RunConfig.from_file(write(tmp_path, "run.yaml", "annealing:\n  sweeps: 10\n"))

    def test_unknown_objective(self):
        with pytest.raises(ConfigError):
            RunConfig.build(objectives=["kmedoids"])

    def test_merged_ignores_unset_overrides(self):
        base = RunConfig.build(data="x.csv", seed=3, sweeps=100)
        merged = base.merged(seed=None, sweeps=20, protocol="sa")
        assert (merged.seed, merged.sweeps, merged.protocol) == (3, 20, "sa")


class TestWriteResults:
    def test_files_and_determinism(self, tmp_path, two_blobs):
        result = run_exact_protocol(two_blobs, kinds=["combined"], trials=2, subsample=5, seed=3)
        run_config = RunConfig.build(synthetic=True, protocol="exact", trials=2, subsample=5, seed=3)
        first = write_results(result, tmp_path / "a", "exact_blobs", run_config)
        second = write_results(result, tmp_path / "b", "exact_blobs", run_config)
        assert set(first) == {"json", "csv"}
        one = json.loads(first["json"].read_text(encoding="utf-8"))
        two = json.loads(second["json"].read_text(encoding="utf-8"))
        one.pop("metadata"), two.pop("metadata")
        assert one == two
        assert one["config"]["protocol"] == "exact"
        assert first["csv"].read_bytes() == second["csv"].read_bytes()
        table = pd.read_csv(first["csv"])
        assert table["method"].tolist() == ["Intra-Inter combined", "k-means"]

    def test_single_run_document(self, two_blobs):
        document = result_document(run_single(two_blobs, "combined"))
        assert document["schema_version"] == 1
        assert document["config"] is None
        assert len(document["result"]["details"]["assignment"]) == 10
