"""
Reproduction of published Iris and Wine results.

Needs CLUSTER_IRIS_CSV and CLUSTER_WINE_CSV pointing at CSV files with a
"class" column; run with `pytest -m slow`.
"""

import pytest

from analysis.protocols import KMEANS, run_exact_protocol, run_sa_protocol
from solvers import AnnealSchedule
from tools.data_loader import load_dataset

pytestmark = pytest.mark.slow

COMBINED = "Intra-Inter combined"


@pytest.fixture
def iris(iris_csv):
    return load_dataset(iris_csv, profile="iris")


@pytest.fixture
def wine(wine_csv):
    return load_dataset(wine_csv, profile="wine")


class TestExactSubsamples:
    def test_iris(self, iris):
        assert iris.num_points == 100
        result = run_exact_protocol(iris, kinds=["intra_star", "combined"], trials=150, subsample=16,
                                    seed=0, include_kmeans=False)
        assert result.summaries["Intra*"]["rand_index"].mean == pytest.approx(0.858, abs=0.03)
        assert result.summaries[COMBINED]["silhouette"].mean == pytest.approx(0.423, abs=0.02)

    def test_wine(self, wine):
        result = run_exact_protocol(wine, kinds=["combined"], trials=150, subsample=16,
                                    seed=0, include_kmeans=False)
        assert result.summaries[COMBINED]["rand_index"].mean == pytest.approx(0.865, abs=0.03)


class TestFullDatasetAnnealing:
    schedule = AnnealSchedule.from_config(seed=7)

    def test_iris(self, iris):
        result = run_sa_protocol(iris, kinds=["combined"], schedule=self.schedule, include_kmeans=False)
        summary = result.summaries[COMBINED]
        assert summary["rand_index"].mean == pytest.approx(0.922, abs=0.02)
        assert summary["silhouette"].mean == pytest.approx(0.442, abs=0.01)

    def test_wine(self, wine):
        result = run_sa_protocol(wine, kinds=["combined"], schedule=self.schedule)
        assert result.summaries[COMBINED]["rand_index"].mean == pytest.approx(0.888, abs=0.03)
        assert result.summaries[KMEANS]["rand_index"].mean == pytest.approx(0.903, abs=0.03)
