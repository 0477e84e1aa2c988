"""
Shared fixtures for the clustering test suite.
"""

import os

import numpy as np
import pytest

from core.dataset import Dataset


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def random_dataset():
    """Factory for small random datasets"""

    def make(n: int, d: int, seed: int = 0) -> Dataset:
        points = np.random.default_rng(seed).normal(size=(n, d))
        return Dataset(points=points, name=f"random-{n}x{d}-{seed}")

    return make


@pytest.fixture
def two_blobs():
    """Two tight, well-separated clusters of 5 points each with labels 0/1"""
    offsets = np.random.default_rng(3).normal(scale=0.1, size=(10, 2))
    centers = np.array([[0.0, 0.0]] * 5 + [[6.0, 4.0]] * 5)
    labels = np.array([0] * 5 + [1] * 5)
    return Dataset(points=centers + offsets, labels=labels, name="two-blobs")


@pytest.fixture
def three_blobs():
    """Three tight clusters of 4 points at the corners of a triangle"""
    corners = np.array([[0.0, 10.0], [8.66, -5.0], [-8.66, -5.0]])
    offsets = np.random.default_rng(5).normal(scale=0.1, size=(12, 2))
    points = np.repeat(corners, 4, axis=0) + offsets
    return Dataset(points=points, labels=np.repeat([0, 1, 2], 4), name="three-blobs")


@pytest.fixture
def tiny_csv(tmp_path):
    """Five labelled 2-D points in a headed CSV"""
    path = tmp_path / "tiny.csv"
    path.write_text(
        "x,y,class\n"
        "0.0,0.1,a\n"
        "0.2,0.0,a\n"
        "5.0,5.1,b\n"
        "5.2,4.9,b\n"
        "4.9,5.0,b\n",
        encoding="utf-8",
    )
    return path


def _csv_from_env(variable: str) -> str:
    value = os.getenv(variable)
    if not value or not os.path.isfile(value):
        pytest.skip(f"set {variable} to a CSV file to run this test")
    return value


@pytest.fixture
def iris_csv():
    return _csv_from_env("CLUSTER_IRIS_CSV")


@pytest.fixture
def wine_csv():
    return _csv_from_env("CLUSTER_WINE_CSV")
