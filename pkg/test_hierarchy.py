"""Tests for hierarchical k-clustering."""

import numpy as np
import pytest

from analysis.hierarchy import k_cluster
from analysis.metrics import rand_index
from core.dataset import Dataset
from core.errors import ConfigError, DataError
from objectives import ObjectiveKind, build_objective
from solvers.brute_force import brute_force


class TestKCluster:
    def test_three_blobs(self, three_blobs):
        tree = k_cluster(three_blobs, 3, "combined")
        assert rand_index(three_blobs.labels, tree.labels()) == 1.0

    def test_two_leaves_match_exact_split(self, random_dataset):
        data = random_dataset(9, 2, seed=31)
        tree = k_cluster(data, 2, ObjectiveKind.INTRA)
        exact = brute_force(build_objective(ObjectiveKind.INTRA, data))
        assert rand_index(exact.best_assignment, tree.labels()) == 1.0
        assert tree.root.energy == exact.best_energy
        assert tree.root.method == "brute_force"

    def test_leaves_partition_the_points(self, random_dataset):
        data = random_dataset(11, 3, seed=2)
        tree = k_cluster(data, 4, "intra_star")
        leaves = tree.leaves()
        assert len(leaves) == 4
        covered = np.sort(np.concatenate([leaf.indices for leaf in leaves]))
        assert covered.tolist() == list(range(11))
        assert sorted(set(tree.labels().tolist())) == [0, 1, 2, 3]

    def test_k_equal_to_n_gives_singletons(self, random_dataset):
        tree = k_cluster(random_dataset(5, 2, seed=8), 5, "combined")
        assert all(leaf.size == 1 for leaf in tree.leaves())

    def test_breadth_mode_splits_every_leaf(self, three_blobs):
        tree = k_cluster(three_blobs, 4, "combined", mode="breadth")
        assert len(tree.leaves()) == 4
        assert all(leaf.depth == 2 for leaf in tree.leaves())

    def test_identical_points_are_peeled(self):
        data = Dataset(points=[[1.0, 1.0]] * 4)
        tree = k_cluster(data, 2, "combined")
        assert tree.root.method == "peel"
        assert [leaf.size for leaf in tree.leaves()] == [3, 1]

    def test_large_leaves_are_annealed(self, two_blobs):
        tree = k_cluster(two_blobs, 2, "combined", exact_max_points=4)
        assert tree.root.method == "simulated_annealing"
        assert rand_index(two_blobs.labels, tree.labels()) == 1.0

    @pytest.mark.parametrize("k", [1, 6])
    def test_k_out_of_range(self, random_dataset, k):
        with pytest.raises(DataError):
            k_cluster(random_dataset(5, 2), k, "combined")

    def test_unknown_mode(self, random_dataset):
        with pytest.raises(ConfigError):
            k_cluster(random_dataset(5, 2), 2, "combined", mode="depth")

    def test_to_dict(self, three_blobs):
        document = k_cluster(three_blobs, 2, "combined").to_dict()
        assert document["kind"] == "combined"
        assert document["num_points"] == 12
        assert len(document["root"]["children"]) == 2
