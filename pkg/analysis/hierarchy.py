"""
Hierarchical k-clustering by repeated Hamiltonian binary splits.

Each round builds the objective polynomial on one leaf's points, minimizes
it and splits the leaf by spin sign, until k leaves exist.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterator, List, Optional

import numpy as np

from config import config
from core.dataset import Dataset
from core.errors import ConfigError, DataError
from objectives.builders import build_objective
from objectives.centroids import ObjectiveKind
from solvers.annealing import AnnealSchedule, anneal_objective
from solvers.brute_force import brute_force

logger = logging.getLogger(__name__)

SPLIT_MODES = ('largest', 'breadth')


@dataclass(eq=False)
class ClusterNode:
    """
    One node of the split tree.

    energy and method describe the split that produced this node's
    children; method is "peel" when the solver left one side empty and the
    last point was split off instead.
    """

    indices: np.ndarray
    depth: int = 0
    energy: Optional[float] = None
    method: Optional[str] = None
    children: List['ClusterNode'] = field(default_factory=list)

    @property
    def size(self) -> int:
        return int(self.indices.shape[0])

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def wcss(self, points: np.ndarray) -> float:
        """Within-cluster sum of squared distances to the centroid"""
        block = points[self.indices]
        return float(np.sum((block - block.mean(axis=0)) ** 2))

    def to_dict(self) -> dict:
        return {
            "indices": [int(i) for i in self.indices],
            "energy": self.energy,
            "method": self.method,
            "children": [child.to_dict() for child in self.children],
        }


@dataclass(eq=False)
class ClusterTree:
    """Root node over all point indices plus the objective used for every split"""

    root: ClusterNode
    kind: ObjectiveKind
    num_points: int

    def leaves(self) -> List[ClusterNode]:
        """Leaves ordered by their smallest point index"""
        found = [node for node in self._walk(self.root) if node.is_leaf]
        return sorted(found, key=lambda node: int(node.indices.min()))

    def _walk(self, node: ClusterNode) -> Iterator[ClusterNode]:
        yield node
        for child in node.children:
            yield from self._walk(child)

    def labels(self) -> np.ndarray:
        """Leaf number of every point"""
        labels = np.empty(self.num_points, dtype=np.int64)
        for number, leaf in enumerate(self.leaves()):
            labels[leaf.indices] = number
        return labels

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "num_points": self.num_points, "root": self.root.to_dict()}


def _split(node: ClusterNode, data: Dataset, kind: ObjectiveKind, exact_max_points: int,
           schedule: Optional[AnnealSchedule]) -> None:
    subset = data.subset(node.indices, name=f"{data.name}[{node.depth}]")
    if subset.num_points <= exact_max_points:
        result = brute_force(build_objective(kind, subset))
    else:
        result = anneal_objective(kind, subset, schedule)
    z = result.best_assignment
    plus, minus = node.indices[z > 0], node.indices[z < 0]
    node.energy = float(result.best_energy)
    node.method = result.method
    if plus.size == 0 or minus.size == 0:
        logger.debug("split of %d points left one side empty; peeling the last point", node.size)
        plus, minus = node.indices[:-1], node.indices[-1:]
        node.method = "peel"
    node.children = [
        ClusterNode(indices=plus, depth=node.depth + 1),
        ClusterNode(indices=minus, depth=node.depth + 1),
    ]


def k_cluster(
    data: Dataset,
    k: int,
    kind,
    mode: Optional[str] = None,
    schedule: Optional[AnnealSchedule] = None,
    exact_max_points: Optional[int] = None,
) -> ClusterTree:
    """
    Split until k leaves exist.

    Args:
        data: Points to cluster
        k: Number of leaves, 2 <= k <= N
        kind: Objective used for every split
        mode: "largest" splits the leaf with the largest within-cluster sum
            of squares each round; "breadth" splits every leaf per round
        schedule: Annealing schedule for leaves above exact_max_points
        exact_max_points: Largest leaf solved by brute force

    Raises:
        DataError: if k is out of range or no leaf can be split
    """
    kind = ObjectiveKind.parse(kind)
    mode = mode or config.get_protocol_config('kcluster').get('mode', 'largest')
    if mode not in SPLIT_MODES:
        raise ConfigError(f"split mode must be one of {', '.join(SPLIT_MODES)}, got '{mode}'")
    if not 2 <= k <= data.num_points:
        raise DataError(f"k must satisfy 2 <= k <= N={data.num_points}, got {k}")
    if exact_max_points is None:
        exact_max_points = int(config.get_protocol_config('kcluster').get('exact_max_points', 16))

    tree = ClusterTree(ClusterNode(indices=np.arange(data.num_points)), kind, data.num_points)
    leaves = [tree.root]
    while len(leaves) < k:
        splittable = [leaf for leaf in leaves if leaf.size >= 2]
        if not splittable:
            raise DataError(f"no splittable leaf left with {len(leaves)} of {k} clusters")
        if mode == 'largest':
            order = sorted(splittable, key=lambda leaf: -leaf.wcss(data.points))
            targets = order[:1]
        else:
            targets = splittable[:k - len(leaves)]
        for leaf in targets:
            _split(leaf, data, kind, exact_max_points, schedule)
            position = leaves.index(leaf)
            leaves[position:position + 1] = leaf.children
            logger.debug(
                "split %d points into %d + %d (%s)",
                leaf.size, leaf.children[0].size, leaf.children[1].size, leaf.method,
            )
    logger.info("k-clustering with %s produced %d leaves", kind.label, len(leaves))
    return tree
