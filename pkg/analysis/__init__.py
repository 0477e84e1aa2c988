"""Clustering metrics, hierarchical k-clustering and experiment protocols"""

from .hierarchy import ClusterNode, ClusterTree, k_cluster
from .metrics import (
    MetricsReport,
    MetricSummary,
    aggregate_reports,
    auxiliary_metrics,
    evaluate_partition,
    rand_index,
    silhouette,
    summarize,
)
from .protocols import (
    CurvePoint,
    ProtocolResult,
    feasible_target,
    run_constraint_sweep,
    run_exact_protocol,
    run_sa_protocol,
    run_single,
)

__all__ = [
    'ClusterNode',
    'ClusterTree',
    'k_cluster',
    'MetricsReport',
    'MetricSummary',
    'aggregate_reports',
    'auxiliary_metrics',
    'evaluate_partition',
    'rand_index',
    'silhouette',
    'summarize',
    'CurvePoint',
    'ProtocolResult',
    'feasible_target',
    'run_constraint_sweep',
    'run_exact_protocol',
    'run_sa_protocol',
    'run_single',
]
