"""
Experiment protocols: exact subsample trials, full-dataset annealing and
constraint sweeps.

Every trial draws from its own generator derived from the root seed, so
results do not depend on the number of worker threads.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field

from analysis.metrics import (
    METRIC_COLUMNS,
    MetricSummary,
    aggregate_reports,
    evaluate_partition,
    rand_index,
    summarize,
)
from config import config
from constraints.penalties import (
    ConstraintSet,
    apply_cardinality,
    apply_constraints,
    apply_links,
    default_penalty,
    derive_links_from_labels,
    satisfies,
)
from core.dataset import Dataset
from core.errors import ConfigError, ConstraintError, DataError
from core.polynomial import SpinPolynomial
from objectives.builders import build_objective
from objectives.centroids import ObjectiveKind
from solvers.annealing import AnnealSchedule, anneal_objective, simulated_annealing
from solvers.brute_force import brute_force
from solvers.kmeans import kmeans_baseline
from solvers.result import SolveResult

logger = logging.getLogger(__name__)

KMEANS = "k-means"
DEFAULT_KINDS = ('intra', 'intra_star', 'inter', 'combined', 'weighted_maxcut')
SOLVERS = ('auto', 'brute_force', 'annealing')


class CurvePoint(BaseModel):
    """Sweep statistics at one grid value"""

    x: float
    rand_index: MetricSummary
    cardinality_gap: Optional[MetricSummary] = None
    target: Optional[int] = None
    parity_adjusted: bool = False


class ProtocolResult(BaseModel):
    """
    Outcome of one protocol run.

    summaries maps a method label (objective or "k-means") to its metric
    summaries; sweeps fill curve instead.
    """

    protocol: str
    dataset: str
    num_points: int
    seed: int
    params: Dict[str, Any] = Field(default_factory=dict)
    summaries: Dict[str, Dict[str, MetricSummary]] = Field(default_factory=dict)
    curve: List[CurvePoint] = Field(default_factory=list)
    details: Dict[str, Any] = Field(default_factory=dict)

    def to_rows(self) -> List[Dict[str, Any]]:
        """One flat row per method with <metric>_mean and <metric>_std columns"""
        rows = []
        for method, metrics in self.summaries.items():
            row: Dict[str, Any] = {"method": method}
            for column in METRIC_COLUMNS:
                summary = metrics.get(column)
                row[f"{column}_mean"] = None if summary is None else summary.mean
                row[f"{column}_std"] = None if summary is None else summary.std
            rows.append(row)
        return rows

    def curve_rows(self) -> List[Dict[str, Any]]:
        rows = []
        for point in self.curve:
            gap = point.cardinality_gap
            rows.append({
                "x": point.x,
                "target": point.target,
                "rand_index_mean": point.rand_index.mean,
                "rand_index_std": point.rand_index.std,
                "cardinality_gap_mean": None if gap is None else gap.mean,
                "cardinality_gap_std": None if gap is None else gap.std,
                "parity_adjusted": point.parity_adjusted,
                "trials": point.rand_index.count,
            })
        return rows

    def to_table(self, digits: int = 3) -> str:
        """Plain-text table with "mean ± std" cells"""
        headers = ["Method", "RI", "SS", "Dist Centroid", "Intra", "Inter"]
        lines = [" | ".join(headers)]
        for method, metrics in self.summaries.items():
            cells = [method]
            for column in METRIC_COLUMNS:
                summary = metrics.get(column)
                cells.append("-" if summary is None else summary.format(digits))
            lines.append(" | ".join(cells))
        for point in self.curve:
            cell = f"x={point.x:.2f}: RI {point.rand_index.format(digits)}"
            if point.cardinality_gap is not None:
                cell += f", C*-C {point.cardinality_gap.format(digits)}"
            lines.append(cell)
        return "\n".join(lines)


def _map_trials(fn: Callable, items: Sequence, threads: Optional[int]) -> list:
    workers = config.get_threads(threads)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _derived_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2 ** 63))


def _parse_kinds(kinds) -> List[ObjectiveKind]:
    return [ObjectiveKind.parse(k) for k in kinds]


def _solve(poly: SpinPolynomial, exact_max_points: int, schedule: AnnealSchedule,
           rng: np.random.Generator) -> SolveResult:
    if poly.num_vars <= exact_max_points:
        return brute_force(poly)
    return simulated_annealing(poly, schedule.model_copy(update={'seed': _derived_seed(rng)}))


def run_exact_protocol(
    data: Dataset,
    kinds: Optional[Sequence] = None,
    trials: Optional[int] = None,
    subsample: Optional[int] = None,
    seed: int = 0,
    include_kmeans: Optional[bool] = None,
    threads: Optional[int] = None,
) -> ProtocolResult:
    """
    Brute-force every objective on random subsamples and aggregate the metrics.

    Args:
        data: Preprocessed dataset, labels used for the Rand index when present
        kinds: Objectives to compare (experiments_config.yaml default)
        trials: Number of random subsamples
        subsample: Points per trial, drawn without replacement
        seed: Root seed; trial t uses SeedSequence(seed).spawn(trials)[t]
        include_kmeans: Add the k-means baseline on the same subsamples
        threads: Worker threads (CLUSTER_THREADS when None)

    Raises:
        DataError: if subsample > N or < 2
    """
    settings = config.get_protocol_config('exact')
    kinds = _parse_kinds(kinds or settings.get('kinds', DEFAULT_KINDS))
    trials = int(trials if trials is not None else settings.get('trials', 150))
    subsample = int(subsample if subsample is not None else settings.get('subsample', 16))
    if include_kmeans is None:
        include_kmeans = bool(settings.get('include_kmeans', True))
    if trials < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}")
    if not 2 <= subsample <= data.num_points:
        raise DataError(f"subsample must be between 2 and N={data.num_points}, got {subsample}")

    def run_trial(sequence: np.random.SeedSequence) -> Dict[str, Any]:
        rng = np.random.default_rng(sequence)
        if subsample < data.num_points:
            indices = np.sort(rng.choice(data.num_points, size=subsample, replace=False))
        else:
            indices = np.arange(data.num_points)
        sub = data.subset(indices)
        reports = {}
        for kind in kinds:
            result = brute_force(build_objective(kind, sub))
            reports[kind.label] = evaluate_partition(sub, result.best_assignment)
        if include_kmeans:
            labels = kmeans_baseline(sub, 2, seed=_derived_seed(rng))
            reports[KMEANS] = evaluate_partition(sub, labels)
        return reports

    logger.info(
        "exact protocol on %s: %d trials of %d points, %d objectives",
        data.name, trials, subsample, len(kinds),
    )
    per_trial = _map_trials(run_trial, np.random.SeedSequence(seed).spawn(trials), threads)
    methods = [kind.label for kind in kinds] + ([KMEANS] if include_kmeans else [])
    return ProtocolResult(
        protocol="exact",
        dataset=data.name,
        num_points=data.num_points,
        seed=seed,
        params={
            "kinds": [kind.value for kind in kinds],
            "trials": trials,
            "subsample": subsample,
            "include_kmeans": include_kmeans,
        },
        summaries={m: aggregate_reports(trial[m] for trial in per_trial) for m in methods},
    )


def run_sa_protocol(
    data: Dataset,
    kinds: Optional[Sequence] = None,
    schedule: Optional[AnnealSchedule] = None,
    repeats: Optional[int] = None,
    include_kmeans: Optional[bool] = None,
    threads: Optional[int] = None,
) -> ProtocolResult:
    """
    Anneal every objective on the full dataset.

    Repeat r runs with seeds drawn from SeedSequence(schedule.seed).spawn(repeats)[r].
    """
    settings = config.get_protocol_config('sa')
    kinds = _parse_kinds(kinds or settings.get('kinds', DEFAULT_KINDS))
    schedule = schedule or AnnealSchedule.from_config()
    repeats = int(repeats if repeats is not None else settings.get('repeats', 1))
    if include_kmeans is None:
        include_kmeans = bool(settings.get('include_kmeans', True))
    if repeats < 1:
        raise ConfigError(f"repeats must be >= 1, got {repeats}")

    methods: List[Optional[ObjectiveKind]] = list(kinds) + ([None] if include_kmeans else [])
    sequences = np.random.SeedSequence(schedule.seed).spawn(repeats)
    tasks = [(r, method) for r in range(repeats) for method in methods]

    def run_task(task):
        r, kind = task
        rng = np.random.default_rng(sequences[r])
        run_seed = _derived_seed(rng)
        if kind is None:
            return KMEANS, evaluate_partition(data, kmeans_baseline(data, 2, seed=run_seed))
        result = anneal_objective(kind, data, schedule.model_copy(update={'seed': run_seed}))
        logger.debug("SA %s repeat %d: energy %.6g", kind.label, r, result.best_energy)
        return kind.label, evaluate_partition(data, result.best_assignment)

    logger.info("SA protocol on %s: %d points, %d repeats", data.name, data.num_points, repeats)
    outcomes = _map_trials(run_task, tasks, threads)
    names = [KMEANS if m is None else m.label for m in methods]
    return ProtocolResult(
        protocol="sa",
        dataset=data.name,
        num_points=data.num_points,
        seed=schedule.seed,
        params={
            "kinds": [kind.value for kind in kinds],
            "repeats": repeats,
            "include_kmeans": include_kmeans,
            "schedule": schedule.model_dump(),
        },
        summaries={
            name: aggregate_reports(report for label, report in outcomes if label == name)
            for name in names
        },
    )


def ensure_polynomial_size(kind, num_points: int, purpose: str) -> None:
    """Refuse to materialize a quartic Inter polynomial above max_quartic_vars"""
    max_quartic = int(config.get_solver_config('polynomial').get('max_quartic_vars', 24))
    if ObjectiveKind.parse(kind) is ObjectiveKind.INTER and num_points > max_quartic:
        raise ConfigError(
            f"{ObjectiveKind.INTER.label} over {num_points} points is too large {purpose} "
            f"(limit {max_quartic})"
        )


def run_single(
    data: Dataset,
    kind,
    solver: str = 'auto',
    schedule: Optional[AnnealSchedule] = None,
    constraint_set: Optional[ConstraintSet] = None,
    exact_max_points: Optional[int] = None,
) -> ProtocolResult:
    """
    One binary clustering of the whole dataset.

    solver "auto" uses brute force up to exact_max_points and annealing
    beyond. A large Inter objective without constraints is annealed through
    its moment form.
    """
    kind = ObjectiveKind.parse(kind)
    if solver not in SOLVERS:
        raise ConfigError(f"solver must be one of {', '.join(SOLVERS)}, got '{solver}'")
    schedule = schedule or AnnealSchedule.from_config()
    if exact_max_points is None:
        exact_max_points = int(config.get_protocol_config('sweep').get('exact_max_points', 16))
    use_exact = solver == 'brute_force' or (solver == 'auto' and data.num_points <= exact_max_points)
    constrained = constraint_set is not None and not constraint_set.is_empty
    if constrained and constraint_set.num_points != data.num_points:
        raise ConstraintError(
            f"constraints are for {constraint_set.num_points} points, dataset has {data.num_points}"
        )

    if not use_exact and not constrained:
        result = anneal_objective(kind, data, schedule)
    else:
        ensure_polynomial_size(kind, data.num_points, "to build as a polynomial")
        poly = build_objective(kind, data)
        if constrained:
            poly = apply_constraints(poly, constraint_set)
        result = brute_force(poly) if use_exact else simulated_annealing(poly, schedule)

    report = evaluate_partition(data, result.best_assignment)
    details = {
        "energy": result.best_energy,
        "assignment": [int(s) for s in result.best_assignment],
        "solver": result.method,
        "per_restart_energies": list(result.per_restart_energies),
    }
    if constrained:
        details["constraints_satisfied"] = satisfies(constraint_set, result.best_assignment)
    return ProtocolResult(
        protocol="single",
        dataset=data.name,
        num_points=data.num_points,
        seed=schedule.seed,
        params={"kind": kind.value, "solver": solver, "schedule": schedule.model_dump()},
        summaries={kind.label: aggregate_reports([report])},
        details=details,
    )


def feasible_target(target: int, num_points: int):
    """
    Nearest attainable cardinality target.

    Returns:
        (target, adjusted): a wrong-parity target moves one step toward 0 and
        is clipped to [-N, N]
    """
    adjusted = False
    if (target - num_points) % 2:
        target += -1 if target > 0 else 1
        adjusted = True
    clipped = max(-num_points, min(num_points, target))
    return clipped, adjusted or clipped != target


def run_constraint_sweep(
    data: Dataset,
    kind,
    mode: str = 'links',
    grid: Optional[Sequence] = None,
    trials: Optional[int] = None,
    seed: int = 0,
    penalty: Optional[float] = None,
    max_links: Optional[int] = None,
    cardinality_points: Optional[int] = None,
    schedule: Optional[AnnealSchedule] = None,
    exact_max_points: Optional[int] = None,
    threads: Optional[int] = None,
) -> ProtocolResult:
    """
    Mean Rand index as a function of constraint strength.

    links: for each reveal fraction f, reveal round(f N) random labels,
    add Must-Link / Cannot-Link penalties for every revealed pair and solve.
    cardinality: for each class ratio (p, 1 - p), draw that many points of
    each of the two classes, set C = round((2p - 1) n) and solve with the
    cardinality penalty; also reports the achieved gap C* - C.

    Args:
        grid: Reveal fractions (links) or ratio pairs / first-class
            fractions (cardinality)
        penalty: lambda for every added penalty (default_penalty when None)
        max_links: Sample at most this many links per trial
        cardinality_points: Points per cardinality trial
        exact_max_points: Largest instance solved by brute force

    Raises:
        DataError: without ground-truth labels, or (cardinality) without
            exactly two classes or enough points per class
    """
    settings = config.get_protocol_config('sweep')
    kind = ObjectiveKind.parse(kind)
    if mode not in ('links', 'cardinality'):
        raise ConfigError(f"sweep mode must be 'links' or 'cardinality', got '{mode}'")
    if not data.has_labels:
        raise DataError("constraint sweeps need ground-truth labels")
    trials = int(trials if trials is not None else settings.get('trials', 50))
    if trials < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}")
    if max_links is None:
        max_links = settings.get('max_links')
    if exact_max_points is None:
        exact_max_points = int(settings.get('exact_max_points', 16))
    schedule = schedule or AnnealSchedule.from_config()
    if mode == 'links':
        grid = [float(f) for f in (grid if grid is not None else settings.get('reveal_grid', []))]
        if any(not 0.0 <= f <= 1.0 for f in grid):
            raise ConfigError(f"reveal fractions must lie in [0, 1], got {grid}")
        ensure_polynomial_size(kind, data.num_points, "to combine with link penalties")
        curve = _links_curve(data, kind, grid, trials, seed, penalty, max_links,
                             schedule, exact_max_points, threads)
    else:
        raw_grid = grid if grid is not None else settings.get('cardinality_ratios', [])
        grid = [float(g[0]) if isinstance(g, (list, tuple)) else float(g) for g in raw_grid]
        if any(not 0.0 <= p <= 1.0 for p in grid):
            raise ConfigError(f"class ratios must lie in [0, 1], got {grid}")
        n = int(cardinality_points or settings.get('cardinality_points', 50))
        ensure_polynomial_size(kind, n, "to combine with a cardinality penalty")
        curve = _cardinality_curve(data, kind, grid, n, trials, seed, penalty,
                                   schedule, exact_max_points, threads)

    return ProtocolResult(
        protocol="sweep",
        dataset=data.name,
        num_points=data.num_points,
        seed=seed,
        params={
            "kind": kind.value,
            "mode": mode,
            "grid": grid,
            "trials": trials,
            "penalty": penalty,
            "max_links": max_links,
            "cardinality_points": cardinality_points if mode == 'cardinality' else None,
        },
        curve=curve,
    )


def _links_curve(data, kind, grid, trials, seed, penalty, max_links,
                 schedule, exact_max_points, threads) -> List[CurvePoint]:
    base = build_objective(kind, data)
    lam = penalty if penalty is not None else default_penalty(base, data.num_points)
    n = data.num_points

    def run_trial(task):
        g, t = task
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(g, t)))
        revealed = np.sort(rng.choice(n, size=int(round(grid[g] * n)), replace=False))
        links = derive_links_from_labels(revealed, data.labels[revealed], max_links, rng)
        poly = apply_links(base, links, lam) if links else base
        result = _solve(poly, exact_max_points, schedule, rng)
        return rand_index(data.labels, result.best_assignment)

    tasks = [(g, t) for g in range(len(grid)) for t in range(trials)]
    scores = _map_trials(run_trial, tasks, threads)
    curve = []
    for g, fraction in enumerate(grid):
        values = scores[g * trials:(g + 1) * trials]
        curve.append(CurvePoint(x=fraction, rand_index=summarize(values)))
        logger.info("links sweep %.2f: RI %.3f", fraction, curve[-1].rand_index.mean)
    return curve


def _cardinality_curve(data, kind, grid, n, trials, seed, penalty,
                       schedule, exact_max_points, threads) -> List[CurvePoint]:
    classes = np.unique(data.labels)
    if classes.shape[0] != 2:
        raise DataError(f"cardinality sweeps need exactly 2 classes, got {classes.shape[0]}")
    members = [np.flatnonzero(data.labels == c) for c in classes]

    targets = []
    for p in grid:
        target, adjusted = feasible_target(int(round((2.0 * p - 1.0) * n)), n)
        n_first = (n + target) // 2
        if n_first > members[0].size or n - n_first > members[1].size:
            raise DataError(
                f"ratio {p:.2f} needs {n_first} + {n - n_first} points; classes have "
                f"{members[0].size} and {members[1].size}"
            )
        targets.append((target, adjusted, n_first))

    def run_trial(task):
        g, t = task
        target, _, n_first = targets[g]
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(g, t)))
        indices = np.sort(np.concatenate([
            rng.choice(members[0], size=n_first, replace=False),
            rng.choice(members[1], size=n - n_first, replace=False),
        ]))
        sub = data.subset(indices)
        base = build_objective(kind, sub)
        lam = penalty if penalty is not None else default_penalty(base, n)
        result = _solve(apply_cardinality(base, target, lam), exact_max_points, schedule, rng)
        achieved = int(np.sum(result.best_assignment))
        return rand_index(sub.labels, result.best_assignment), achieved - target

    tasks = [(g, t) for g in range(len(grid)) for t in range(trials)]
    outcomes = _map_trials(run_trial, tasks, threads)
    curve = []
    for g, p in enumerate(grid):
        chunk = outcomes[g * trials:(g + 1) * trials]
        target, adjusted, _ = targets[g]
        if adjusted:
            logger.warning("ratio %.2f: target moved to C=%d to match the parity of %d", p, target, n)
        curve.append(CurvePoint(
            x=p,
            rand_index=summarize(ri for ri, _ in chunk),
            cardinality_gap=summarize(gap for _, gap in chunk),
            target=target,
            parity_adjusted=adjusted,
        ))
    return curve
