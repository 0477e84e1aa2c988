"""
Command-line entry point for Hamiltonian binary clustering.

    python cluster.py run --config run.yaml
    python cluster.py exact --data iris.csv --profile iris --trials 150
    python cluster.py sweep --data iris.csv --profile iris --mode cardinality
    python cluster.py export --data points.csv --objective inter --out inter.qubo.json

Exit codes: 0 success, 2 configuration, 3 data, 4 solver, 5 constraint.
"""

import logging
from pathlib import Path
from typing import List, Optional

import typer
from dotenv import load_dotenv
from pydantic import ValidationError

from analysis.hierarchy import k_cluster
from analysis.metrics import aggregate_reports, evaluate_partition
from analysis.protocols import (
    ProtocolResult,
    ensure_polynomial_size,
    run_constraint_sweep,
    run_exact_protocol,
    run_sa_protocol,
    run_single,
)
from config import config
from constraints.penalties import apply_constraints
from core.dataset import Dataset
from core.errors import ClusteringError, ConfigError
from objectives.builders import build_objective
from objectives.centroids import ObjectiveKind
from solvers.annealing import AnnealSchedule
from solvers.quadratize import quadratize, verify_quadratization
from tools.constraint_file import load_constraint_file
from tools.data_loader import load_dataset, save_dataset_csv
from tools.qubo_export import export_qubo
from tools.result_writer import RunConfig, write_results
from tools.synthetic import GaussianSpec, generate_gaussian

load_dotenv()

logging.basicConfig(level=logging.INFO, format='%(asctime)s %(levelname)s %(name)s: %(message)s')
logger = logging.getLogger(__name__)

app = typer.Typer(
    name="cluster",
    help="Binary clustering by minimizing centroid-based spin Hamiltonians",
    add_completion=False,
)


@app.callback()
def main(verbose: bool = typer.Option(False, "--verbose", "-v", help="Enable debug logging")):
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)


def load_data(rc: RunConfig) -> Dataset:
    """Dataset named by a run configuration (CSV file or synthetic mixture)"""
    if rc.synthetic:
        return generate_gaussian(GaussianSpec.from_config(seed=rc.seed))
    if rc.data is None:
        raise ConfigError("no dataset given; pass --data or --synthetic")
    return load_dataset(
        rc.data,
        profile=rc.profile,
        label_column=rc.label_column,
        preprocessing=rc.preprocessing,
        header=rc.header,
    )


def schedule_for(rc: RunConfig) -> AnnealSchedule:
    return AnnealSchedule.from_config(
        sweeps=rc.sweeps,
        beta_initial=rc.beta_initial,
        beta_final=rc.beta_final,
        restarts=rc.restarts,
        seed=rc.seed,
    )


def execute(rc: RunConfig, data: Optional[Dataset] = None) -> ProtocolResult:
    """Run the protocol a configuration names and return its result"""
    data = data if data is not None else load_data(rc)
    schedule = schedule_for(rc)
    kind = (rc.objectives or [ObjectiveKind.COMBINED.value])[0]

    if rc.protocol == 'single':
        constraint_set = None
        if rc.constraints is not None:
            constraint_set = load_constraint_file(rc.constraints, data.num_points)
        return run_single(data, kind, solver=rc.solver, schedule=schedule, constraint_set=constraint_set)
    if rc.protocol == 'exact':
        return run_exact_protocol(data, rc.objectives, trials=rc.trials, subsample=rc.subsample,
                                  seed=rc.seed, threads=rc.threads)
    if rc.protocol == 'sa':
        return run_sa_protocol(data, rc.objectives, schedule=schedule, repeats=rc.repeats,
                               threads=rc.threads)
    if rc.protocol == 'sweep':
        profile = config.get_dataset_profile(rc.profile) if rc.profile else {}
        return run_constraint_sweep(data, kind, mode=rc.sweep_mode, trials=rc.trials, seed=rc.seed,
                                    penalty=rc.penalty, schedule=schedule, threads=rc.threads,
                                    cardinality_points=profile.get("cardinality_points"))

    if rc.k is None:
        raise ConfigError("the kcluster protocol needs k")
    tree = k_cluster(data, rc.k, kind, mode=rc.split_mode, schedule=schedule)
    labels = tree.labels()
    report = evaluate_partition(data, labels)
    return ProtocolResult(
        protocol="kcluster",
        dataset=data.name,
        num_points=data.num_points,
        seed=rc.seed,
        params={"kind": kind, "k": rc.k, "mode": rc.split_mode},
        summaries={ObjectiveKind.parse(kind).label: aggregate_reports([report])},
        details={"labels": [int(label) for label in labels], "tree": tree.to_dict()},
    )


def _report(result: ProtocolResult, rc: RunConfig) -> None:
    stem = f"{result.protocol}_{result.dataset}"
    written = write_results(result, rc.output_dir, stem, rc)
    typer.echo(result.to_table())
    if "energy" in result.details:
        typer.echo(f"energy: {result.details['energy']:.10g} ({result.details['solver']})")
    if result.details.get("constraints_satisfied") is False:
        typer.echo("warning: the returned assignment violates a hard constraint", err=True)
    for path in written.values():
        typer.echo(f"wrote {path}")


def _run_guarded(rc_factory) -> None:
    """Build the configuration, run it and translate package errors into exit codes"""
    try:
        rc = rc_factory()
        _report(execute(rc), rc)
    except ClusteringError as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(e.exit_code)
    except ValidationError as e:
        typer.echo(f"Error: invalid settings: {e}", err=True)
        raise typer.Exit(ConfigError.exit_code)


def _base_config(config_file: Optional[Path]) -> RunConfig:
    return RunConfig.from_file(config_file) if config_file is not None else RunConfig()


@app.command()
def run(
    config_file: Optional[Path] = typer.Option(None, "--config", "-c", help="Flat YAML run configuration"),
    data: Optional[str] = typer.Option(None, "--data", "-d", help="CSV dataset"),
    synthetic: Optional[bool] = typer.Option(None, "--synthetic", help="Use the configured Gaussian mixture"),
    profile: Optional[str] = typer.Option(None, "--profile", help="Dataset profile (iris, wine, mnist01)"),
    label_column: Optional[str] = typer.Option(None, "--label-column", help="Column holding class labels"),
    preprocessing: Optional[str] = typer.Option(None, "--preprocessing", help="none, minmax, zscore or pixel255"),
    objective: Optional[List[str]] = typer.Option(None, "--objective", "-o", help="Objective (repeatable)"),
    protocol: Optional[str] = typer.Option(None, "--protocol", "-p", help="single, exact, sa, sweep or kcluster"),
    solver: Optional[str] = typer.Option(None, "--solver", help="auto, brute_force or annealing"),
    constraints: Optional[str] = typer.Option(None, "--constraints", help="JSON constraint file"),
    sweeps: Optional[int] = typer.Option(None, "--sweeps", help="Annealing sweeps per restart"),
    restarts: Optional[int] = typer.Option(None, "--restarts", help="Annealing restarts"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Root random seed"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker threads for trials"),
    output_dir: Optional[str] = typer.Option(None, "--output-dir", help="Directory for result files"),
):
    """
    Run whatever a configuration file describes, with flags overriding it.
    """
    _run_guarded(lambda: _base_config(config_file).merged(
        data=data, synthetic=synthetic, profile=profile, label_column=label_column,
        preprocessing=preprocessing, objectives=objective or None, protocol=protocol,
        solver=solver, constraints=constraints, sweeps=sweeps, restarts=restarts,
        seed=seed, threads=threads, output_dir=output_dir,
    ))


@app.command()
def exact(
    data: Optional[str] = typer.Option(None, "--data", "-d", help="CSV dataset"),
    synthetic: Optional[bool] = typer.Option(None, "--synthetic", help="Use the configured Gaussian mixture"),
    profile: Optional[str] = typer.Option(None, "--profile", help="Dataset profile"),
    objective: Optional[List[str]] = typer.Option(None, "--objective", "-o", help="Objective (repeatable)"),
    trials: Optional[int] = typer.Option(None, "--trials", help="Random subsamples"),
    subsample: Optional[int] = typer.Option(None, "--subsample", help="Points per subsample"),
    seed: int = typer.Option(0, "--seed", help="Root random seed"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker threads for trials"),
    output_dir: str = typer.Option("results", "--output-dir", help="Directory for result files"),
):
    """Brute-force every objective on random subsamples (mean ± std per metric)"""
    _run_guarded(lambda: RunConfig.build(
        protocol='exact', data=data, synthetic=bool(synthetic), profile=profile,
        objectives=objective or None, trials=trials,
        subsample=subsample, seed=seed, threads=threads, output_dir=output_dir,
    ))


@app.command()
def sa(
    data: Optional[str] = typer.Option(None, "--data", "-d", help="CSV dataset"),
    synthetic: Optional[bool] = typer.Option(None, "--synthetic", help="Use the configured Gaussian mixture"),
    profile: Optional[str] = typer.Option(None, "--profile", help="Dataset profile"),
    objective: Optional[List[str]] = typer.Option(None, "--objective", "-o", help="Objective (repeatable)"),
    sweeps: Optional[int] = typer.Option(None, "--sweeps", help="Annealing sweeps per restart"),
    restarts: Optional[int] = typer.Option(None, "--restarts", help="Annealing restarts"),
    repeats: Optional[int] = typer.Option(None, "--repeats", help="Independent repeats per objective"),
    seed: int = typer.Option(0, "--seed", help="Root random seed"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker threads"),
    output_dir: str = typer.Option("results", "--output-dir", help="Directory for result files"),
):
    """Anneal every objective on the full dataset"""
    _run_guarded(lambda: RunConfig.build(
        protocol='sa', data=data, synthetic=bool(synthetic), profile=profile,
        objectives=objective or None, sweeps=sweeps,
        restarts=restarts, repeats=repeats, seed=seed, threads=threads, output_dir=output_dir,
    ))


@app.command()
def sweep(
    data: Optional[str] = typer.Option(None, "--data", "-d", help="CSV dataset"),
    synthetic: Optional[bool] = typer.Option(None, "--synthetic", help="Use the configured Gaussian mixture"),
    profile: Optional[str] = typer.Option(None, "--profile", help="Dataset profile"),
    objective: str = typer.Option("combined", "--objective", "-o", help="Objective"),
    mode: str = typer.Option("links", "--mode", "-m", help="links or cardinality"),
    trials: Optional[int] = typer.Option(None, "--trials", help="Trials per grid point"),
    penalty: Optional[float] = typer.Option(None, "--penalty", help="Penalty weight lambda"),
    seed: int = typer.Option(0, "--seed", help="Root random seed"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker threads"),
    output_dir: str = typer.Option("results", "--output-dir", help="Directory for result files"),
):
    """Rand index as a function of revealed labels or class ratio"""
    _run_guarded(lambda: RunConfig.build(
        protocol='sweep', data=data, synthetic=bool(synthetic), profile=profile,
        objectives=[objective], sweep_mode=mode, trials=trials, penalty=penalty,
        seed=seed, threads=threads, output_dir=output_dir,
    ))


@app.command()
def kcluster(
    k: int = typer.Option(..., "--k", "-k", help="Number of clusters"),
    data: Optional[str] = typer.Option(None, "--data", "-d", help="CSV dataset"),
    synthetic: Optional[bool] = typer.Option(None, "--synthetic", help="Use the configured Gaussian mixture"),
    profile: Optional[str] = typer.Option(None, "--profile", help="Dataset profile"),
    objective: str = typer.Option("combined", "--objective", "-o", help="Objective used for every split"),
    split_mode: Optional[str] = typer.Option(None, "--split-mode", help="largest or breadth"),
    seed: int = typer.Option(0, "--seed", help="Annealing seed"),
    output_dir: str = typer.Option("results", "--output-dir", help="Directory for result files"),
):
    """Hierarchical k-clustering by repeated binary splits"""
    _run_guarded(lambda: RunConfig.build(
        protocol='kcluster', data=data, synthetic=bool(synthetic), profile=profile,
        objectives=[objective], k=k, split_mode=split_mode, seed=seed, output_dir=output_dir,
    ))


@app.command()
def export(
    out: Path = typer.Option(..., "--out", help="QUBO JSON file to write"),
    data: Optional[str] = typer.Option(None, "--data", "-d", help="CSV dataset"),
    synthetic: Optional[bool] = typer.Option(None, "--synthetic", help="Use the configured Gaussian mixture"),
    profile: Optional[str] = typer.Option(None, "--profile", help="Dataset profile"),
    objective: str = typer.Option("combined", "--objective", "-o", help="Objective"),
    constraints: Optional[str] = typer.Option(None, "--constraints", help="JSON constraint file"),
    penalty: Optional[float] = typer.Option(None, "--penalty", help="Quadratization penalty M"),
    verify: bool = typer.Option(False, "--verify", help="Brute-force check the reduction"),
):
    """Quadratize an objective and write it as a QUBO for external annealers"""
    try:
        rc = RunConfig.build(data=data, synthetic=bool(synthetic), profile=profile,
                             objectives=[objective], constraints=constraints)
        dataset = load_data(rc)
        ensure_polynomial_size(rc.objectives[0], dataset.num_points, "to export")
        poly = build_objective(rc.objectives[0], dataset)
        if rc.constraints is not None:
            poly = apply_constraints(poly, load_constraint_file(rc.constraints, dataset.num_points))
        form, var_map = quadratize(poly, penalty)
        export_qubo(form, out, var_map)
        typer.echo(
            f"{form.num_vars} binary variables ({var_map.num_original} original, "
            f"{len(var_map.auxiliaries)} auxiliary, M={var_map.penalty:.6g})"
        )
        if verify:
            check = verify_quadratization(poly, form, var_map)
            typer.echo(f"reduction sound: {check.sound}")
            if not check.sound:
                typer.echo(f"spurious minimizers: {sorted(check.spurious)}", err=True)
                raise typer.Exit(4)
        typer.echo(f"wrote {out}")
    except ClusteringError as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(e.exit_code)


@app.command()
def synth(
    out: Path = typer.Option(..., "--out", help="CSV file to write"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Generator seed (config default when omitted)"),
):
    """Write the configured Gaussian mixture as a labelled CSV"""
    try:
        dataset = generate_gaussian(GaussianSpec.from_config(seed=seed))
        save_dataset_csv(dataset, out)
        typer.echo(f"wrote {dataset.num_points} points to {out}")
    except ClusteringError as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(e.exit_code)


if __name__ == "__main__":
    app()
