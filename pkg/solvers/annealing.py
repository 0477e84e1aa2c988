"""
Single-spin-flip Metropolis annealing over incremental energy models.

An energy model tracks one assignment and answers "what does flipping
spin i cost" without re-evaluating the whole objective. Two models wrap a
SpinPolynomial (dense local fields for degree <= 2, per-variable term
incidence otherwise); objectives.CentroidMomentEnergy is the third.
"""

import logging
import math
import time
from typing import Optional, Protocol

import numpy as np
from pydantic import BaseModel, Field, model_validator

from config import config
from core.dataset import Dataset, as_spins
from core.errors import DataError, SolverError
from core.polynomial import SpinPolynomial, evaluate
from objectives.builders import build_objective, objective_scale
from objectives.centroids import ObjectiveKind
from objectives.moments import CentroidMomentEnergy
from solvers.result import SolveResult

logger = logging.getLogger(__name__)


class AnnealSchedule(BaseModel):
    """
    Geometric inverse-temperature ladder, one rung per sweep.

    Betas are in units of 1/sigma, sigma being the max-abs coefficient of
    the polynomial being annealed.
    """

    sweeps: int = Field(default=2000, ge=1)
    beta_initial: float = Field(default=0.1, gt=0)
    beta_final: float = Field(default=50.0, gt=0)
    restarts: int = Field(default=10, ge=1)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)

    @model_validator(mode='after')
    def _check_betas(self) -> 'AnnealSchedule':
        if self.beta_final < self.beta_initial:
            raise ValueError(
                f"beta_final ({self.beta_final}) must be >= beta_initial ({self.beta_initial})"
            )
        return self

    @classmethod
    def from_config(cls, **overrides) -> 'AnnealSchedule':
        """Defaults from solver_config.yaml, with non-None overrides applied"""
        defaults = config.get_schedule_defaults()
        fields = {k: defaults[k] for k in cls.model_fields if k in defaults}
        fields.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**fields)

    def betas(self) -> np.ndarray:
        return np.geomspace(self.beta_initial, self.beta_final, self.sweeps)


class EnergyModel(Protocol):
    num_vars: int
    current: float
    z: np.ndarray

    def reset(self, z) -> float: ...

    def delta(self, i: int) -> float: ...

    def flip(self, i: int, delta: float) -> None: ...

    def energy(self, z) -> float: ...


class QuadraticSpinEnergy:
    """Degree <= 2 polynomial tracked through local fields f = h + J z"""

    def __init__(self, poly: SpinPolynomial):
        self.poly = poly
        self.num_vars = poly.num_vars
        self.h, self.J = poly.quadratic_arrays()
        self.z = np.ones(self.num_vars, dtype=np.int8)
        self.reset(self.z)

    def reset(self, z) -> float:
        self.z = as_spins(z, self.num_vars).copy()
        zf = self.z.astype(np.float64)
        self.fields = self.h + self.J @ zf
        self.current = self.poly.constant + float(self.h @ zf) + 0.5 * float(zf @ self.J @ zf)
        return self.current

    def delta(self, i: int) -> float:
        return -2.0 * self.z[i] * self.fields[i]

    def flip(self, i: int, delta: float) -> None:
        self.fields -= 2.0 * self.z[i] * self.J[:, i]
        self.z[i] = -self.z[i]
        self.current += delta

    def energy(self, z) -> float:
        return evaluate(self.poly, z)


class HigherOrderSpinEnergy:
    """
    Polynomial of any degree tracked through per-variable term incidence.

    Terms are padded to the maximum degree with a sentinel index that
    points at a constant +1 spin appended to the assignment.
    """

    def __init__(self, poly: SpinPolynomial):
        self.poly = poly
        self.num_vars = poly.num_vars
        width = max(1, poly.degree())
        keys = sorted(poly.terms)
        self.index = np.full((len(keys), width), self.num_vars, dtype=np.int64)
        for row, key in enumerate(keys):
            self.index[row, :len(key)] = key
        self.coefs = np.array([poly.terms[k] for k in keys], dtype=np.float64)
        incident = [[] for _ in range(self.num_vars)]
        for row, key in enumerate(keys):
            for i in key:
                incident[i].append(row)
        self.incident = [np.array(rows, dtype=np.int64) for rows in incident]
        self.z = np.ones(self.num_vars + 1, dtype=np.int8)
        self.reset(np.ones(self.num_vars, dtype=np.int8))

    def reset(self, z) -> float:
        self.z[:self.num_vars] = as_spins(z, self.num_vars)
        self.z[self.num_vars] = 1
        self.current = self.energy(self.z[:self.num_vars])
        return self.current

    def delta(self, i: int) -> float:
        rows = self.incident[i]
        if rows.size == 0:
            return 0.0
        products = np.prod(self.z[self.index[rows]], axis=1, dtype=np.int64)
        return -2.0 * float(self.coefs[rows] @ products)

    def flip(self, i: int, delta: float) -> None:
        self.z[i] = -self.z[i]
        self.current += delta

    def energy(self, z) -> float:
        return evaluate(self.poly, z)


def polynomial_energy(poly: SpinPolynomial):
    """Incremental energy model suited to the polynomial's degree"""
    if poly.degree() <= 2:
        return QuadraticSpinEnergy(poly)
    return HigherOrderSpinEnergy(poly)


def _assignment_key(energy: float, z: np.ndarray):
    return energy, tuple(bool(s < 0) for s in z)


def anneal_energy_model(
    model: EnergyModel,
    schedule: AnnealSchedule,
    scale: float = 1.0,
    verify: bool = False,
) -> SolveResult:
    """
    Metropolis annealing with restarts on an incremental energy model.

    Restart r draws from SeedSequence(schedule.seed, spawn_key=(r,)), starts
    from a uniform random assignment and visits spins in a fresh random
    order each sweep. The best state seen in any restart is returned; ties
    go to the lexicographically smallest assignment (+1 before -1).

    Args:
        model: Energy model over num_vars spins
        schedule: Sweeps, beta ladder, restarts and root seed
        scale: Energy unit sigma; the acceptance test uses beta * dE / sigma
        verify: Re-evaluate the tracked energy after every sweep

    Raises:
        SolverError: if verify is set and the tracked energy drifts
    """
    n = model.num_vars
    if n < 1:
        raise DataError("annealing needs at least one variable")
    if not scale > 0:
        raise SolverError(f"energy scale must be positive, got {scale}")
    tolerance = float(config.get_schedule_defaults().get('verify_tolerance', 1e-6))
    betas = schedule.betas() / scale

    start_time = time.perf_counter()
    best_key = None
    best_z = None
    restart_energies = []
    for restart in range(schedule.restarts):
        rng = np.random.default_rng(np.random.SeedSequence(schedule.seed, spawn_key=(restart,)))
        energy = model.reset(rng.choice(np.array([-1, 1], dtype=np.int8), size=n))
        run_best = energy
        run_z = model.z[:n].copy()
        for beta in betas:
            order = rng.permutation(n)
            thresholds = rng.random(n)
            for i, u in zip(order, thresholds):
                d = model.delta(i)
                if d <= 0.0 or u < math.exp(-beta * d):
                    model.flip(i, d)
                    if model.current < run_best:
                        run_best = model.current
                        run_z = model.z[:n].copy()
            if verify:
                fresh = model.energy(model.z[:n])
                if abs(fresh - model.current) > tolerance * max(1.0, abs(fresh)):
                    raise SolverError(
                        f"tracked energy {model.current!r} drifted from {fresh!r} "
                        f"(restart {restart}, beta {beta * scale:.4g})"
                    )
        run_best = model.energy(run_z)
        restart_energies.append(run_best)
        logger.debug("restart %d: best energy %.6g", restart, run_best)
        key = _assignment_key(run_best, run_z)
        if best_key is None or key < best_key:
            best_key, best_z = key, run_z

    best_z.setflags(write=False)
    elapsed = time.perf_counter() - start_time
    return SolveResult(
        best_assignment=best_z,
        best_energy=best_key[0],
        num_evaluations=schedule.restarts * schedule.sweeps * n,
        per_restart_energies=tuple(restart_energies),
        seed_used=schedule.seed,
        method="simulated_annealing",
        elapsed=elapsed,
    )


def simulated_annealing(
    poly: SpinPolynomial,
    schedule: Optional[AnnealSchedule] = None,
    verify: bool = False,
) -> SolveResult:
    """
    Anneal a spin polynomial with betas measured in units of 1/sigma.

    Args:
        poly: Polynomial with at least one variable
        schedule: Defaults to AnnealSchedule.from_config()
        verify: Check incremental energies against fresh evaluation every sweep

    Returns:
        SolveResult whose best_energy is evaluate(poly, best_assignment)
    """
    schedule = schedule or AnnealSchedule.from_config()
    sigma = poly.max_abs_coefficient() or 1.0
    return anneal_energy_model(polynomial_energy(poly), schedule, scale=sigma, verify=verify)


def anneal_objective(
    kind,
    data: Dataset,
    schedule: Optional[AnnealSchedule] = None,
    verify: bool = False,
    max_quartic_vars: Optional[int] = None,
) -> SolveResult:
    """
    Anneal a clustering objective, switching Inter to its moment form when large.

    Energies are raw objective values in both cases.
    """
    kind = ObjectiveKind.parse(kind)
    schedule = schedule or AnnealSchedule.from_config()
    if max_quartic_vars is None:
        max_quartic_vars = int(config.get_solver_config('polynomial').get('max_quartic_vars', 24))
    if kind is ObjectiveKind.INTER and data.num_points > max_quartic_vars:
        logger.info(
            "annealing %s over %d points through cluster moments", kind.label, data.num_points
        )
        model = CentroidMomentEnergy(data, kind)
        sigma = objective_scale(kind, data, max_quartic_vars)
        return anneal_energy_model(model, schedule, scale=sigma, verify=verify)
    return simulated_annealing(build_objective(kind, data), schedule, verify=verify)
