"""Exact and heuristic minimizers for spin polynomials"""

from .annealing import (
    AnnealSchedule,
    HigherOrderSpinEnergy,
    QuadraticSpinEnergy,
    anneal_energy_model,
    anneal_objective,
    polynomial_energy,
    simulated_annealing,
)
from .brute_force import brute_force
from .kmeans import kmeans_baseline, labels_to_spins
from .quadratize import (
    QuadratizationCheck,
    VariableMap,
    default_quadratization_penalty,
    quadratize,
    verify_quadratization,
)
from .result import SolveResult

__all__ = [
    'AnnealSchedule',
    'HigherOrderSpinEnergy',
    'QuadraticSpinEnergy',
    'anneal_energy_model',
    'anneal_objective',
    'polynomial_energy',
    'simulated_annealing',
    'brute_force',
    'kmeans_baseline',
    'labels_to_spins',
    'QuadratizationCheck',
    'VariableMap',
    'default_quadratization_penalty',
    'quadratize',
    'verify_quadratization',
    'SolveResult',
]
