"""
Solver output shared by exact and heuristic minimizers.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np


@dataclass(frozen=True, eq=False)
class SolveResult:
    """
    Best assignment found by a solver.

    Args:
        best_assignment: int8 spin vector
        best_energy: Energy of best_assignment under the solved polynomial
        num_evaluations: Assignments scored (brute force) or flip proposals (annealing)
        per_restart_energies: Best energy of each annealing restart
        seed_used: Root seed of an annealing run
        method: "brute_force" or "simulated_annealing"
        symmetric: True when brute force enumerated only z_0 = +1
        minimizers: Every minimizing assignment in basis-index order, when requested
        elapsed: Wall-clock seconds
    """

    best_assignment: np.ndarray
    best_energy: float
    num_evaluations: int
    per_restart_energies: Tuple[float, ...] = ()
    seed_used: Optional[int] = None
    method: str = "brute_force"
    symmetric: bool = False
    minimizers: Optional[np.ndarray] = None
    elapsed: float = field(default=0.0, compare=False)

    @property
    def num_vars(self) -> int:
        return int(self.best_assignment.shape[0])

    def to_dict(self) -> dict:
        return {
            "best_assignment": [int(s) for s in self.best_assignment],
            "best_energy": float(self.best_energy),
            "num_evaluations": int(self.num_evaluations),
            "per_restart_energies": [float(e) for e in self.per_restart_energies],
            "seed_used": self.seed_used,
            "method": self.method,
            "symmetric": self.symmetric,
            "elapsed": float(self.elapsed),
        }
