"""
Configuration loader for solvers and experiments.
Loads YAML configuration files and provides easy access to settings.
"""

import os
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml


class Config:
    """Singleton configuration loader"""

    _instance = None
    _solver_config = None
    _experiments_config = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(Config, cls).__new__(cls)
            cls._instance._load_configs()
        return cls._instance

    def _load_configs(self):
        """Load all configuration files"""
        config_dir = Path(__file__).parent

        solver_path = config_dir / 'solver_config.yaml'
        with open(solver_path, 'r', encoding='utf-8') as f:
            self._solver_config = yaml.safe_load(f)

        experiments_path = config_dir / 'experiments_config.yaml'
        with open(experiments_path, 'r', encoding='utf-8') as f:
            self._experiments_config = yaml.safe_load(f)

    def get_solver_config(self, section: str) -> Dict[str, Any]:
        """Get one section of the solver configuration"""
        return dict(self._solver_config.get(section, {}))

    def get_schedule_defaults(self) -> Dict[str, Any]:
        """Get default annealing schedule parameters (betas in units of 1/sigma)"""
        return self.get_solver_config('annealing')

    def get_protocol_config(self, protocol: str) -> Dict[str, Any]:
        """Get defaults for an experiment protocol (exact, sa, sweep, kcluster)"""
        return dict(self._experiments_config.get('protocols', {}).get(protocol, {}))

    def get_dataset_profile(self, name: str) -> Dict[str, Any]:
        """Get preparation settings for a named dataset"""
        return dict(self._experiments_config.get('datasets', {}).get(name, {}))

    def get_gaussian_spec(self) -> Dict[str, Any]:
        """Get the default synthetic Gaussian specification"""
        return dict(self._experiments_config.get('gaussian', {}))

    def get_distance_convention(self) -> str:
        """Get the point-to-centroid distance convention for auxiliary metrics"""
        return self._experiments_config.get('metrics', {}).get('distance_convention', 'euclidean')

    def get_schema_version(self) -> int:
        """Get the result schema version"""
        return int(self._experiments_config.get('results', {}).get('schema_version', 1))

    def get_threads(self, override: Optional[int] = None) -> int:
        """Resolve worker count: explicit override, then CLUSTER_THREADS, then 1"""
        if override is not None:
            return max(1, int(override))
        value = os.getenv('CLUSTER_THREADS')
        if value:
            try:
                return max(1, int(value))
            except ValueError:
                return 1
        return 1

    @property
    def dataset_names(self) -> List[str]:
        """Get all configured dataset profile names"""
        return list(self._experiments_config.get('datasets', {}).keys())


# Global config instance
config = Config()
