"""
Run configuration files and result serialization.

A run configuration is flat YAML (one key per line, scalars or lists).
Results go to <stem>.json (sorted keys, timestamps confined to the
"metadata" block), <stem>.csv (one row per method) and <stem>_curve.csv
for sweeps.
"""

import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import pandas as pd
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from analysis.protocols import ProtocolResult
from config import config
from core.errors import ConfigError, DataError
from objectives.centroids import ObjectiveKind

logger = logging.getLogger(__name__)

Protocol = Literal['single', 'exact', 'sa', 'sweep', 'kcluster']


class RunConfig(BaseModel):
    """
    Everything needed to reproduce one run.

    The dataset comes from exactly one of data (a CSV path) or synthetic
    (the configured Gaussian spec). CLI flags override file values.
    """

    model_config = ConfigDict(extra='forbid')

    data: Optional[str] = None
    synthetic: bool = False
    profile: Optional[str] = None
    label_column: Optional[str] = None
    header: bool = True
    preprocessing: Optional[Literal['none', 'minmax', 'zscore', 'pixel255']] = None
    objectives: Optional[List[str]] = None
    constraints: Optional[str] = None
    solver: Literal['auto', 'brute_force', 'annealing'] = 'auto'
    sweeps: Optional[int] = Field(default=None, ge=1)
    beta_initial: Optional[float] = Field(default=None, gt=0)
    beta_final: Optional[float] = Field(default=None, gt=0)
    restarts: Optional[int] = Field(default=None, ge=1)
    protocol: Protocol = 'single'
    trials: Optional[int] = Field(default=None, ge=1)
    subsample: Optional[int] = Field(default=None, ge=2)
    repeats: Optional[int] = Field(default=None, ge=1)
    sweep_mode: Literal['links', 'cardinality'] = 'links'
    penalty: Optional[float] = Field(default=None, gt=0)
    k: Optional[int] = Field(default=None, ge=2)
    split_mode: Optional[Literal['largest', 'breadth']] = None
    output_dir: str = 'results'
    seed: int = Field(default=0, ge=0)
    threads: Optional[int] = Field(default=None, ge=1)

    @field_validator('objectives', mode='before')
    @classmethod
    def _parse_objectives(cls, v):
        if v is None:
            return None
        if isinstance(v, str):
            v = [part for part in v.split(',') if part.strip()]
        return [ObjectiveKind.parse(name).value for name in v]

    @model_validator(mode='after')
    def _check_source(self) -> 'RunConfig':
        if self.data is not None and self.synthetic:
            raise ValueError("choose either a data file or the synthetic dataset, not both")
        return self

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> 'RunConfig':
        """Parse a flat YAML run configuration"""
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"run configuration not found: {path}")
        try:
            values = yaml.safe_load(path.read_text(encoding='utf-8')) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"{path}: invalid YAML ({e})") from None
        if not isinstance(values, dict) or any(isinstance(v, dict) for v in values.values()):
            raise ConfigError(f"{path}: a run configuration is a flat key/value mapping")
        return cls.build(**values)

    @classmethod
    def build(cls, **values) -> 'RunConfig':
        """Validate, turning pydantic errors into ConfigError"""
        try:
            return cls(**values)
        except ValidationError as e:
            raise ConfigError(f"invalid run configuration: {e}") from None

    def merged(self, **overrides) -> 'RunConfig':
        """Copy with every non-None override applied and revalidated"""
        values = self.model_dump()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig.build(**values)

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.model_dump(exclude_none=True), sort_keys=True)

    def to_file(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_yaml(), encoding='utf-8')
        return path


def result_document(result: ProtocolResult, run_config: Optional[RunConfig] = None) -> Dict[str, Any]:
    return {
        "schema_version": config.get_schema_version(),
        "result": result.model_dump(mode='json'),
        "config": None if run_config is None else run_config.model_dump(mode='json'),
        "metadata": {"created": datetime.now(timezone.utc).isoformat()},
    }


def _write_rows(rows: List[Dict[str, Any]], path: Path) -> Path:
    pd.DataFrame(rows).to_csv(path, index=False, float_format='%.17g')
    return path


def write_results(
    result: ProtocolResult,
    out_dir: Union[str, Path],
    stem: str,
    run_config: Optional[RunConfig] = None,
) -> Dict[str, Path]:
    """
    Write the JSON record plus CSV tables for one protocol result.

    Returns:
        Paths keyed by "json", "csv" and "curve" (only those written)

    Raises:
        DataError: if the output directory cannot be written
    """
    out_dir = Path(out_dir)
    written: Dict[str, Path] = {}
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        json_path = out_dir / f"{stem}.json"
        json_path.write_text(
            json.dumps(result_document(result, run_config), sort_keys=True, indent=2) + "\n",
            encoding='utf-8',
        )
        written["json"] = json_path
        rows = result.to_rows()
        if rows:
            written["csv"] = _write_rows(rows, out_dir / f"{stem}.csv")
        curve = result.curve_rows()
        if curve:
            written["curve"] = _write_rows(curve, out_dir / f"{stem}_curve.csv")
    except OSError as e:
        raise DataError(f"cannot write results to {out_dir}: {e}") from None
    logger.info("wrote %s", ", ".join(str(p) for p in written.values()))
    return written
