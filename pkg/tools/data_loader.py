"""
CSV ingestion, class exclusion and feature scaling for clustering datasets
"""

import logging
from pathlib import Path
from typing import Iterable, Optional, Union

import numpy as np
import pandas as pd

from config import config
from core.dataset import Dataset
from core.errors import ConfigError, DataError

logger = logging.getLogger(__name__)

PREPROCESSING_MODES = ('none', 'minmax', 'zscore', 'pixel255')


def load_csv(
    path: Union[str, Path],
    label_column: Optional[str] = None,
    header: bool = True,
    name: Optional[str] = None,
) -> Dataset:
    """
    Read a numeric table into a Dataset, preserving row order.

    Args:
        path: UTF-8 CSV file
        label_column: Column holding class labels (kept as strings); without
            a header, columns are named "0", "1", ...
        header: Whether the first line names the columns
        name: Dataset name (defaults to the file stem)

    Returns:
        Dataset with every other column as a real-valued feature

    Raises:
        DataError: missing file, ragged row or non-numeric feature cell,
            with the offending line number
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"dataset file not found: {path}")
    try:
        frame = pd.read_csv(
            path,
            header=0 if header else None,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=True,
            engine='python',
            encoding='utf-8',
        )
    except pd.errors.ParserError as e:
        raise DataError(f"{path}: {e}") from None
    except pd.errors.EmptyDataError:
        raise DataError(f"{path}: file is empty") from None
    frame.columns = [str(c).strip() for c in frame.columns]
    first_line = 2 if header else 1

    # short rows come back padded with NaN
    for row_number, row in enumerate(frame.itertuples(index=False)):
        if any(not isinstance(cell, str) for cell in row):
            raise DataError(
                f"{path}: line {row_number + first_line} has fewer than {len(frame.columns)} fields"
            )

    labels = None
    if label_column is not None:
        if label_column not in frame.columns:
            raise DataError(f"{path}: no column named '{label_column}' (have {list(frame.columns)})")
        labels = frame.pop(label_column).str.strip().to_numpy()

    features = np.empty(frame.shape, dtype=np.float64)
    for col_index, column in enumerate(frame.columns):
        values = pd.to_numeric(frame[column].str.strip(), errors='coerce')
        bad = np.flatnonzero(values.isna().to_numpy())
        if bad.size:
            row_number = int(bad[0])
            raise DataError(
                f"{path}: line {row_number + first_line}, column '{column}': "
                f"'{frame[column].iloc[row_number]}' is not a number"
            )
        # to_numeric can be off by one ulp; astype parses exactly
        features[:, col_index] = frame[column].str.strip().astype(np.float64).to_numpy()

    logger.debug("loaded %s: %d rows, %d features", path, features.shape[0], features.shape[1])
    return Dataset(points=features, labels=labels, name=name or path.stem)


def preprocess(data: Dataset, mode: str) -> Dataset:
    """
    Scale features.

    minmax: (x - min) / (max - min); zscore: (x - mean) / std with the sample
    std (ddof = 1); pixel255: x / 255. Constant features map to 0 under
    minmax and zscore.
    """
    if mode not in PREPROCESSING_MODES:
        raise ConfigError(f"preprocessing must be one of {', '.join(PREPROCESSING_MODES)}, got '{mode}'")
    X = data.points
    if mode == 'none':
        return data
    if mode == 'pixel255':
        return data.with_points(X / 255.0)
    if mode == 'minmax':
        low = X.min(axis=0)
        span = X.max(axis=0) - low
        scaled = np.divide(X - low, span, out=np.zeros_like(X), where=span > 0)
        return data.with_points(scaled)
    mean = X.mean(axis=0)
    std = X.std(axis=0, ddof=1)
    scaled = np.divide(X - mean, std, out=np.zeros_like(X), where=std > 0)
    return data.with_points(scaled)


def exclude_classes(data: Dataset, classes: Iterable) -> Dataset:
    """Drop rows whose label equals any listed class (compared as strings)"""
    excluded = {str(c) for c in classes}
    if not excluded:
        return data
    if not data.has_labels:
        raise DataError("class exclusion needs labels")
    keep = np.array([str(label) not in excluded for label in data.labels])
    if keep.sum() < 2:
        raise DataError(f"excluding {sorted(excluded)} leaves fewer than 2 points")
    logger.info("excluded %d rows of classes %s", int((~keep).sum()), sorted(excluded))
    return data.subset(np.flatnonzero(keep))


def load_dataset(
    path: Union[str, Path],
    profile: Optional[str] = None,
    label_column: Optional[str] = None,
    preprocessing: Optional[str] = None,
    header: bool = True,
) -> Dataset:
    """
    Load and prepare a dataset, filling unset options from a named profile.

    Args:
        path: CSV file
        profile: Dataset profile in experiments_config.yaml (iris, wine, ...)
        label_column: Overrides the profile's label column
        preprocessing: Overrides the profile's preprocessing mode
        header: Whether the CSV has a header line
    """
    settings = {}
    if profile is not None:
        if profile not in config.dataset_names:
            raise ConfigError(
                f"unknown dataset profile '{profile}'; choose from {', '.join(config.dataset_names)}"
            )
        settings = config.get_dataset_profile(profile)
    label_column = label_column or settings.get('label_column')
    data = load_csv(path, label_column=label_column, header=header, name=profile)
    data = exclude_classes(data, settings.get('exclude_classes') or []) if data.has_labels else data
    return preprocess(data, preprocessing or settings.get('preprocessing', 'none'))


def save_dataset_csv(data: Dataset, path: Union[str, Path], label_column: str = 'label') -> Path:
    """Write features as x0..x{d-1} plus an optional label column, with 17 significant digits"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(data.points, columns=[f"x{j}" for j in range(data.num_features)])
    if data.has_labels:
        frame[label_column] = data.labels
    frame.to_csv(path, index=False, float_format='%.17g')
    return path
