"""
Constraint files: JSON with labels, cardinality {C, lambda}, links [{i, j, q}]
and link_lambda.
"""

import json
from pathlib import Path
from typing import Union

from pydantic import ValidationError

from constraints.penalties import ConstraintSet
from core.errors import ConstraintError, DataError


def load_constraint_file(path: Union[str, Path], num_points: int) -> ConstraintSet:
    """
    Parse and validate a constraint file against a dataset size.

    Labels may be given as [index, sign] pairs or {"i": index, "s": sign}
    objects.

    Raises:
        DataError: if the file is missing or not valid JSON
        ConstraintError: if the content violates a constraint invariant
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"constraint file not found: {path}")
    try:
        document = json.loads(path.read_text(encoding='utf-8'))
    except json.JSONDecodeError as e:
        raise DataError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from None
    if not isinstance(document, dict):
        raise ConstraintError(f"{path}: expected a JSON object at the top level")

    labels = []
    for entry in document.get('labels', []):
        if isinstance(entry, dict):
            labels.append((entry.get('i'), entry.get('s')))
        else:
            labels.append(tuple(entry))
    try:
        return ConstraintSet(
            num_points=num_points,
            labels=labels,
            label_lambda=document.get('label_lambda'),
            cardinality=document.get('cardinality'),
            links=document.get('links', []),
            link_lambda=document.get('link_lambda'),
        )
    except ValidationError as e:
        raise ConstraintError(f"{path}: {e}") from None
