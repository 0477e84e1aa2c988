"""
QUBO JSON export for external annealers.

Document: {"num_vars", "offset", "linear": [...], "quadratic": [{"i", "j", "c"}]}
with sorted keys. Floats are written with repr, the shortest string that
reads back to the identical double.
"""

import json
import logging
from pathlib import Path
from typing import Optional, Tuple, Union

from core.errors import DataError
from core.polynomial import BinaryQuadraticForm
from solvers.quadratize import VariableMap

logger = logging.getLogger(__name__)


def qubo_document(form: BinaryQuadraticForm, var_map: Optional[VariableMap] = None) -> dict:
    document = {
        "num_vars": form.num_vars,
        "offset": float(form.offset),
        "linear": [float(a) for a in form.linear],
        "quadratic": [
            {"i": i, "j": j, "c": float(c)} for (i, j), c in sorted(form.quadratic.items())
        ],
    }
    if var_map is not None and var_map.auxiliaries:
        document["num_original"] = var_map.num_original
        document["penalty"] = float(var_map.penalty)
        document["auxiliaries"] = [
            {"w": w, "i": i, "j": j} for w, (i, j) in sorted(var_map.auxiliaries.items())
        ]
    return document


def export_qubo(
    form: BinaryQuadraticForm,
    path: Union[str, Path],
    var_map: Optional[VariableMap] = None,
) -> Path:
    """
    Write a binary quadratic form as QUBO JSON.

    Args:
        form: Degree-2 form (quadratize higher-order polynomials first)
        path: Output file; parent directories are created
        var_map: Auxiliary definitions, recorded when present

    Raises:
        DataError: if the file cannot be written
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(qubo_document(form, var_map), sort_keys=True, indent=2) + "\n",
                        encoding='utf-8')
    except OSError as e:
        raise DataError(f"cannot write QUBO file {path}: {e}") from None
    logger.info("wrote QUBO with %d variables to %s", form.num_vars, path)
    return path


def load_qubo(path: Union[str, Path]) -> Tuple[BinaryQuadraticForm, Optional[VariableMap]]:
    """Read a QUBO JSON file back into a form (and its VariableMap when recorded)"""
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding='utf-8'))
        form = BinaryQuadraticForm(
            num_vars=int(document["num_vars"]),
            offset=float(document["offset"]),
            linear=document["linear"],
            quadratic={(int(t["i"]), int(t["j"])): float(t["c"]) for t in document["quadratic"]},
        )
    except FileNotFoundError:
        raise DataError(f"QUBO file not found: {path}") from None
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise DataError(f"{path}: malformed QUBO document ({e})") from None
    var_map = None
    if "auxiliaries" in document:
        var_map = VariableMap(
            num_original=int(document["num_original"]),
            auxiliaries={int(a["w"]): (int(a["i"]), int(a["j"])) for a in document["auxiliaries"]},
            penalty=float(document.get("penalty", 0.0)),
        )
    return form, var_map
