"""
Result tables.

Column order is fixed: every ``ScenarioConfig`` field, then the result
columns. Numbers are written with 12 significant digits and missing values
as empty cells (CSV) or ``null`` (JSON), so equal rows give equal bytes.
"""

from __future__ import annotations

import json
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

import pandas as pd

from ..enums import OutputFormat
from ..schemas.scenario import ScenarioConfig

SCENARIO_COLUMNS: List[str] = list(ScenarioConfig.model_fields)
RESULT_COLUMNS: List[str] = [
    "lambda_star_analytic",
    "lambda_star_mc",
    "ci_low",
    "ci_high",
    "binding_constraint",
    "capacity",
    "trials",
    "master_seed",
    "wall_time_s",
]
COLUMNS: List[str] = SCENARIO_COLUMNS + RESULT_COLUMNS

SIGNIFICANT_DIGITS = 12


def _normalize(value: Any) -> Any:
    if value is None:
        return None
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if math.isnan(value):
            return None
        if math.isinf(value):
            return value
        return float(format(value, f".{SIGNIFICANT_DIGITS}g"))
    if hasattr(value, "item"):
        return _normalize(value.item())
    return value


def _cell(value: Any) -> str:
    value = _normalize(value)
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, f".{SIGNIFICANT_DIGITS}g")
    return str(value)


def normalize_row(row: Mapping[str, Any]) -> Dict[str, Any]:
    """Row restricted to :data:`COLUMNS`, missing entries as ``None``."""
    return {column: _normalize(row.get(column)) for column in COLUMNS}


def to_frame(rows: Sequence[Mapping[str, Any]]) -> pd.DataFrame:
    """Rows as a string-valued frame in column order."""
    records = [[_cell(row.get(column)) for column in COLUMNS] for row in rows]
    return pd.DataFrame(records, columns=COLUMNS, dtype=str)


def provenance_path(path: Union[str, Path]) -> Path:
    """Sidecar holding the provenance of a CSV table."""
    return Path(path).with_suffix(".provenance.json")


def emit_results(
    rows: Sequence[Mapping[str, Any]],
    fmt: Union[OutputFormat, str],
    path: Union[str, Path],
    provenance: Optional[Dict[str, Any]] = None,
) -> Path:
    """Write result rows as CSV or JSON.

    The JSON document mirrors the CSV columns and carries ``provenance``.
    A CSV gets its provenance in a ``<stem>.provenance.json`` sidecar.

    Raises:
        OSError: If the file cannot be written
    """
    fmt = OutputFormat(fmt)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == OutputFormat.CSV:
        to_frame(rows).to_csv(path, index=False, lineterminator="\n")
        if provenance is not None:
            provenance_path(path).write_text(
                json.dumps(provenance, indent=2, sort_keys=True) + "\n", encoding="utf-8"
            )
        return path

    document = {
        "columns": COLUMNS,
        "rows": [normalize_row(row) for row in rows],
        "provenance": provenance or {},
    }
    path.write_text(
        json.dumps(document, indent=2, sort_keys=False, allow_nan=True) + "\n",
        encoding="utf-8",
    )
    return path


def read_results(path: Union[str, Path]) -> pd.DataFrame:
    """Load a CSV written by :func:`emit_results`."""
    return pd.read_csv(path, keep_default_na=True)
