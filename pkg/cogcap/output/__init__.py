"""Result tables, plots and their storage."""

from .plots import Series, emit_plot, log_log_slope
from .results import (
    COLUMNS,
    RESULT_COLUMNS,
    SCENARIO_COLUMNS,
    emit_results,
    provenance_path,
    read_results,
)
from .storage import FileResultStore, ResultStore, create_result_store

__all__ = [
    "COLUMNS",
    "FileResultStore",
    "RESULT_COLUMNS",
    "ResultStore",
    "SCENARIO_COLUMNS",
    "Series",
    "create_result_store",
    "emit_plot",
    "emit_results",
    "log_log_slope",
    "provenance_path",
    "read_results",
]
