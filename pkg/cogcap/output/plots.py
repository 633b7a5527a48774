"""
SVG line charts.

Rendering uses the non-interactive Agg backend with a fixed SVG hash salt and no date
metadata, so identical series produce identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Union

import matplotlib

matplotlib.use("Agg")

import numpy as np  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402

from ..errors import PlotError  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = "cogcap"


@dataclass(frozen=True)
class Series:
    """One labelled line."""

    label: str
    x: Sequence[float]
    y: Sequence[float]


def log_log_slope(series: Series) -> float:
    """Least-squares slope of ``ln y`` against ``ln x``."""
    x = np.log(np.asarray(series.x, dtype=float))
    y = np.log(np.asarray(series.y, dtype=float))
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def _check(series: Sequence[Series], loglog: bool) -> None:
    if not series:
        raise PlotError("nothing to plot")
    xs = []
    for line in series:
        x = np.asarray(line.x, dtype=float)
        y = np.asarray(line.y, dtype=float)
        if x.shape != y.shape or x.size < 2:
            raise PlotError(f"series '{line.label}' needs >= 2 matching points")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise PlotError(f"series '{line.label}' has non-finite values")
        if loglog and (np.any(x <= 0) or np.any(y <= 0)):
            raise PlotError(f"series '{line.label}' has non-positive values on log axes")
        xs.append(x)
    every_x = np.concatenate(xs)
    if every_x.max() == every_x.min():
        raise PlotError("x range is degenerate")


def emit_plot(
    series: Sequence[Series],
    path: Union[str, Path],
    *,
    xlabel: str,
    ylabel: str,
    title: Optional[str] = None,
    loglog: bool = False,
    annotate_slope: bool = False,
    provenance: Optional[Dict[str, Any]] = None,
) -> Path:
    """Render ``series`` to a standalone SVG file.

    Raises:
        PlotError: Empty input, fewer than 2 points, degenerate x range or
            non-positive values on log axes
    """
    _check(series, loglog)
    figure = Figure(figsize=(6.4, 4.8))
    axes = figure.add_subplot()
    for line in series:
        label = line.label
        if annotate_slope and loglog:
            label = f"{label} (slope {log_log_slope(line):.2f})"
        axes.plot(line.x, line.y, marker="o", label=label)
    if loglog:
        axes.set_xscale("log")
        axes.set_yscale("log")
    axes.set_xlabel(xlabel)
    axes.set_ylabel(ylabel)
    if title:
        axes.set_title(title)
    axes.grid(True, which="both", alpha=0.3)
    axes.legend()

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    metadata: Dict[str, Any] = {"Date": None, "Title": title or ylabel}
    if provenance:
        metadata["Description"] = json.dumps(provenance, sort_keys=True)
    figure.savefig(path, format="svg", metadata=metadata)
    return path
