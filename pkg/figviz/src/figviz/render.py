"""Deterministic figure rendering from delimited simulator outputs.

Inputs are read-only; rendering the same spec twice produces identical
bytes.  Wigner contour panels draw a bold zero contour and hatch the
negative region so nonclassical patches stand out at a glance.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .config import LINE_STYLES, FigureSpec, PanelSpec

NEGATIVE_HATCH = "////"


class SchemaError(Exception):
    """An input file does not carry the columns a panel asks for."""


class MissingInputError(Exception):
    """An input file does not exist or cannot be read."""


@dataclass
class RenderReport:
    """What got drawn; used by callers and tests to assert on outcomes."""

    output: Path
    n_panels: int
    negative_marked: bool = False
    columns_used: list[str] = field(default_factory=list)


def read_table(path: Path) -> dict[str, np.ndarray]:
    """Load a delimited file with a header row into named float columns."""
    try:
        with open(path, newline="") as handle:
            rows = list(csv.reader(handle))
    except OSError as exc:
        raise MissingInputError(f"cannot read {path}: {exc}") from None
    if not rows or len(rows) < 2:
        raise SchemaError(f"{path}: empty table")
    header = [name.strip() for name in rows[0]]
    try:
        data = np.array([[float(v) for v in row] for row in rows[1:] if row])
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric cell ({exc})") from None
    if data.shape[1] != len(header):
        raise SchemaError(
            f"{path}: header has {len(header)} columns, rows have {data.shape[1]}"
        )
    return {name: data[:, i] for i, name in enumerate(header)}


def _require(table: dict[str, np.ndarray], names: list[str], path: Path) -> None:
    missing = [n for n in names if n not in table]
    if missing:
        raise SchemaError(
            f"{path}: missing column(s) {missing}; found {sorted(table)}"
        )


def _grid_layout(n: int) -> tuple[int, int]:
    cols = 1 if n == 1 else 2
    return math.ceil(n / cols), cols


def _draw_line_panel(ax, panel: PanelSpec) -> list[str]:
    used = []
    for series in panel.series:
        table = read_table(series.csv)
        _require(table, [panel.x, panel.y], series.csv)
        used.extend([panel.x, panel.y])
        ax.plot(
            table[panel.x],
            table[panel.y],
            linestyle=LINE_STYLES[series.style],
            color=series.color,
            label=series.label or None,
            linewidth=1.4,
        )
    if panel.logy:
        ax.set_yscale("log")
    if any(s.label for s in panel.series):
        ax.legend(fontsize=8, frameon=False)
    ax.grid(True, alpha=0.25, linewidth=0.5)
    return used


def _draw_histogram_panel(ax, panel: PanelSpec) -> list[str]:
    table = read_table(panel.csv)
    _require(table, ["n", panel.column], panel.csv)
    n = table["n"]
    p = table[panel.column]
    if panel.max_n is not None:
        keep = n <= panel.max_n
        n, p = n[keep], p[keep]
    ax.bar(n, p, width=0.85, color="0.35", edgecolor="black", linewidth=0.3)
    ax.set_xlabel(panel.xlabel or "n")
    ax.set_ylabel(panel.ylabel or f"p({panel.column})")
    return ["n", panel.column]


def _draw_wigner_panel(ax, panel: PanelSpec) -> tuple[list[str], bool]:
    table = read_table(panel.csv)
    _require(table, ["x", "p", "w"], panel.csv)
    x, p, w = table["x"], table["p"], table["w"]
    xs = np.unique(x)
    ps = np.unique(p)
    if xs.size * ps.size != w.size:
        raise SchemaError(
            f"{panel.csv}: {w.size} samples do not fill a "
            f"{xs.size} x {ps.size} grid"
        )
    grid = w.reshape(xs.size, ps.size)  # row-major over x
    w_min, w_max = float(grid.min()), float(grid.max())
    span = max(abs(w_min), abs(w_max), 1e-12)
    levels = np.linspace(-span, span, 41)
    ax.contourf(xs, ps, grid.T, levels=levels, cmap="RdBu_r")
    has_negative = w_min < 0.0
    if has_negative:
        # hatch the negative patch and trace the zero contour
        ax.contourf(
            xs, ps, grid.T, levels=[-span, 0.0], colors="none",
            hatches=[NEGATIVE_HATCH],
        )
        ax.contour(xs, ps, grid.T, levels=[0.0], colors="black", linewidths=1.0)
    ax.set_aspect("equal")
    ax.set_xlabel(panel.xlabel or "x")
    ax.set_ylabel(panel.ylabel or "p")
    return ["x", "p", "w"], has_negative


def render(spec: FigureSpec) -> RenderReport:
    """Draw one figure; returns what was rendered."""
    rows, cols = _grid_layout(len(spec.panels))
    fig, axes = plt.subplots(
        rows, cols, figsize=(spec.width, spec.height), squeeze=False
    )
    report = RenderReport(output=spec.output, n_panels=len(spec.panels))
    try:
        for i, panel in enumerate(spec.panels):
            ax = axes[i // cols][i % cols]
            if panel.kind == "line_sweep":
                report.columns_used += _draw_line_panel(ax, panel)
            elif panel.kind == "histogram":
                report.columns_used += _draw_histogram_panel(ax, panel)
            else:
                used, negative = _draw_wigner_panel(ax, panel)
                report.columns_used += used
                report.negative_marked |= negative
            if panel.title:
                ax.set_title(panel.title, fontsize=10)
            if panel.xlabel:
                ax.set_xlabel(panel.xlabel)
            if panel.ylabel:
                ax.set_ylabel(panel.ylabel)
        for j in range(len(spec.panels), rows * cols):
            axes[j // cols][j % cols].axis("off")
        if spec.suptitle:
            fig.suptitle(spec.suptitle, fontsize=12)
        fig.tight_layout()
        spec.output.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(spec.output, dpi=spec.dpi, metadata={"Software": "figviz"})
    finally:
        plt.close(fig)
    return report
