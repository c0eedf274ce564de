"""Figure specifications parsed from plain TOML config files.

A spec names a figure kind, an output image path, and one or more panels.
Panels reference the delimited files the simulator CLI emits: sweep tables
(``tau,overlap,fano,mean_signal,mean_pump,depletion``), assembled parameter
tables, snapshot distributions (``n,signal[,idler],pump``) and Wigner grids
(``x,p,w``).
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

KINDS = ("line_sweep", "histogram", "wigner_contour")

LINE_STYLES = {
    "solid": "-",
    "dashed": "--",
    "dotted": ":",
    "dashdot": "-.",
    "dotdotdashed": (0, (3, 1, 1, 1, 1, 1)),
}


class ConfigError(Exception):
    """Malformed or incomplete figure specification."""


@dataclass
class SeriesSpec:
    csv: Path
    label: str = ""
    style: str = "solid"
    color: str | None = None

    def __post_init__(self):
        if self.style not in LINE_STYLES:
            raise ConfigError(
                f"unknown style {self.style!r}; choose from {sorted(LINE_STYLES)}"
            )


@dataclass
class PanelSpec:
    kind: str
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    # line panels
    x: str = ""
    y: str = ""
    logy: bool = False
    series: list[SeriesSpec] = field(default_factory=list)
    # histogram / wigner panels
    csv: Path | None = None
    column: str = ""
    max_n: int | None = None


@dataclass
class FigureSpec:
    kind: str
    output: Path
    panels: list[PanelSpec]
    suptitle: str = ""
    width: float = 9.0
    height: float = 6.5
    dpi: int = 150

    @property
    def inputs(self) -> list[Path]:
        paths: list[Path] = []
        for panel in self.panels:
            if panel.csv is not None:
                paths.append(panel.csv)
            paths.extend(s.csv for s in panel.series)
        return paths


def _panel_from_table(default_kind: str, table: dict, base: Path) -> PanelSpec:
    kind = table.get("kind", default_kind)
    if kind not in KINDS:
        raise ConfigError(f"unknown panel kind {kind!r}; choose from {KINDS}")
    panel = PanelSpec(
        kind=kind,
        title=table.get("title", ""),
        xlabel=table.get("xlabel", ""),
        ylabel=table.get("ylabel", ""),
        x=table.get("x", ""),
        y=table.get("y", ""),
        logy=bool(table.get("logy", False)),
        column=table.get("column", ""),
        max_n=table.get("max_n"),
    )
    if kind == "line_sweep":
        rows = table.get("series", [])
        if not rows:
            raise ConfigError("line_sweep panel needs at least one [[panels.series]]")
        if not panel.x or not panel.y:
            raise ConfigError("line_sweep panel needs 'x' and 'y' column names")
        for row in rows:
            if "csv" not in row:
                raise ConfigError("every series needs a 'csv' path")
            panel.series.append(
                SeriesSpec(
                    csv=base / row["csv"],
                    label=row.get("label", ""),
                    style=row.get("style", "solid"),
                    color=row.get("color"),
                )
            )
    else:
        if "csv" not in table:
            raise ConfigError(f"{kind} panel needs a 'csv' path")
        panel.csv = base / table["csv"]
        if kind == "histogram" and not panel.column:
            raise ConfigError("histogram panel needs a 'column' name")
    return panel


def load_spec(path: str | Path) -> FigureSpec:
    """Parse one figure spec; relative CSV/image paths resolve against it."""
    path = Path(path)
    try:
        data = tomllib.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    base = path.parent
    kind = data.get("kind")
    if kind not in KINDS:
        raise ConfigError(f"{path}: kind must be one of {KINDS}, got {kind!r}")
    if "output" not in data:
        raise ConfigError(f"{path}: missing 'output' image path")
    tables = data.get("panels", [])
    if not tables:
        raise ConfigError(f"{path}: no [[panels]] given")
    panels = [_panel_from_table(kind, t, base) for t in tables]
    return FigureSpec(
        kind=kind,
        output=base / data["output"],
        panels=panels,
        suptitle=data.get("suptitle", ""),
        width=float(data.get("width", 9.0)),
        height=float(data.get("height", 6.5)),
        dpi=int(data.get("dpi", 150)),
    )
