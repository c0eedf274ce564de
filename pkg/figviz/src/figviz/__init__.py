"""Figure rendering for the device-benchmark CSV outputs."""

from .config import ConfigError, FigureSpec, PanelSpec, SeriesSpec, load_spec
from .render import MissingInputError, RenderReport, SchemaError, read_table, render

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "FigureSpec",
    "MissingInputError",
    "PanelSpec",
    "RenderReport",
    "SchemaError",
    "SeriesSpec",
    "load_spec",
    "read_table",
    "render",
]
