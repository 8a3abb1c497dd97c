"""Offline figure rendering for modwave scan outputs."""

__version__ = "0.1.0"

from .io import ScanTable, SchemaError, load
from .render import FigureJob, render

__all__ = ["ScanTable", "SchemaError", "load", "FigureJob", "render", "__version__"]
