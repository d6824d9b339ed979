"""Plotting companion for heckesum scan CSVs.

Reads the frozen scan schema (see ``frame.SCAN_COLUMNS``), renders
ratio-convergence and candidate-comparison figures, and writes a JSON
sidecar with every plotted number so figure content is testable without
image diffing.
"""

from .frame import SCAN_COLUMNS, ScanFrame, SchemaError
from .render import plot_candidates, plot_ratio

__all__ = ["SCAN_COLUMNS", "ScanFrame", "SchemaError", "plot_candidates", "plot_ratio"]

__version__ = "0.1.0"
