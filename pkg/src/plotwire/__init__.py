"""plotwire: render plots of large tables server-side, stream only pixels.

A table lives next to the server; browsers (or the CLI) configure plots
with name=value options, navigate by pan/zoom/rotate, and receive PNG
frames whose size depends on image content, never on row count.
"""

from .csvio import load_csv
from .errors import (
    EvalTypeError, FormatError, ParseError, PlotwireError, RangeError,
    SchemaError, SessionError, UnknownNameError, UnsupportedError,
    ValidationError,
)
from .identify import identify_row
from .plotspec import ValidatedPlot, capabilities, registry_hash, validate
from .prep import PreparedCoords, auto_range, prepare_coords
from .pwct import load_columnar, save_columnar
from .registry import TableRegistry
from .render import Frame, render
from .session import SessionManager
from .table import Column, ColumnTable, column_stats, make_column, tables_equal
from .view import (
    NavAction, Pan, Rotate, ViewState, Viewport, Zoom, apply_navigation,
    data_to_graphics, graphics_to_data,
)

__version__ = "0.1.0"

__all__ = [
    "Column", "ColumnTable", "EvalTypeError", "FormatError", "Frame",
    "NavAction", "Pan", "ParseError", "PlotwireError", "PreparedCoords",
    "RangeError", "Rotate", "SchemaError", "SessionError", "SessionManager",
    "TableRegistry", "UnknownNameError", "UnsupportedError", "ValidatedPlot",
    "ValidationError", "ViewState", "Viewport", "Zoom", "apply_navigation",
    "auto_range", "capabilities", "column_stats", "data_to_graphics",
    "graphics_to_data", "identify_row", "load_columnar", "load_csv",
    "make_column", "prepare_coords", "registry_hash", "render",
    "save_columnar", "tables_equal", "validate",
]
