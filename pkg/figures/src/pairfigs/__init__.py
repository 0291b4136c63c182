"""Read-only figure rendering for the driven-well simulation CSVs.

No physics is computed here: every plotted series is passed through from the
CSV files unchanged, and the renderers return those arrays so tests can
verify the round trip exactly.
"""

from .schema import FigureSpec, SchemaError, read_columns
from .render import RenderResult, render

__version__ = "0.1.0"
