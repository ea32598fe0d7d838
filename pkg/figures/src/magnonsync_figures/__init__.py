"""Post-processing figures for magnonsync runs.

Thin consumers of the simulator's CSV and manifest contract: phase-space
portraits, quadrature and synchronization time series, and sweep curves.
No physics is recomputed here.
"""

__version__ = "0.1.0"

from .render import (FigureSpec, MissingColumn, load_columns, render,
                     render_run)

__all__ = ["__version__", "FigureSpec", "MissingColumn", "load_columns",
           "render", "render_run"]
