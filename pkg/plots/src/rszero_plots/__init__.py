"""Convert experiment aggregate CSVs into convergence figures.

Input files follow the runner's aggregate contract:

    oracle_calls,f_mean,f_std,grad_surrogate_mean,grad_surrogate_std

with a header row and decimal values at 12 significant digits.  Each input
becomes one mean curve with a shaded +-1 standard-deviation band, the
y-axis transformed by ``log`` (natural log of the objective) or
``loglog-inner`` (an additional inner logarithm for exponentially scaled
losses, guarded below at 1 + 1e-12).

This package talks to the optimizer only through its CSV files.
"""

from .core import PlotSpec, SeriesTable, extract_table, load_spec, read_aggregate_csv, render

__version__ = "0.1.0"

__all__ = [
    "PlotSpec",
    "SeriesTable",
    "extract_table",
    "load_spec",
    "read_aggregate_csv",
    "render",
]
