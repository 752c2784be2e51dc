"""Figure rendering for survsplit harness outputs."""

__version__ = "0.1.0"

from .io import RecordRow, RunInfo, read_records, read_run_info
from .render import FigureSpec, build_figure, gaussian_kde, render, silverman_bandwidth

__all__ = [
    "__version__",
    "FigureSpec", "build_figure", "render",
    "gaussian_kde", "silverman_bandwidth",
    "RecordRow", "RunInfo", "read_records", "read_run_info",
]
