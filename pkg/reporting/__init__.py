from .figures import plot_estimates, plot_genealogy, plot_phase_portrait, plot_spatial_fit, plot_sweep
from .reporter import RunReporter, format_report, write_csv

__all__ = [
    "plot_estimates", "plot_genealogy", "plot_phase_portrait", "plot_spatial_fit", "plot_sweep",
    "RunReporter", "format_report", "write_csv",
]
