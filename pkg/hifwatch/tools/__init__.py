"""Export helpers: plot-ready CSV bundles and markdown tables."""

from .plot_bundle import PlotBundle, companion_paths
from .report_tables import intervals_table, latency_table, metrics_table

__all__ = ["PlotBundle", "companion_paths", "metrics_table", "latency_table", "intervals_table"]
