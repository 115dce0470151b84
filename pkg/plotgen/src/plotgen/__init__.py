"""Chart generation for weak-oracle clustering experiment summaries."""

from .render import PlotSpec, SchemaError, build_series, read_summary, render

__all__ = ["PlotSpec", "SchemaError", "build_series", "read_summary", "render"]
