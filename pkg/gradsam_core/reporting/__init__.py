"""Human-readable reports."""

from gradsam_core.reporting.html import normalize_scores, render_cell, render_report, write_report

__all__ = ["normalize_scores", "render_cell", "render_report", "write_report"]
