"""Utility modules for shared functionality."""

from .logger import setup_logger
from .report_exporter import ReportExporter, emit_report

__all__ = ["setup_logger", "ReportExporter", "emit_report"]
