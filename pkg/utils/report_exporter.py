"""
Report export utilities for sweep results.
Writes CSV with 17-significant-digit floats and JSON via Pydantic.
"""

import csv
import io
from enum import Enum
from pathlib import Path
from typing import List

from data.models import FitEntry, SweepRecord, SweepReport
from utils.logger import setup_logger

logger = setup_logger(__name__)

CSV_COLUMNS = [
    "h",
    "n",
    "walk_re",
    "walk_im",
    "oracle_re",
    "oracle_im",
    "abs_error",
    "wall_time_us",
]


class ReportFormat(str, Enum):
    """Supported report formats."""
    CSV = "csv"
    JSON = "json"


class ReportExportError(IOError):
    """Raised when writing a report fails; carries the underlying message."""
    pass


def _fmt(value: float | None) -> str:
    return "nan" if value is None else f"{value:.17g}"


def render_csv(records: List[SweepRecord]) -> str:
    """CSV text of the records in the given (grid) order."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([
            _fmt(r.h),
            str(r.n),
            _fmt(r.walk_re),
            _fmt(r.walk_im),
            _fmt(r.oracle_re),
            _fmt(r.oracle_im),
            _fmt(r.abs_error),
            str(r.wall_time_us),
        ])
    return buffer.getvalue()


class ReportExporter:
    """Exports sweep reports to CSV or JSON files."""

    @staticmethod
    def export(
        report: SweepReport,
        output_path: Path,
        fmt: ReportFormat = ReportFormat.CSV,
        indent: int = 2
    ) -> None:
        """
        Write a sweep report.

        Args:
            report: Records, fits and identifiers of the run
            output_path: Destination file path
            fmt: csv (records only) or json (everything)
            indent: JSON indentation level

        Raises:
            ReportExportError: If the file write fails
        """
        try:
            output_path.parent.mkdir(parents=True, exist_ok=True)
            if fmt == ReportFormat.CSV:
                text = render_csv(report.records)
            else:
                text = report.model_dump_json(indent=indent) + "\n"
            output_path.write_text(text, encoding="utf-8")
            logger.info(f"✓ Exported {fmt.value} report to {output_path}")

        except OSError as e:
            logger.error(f"Failed to export report to {output_path}: {e}")
            raise ReportExportError(str(e)) from e


def emit_report(
    records: List[SweepRecord],
    fits: List[FitEntry],
    fmt: ReportFormat | str,
    path: Path,
    fixture: str = "",
    triple: str = "",
    testcase: str = "",
    seed: int = 0,
) -> SweepReport:
    """Assemble a SweepReport and write it; returns the report."""
    report = SweepReport(
        fixture=fixture,
        triple=triple,
        testcase=testcase,
        seed=seed,
        records=records,
        fits=fits,
    )
    ReportExporter.export(report, Path(path), ReportFormat(fmt))
    return report


def load_json_report(path: Path) -> SweepReport:
    return SweepReport.model_validate_json(Path(path).read_text(encoding="utf-8"))
