"""Logging class. Keeps the records of one evaluation run and writes the report files. """

import csv
import io
import os
from fractions import Fraction
from typing import List, Optional

import vlcconfig
from evaluation import CostReport

REPORT_COLUMNS = (
    "codec total_cost written_zeros written_ones metadata_bits blocks fallbacks normalized_to_fnw"
).split(" ")
CHART_COLUMNS = ["codec", "normalized_cost"]
BLOCK_COLUMNS = ["block", "codec", "total_cost", "written_zeros", "written_ones", "metadata_bits", "fallback"]
REPORT_FORMATS = ("csv", "text")


def exact(value: Optional[Fraction]) -> str:
    """p/q or an integer; empty for None."""
    return "" if value is None else str(value)


def decimal(value: Optional[Fraction]) -> str:
    return "-" if value is None else f"{float(value):.6f}"


def _csv_text(rows: List[List[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerows(rows)
    return buffer.getvalue()


def format_report_csv(report: CostReport) -> str:
    rows = [REPORT_COLUMNS]
    for codec, totals in report.totals.items():
        rows.append([codec, exact(totals.total_cost), str(totals.written_zeros), str(totals.written_ones),
                     str(totals.metadata_bits), str(totals.blocks), str(totals.fallbacks),
                     exact(report.normalized_cost(codec))])
    return _csv_text(rows)


def format_report_text(report: CostReport) -> str:
    """Aligned table; costs as 6-decimal numbers with the exact value alongside."""
    header = ["codec", "total_cost", "exact", "zeros", "ones", "metadata", "blocks", "fallbacks", "vs_fnw",
              "vs_fnw_exact"]
    rows = [header]
    for codec, totals in report.totals.items():
        normalized = report.normalized_cost(codec)
        rows.append([codec, decimal(totals.total_cost), exact(totals.total_cost), str(totals.written_zeros),
                     str(totals.written_ones), str(totals.metadata_bits), str(totals.blocks), str(totals.fallbacks),
                     decimal(normalized), exact(normalized) or "-"])
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = [f"# {report.model}"]
    for row in rows:
        cells = [row[0].ljust(widths[0])] + [cell.rjust(width) for cell, width in zip(row[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def format_chart_csv(report: CostReport) -> str:
    rows = [CHART_COLUMNS]
    for codec in report.totals:
        rows.append([codec, exact(report.normalized_cost(codec))])
    return _csv_text(rows)


def emit_report(report: CostReport, path: Optional[str] = None, format: str = "csv",
                chart: Optional[str] = None) -> str:
    """Write the report to path (stdout when path is None) and the normalized chart data to chart.
    Returns the report text."""
    if format not in REPORT_FORMATS:
        raise ValueError(f"Report format must be one of {REPORT_FORMATS}, got {format!r}")
    text = format_report_csv(report) if format == "csv" else format_report_text(report)
    if path is None:
        print(text, end="")
    else:
        with open(path, "w") as wfile:
            wfile.write(text)
    if chart is not None:
        with open(chart, "w") as wfile:
            wfile.write(format_chart_csv(report))
    return text


class Logger:
    def __init__(self, report_path: Optional[str] = None, report_format: str = "csv", chart_path: Optional[str] = None):
        """Constructor. Prepares the records of one evaluation run.
            Arguments
                report_path: Type str or None. Where the report goes; None prints it.
                report_format: Type str. csv or text.
                chart_path: Type str or None. Where the codec,normalized_cost data goes.
            Returns class instance."""
        self.report_path = report_path
        self.report_format = report_format
        self.chart_path = chart_path
        self.report: Optional[CostReport] = None
        self.history_logs = {"blocks": []}

    def record_report(self, report: CostReport) -> None:
        """Record the finished run. The per-block history is only kept when slim_log is off."""
        self.report = report
        if not vlcconfig.slim_log:
            self.history_logs["blocks"] = report.block_records

    def block_log_path(self) -> Optional[str]:
        if self.report_path is None:
            return None
        root, _ = os.path.splitext(self.report_path)
        return root + ".blocks.csv"

    def format_block_log(self) -> str:
        rows = [BLOCK_COLUMNS]
        for index, codec, breakdown, fallback in self.history_logs["blocks"]:
            rows.append([str(index), codec, exact(breakdown.total_cost), str(breakdown.written_zeros),
                         str(breakdown.written_ones), str(breakdown.metadata_bits), str(int(fallback))])
        return _csv_text(rows)

    def save_log(self) -> List[str]:
        """Write the report, the chart data and, without slim_log, the per-block history.
            Returns the paths written."""
        if self.report is None:
            raise ValueError("No report recorded")
        emit_report(self.report, self.report_path, self.report_format, self.chart_path)
        written = [p for p in (self.report_path, self.chart_path) if p is not None]
        block_path = self.block_log_path()
        if not vlcconfig.slim_log and block_path is not None:
            with open(block_path, "w") as wfile:
                wfile.write(self.format_block_log())
            written.append(block_path)
        if vlcconfig.verbose:
            print(f"Saved {', '.join(written) if written else 'report to stdout'}")
        return written
