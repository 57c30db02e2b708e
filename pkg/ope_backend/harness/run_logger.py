# run_logger.py
# Event log for experiment sweeps
# Records per-cell outcomes (status, estimates, errors) next to the results
# Saves to CSV (analysis) and TXT (human review); never touches the results CSV

import csv
import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional, Union

logger = logging.getLogger(__name__)


class RunLogger:
    """
    Logger for experiment runs.

    Logs to both CSV (structured data) and TXT (human-readable):
    - CSV: one row per event, for filtering failed cells
    - TXT: run header, per-cell summaries and the closing summary

    Files are created on first write, so a run with nothing to report leaves no empty logs.
    """

    def __init__(self, log_dir: Union[str, Path], run_name: str = "experiment"):
        self.log_dir = Path(log_dir).resolve()
        self.log_dir.mkdir(parents=True, exist_ok=True)

        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        self.csv_path = self.log_dir / f"{run_name}_log_{timestamp}.csv"
        self.txt_path = self.log_dir / f"{run_name}_log_{timestamp}.txt"

        self._csv_initialized = False
        self._txt_initialized = False
        self.events = 0
        self.errors = 0
        logger.debug(f"Run logger initialized - log_dir: {self.log_dir}")

    def _initialize_csv(self):
        """Initialize CSV file with headers."""
        self._csv_initialized = True
        with open(self.csv_path, 'w', newline='', encoding='utf-8') as f:
            writer = csv.writer(f)
            writer.writerow(['timestamp', 'cell', 'stage', 'status', 'estimate', 'metadata'])

    def _initialize_txt(self):
        """Initialize TXT file with header."""
        self._txt_initialized = True
        with open(self.txt_path, 'w', encoding='utf-8') as f:
            f.write("=" * 80 + "\n")
            f.write("EXPERIMENT RUN LOG\n")
            f.write(f"Run started: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}\n")
            f.write("=" * 80 + "\n\n")

    def _write_csv(self, cell: str, stage: str, status: str, estimate: Optional[float],
                   metadata: Optional[Dict[str, Any]]):
        if not self._csv_initialized:
            self._initialize_csv()
        with open(self.csv_path, 'a', newline='', encoding='utf-8') as f:
            writer = csv.writer(f)
            writer.writerow([
                datetime.now().isoformat(),
                cell,
                stage,
                status,
                '' if estimate is None else repr(estimate),
                json.dumps(metadata, default=str) if metadata else '',
            ])

    def log_event(
        self,
        cell: str,
        stage: str,
        status: str = "ok",
        estimate: Optional[float] = None,
        metadata: Optional[Dict[str, Any]] = None
    ):
        """
        Log one event to both CSV and TXT files.

        Args:
            cell: Cell key, e.g. "eps=0.1 n=100 rep=3"
            stage: What ran (setup, fqe/two-step, ...)
            status: "ok", "skipped" or "error"
            estimate: Estimated value, when there is one
            metadata: Extra fields (block counts, diagnostics, error text)
        """
        self.events += 1
        self._write_csv(cell, stage, status, estimate, metadata)

        if not self._txt_initialized:
            self._initialize_txt()
        with open(self.txt_path, 'a', encoding='utf-8') as f:
            f.write(f"[{datetime.now().strftime('%H:%M:%S')}] {stage.upper()} - {status} ({cell})\n")
            if estimate is not None:
                f.write(f"Estimate: {estimate:.6f}\n")
            if metadata:
                f.write(f"Metadata: {json.dumps(metadata, indent=2, default=str)}\n")
            f.write("-" * 80 + "\n")

    def log_error(self, cell: str, stage: str, error: str):
        """Log a failed cell."""
        self.errors += 1
        self.log_event(cell, stage, status="error", metadata={"error": error})

    def close(self, summary: Optional[Dict[str, Any]] = None):
        """Finalize the log files; no-op when nothing was logged."""
        if not self._txt_initialized:
            return
        with open(self.txt_path, 'a', encoding='utf-8') as f:
            f.write("=" * 80 + "\n")
            if summary:
                for key, value in summary.items():
                    f.write(f"{key}: {value}\n")
            f.write(f"Run ended: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}\n")
            f.write("=" * 80 + "\n")

        logger.info(f"Run log closed ({self.events} events, {self.errors} errors). Logs saved to:")
        logger.info(f"  CSV: {self.csv_path}")
        logger.info(f"  TXT: {self.txt_path}")
