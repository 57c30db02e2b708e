"""
Unit tests for harness.experiment - results files and aggregation.
"""
import pytest

from harness.constants import RAW_COLUMNS, RESULTS_SCHEMA
from harness.experiment import aggregate, read_rows, write_rows


def _row(rep, estimate, oracle=1.0, status="ok", n_blocks=4):
    error = estimate - oracle if status == "ok" else None
    return {
        "epsilon": "0.3", "n": "10", "replication": str(rep), "method": "fqe", "abstraction": "none",
        "seed": "1", "n_blocks": str(n_blocks), "oracle": repr(oracle),
        "estimate": repr(estimate) if status == "ok" else "",
        "error": repr(error) if status == "ok" else "",
        "squared_error": repr(error ** 2) if status == "ok" else "",
        "status": status, "message": "" if status == "ok" else "ValueError: boom",
    }


class TestAggregate:
    """Tests for aggregate."""

    def test_statistics(self):
        """Test MSE, bias, standard error and median over successful replications."""
        rows = [_row(0, 1.5), _row(1, 0.5), _row(2, 2.0), _row(3, 0.0, status="error")]
        (summary,) = aggregate(rows)
        assert summary["replications"] == "4"
        assert summary["failures"] == "1"
        assert float(summary["mse"]) == pytest.approx((0.25 + 0.25 + 1.0) / 3)
        assert float(summary["bias"]) == pytest.approx(1.0 / 3)
        # sample std of (1.5, 0.5, 2.0) over sqrt(3)
        assert float(summary["stderr"]) == pytest.approx(0.7637626158259734 / 3 ** 0.5)
        assert float(summary["median_squared_error"]) == pytest.approx(0.25)
        assert float(summary["mean_n_blocks"]) == 4.0

    def test_all_failed(self):
        """Test a group without successes reports only counts."""
        (summary,) = aggregate([_row(0, 0.0, status="error")])
        assert summary["failures"] == "1"
        assert summary["mse"] == ""

    def test_single_replication_stderr(self):
        (summary,) = aggregate([_row(0, 1.5)])
        assert summary["stderr"] == "0.0"


class TestResultsFiles:
    """Tests for write_rows and read_rows."""

    def test_schema_line_and_round_trip(self, tmp_path):
        path = tmp_path / "results.csv"
        rows = [_row(0, 1.5), _row(1, 0.5)]
        write_rows(path, RAW_COLUMNS, rows)
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == RESULTS_SCHEMA
        assert lines[1] == ",".join(RAW_COLUMNS)
        assert read_rows(path) == rows

    def test_schema_mismatch(self, tmp_path):
        path = tmp_path / "results.csv"
        path.write_text("# schema: something else\nepsilon\n0.1\n", encoding="utf-8")
        with pytest.raises(ValueError, match="schema"):
            read_rows(path)
