"""
Unit tests for harness.commands.test - pytest invocation of the suites.
"""
import importlib
import subprocess

import pytest
import typer

# harness.commands re-exports the `test` command function, which shadows the submodule attribute
test_command = importlib.import_module("harness.commands.test")
from harness.commands.test import BACKEND_DIR, run_suite


@pytest.fixture
def calls(monkeypatch):
    """Record subprocess.run calls instead of running pytest."""
    recorded = []

    def fake_run(args, cwd=None, check=False):
        recorded.append((args, cwd))
        return subprocess.CompletedProcess(args, 0)

    monkeypatch.setattr(test_command.subprocess, "run", fake_run)
    return recorded


class TestRunSuite:
    """Tests for run_suite."""

    def test_default_deselects_slow(self, calls):
        """Test slow tests are deselected and the backend directory is the working directory."""
        run_suite("unit", verbose=False)
        args, cwd = calls[0]
        assert cwd == BACKEND_DIR
        assert args[-4:] == ["tests/unit/", "-q", "-m", "not slow"]

    def test_options(self, calls):
        """Test --slow, -k and --cov reach pytest."""
        run_suite("all", slow=True, keyword="partition", coverage=True)
        args = calls[0][0]
        assert "not slow" not in args
        assert args[args.index("-k") + 1] == "partition"
        assert "--cov=abstraction" in args
        assert "tests/integration/" in args

    def test_unknown_suite(self, calls):
        with pytest.raises(typer.Exit):
            run_suite("smoke")
        assert calls == []

    def test_failure_exits(self, monkeypatch):
        def failing(args, cwd=None, check=False):
            raise subprocess.CalledProcessError(2, args)

        monkeypatch.setattr(test_command.subprocess, "run", failing)
        with pytest.raises(typer.Exit):
            run_suite("integration")
