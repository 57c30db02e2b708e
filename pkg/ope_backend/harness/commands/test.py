"""
Test command - Run the pytest suites of the backend.
"""
import subprocess
import sys
from pathlib import Path
from typing import Optional

import typer

test_app = typer.Typer(help="Run tests - unit, integration, or both")

# ope_backend/, where tests/ lives
BACKEND_DIR = Path(__file__).resolve().parents[2]

SUITES = {
    "all": ("tests/unit/", "tests/integration/"),
    "unit": ("tests/unit/",),
    "integration": ("tests/integration/",),
}
COVERED_PACKAGES = ("mdp", "solver", "abstraction", "simulation", "estimators", "generators", "harness")


def run_suite(suite: str, verbose: bool = True, slow: bool = False, keyword: Optional[str] = None,
              coverage: bool = False):
    """
    Run one suite in a pytest subprocess from the backend directory.

    Statistical tests marked slow are deselected unless slow is set.
    """
    if suite not in SUITES:
        typer.echo(f"Error: Unknown test suite '{suite}'. Use one of {', '.join(SUITES)}", err=True)
        raise typer.Exit(1)
    args = [sys.executable, "-m", "pytest", *SUITES[suite], "-v" if verbose else "-q"]
    if not slow:
        args += ["-m", "not slow"]
    if keyword:
        args += ["-k", keyword]
    if coverage:
        args += [f"--cov={package}" for package in COVERED_PACKAGES] + ["--cov-report=term-missing"]
    try:
        subprocess.run(args, cwd=BACKEND_DIR, check=True)
    except subprocess.CalledProcessError as e:
        typer.echo(f"{suite} tests failed with exit code {e.returncode}", err=True)
        raise typer.Exit(1)


_VERBOSE = typer.Option(True, "--verbose/--quiet", "-v/-q", help="Verbose output")
_SLOW = typer.Option(False, "--slow", help="Include statistical tests marked slow")
_KEYWORD = typer.Option(None, "--keyword", "-k", help="Only tests matching this pytest -k expression")
_COVERAGE = typer.Option(False, "--cov", help="Report coverage of the backend packages")


@test_app.command("all")
def test_all(verbose: bool = _VERBOSE, slow: bool = _SLOW, keyword: Optional[str] = _KEYWORD,
             coverage: bool = _COVERAGE):
    """Unit and integration tests."""
    run_suite("all", verbose, slow, keyword, coverage)


@test_app.command("unit")
def test_unit(verbose: bool = _VERBOSE, slow: bool = _SLOW, keyword: Optional[str] = _KEYWORD,
              coverage: bool = _COVERAGE):
    """Unit tests only."""
    run_suite("unit", verbose, slow, keyword, coverage)


@test_app.command("integration")
def test_integration(verbose: bool = _VERBOSE, slow: bool = _SLOW, keyword: Optional[str] = _KEYWORD,
                     coverage: bool = _COVERAGE):
    """Integration tests only: verification suite, toy example, experiments, CLI."""
    run_suite("integration", verbose, slow, keyword, coverage)


def test(
    suite: str = typer.Argument("all", help="Suite: 'all', 'unit', or 'integration'"),
    verbose: bool = _VERBOSE,
    slow: bool = _SLOW,
    keyword: Optional[str] = _KEYWORD,
    coverage: bool = _COVERAGE
):
    """
    Run tests.

    Usage:
        ope test all --slow         # everything, statistical tests included
        ope test unit -k partition  # unit tests matching 'partition'
        ope test integration --cov  # integration tests with coverage
    """
    run_suite(suite, verbose, slow, keyword, coverage)
