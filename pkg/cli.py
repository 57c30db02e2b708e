"""
Entry point of the `ope` command: exact solving, state abstraction and off-policy estimation of
tabular MDPs.

The packages (mdp, solver, abstraction, simulation, estimators, generators, harness) live in
ope_backend/ and import each other by top-level name; this wrapper puts that directory on sys.path
and runs the Typer app from ope_backend/harness/cli.py, so `ope` works from the project root.
"""
import sys
from pathlib import Path

# Get the root directory (where this file is located)
root_dir = Path(__file__).parent.resolve()
backend_dir = root_dir / "ope_backend"

# Verify backend directory exists
if not backend_dir.exists():
    raise ImportError(
        f"Backend directory not found: {backend_dir}\n"
        f"Expected structure: {root_dir}/ope_backend/harness/cli.py"
    )

# Packages (mdp, solver, abstraction, ...) are imported as top-level names from ope_backend/
if str(backend_dir) not in sys.path:
    sys.path.insert(0, str(backend_dir))

from harness.cli import app

if __name__ == "__main__":
    app()
