"""
CLI entry point - Main Typer application.
"""
import logging
import sys

import typer

from harness.constants import LOG_LEVEL
from harness.commands import (
    solve,
    abstract,
    simulate,
    estimate,
    generate,
    experiment,
    verify,
    test,
    test_app
)

app = typer.Typer(help="Abstract OPE CLI - exact solving, state abstraction and off-policy estimation")


@app.callback()
def main(
    log_level: str = typer.Option(LOG_LEVEL, "--log-level", help="Logging level (OPE_LOG_LEVEL)")
):
    logging.basicConfig(
        level=log_level.upper(),
        format='%(asctime)s | %(name)s | %(levelname)s | %(message)s',
        handlers=[
            logging.StreamHandler(sys.stdout)
        ],
        force=True
    )


# Register all commands
app.command()(solve)
app.command()(abstract)
app.command()(simulate)
app.command()(estimate)
app.command()(generate)
app.command()(experiment)
app.command()(verify)
app.add_typer(test_app, name="test")  # test all | unit | integration
app.command()(test)

if __name__ == "__main__":
    app()
