"""
Constants for experiments, run logs and the CLI.
"""
import os
from dotenv import load_dotenv
load_dotenv()

OUTPUT_DIR = os.getenv('OPE_OUTPUT_DIR')                # overrides the experiment output directory
LOG_LEVEL = os.getenv('OPE_LOG_LEVEL', 'INFO').upper()

RESULTS_SCHEMA = "# schema: abstract-ope results v1"
RAW_COLUMNS = [
    "epsilon",
    "n",
    "replication",
    "method",
    "abstraction",
    "seed",
    "n_blocks",
    "oracle",
    "estimate",
    "error",
    "squared_error",
    "status",
    "message",
]
AGGREGATE_COLUMNS = [
    "epsilon",
    "n",
    "method",
    "abstraction",
    "replications",
    "failures",
    "mse",
    "bias",
    "stderr",
    "median_squared_error",
    "mean_n_blocks",
]
ABSTRACTION_MODES = ("none", "forward", "backward", "two-step")
