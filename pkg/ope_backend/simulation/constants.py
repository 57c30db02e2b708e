"""
Constants for trajectory simulation.
"""
import os
from dotenv import load_dotenv
load_dotenv()

SIM_BATCH = int(os.getenv('OPE_SIM_BATCH', '4096'))  # trajectories generated per vectorized batch
INIT_MODES = ("rho0", "stationary")
