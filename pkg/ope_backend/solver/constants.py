"""
Constants for the exact solvers.
"""
import os
from dotenv import load_dotenv
load_dotenv()

LINEAR_SOLVE_MAX = int(os.getenv('OPE_LINEAR_SOLVE_MAX', '4096'))    # |S|*|A| at or below this uses a direct solve
SOLVER_TOL = float(os.getenv('OPE_SOLVER_TOL', '1e-10'))             # Bellman residual target
SOLVER_MAX_ITER = int(os.getenv('OPE_SOLVER_MAX_ITER', '100000'))
STATIONARY_TOL = float(os.getenv('OPE_STATIONARY_TOL', '1e-10'))     # fixed-point residual of p_inf
ZERO_MASS = float(os.getenv('OPE_ZERO_MASS', '1e-14'))               # probabilities below this count as zero
