"""
Constants for the finite-MDP data model.
"""
import os
from dotenv import load_dotenv
load_dotenv()

PROB_TOL = float(os.getenv('OPE_PROB_TOL', '1e-12'))  # row-sum tolerance for input validation
MISSING_NEXT = -1   # next_states entry of a step whose successor was not recorded
