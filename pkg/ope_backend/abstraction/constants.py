"""
Constants for abstraction checks and refinement.
"""
import os
from dotenv import load_dotenv
load_dotenv()

ABSTRACTION_TOL = float(os.getenv('OPE_ABSTRACTION_TOL', '1e-9'))   # signature grid width and checker tolerance
BRUTE_FORCE_LIMIT = int(os.getenv('OPE_BRUTE_FORCE_LIMIT', '8'))    # max states for set-partition enumeration
