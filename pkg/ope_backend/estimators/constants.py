"""
Constants for offline estimators.
"""
import os
from dotenv import load_dotenv
load_dotenv()

SMOOTHING = float(os.getenv('OPE_SMOOTHING', '0.5'))         # add-lambda pseudo-count for empirical tables
FQE_MAX_ITER = int(os.getenv('OPE_FQE_MAX_ITER', '10000'))
FQE_TOL = float(os.getenv('OPE_FQE_TOL', '1e-10'))           # sup-norm change between FQE iterates
DRL_FOLDS = int(os.getenv('OPE_DRL_FOLDS', '2'))             # cross-fitting folds

METHODS = ("fqe", "sis", "mis", "drl")
