"""
Configuration settings for the capacity planner
"""
import os
from pathlib import Path

# Project paths
PROJECT_ROOT = Path(__file__).parent
REPORTS_DIR = PROJECT_ROOT / "reports"

# Logging
LOG_LEVEL = os.environ.get("CAPACITY_LOG_LEVEL", "INFO").upper()

# Search-space guards (candidate counts)
GUARD_CONFIG = {
    "stable_enumeration": 2_000_000,
    "efficiency_oracle": 2_000_000,
    "assignment_vectors": 10_000_000,
    "capacity_vectors": 10_000_000,
}

# Dense simplex settings
LP_CONFIG = {
    "tolerance": 1e-9,
    "max_iterations": 10_000,
}

# Solver settings
SOLVER_CONFIG = {
    "threads": 1,
    "parallel_batch_size": 256,
}

# Which methods each problem accepts on the command line
PROBLEM_METHODS = {
    "minsum-sp": ["exact", "formula", "ip", "lp-round", "greedy", "special", "auto"],
    "minmax-sp": ["uniform", "auto"],
    "minsum-se": ["exact", "auto"],
    "minmax-se": ["exact", "auto"],
}

# Certificates each problem promises for a feasible witness
PROBLEM_CERTIFICATES = {
    "minsum-sp": ("stable", "perfect"),
    "minmax-sp": ("stable", "perfect"),
    "minsum-se": ("stable", "efficient"),
    "minmax-se": ("stable", "efficient"),
}

EXIT_CODES = {
    "success": 0,
    "error": 1,
    "infeasible": 2,
    "guard": 3,
}

# Random instance defaults
RANDOM_INSTANCE_DEFAULTS = {
    "cap_range": (1, 2),
    "pref_len_range": (1, None),
    "seed": 42,
}

# Dummy-chain length of the SAT gadgets
SAT_GADGET_ETA = 3
