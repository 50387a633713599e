"""Finite-horizon repeated-game simulation."""
from .engine import (
    Transcript, empirical_csp, empirical_csp_rational, l1_distance, mean_based_audit,
    rationalize, regret_curves, run, transcript_csv,
)
from .learners import LearnerSpec
from .optimizers import OptimizerSpec, exploiter_strategy, exploiter_vertex

__all__ = [
    "LearnerSpec", "OptimizerSpec", "Transcript", "empirical_csp", "empirical_csp_rational",
    "exploiter_strategy", "exploiter_vertex", "l1_distance", "mean_based_audit", "rationalize",
    "regret_curves", "run", "transcript_csv",
]
