"""Exact max-plus tools for the admissible periods of P-time event graphs."""

from .maxplus import BOTTOM, TOP, MpMatrix, PositiveCircuitError, kleene_star
from .ncp import FeasibleSet, PicTriple, feasible_at, solve_exact, solve_fast
from .pteg import (EventGraphSpec, Place, Pteg, Trajectory, normalize, period_set, synthesize,
                   validate_trajectory)

__version__ = "0.1.0"

__all__ = [
    "BOTTOM", "TOP", "MpMatrix", "PositiveCircuitError", "kleene_star",
    "FeasibleSet", "PicTriple", "feasible_at", "solve_exact", "solve_fast",
    "EventGraphSpec", "Place", "Pteg", "Trajectory", "normalize", "period_set", "synthesize",
    "validate_trajectory",
]
