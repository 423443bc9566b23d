"""Exact desk-scale analysis of absolute value equations ``A x + |x| = b``."""

from .core import (AveInstance, OrthantPiece, SolutionSetDescription, enumerate_solution_set,
                   infinite_orthant_census, is_isolated, is_solution, orthant_piece, residual)
from .classify import ClassificationReport, IntervalMatrix, Verdict
from .report import classify_all
from .solvers import SolveOutcome, algorithm1, picard, solve_auto
from .estimator import AVESolver

__version__ = "0.1.0"

__all__ = [
    "AVESolver",
    "AveInstance",
    "ClassificationReport",
    "IntervalMatrix",
    "OrthantPiece",
    "SolutionSetDescription",
    "SolveOutcome",
    "Verdict",
    "algorithm1",
    "classify_all",
    "enumerate_solution_set",
    "infinite_orthant_census",
    "is_isolated",
    "is_solution",
    "orthant_piece",
    "picard",
    "residual",
    "solve_auto",
]
