"""Estimator-style facade: fit on a matrix, predict solutions for right-hand sides."""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .core import DEFAULT_ENUM_LIMIT, AveInstance, enumerate_solution_set
from .report import classify_all
from .solvers import solve_auto


class AVESolver(BaseEstimator):
    """Solve ``A x + |x| = b`` for many ``b`` with one fitted ``A``.

    Parameters
    ----------
    enum_limit : int
        Largest n for orthant enumeration.
    convexity_limit : int
        Largest n for the quartic-cost predicates in :meth:`report`.
    tol : float
        Residual tolerance for accepting a solution.

    Attributes
    ----------
    A_ : ndarray of shape (n, n)
    n_features_in_ : int
    """

    def __init__(self, enum_limit=DEFAULT_ENUM_LIMIT, convexity_limit=6, tol=1e-8):
        self.enum_limit = enum_limit
        self.convexity_limit = convexity_limit
        self.tol = tol

    def fit(self, A, y=None):
        A = check_array(A, dtype=np.float64)
        if A.shape[0] != A.shape[1]:
            raise ValueError(f"A must be square, got shape {A.shape}")
        self.A_ = A
        self.n_features_in_ = A.shape[1]
        return self

    def _instance(self, b):
        check_is_fitted(self, "A_")
        return AveInstance(self.A_, b)

    def solve(self, b):
        """Full :class:`SolveOutcome` for one right-hand side."""
        return solve_auto(self._instance(b), self.enum_limit, self.tol)

    def predict(self, B):
        """One solution per row of ``B``; rows without a known solution are NaN.

        When the solution set has several points, the one returned is the
        first found in the solver's method order.
        """
        check_is_fitted(self, "A_")
        B = check_array(np.atleast_2d(B), dtype=np.float64)
        if B.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} columns, got {B.shape[1]}")
        out = np.full(B.shape, np.nan)
        for k, b in enumerate(B):
            p = self.solve(b).point
            if p is not None:
                out[k] = p
        return out

    def solution_set(self, b):
        return enumerate_solution_set(self._instance(b), self.enum_limit)

    def report(self):
        check_is_fitted(self, "A_")
        return classify_all(self.A_, self.enum_limit, self.convexity_limit)
