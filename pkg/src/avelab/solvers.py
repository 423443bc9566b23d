"""Solvers for ``Ax + |x| = b`` with certificates for the chosen method."""

from dataclasses import dataclass, field
import math

import numpy as np

from . import linalg
from .classify import (DECISION_MARGIN, IntervalMatrix, Verdict, inverse_nonneg_interval,
                       is_m_matrix, is_z_matrix, nonneg_unique_solvability, rho_sign_condition)
from .core import (DEFAULT_ENUM_LIMIT, SolutionSetDescription, enumerate_solution_set,
                   is_solution, residual, sgn)
from .reform import greatest_element_solve

STEP_TOL = 1e-10
SOLUTION_TOL = 1e-8


@dataclass
class SolveOutcome:
    """Result of a solve.

    ``status`` is ``"solved"`` (a point), ``"enumerated"`` (a full description
    with at least one solution), ``"empty"`` or ``"undecided"``.  For
    enumeration ``solution`` holds the :class:`SolutionSetDescription`.
    """

    method: str
    status: str
    solution: object = None
    iterations: int = 0
    certificates: list = field(default_factory=list)
    converged: bool = True
    details: dict = field(default_factory=dict)

    @property
    def point(self):
        """A single solution vector, if one is known."""
        if isinstance(self.solution, SolutionSetDescription):
            if self.solution.is_finite and self.solution.points:
                return self.solution.points[0]
            for p in self.solution.pieces:
                return p.vertices[0]
            return None
        return self.solution

    def to_dict(self):
        sol = self.solution
        if isinstance(sol, SolutionSetDescription):
            sol = sol.to_dict()
        elif isinstance(sol, np.ndarray):
            sol = sol.tolist()
        return {
            "method": self.method,
            "status": self.status,
            "solution": sol,
            "iterations": self.iterations,
            "converged": self.converged,
            "certificates": [c.to_dict() for c in self.certificates],
        }


def _interval(A):
    n = A.shape[0]
    return IntervalMatrix(A - np.eye(n), A + np.eye(n))


def algorithm1(inst, check=True):
    """Sign-iteration for ``[A - I, A + I]`` inverse nonnegative.

    Starts from ``x0 = (A + I)^-1 b`` and repeats ``x <- (A + D_sgn(x))^-1 b``
    until two consecutive iterates agree.  Iterates decrease componentwise.
    ``iterations`` counts loop passes; ``details["sign_changes"]`` counts
    passes that switched to a new sign vector.
    """
    A, b = inst.A, inst.b
    n = inst.n
    certs = []
    if check:
        v = inverse_nonneg_interval(_interval(A))
        if not v.is_true:
            raise ValueError("[A - I, A + I] is not inverse nonnegative")
        certs.append(v)
    x = linalg.lu_factor_solve(A + np.eye(n), b)
    iterates = [x]
    prev_s = np.ones(n)
    changes = 0
    k = 0
    while True:
        s = sgn(x)
        if np.any(s != prev_s):
            changes += 1
        prev_s = s
        x_new = linalg.lu_factor_solve(A + np.diag(s), b)
        k += 1
        iterates.append(x_new)
        done = np.max(np.abs(x_new - x), initial=0.0) <= STEP_TOL * max(1.0, np.max(np.abs(x)))
        x = x_new
        if done:
            break
        if k > 2 * n + 2:
            raise RuntimeError("sign iteration did not settle; inverse nonnegativity violated?")
    return SolveOutcome("algorithm1", "solved", x, k, certs,
                        details={"iterates": iterates, "sign_changes": changes})


def picard(inst, tol=1e-12, max_iter=10000, check=True):
    """Fixed-point iteration ``x <- A^-1 (b - |x|)`` for ``rho(|A^-1|) < 1``.

    The map contracts in the max norm weighted by the Perron vector of
    ``|A^-1|``; ``details["observed_ratio"]`` is the largest per-step error
    ratio measured in that norm.
    """
    A, b = inst.A, inst.b
    f = linalg.lu_factor(A)
    if f.singular:
        raise ValueError("A is singular")
    Ainv = f.solve(np.eye(inst.n))
    rho, w = linalg.perron_vector(np.abs(Ainv))
    certs = []
    if check:
        if not rho < 1.0 - DECISION_MARGIN:
            raise ValueError(f"rho(|A^-1|) = {rho:.6g} is not below 1")
        certs.append(Verdict(True, "rho(|A^-1|) < 1", rho, {"rho": rho}))
    x = Ainv @ b
    iterates = [x]
    converged = False
    k = 0
    for k in range(1, max_iter + 1):
        x_new = Ainv @ (b - np.abs(x))
        iterates.append(x_new)
        step = float(np.max(np.abs(x_new - x)))
        x = x_new
        if step <= tol * max(1.0, float(np.max(np.abs(x)))):
            converged = True
            break
    x = _polish(inst, x)
    errs = [float(np.max(np.abs(it - x) / w)) for it in iterates]
    floor = 1e-9 * max(1.0, float(np.max(np.abs(x) / w)))
    ratios = [errs[j + 1] / errs[j] for j in range(len(errs) - 1) if errs[j] > floor]
    details = {"rho": rho, "observed_ratio": max(ratios, default=0.0),
               "iterates": iterates, "residual": float(np.max(np.abs(residual(inst, x))))}
    return SolveOutcome("picard", "solved" if converged else "not_converged", x, k, certs,
                        converged=converged, details=details)


def _polish(inst, x):
    """One orthant solve at the sign pattern of ``x`` if it lowers the residual."""
    s = sgn(x)
    if np.any(s == 0):
        return x
    f = linalg.lu_factor(inst.A + np.diag(s))
    if f.singular:
        return x
    y = f.solve(inst.b)
    if np.all(s * y >= 0) and (np.max(np.abs(residual(inst, y)))
                                <= np.max(np.abs(residual(inst, x)))):
        return y
    return x


def _orthant_shortcut(inst):
    """Direct solve in a certified orthant when ``b >= 0``."""
    A, b, n = inst.A, inst.b, inst.n
    v = rho_sign_condition(A)
    if v.is_true:
        s = v.certificate["s"]
        return "rho_sign_condition", s, v
    v = nonneg_unique_solvability(A)
    if v.is_true:
        return "nonneg_unique_solvability", np.ones(n), v
    f = linalg.lu_factor(A)
    if not f.singular:
        S = sgn(f.solve(np.eye(n)), 1e-14)
        s = S[:, 0]
        if np.all(s != 0) and np.all(S == s[:, None]):
            v = inverse_nonneg_interval(_interval(A * s))
            if v.is_true:
                v.details["s"] = s
                return "inverse_nonneg_orthant", s, v
    return None


def solve_auto(inst, enum_limit=DEFAULT_ENUM_LIMIT, tol=SOLUTION_TOL):
    """Pick the first applicable method and solve.

    Order: orthant shortcuts for ``b >= 0``, sign iteration, Picard iteration,
    greatest-element LP, then exhaustive orthant enumeration.  Without any
    certificate and beyond ``enum_limit`` the outcome is ``"undecided"``.
    """
    A, b, n = inst.A, inst.b, inst.n

    if np.all(b >= 0):
        hit = _orthant_shortcut(inst)
        if hit is not None:
            name, s, v = hit
            y = linalg.lu_factor_solve(A * s + np.eye(n), b)
            x = s * y + 0.0
            if np.all(s * x >= -tol) and is_solution(inst, x, tol):
                return SolveOutcome(name, "solved", x, 0, [v], details={"orthant": s})

    v = inverse_nonneg_interval(_interval(A))
    if v.is_true:
        out = algorithm1(inst, check=False)
        out.certificates.append(v)
        if is_solution(inst, out.solution, tol):
            return out

    f = linalg.lu_factor(A)
    certs = [v]
    if not f.singular:
        rho = linalg.spectral_radius_nonneg(np.abs(f.solve(np.eye(n))))
        if rho < 1.0 - DECISION_MARGIN:
            out = picard(inst)
            if out.converged and is_solution(inst, out.solution, tol):
                return out
        certs.append(Verdict(False, "rho(|A^-1|) < 1", rho, {"rho": rho}))

    if is_z_matrix(A) and is_m_matrix(A + np.eye(n)):
        try:
            x = greatest_element_solve(inst)
        except ValueError:
            x = None
        if x is not None and is_solution(inst, x, tol):
            return SolveOutcome("greatest_element", "solved", x, 0,
                                [Verdict(True, "A Z-matrix, A + I M-matrix")])

    if n <= enum_limit:
        desc = enumerate_solution_set(inst, enum_limit)
        status = "empty" if desc.is_empty else "enumerated"
        return SolveOutcome("enumeration", status, desc, 2 ** n, certs)
    return SolveOutcome("none", "undecided", None, 0, certs, converged=False,
                        details={"reason": f"no certificate and n = {n} > {enum_limit}"})
