"""Optimization reformulations of the absolute value equation.

The feasibility system ``(A + I) x <= b, (A - I) x <= b`` is the polyhedral
form of ``A x + |x| <= b``; the objectives, the greatest-element solve and
the auxiliary LP all live on it.
"""

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from ._validation import check_matrix, check_vector, is_symmetric
from . import linalg
from .classify import (ClassificationReport, DEFAULT_CONVEXITY_LIMIT, IntervalMatrix, Verdict,
                       interval_m_matrix, interval_pd_rank1, is_m_matrix, is_z_matrix)
from .core import DEFAULT_ENUM_LIMIT, AveInstance, sign_vectors
from .lp import EQ, GE, LE, LinearConstraint, LinearProgram, LpOutcome, feasible, solve

FEASIBILITY_TOL = 1e-9
KKT_TOL = 1e-8


@dataclass
class FeasibilitySystem:
    """Rows ``(A + I) x <= b`` followed by ``(A - I) x <= b``."""

    constraints: list

    @property
    def n(self):
        return self.constraints[0].coefficients.shape[0]

    def is_feasible(self, x, tol=FEASIBILITY_TOL):
        x = np.asarray(x, dtype=float)
        return all(c.violation(x) <= tol * max(1.0, abs(c.rhs)) for c in self.constraints)

    def find_point(self):
        return feasible(self.constraints, self.n)


def _system_rows(A, b):
    n = A.shape[0]
    I = np.eye(n)
    return [LinearConstraint(row, LE, bi) for M in (A + I, A - I) for row, bi in zip(M, b)]


def feasibility_constraints(inst):
    return FeasibilitySystem(_system_rows(inst.A, inst.b))


def objective_eval(which, inst, x):
    """Value of objective 11, 12 or 13 at a feasible ``x``.

    11: ``e^T (b - Ax - |x|)``, 12: ``||b - Ax - |x|||^2``,
    13: ``(b - Ax - x)^T (b - Ax + x)``.
    """
    x = check_vector(x, inst.n, name="x")
    if not feasibility_constraints(inst).is_feasible(x):
        raise ValueError("x violates A x + |x| <= b")
    r = inst.b - inst.A @ x
    if which == 11:
        return float(np.sum(r - np.abs(x)))
    if which == 12:
        g = r - np.abs(x)
        return float(g @ g)
    if which == 13:
        return float((r - x) @ (r + x))
    raise ValueError(f"unknown objective {which!r}; expected 11, 12 or 13")


def feasible_for_all_b(A):
    """Whether ``A x + |x| <= b`` is feasible for every b (iff ``A x + |x| < 0`` is)."""
    A = check_matrix(A, name="A")
    n = A.shape[0]
    x = feasible(_system_rows(A, -np.ones(n)), n)
    if x is None:
        return Verdict(False, "lp: (A +- I) x <= -e")
    return Verdict(True, "lp: (A +- I) x <= -e", {"x": x})


def greatest_element_solve(inst, p=None):
    """Greatest element of the feasible set, found as ``argmax p^T x``.

    Requires a Z-matrix ``A`` with ``A + I`` an M-matrix; the maximiser is
    then the same for every ``p > 0`` and solves the AVE.
    """
    n = inst.n
    p = np.ones(n) if p is None else check_vector(p, n, name="p")
    if np.any(p <= 0):
        raise ValueError("p must be entrywise positive")
    if not is_z_matrix(inst.A):
        raise ValueError("A is not a Z-matrix")
    if not is_m_matrix(inst.A + np.eye(n)):
        raise ValueError("A + I is not an M-matrix")
    out = solve(LinearProgram(p, _system_rows(inst.A, inst.b), sense="max"))
    if out.status == "infeasible":
        raise ValueError("feasible set A x + |x| <= b is empty")
    if out.status == "unbounded":
        raise RuntimeError("LP unbounded although A + I is an M-matrix")
    return out.point


def _bounded_above(A, b):
    """``(nonempty, bounded above)`` for ``A x + |x| <= b``, per coordinate."""
    n = A.shape[0]
    rows = _system_rows(A, b)
    if feasible(rows, n) is None:
        return False, False
    for i in range(n):
        out = solve(LinearProgram(np.eye(n)[i], rows, sense="max"))
        if out.status != "optimal":
            return True, False
    return True, True


def m_matrix_equivalence(A, probe_count=10, seed=0):
    """Evaluate the three equivalent statements about ``A + I``.

    (1) ``A + I`` is an M-matrix.  (2) A is a Z-matrix and the feasible set is
    nonempty and bounded above for every ``b >= 0`` (probed at random b).
    (3) the same for at least one b (probed at the same b and at b = 0).
    """
    A = check_matrix(A, name="A")
    n = A.shape[0]
    rep = ClassificationReport()
    rep["m_matrix"] = Verdict(is_m_matrix(A + np.eye(n)), "A + I is an M-matrix")
    if not is_z_matrix(A):
        reason = {"reason": "A is not a Z-matrix"}
        rep["bounded_all_b"] = Verdict(False, "probe", details=reason)
        rep["bounded_some_b"] = Verdict(False, "probe", details=reason)
        return rep
    rng = np.random.default_rng(seed)
    probes = [np.zeros(n)] + [rng.uniform(0.0, 10.0, n) for _ in range(probe_count)]
    results = [_bounded_above(A, b) for b in probes]
    ok = [ne and bd for ne, bd in results]
    fail = next((probes[k] for k, good in enumerate(ok) if not good), None)
    hit = next((probes[k] for k, good in enumerate(ok) if good), None)
    rep["bounded_all_b"] = Verdict(all(ok), "probe", {"failing_b": fail} if fail is not None else None,
                                   {"probes": len(probes)})
    rep["bounded_some_b"] = Verdict(any(ok), "probe", {"b": hit} if hit is not None else None,
                                    {"probes": len(probes)})
    return rep


# ----------------------------------------------------------------------------
# KKT points of the bilinear formulation


def _strict_gap(A, u):
    """``|u| - |A^T u|`` and the tolerance used to call an entry positive."""
    au = A.T @ u
    scale = max(1.0, float(np.max(np.abs(u), initial=0.0)), float(np.max(np.abs(au), initial=0.0)))
    return np.abs(u) - np.abs(au), 1e-9 * scale


def kkt16_feasible(A, enum_limit=DEFAULT_ENUM_LIMIT):
    """Search for ``u`` with ``|u| >= |A^T u|`` and strict in some entry.

    Such ``u`` exists iff some KKT point of the bilinear reformulation fails to
    give an AVE solution.  The system is invariant under ``u -> -u``, so sign
    patterns with ``t_1 = +1`` suffice.
    """
    A = check_matrix(A, name="A")
    n = A.shape[0]
    method = "sign-pattern lp"
    if n > enum_limit:
        return Verdict(None, method, details={"reason": f"n = {n} exceeds limit {enum_limit}"})
    At = A.T
    for tail in product((-1.0, 1.0), repeat=n - 1):
        t = np.array((1.0,) + tail)
        base = []
        for k in range(n):
            tk = np.eye(n)[k] * t[k]
            base.append(LinearConstraint(tk - At[k], GE, 0.0))
            base.append(LinearConstraint(tk + At[k], GE, 0.0))
        lower = np.where(t > 0, 0.0, -np.inf)
        upper = np.where(t < 0, 0.0, np.inf)
        for i in range(n):
            ti = np.eye(n)[i] * t[i]
            cons = base + [LinearConstraint(ti - At[i], GE, 1.0),
                           LinearConstraint(ti + At[i], GE, 1.0)]
            u = feasible(cons, n, lower=lower, upper=upper)
            if u is not None:
                return Verdict(True, method, {"u": u, "t": t, "i": i})
    return Verdict(False, method, details={"patterns": 2 ** (n - 1)})


@dataclass
class KktCertificate:
    u: np.ndarray
    x_star: np.ndarray
    y_star: np.ndarray
    v: np.ndarray
    w: np.ndarray
    b: np.ndarray
    strict_index: int = -1
    checks: dict = field(default_factory=dict)

    def validate(self, A, tol=KKT_TOL):
        """Check sign, complementarity, stationarity and feasibility."""
        A = check_matrix(A, name="A")
        I = np.eye(A.shape[0])
        c = {
            "nonnegative": all(np.all(z >= -1e-9) for z in (self.x_star, self.y_star, self.v, self.w)),
            "complementary": bool(self.v @ self.x_star <= tol and self.w @ self.y_star <= tol),
            "stationary": bool(
                np.max(np.abs(self.y_star + (A + I).T @ self.u - self.v)) <= tol
                and np.max(np.abs(self.x_star - (A - I).T @ self.u - self.w)) <= tol),
            "feasible": bool(np.max(np.abs((A + I) @ self.x_star - (A - I) @ self.y_star - self.b))
                             <= tol * max(1.0, float(np.max(np.abs(self.b))))),
            "not_an_ave_solution": bool(self.x_star @ self.y_star > tol),
        }
        self.checks = c
        return all(c.values())

    def to_dict(self):
        return {k: getattr(self, k).tolist() for k in ("u", "x_star", "y_star", "v", "w", "b")} | {
            "strict_index": self.strict_index}


def kkt_expand(A, u):
    """Build the KKT point that a witness ``u`` of :func:`kkt16_feasible` induces.

    ``u`` is flipped if needed so that ``-u_i > |A^T u|_i`` at the strict
    coordinate ``i``; then ``x*`` and ``y*`` are both positive there.
    """
    A = check_matrix(A, name="A")
    n = A.shape[0]
    u = check_vector(u, n, name="u")
    gap, tol = _strict_gap(A, u)
    if np.any(gap < -tol):
        raise ValueError("u violates |u| >= |A^T u|")
    strict = np.flatnonzero(gap > tol)
    if strict.size == 0:
        raise ValueError("|u| >= |A^T u| holds with equality everywhere")
    i = int(strict[0])
    if u[i] > 0:
        u = -u
    I = np.eye(n)
    y = np.maximum(0.0, -(A + I).T @ u)
    v = y + (A + I).T @ u
    x = np.maximum(0.0, (A - I).T @ u)
    w = x - (A - I).T @ u
    b = (A + I) @ x - (A - I) @ y
    cert = KktCertificate(u, x, y, v, w, b, i)
    if not cert.validate(A):
        failed = [k for k, ok in cert.checks.items() if not ok]
        raise ValueError(f"u does not yield a valid KKT certificate: {failed}")
    return cert


# ----------------------------------------------------------------------------
# auxiliary LP and its exactness condition


def _vertex_diag(D, n):
    D = np.asarray(D, dtype=float)
    d = np.diag(D).copy() if D.ndim == 2 else D.reshape(-1).copy()
    if d.shape[0] != n or (D.ndim == 2 and np.any(D - np.diag(d))):
        raise ValueError("D must be an n x n diagonal matrix (or its diagonal)")
    if not np.all(np.abs(d) == 1.0):
        raise ValueError("D must satisfy |D| = I")
    return d


def aux_lp_solve(inst, D):
    """``min e^T (b - (A + D) x)`` over ``A x + |x| <= b`` for a vertex ``D``.

    The objective is bounded below by zero on the feasible set, so the
    outcome is either optimal or infeasible.
    """
    n = inst.n
    d = _vertex_diag(D, n)
    c = np.ones(n) @ (inst.A + np.diag(d))
    out = solve(LinearProgram(c, _system_rows(inst.A, inst.b), sense="max"))
    if not out.optimal:
        return out
    value = float(np.sum(inst.b) - c @ out.point)
    return LpOutcome("optimal", out.point, value)


def _cond17_witness(A, d, i):
    """Some ``x`` with ``(Ax + |x|)_{-i} <= 0`` and ``e^T (A + D) x >= 1``."""
    n = A.shape[0]
    obj = np.ones(n) @ (A + np.diag(d))
    for s in sign_vectors(n):
        M = A + np.diag(s)
        cons = [LinearConstraint(M[k], LE, 0.0) for k in range(n) if k != i]
        cons.append(LinearConstraint(obj, GE, 1.0))
        x = feasible(cons, n, lower=np.where(s > 0, 0.0, -np.inf),
                     upper=np.where(s < 0, 0.0, np.inf))
        if x is not None:
            return x
    return None


def condition17_check(A, enum_limit=DEFAULT_CONVEXITY_LIMIT):
    """Exactness condition of the auxiliary LP over vertex matrices ``|D| = I``.

    True iff for every vertex ``D`` and index ``i`` the system
    ``(Ax + |x|)_{-i} <= 0, e^T (A + D) x > 0`` is solvable.  A failing pair
    means the LP with ``b = e_i`` stops at ``x = 0``, which is not a solution.
    """
    A = check_matrix(A, name="A")
    n = A.shape[0]
    method = "orthant lp over (D, i)"
    if n > enum_limit:
        return Verdict(None, method, details={"reason": f"n = {n} exceeds limit {enum_limit}"})
    witnesses = []
    for d in sign_vectors(n):
        for i in range(n):
            x = _cond17_witness(A, d, i)
            if x is None:
                return Verdict(False, method, {"D": d, "i": i})
            witnesses.append({"D": d, "i": i, "x": x})
    return Verdict(True, method, {"witnesses": witnesses})


def condition17_sufficient(A, enum_limit=DEFAULT_ENUM_LIMIT):
    """Matrix-class conditions that imply :func:`condition17_check`.

    ``pd_interval``: A symmetric and ``[A - ee^T, A + ee^T]`` positive definite.
    ``pd_column_flip``: the same for some column-sign flip ``A D_t`` (this
    covers ``-A``).  ``m_matrix_interval``: A symmetric and
    ``[A - (2ee^T - I), A + (2ee^T - I)]`` an M-matrix.
    """
    A = check_matrix(A, name="A")
    n = A.shape[0]
    rep = ClassificationReport()
    sym = is_symmetric(A)
    no_sym = {"reason": "A not symmetric"}

    rep["pd_interval"] = interval_pd_rank1(A, enum_limit) if sym else Verdict(
        None, "interval pd", details=no_sym)

    if n > enum_limit:
        rep["pd_column_flip"] = Verdict(None, "column flips",
                                        details={"reason": f"n = {n} exceeds limit {enum_limit}"})
    else:
        flip = Verdict(False, "column flips", details={"reason": "no flip is PD-certified"})
        pending = None
        for t in sign_vectors(n):
            B = A * t
            if not is_symmetric(B):
                continue
            v = interval_pd_rank1(B, enum_limit)
            if v.is_true:
                flip = Verdict(True, "column flips", {"t": t, "pd": v.certificate})
                break
            if v.is_unknown and pending is None:
                pending = t
        if not flip.is_true and pending is not None:
            flip = Verdict(None, "column flips", details={"undecided_t": pending})
        rep["pd_column_flip"] = flip

    if sym:
        R = 2.0 * np.ones((n, n)) - np.eye(n)
        rep["m_matrix_interval"] = interval_m_matrix(IntervalMatrix(A - R, A + R))
    else:
        rep["m_matrix_interval"] = Verdict(None, "interval M-matrix", details=no_sym)
    return rep
