"""Dense two-phase simplex for small linear programs.

Variables are free unless bounds are given.  Internally every variable is
rewritten as ``x = offset + T z`` with ``z >= 0`` (shift for a finite lower
bound, reflection for a finite upper bound only, split for free variables),
so the tableau only ever sees nonnegative columns.  Pivoting follows Bland's
rule, which makes the method deterministic and cycle-free.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from ._validation import DimensionError
from .linalg import SingularMatrixError, lu_factor

FEAS_TOL = 1e-9
_PIVOT_TOL = 1e-10
_COST_TOL = 1e-10
_MAX_PIVOTS = 100000

LE, EQ, GE = "<=", "=", ">="
_RELATIONS = {LE: LE, "=": EQ, "==": EQ, GE: GE, "≤": LE, "≥": GE}


@dataclass
class LinearConstraint:
    coefficients: np.ndarray
    relation: str
    rhs: float

    def __post_init__(self):
        self.coefficients = np.asarray(self.coefficients, dtype=float).reshape(-1)
        if self.relation not in _RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        self.relation = _RELATIONS[self.relation]
        self.rhs = float(self.rhs)

    def violation(self, x):
        """Amount by which ``x`` violates the constraint (0 if satisfied)."""
        lhs = float(self.coefficients @ x)
        if self.relation == LE:
            return max(0.0, lhs - self.rhs)
        if self.relation == GE:
            return max(0.0, self.rhs - lhs)
        return abs(lhs - self.rhs)


@dataclass
class LinearProgram:
    objective: np.ndarray
    constraints: list
    sense: str = "min"
    lower: np.ndarray = None
    upper: np.ndarray = None

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float).reshape(-1)
        n = self.objective.shape[0]
        if self.sense not in ("min", "max"):
            raise ValueError("sense must be 'min' or 'max'")
        self.lower = np.full(n, -np.inf) if self.lower is None else np.asarray(self.lower, dtype=float)
        self.upper = np.full(n, np.inf) if self.upper is None else np.asarray(self.upper, dtype=float)
        if self.lower.shape != (n,) or self.upper.shape != (n,):
            raise DimensionError("bound vectors must match the objective length")
        if np.any(self.lower > self.upper):
            raise ValueError("lower bound exceeds upper bound")
        for c in self.constraints:
            if c.coefficients.shape[0] != n:
                raise DimensionError(
                    f"constraint has {c.coefficients.shape[0]} coefficients, expected {n}")

    @property
    def n_vars(self):
        return self.objective.shape[0]

    def max_violation(self, x):
        v = [c.violation(x) / (1.0 + abs(c.rhs)) for c in self.constraints]
        v.append(float(np.max(self.lower - x, initial=0.0)))
        v.append(float(np.max(x - self.upper, initial=0.0)))
        return max(v)


@dataclass
class LpOutcome:
    status: str
    point: np.ndarray = None
    value: float = None
    ray: np.ndarray = field(default=None, repr=False)

    @property
    def optimal(self):
        return self.status == "optimal"


def _variable_map(lower, upper):
    """Return ``offset, T, extra_rows`` with ``x = offset + T z``, ``z >= 0``."""
    n = lower.shape[0]
    offset = np.zeros(n)
    cols = []
    caps = []  # (z column, cap) for doubly bounded variables
    for j in range(n):
        lo, hi = lower[j], upper[j]
        col = np.zeros(n)
        if np.isfinite(lo):
            offset[j] = lo
            col[j] = 1.0
            cols.append(col)
            if np.isfinite(hi):
                caps.append((len(cols) - 1, hi - lo))
        elif np.isfinite(hi):
            offset[j] = hi
            col[j] = -1.0
            cols.append(col)
        else:
            col[j] = 1.0
            cols.append(col)
            cols.append(-col)
    T = np.array(cols).T if cols else np.zeros((n, 0))
    return offset, T, caps


class _Tableau:
    def __init__(self, A, b, basis):
        self.T = np.hstack([A, b[:, None]])
        self.basis = list(basis)

    def pivot(self, r, j):
        T = self.T
        T[r] /= T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        self.basis[r] = j

    def run(self, cost, allowed):
        """Minimise ``cost`` over the current tableau; returns status string."""
        T = self.T
        m = T.shape[0]
        for _ in range(_MAX_PIVOTS):
            cb = cost[self.basis]
            reduced = cost - cb @ T[:, :-1]
            enter = -1
            for j in allowed:
                if reduced[j] < -_COST_TOL:
                    enter = j
                    break
            if enter < 0:
                return "optimal"
            col = T[:, enter]
            leave, best = -1, math.inf
            for i in range(m):
                if col[i] > _PIVOT_TOL:
                    ratio = T[i, -1] / col[i]
                    if ratio < best - 1e-12 or (
                            abs(ratio - best) <= 1e-12 and self.basis[i] < self.basis[leave]):
                        leave, best = i, ratio
            if leave < 0:
                self.unbounded_column = enter
                return "unbounded"
            self.pivot(leave, enter)
        raise RuntimeError("simplex exceeded the pivot limit")


def solve(lp):
    """Solve a :class:`LinearProgram` by the two-phase simplex method."""
    n = lp.n_vars
    offset, Tmap, caps = _variable_map(lp.lower, lp.upper)
    nz = Tmap.shape[1]

    rows, rels, rhs = [], [], []
    for c in lp.constraints:
        rows.append(c.coefficients @ Tmap)
        rels.append(c.relation)
        rhs.append(c.rhs - float(c.coefficients @ offset))
    for k, cap in caps:
        row = np.zeros(nz)
        row[k] = 1.0
        rows.append(row)
        rels.append(LE)
        rhs.append(cap)
    m = len(rows)
    A = np.array(rows).reshape(m, nz)
    b = np.array(rhs, dtype=float)

    # slack/surplus columns
    n_slack = sum(r != EQ for r in rels)
    S = np.zeros((m, n_slack))
    k = 0
    for i, r in enumerate(rels):
        if r == LE:
            S[i, k] = 1.0
            k += 1
        elif r == GE:
            S[i, k] = -1.0
            k += 1
    A = np.hstack([A, S])
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0

    # initial basis: a +1 slack where available, artificial otherwise
    basis = []
    art_rows = []
    for i in range(m):
        hit = [nz + j for j in range(n_slack) if S[i, j] != 0 and A[i, nz + j] == 1.0]
        if hit:
            basis.append(hit[0])
        else:
            basis.append(None)
            art_rows.append(i)
    n_std = nz + n_slack
    n_art = len(art_rows)
    Art = np.zeros((m, n_art))
    for k, i in enumerate(art_rows):
        Art[i, k] = 1.0
        basis[i] = n_std + k
    A_full = np.hstack([A, Art])
    tab = _Tableau(A_full, b, basis)

    b_scale = max(1.0, float(np.max(np.abs(b), initial=0.0)))
    if n_art:
        cost1 = np.zeros(n_std + n_art)
        cost1[n_std:] = 1.0
        tab.run(cost1, range(n_std + n_art))
        phase1 = float(tab.T[:, -1] @ cost1[tab.basis])
        if phase1 > FEAS_TOL * b_scale:
            return LpOutcome("infeasible")
        # drive artificials out of the basis, dropping redundant rows
        keep = []
        for i in range(tab.T.shape[0]):
            if tab.basis[i] >= n_std:
                cand = [j for j in range(n_std) if abs(tab.T[i, j]) > 1e-9]
                if cand:
                    tab.pivot(i, cand[0])
                    keep.append(i)
            else:
                keep.append(i)
        tab.T = tab.T[keep]
        tab.basis = [tab.basis[i] for i in keep]
        A_full = A_full[keep]
        b = b[keep]

    sgn = 1.0 if lp.sense == "min" else -1.0
    cost2 = np.zeros(A_full.shape[1])
    cost2[:nz] = sgn * (lp.objective @ Tmap)
    status = tab.run(cost2, range(n_std))
    if status == "unbounded":
        j = tab.unbounded_column
        d = np.zeros(A_full.shape[1])
        d[j] = 1.0
        for i, bi in enumerate(tab.basis):
            d[bi] = -tab.T[i, j]
        return LpOutcome("unbounded", ray=Tmap @ d[:nz])

    z = np.zeros(A_full.shape[1])
    z[tab.basis] = tab.T[:, -1]
    # refine basic values against the original columns
    if tab.basis:
        try:
            zb = lu_factor(A_full[:, tab.basis]).solve(b)
            if np.all(zb >= -FEAS_TOL):
                z[:] = 0.0
                z[tab.basis] = zb
        except SingularMatrixError:
            pass
    z = np.maximum(z, 0.0)
    x = offset + Tmap @ z[:nz]
    return LpOutcome("optimal", point=x, value=float(lp.objective @ x))


def feasible(constraints, n=None, lower=None, upper=None):
    """Return a point satisfying all constraints, or ``None`` if infeasible."""
    if n is None:
        if not constraints:
            raise ValueError("need n when no constraints are given")
        n = len(constraints[0].coefficients)
    out = solve(LinearProgram(np.zeros(n), list(constraints), lower=lower, upper=upper))
    return out.point if out.optimal else None
