"""Independent brute-force ground truth and hard-instance generators.

Nothing here calls the package's own factorizations, LP solver or
predicates: determinants and inverses come from ``numpy.linalg`` and
linear programs from ``scipy.optimize.linprog``.  Disagreement with the
main code path is therefore meaningful evidence of a bug.
"""

from dataclasses import dataclass, field
from itertools import product
import logging

import numpy as np
from scipy.optimize import linprog

from .core import AveInstance

logger = logging.getLogger(__name__)

_INV_TOL = 1e-10


def _signs(n):
    return [np.array(s) for s in product((-1.0, 1.0), repeat=n)]


def _lp_feasible(A_ub=None, b_ub=None, A_eq=None, b_eq=None, bounds=None, n=None):
    res = linprog(np.zeros(n), A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                  bounds=bounds, method="highs")
    return res.x if res.status == 0 else None


def _orthant_bounds(s):
    return [(0, None) if si > 0 else (None, 0) for si in s]


# ----------------------------------------------------------------------------
# grid scan


@dataclass
class GridScan:
    box: list
    step: float
    threshold: float
    hits: list = field(default_factory=list)

    @property
    def points(self):
        return np.array([p for p, _ in self.hits]).reshape(-1, 2)


def residual_grid_scan(inst, box=((-2.0, 2.0), (-2.0, 2.0)), step=0.01, threshold=0.02):
    """Grid points of a 2-D box where ``||Ax + |x| - b||_inf < threshold``."""
    A = np.asarray(inst.A, dtype=float)
    b = np.asarray(inst.b, dtype=float)
    if A.shape != (2, 2):
        raise ValueError("grid scan is only defined for n = 2")
    axes = [np.arange(lo, hi + 0.5 * step, step) for lo, hi in box]
    X, Y = np.meshgrid(*axes, indexing="ij")
    P = np.stack([X.ravel(), Y.ravel()], axis=1)
    R = np.max(np.abs(P @ A.T + np.abs(P) - b), axis=1)
    keep = R < threshold
    hits = [(p, float(r)) for p, r in zip(P[keep], R[keep])]
    return GridScan([tuple(map(float, bx)) for bx in box], step, threshold, hits)


# ----------------------------------------------------------------------------
# subset-sum and convexity gadgets


@dataclass
class SubsetSumCase:
    v: np.ndarray
    A: np.ndarray
    expected_finiteness: bool
    expected_boundedness: bool
    witness: np.ndarray = None

    def homogeneous_solution(self):
        """``x`` with ``|x| = e`` and ``A x + |x| = 0`` when a witness exists."""
        return None if self.witness is None else self.witness.copy()


def _check_natural(v):
    v = np.asarray(v)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("v must be a nonempty vector")
    if np.any(v < 0) or np.any(v != np.round(v)):
        raise ValueError("v must contain natural numbers")
    return v.astype(float)


def subset_sum_witness(v):
    """First ``s`` (lexicographic, -1 first) with ``v^T s = -1``, else None."""
    v = _check_natural(v)
    if v.size > 20:
        raise ValueError("exhaustive search limited to n <= 20")
    for s in product((-1, 1), repeat=v.size):
        if int(np.dot(s, v.astype(np.int64))) == -1:
            return np.array(s, dtype=float)
    return None


def subset_sum_instance(v):
    """``A = e v^T``: ``A + D_s`` is singular iff ``v^T s = -1``.

    The same ``s`` gives the homogeneous solution ``x = s``, so finiteness and
    boundedness for every b fail together.
    """
    v = _check_natural(v)
    s = subset_sum_witness(v)
    A = np.outer(np.ones(v.size), v)
    return SubsetSumCase(v, A, s is None, s is None, s)


def convexity_gadget(v):
    """``(n+1)``-dimensional AVE ``(e v^T) x + |x| = 0, v^T x + |y| = 0``.

    Its solution set is convex iff no ``s`` has ``v^T s = -1``.
    """
    v = _check_natural(v)
    n = v.size
    A = np.zeros((n + 1, n + 1))
    A[:n, :n] = np.outer(np.ones(n), v)
    A[n, :n] = v
    return AveInstance(A, np.zeros(n + 1))


def gadget_witness_points(v):
    """Two gadget solutions whose midpoint is not a solution, or None."""
    s = subset_sum_witness(v)
    if s is None:
        return None
    return np.append(s, 1.0), np.append(s, -1.0)


# ----------------------------------------------------------------------------
# inverse-nonnegative generator


def inverse_nonneg_matrix(N, alpha):
    """``alpha I - N``, checked to make ``[A - I, A + I]`` inverse nonnegative."""
    N = np.asarray(N, dtype=float)
    A = alpha * np.eye(N.shape[0]) - N
    if not kuttler_check(A):
        raise ValueError("alpha I - N does not give an inverse nonnegative interval")
    return A


def kuttler_check(A):
    """``(A - I)^-1 >= 0`` and ``(A + I)^-1 >= 0`` via ``numpy.linalg.inv``."""
    n = A.shape[0]
    for M in (A - np.eye(n), A + np.eye(n)):
        try:
            R = np.linalg.inv(M)
        except np.linalg.LinAlgError:
            return False
        if np.any(R < -_INV_TOL) or np.linalg.cond(M) > 1e12:
            return False
    return True


def inverse_nonneg_generator(n, seed=None, b=None, density=0.6, max_tries=1000):
    """Random AVE whose interval ``[A - I, A + I]`` is inverse nonnegative.

    ``A = alpha I - N`` with ``N >= 0`` sparse uniform and ``alpha`` uniform in
    ``(1 + rho(N), 2 + rho(N))``.  Both bounds are then M-matrices; every draw
    is re-verified and redrawn on failure.  ``b`` defaults to uniform in
    ``[-1, 1]^n``.
    """
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        N = rng.uniform(0.0, 1.0, (n, n)) * (rng.uniform(size=(n, n)) < density)
        rho = float(np.max(np.abs(np.linalg.eigvals(N)))) if n else 0.0
        alpha = 1.0 + rho + rng.uniform(0.0, 1.0)
        if alpha <= 1.0 + rho:
            continue
        A = alpha * np.eye(n) - N
        if kuttler_check(A):
            rhs = rng.uniform(-1.0, 1.0, n) if b is None else np.asarray(b, dtype=float)
            return AveInstance(A, rhs)
    raise RuntimeError("could not draw an inverse nonnegative instance")


def random_instance(n, seed=None, low=-2.0, high=2.0):
    rng = np.random.default_rng(seed)
    return AveInstance(rng.uniform(low, high, (n, n)), rng.uniform(low, high, n))


# ----------------------------------------------------------------------------
# brute-force predicates


def regular_by_determinants(A, rtol=1e-9):
    """Constant nonzero sign of ``det(A + D_s)``; None when a determinant is tiny."""
    A = np.asarray(A, dtype=float)
    signs = set()
    for s in _signs(A.shape[0]):
        M = A + np.diag(s)
        d = np.linalg.det(M)
        if abs(d) <= rtol * np.prod(np.linalg.norm(M, axis=1)):
            return None if abs(d) > 0 and np.linalg.matrix_rank(M) == M.shape[0] else False
        signs.add(d > 0)
    return len(signs) == 1


def finite_by_rank(A):
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    return all(np.linalg.matrix_rank(A + np.diag(s)) == n for s in _signs(n))


def finite_by_pd(A, tol=1e-9):
    """``A^T A + I + D_s A + A^T D_s`` positive definite for every ``s``."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    for s in _signs(n):
        D = np.diag(s)
        G = A.T @ A + np.eye(n) + D @ A + A.T @ D
        if np.linalg.eigvalsh(0.5 * (G + G.T))[0] <= tol:
            return False
    return True


def bounded_by_lp(A):
    """No nonzero ``x`` with ``Ax + |x| = 0`` (one LP per orthant)."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    for s in _signs(n):
        A_eq = np.vstack([A + np.diag(s), s[None, :]])
        b_eq = np.append(np.zeros(n), 1.0)
        if _lp_feasible(A_eq=A_eq, b_eq=b_eq, bounds=_orthant_bounds(s), n=n) is not None:
            return False
    return True


def solution_points(A, b):
    """Solutions in orthants where ``A + D_s`` is nonsingular, plus a flag telling
    whether some singular orthant is feasible (then the list is incomplete)."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    n = A.shape[0]
    pts, singular_hit = [], False
    for s in _signs(n):
        M = A + np.diag(s)
        if np.linalg.matrix_rank(M) < n:
            if _lp_feasible(A_eq=M, b_eq=b, bounds=_orthant_bounds(s), n=n) is not None:
                singular_hit = True
            continue
        x = np.linalg.solve(M, b)
        if np.all(s * x >= -1e-9) and not any(np.allclose(x, p, atol=1e-8) for p in pts):
            pts.append(x)
    return pts, singular_hit


def condition17_by_lp(A):
    """Brute-force auxiliary-LP exactness over vertex ``D``, index ``i`` and orthant ``s``."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    for d in _signs(n):
        obj = np.ones(n) @ (A + np.diag(d))
        for i in range(n):
            found = False
            for s in _signs(n):
                M = np.delete(A + np.diag(s), i, axis=0)
                A_ub = np.vstack([M, -obj[None, :]])
                b_ub = np.append(np.zeros(n - 1), -1.0)
                if _lp_feasible(A_ub=A_ub, b_ub=b_ub, bounds=_orthant_bounds(s), n=n) is not None:
                    found = True
                    break
            if not found:
                return False
    return True


def kkt16_by_lp(A):
    """Existence of ``u`` with ``|u| >= |A^T u|``, strict somewhere."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    for t in _signs(n):
        T = np.diag(t)
        base = np.vstack([-(T - A.T), -(T + A.T)])
        for i in range(n):
            A_ub = np.vstack([base, -(T - A.T)[i], -(T + A.T)[i]])
            b_ub = np.append(np.zeros(2 * n), [-1.0, -1.0])
            if _lp_feasible(A_ub=A_ub, b_ub=b_ub, bounds=_orthant_bounds(t), n=n) is not None:
                return True
    return False


def interval_pd_by_sampling(A, samples=100, seed=None):
    """Fraction of random symmetric members of ``[A - ee^T, A + ee^T]`` that are PD."""
    rng = np.random.default_rng(seed)
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    good = 0
    for _ in range(samples):
        U = rng.uniform(-1.0, 1.0, (n, n))
        U = np.triu(U) + np.triu(U, 1).T
        if rng.uniform() < 0.5:
            U = np.sign(U)  # vertex members are the hardest
        good += np.linalg.eigvalsh(A + U)[0] > 0
    return good / samples


def midpoint_is_solution(A, b, x1, x2, tol=1e-8):
    A = np.asarray(A, dtype=float)
    m = 0.5 * (np.asarray(x1) + np.asarray(x2))
    return bool(np.max(np.abs(A @ m + np.abs(m) - np.asarray(b))) <= tol)
