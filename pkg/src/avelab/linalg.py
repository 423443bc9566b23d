"""Dense linear algebra kernels with explicit tolerance contracts.

Everything here works on small dense float64 arrays (n <= 16 or so).  The
routines are written out by hand rather than delegated to LAPACK so that
the singularity and convergence thresholds are exactly the ones the rest
of the package reasons about; the test-suite compares them against
``numpy.linalg``.
"""

from collections import namedtuple
from dataclasses import dataclass
import math

import numpy as np

from ._validation import DimensionError, check_matrix, check_symmetric, check_vector

#: pivot < SINGULAR_RTOL * ||M||_inf declares M singular
SINGULAR_RTOL = 1e-10
#: decision margin for strict spectral comparisons
DECISION_MARGIN = 1e-6

Inertia = namedtuple("Inertia", ["n_pos", "n_neg", "n_zero"])


class SingularMatrixError(np.linalg.LinAlgError):
    """Raised when a pivot falls below the singularity threshold."""


@dataclass
class LUFactor:
    lu: np.ndarray
    perm: np.ndarray
    sign: float
    singular: bool
    min_pivot: float
    scale: float

    @property
    def det(self):
        return self.sign * float(np.prod(np.diag(self.lu)))

    def solve(self, rhs):
        if self.singular:
            raise SingularMatrixError("matrix is numerically singular")
        rhs = np.asarray(rhs, dtype=float)
        y = rhs[self.perm].copy()
        n = self.lu.shape[0]
        for k in range(n):
            y[k + 1:] -= np.multiply.outer(self.lu[k + 1:, k], y[k])
        for k in range(n - 1, -1, -1):
            y[k] = y[k] / self.lu[k, k]
            y[:k] -= np.multiply.outer(self.lu[:k, k], y[k])
        return y


def lu_factor(M, tol=SINGULAR_RTOL):
    """Gaussian elimination with partial pivoting.

    Elimination continues past tiny pivots (exact zeros are skipped) so that
    the determinant is still available; ``singular`` records whether any
    pivot magnitude was at or below ``tol * ||M||_inf``.
    """
    A = check_matrix(M).copy()
    n = A.shape[0]
    scale = float(np.max(np.sum(np.abs(A), axis=1))) if n else 0.0
    thresh = tol * scale
    perm = np.arange(n)
    sign = 1.0
    singular = scale == 0.0 and n > 0
    min_pivot = math.inf
    for k in range(n):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        if p != k:
            A[[k, p]] = A[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        pivot = A[k, k]
        min_pivot = min(min_pivot, abs(pivot))
        if abs(pivot) <= thresh:
            singular = True
        if pivot == 0.0:
            continue
        A[k + 1:, k] /= pivot
        A[k + 1:, k + 1:] -= np.outer(A[k + 1:, k], A[k, k + 1:])
    return LUFactor(A, perm, sign, singular, min_pivot, scale)


def lu_factor_solve(M, rhs, tol=SINGULAR_RTOL):
    """Solve ``M x = rhs``; raise :class:`SingularMatrixError` if singular."""
    M = check_matrix(M)
    rhs = check_vector(rhs, M.shape[0], name="rhs")
    return lu_factor(M, tol).solve(rhs)


def det(M):
    """Determinant via pivoted LU."""
    M = check_matrix(M)
    if M.shape[0] == 0:
        return 1.0
    return lu_factor(M).det


def inverse(M, tol=SINGULAR_RTOL):
    M = check_matrix(M)
    return lu_factor(M, tol).solve(np.eye(M.shape[0]))


def is_singular(M, tol=SINGULAR_RTOL):
    return lu_factor(M, tol).singular


def sym_eigenvalues(M, max_sweeps=60):
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.

    Returns the eigenvalues sorted in descending order.
    """
    A = check_symmetric(M).copy()
    A = 0.5 * (A + A.T)
    n = A.shape[0]
    fro = float(np.linalg.norm(A))
    if fro == 0.0:
        return np.zeros(n)
    target = 1e-12 * fro
    for _ in range(max_sweeps):
        off = math.sqrt(max(0.0, float(np.sum(A * A) - np.sum(np.diag(A) ** 2))))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-20 * fro:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p = A[:, p].copy()
                col_q = A[:, q]
                A[:, p] = c * col_p - s * col_q
                A[:, q] = s * col_p + c * col_q
                row_p = A[p, :].copy()
                row_q = A[q, :]
                A[p, :] = c * row_p - s * row_q
                A[q, :] = s * row_p + c * row_q
    return np.sort(np.diag(A))[::-1].copy()


def signature(M, tol=None):
    """Inertia triple (positive, negative, zero eigenvalue counts).

    ``tol`` defaults to ``1e-9 * max(1, ||M||_F)``.
    """
    M = check_symmetric(M)
    if tol is None:
        tol = 1e-9 * max(1.0, float(np.linalg.norm(M)))
    lam = sym_eigenvalues(M)
    return Inertia(int(np.sum(lam > tol)), int(np.sum(lam < -tol)),
                   int(np.sum(np.abs(lam) <= tol)))


def perron_bounds(M, rtol=1e-12, max_iter=80):
    """Collatz-Wielandt bracket ``(lo, hi)`` for the Perron root of ``M >= 0``.

    For any positive ``x``, ``min(Mx/x) <= rho(M) <= max(Mx/x)``.  Iterates
    come from shifted powers ``(Q + c I)^(2^k)`` formed by repeated squaring,
    so periodic and defective matrices do not stall.  Two runs are made: one
    on ``M`` itself and one on ``M + eps*ee^T`` (eps = 1e-12 * max entry).
    The positive perturbation closes the bracket for reducible ``M``; the
    unperturbed run keeps ``hi`` honest when the perturbation would move a
    defective root by ``eps^(1/k)``.
    """
    lo, hi, _, _ = _perron_runs(M, rtol, max_iter)
    return lo, hi


def perron_vector(M, rtol=1e-12, max_iter=80):
    """Positive vector ``x`` (max entry 1) with ``M x <= hi * x`` and the bound ``hi``.

    ``x`` weights the max norm ``||v||_x = max |v_i| / x_i`` in which ``M`` has
    induced norm at most ``hi``.
    """
    M = _check_nonneg(M)
    P = _perturbed(M)
    _, hi, x = _perron_iterate(P, rtol, max_iter)
    return hi, x


def _check_nonneg(M):
    M = check_matrix(M)
    if np.any(M < 0):
        raise ValueError("matrix has negative entries")
    return M


def _perturbed(M):
    mmax = float(np.max(M)) if M.size else 0.0
    return M + 1e-12 * mmax


def _perron_runs(M, rtol, max_iter):
    """Rigorous bracket from both runs, plus the perturbed midpoint."""
    M = _check_nonneg(M)
    lo0, hi0, _ = _perron_iterate(M, rtol, max_iter)
    lo1, hi1, _ = _perron_iterate(_perturbed(M), rtol, max_iter)
    hi = min(hi0, hi1)
    return lo0, hi, 0.5 * (lo1 + hi1), hi0 - lo0 <= rtol * hi0


def _perron_iterate(Q, rtol, max_iter):
    n = Q.shape[0]
    if n == 0 or float(np.max(Q)) == 0.0:
        return 0.0, 0.0, np.ones(n)
    shift = float(np.max(Q.sum(axis=1)))
    # B holds (Q + shift I)^(2^k), rescaled; x <- B x applies 2^k power steps
    B = (Q + shift * np.eye(n)) / (2.0 * shift)
    x = np.ones(n)
    lo, hi = 0.0, shift
    for _ in range(max_iter):
        ratios = (Q @ x) / x
        lo, hi = float(ratios.min()), float(ratios.max())
        if hi - lo <= rtol * hi:
            break
        x = B @ x
        x = Q @ x + shift * x
        x /= x.max()
        if x.min() <= 0.0:
            # underflow in a reducible direction; keep x positive
            x = np.maximum(x, np.finfo(float).tiny ** 0.5)
        B = B @ B
        B /= float(np.max(B))
    return lo, hi, x


def spectral_radius_nonneg(M):
    """Perron root of an entrywise nonnegative matrix."""
    lo, hi, mid, closed = _perron_runs(M, 1e-12, 80)
    if closed:
        return 0.5 * (lo + hi)
    return max(lo, min(hi, mid))


def spectral_radius_general(M, max_doublings=40):
    """Gelfand estimate ``||M^(2^k)||_inf^(1/2^k)`` with renormalised squaring.

    Accurate to about 1e-6 at desk scale; callers comparing against a
    threshold should leave a margin of :data:`DECISION_MARGIN`.
    """
    M = check_matrix(M)
    norm = float(np.max(np.sum(np.abs(M), axis=1))) if M.shape[0] else 0.0
    if norm == 0.0:
        return 0.0
    B = M / norm
    log_scale = math.log(norm)  # log of the factor divided out of M^(2^k)
    estimate = norm
    power = 1
    for _ in range(max_doublings):
        B = B @ B
        power *= 2
        log_scale *= 2.0
        nb = float(np.max(np.sum(np.abs(B), axis=1)))
        if nb == 0.0:
            return 0.0
        B /= nb
        log_scale += math.log(nb)
        new = math.exp(log_scale / power)
        # M^(2^k) = 0 for nilpotent M once 2^k >= n, so never stop before that
        if power > M.shape[0] and abs(new - estimate) <= 1e-13 * max(new, 1e-300):
            return new
        estimate = new
    return estimate


def _gram_eigenvalues(M):
    M = check_matrix(M)
    G = M.T @ M
    return sym_eigenvalues(0.5 * (G + G.T))


def min_singular_value(M):
    return math.sqrt(max(0.0, float(_gram_eigenvalues(M)[-1])))


def spectral_norm(M):
    return math.sqrt(max(0.0, float(_gram_eigenvalues(M)[0])))


def row_basis(M, tol=1e-9):
    """Indices of a maximal set of linearly independent rows of ``M``.

    Gaussian elimination with complete pivoting; a pivot below
    ``tol * max|M|`` ends the elimination.  Returns ``(rank, rows)``.
    """
    A = np.array(M, dtype=float)
    if A.ndim != 2:
        raise DimensionError("row_basis expects a 2-D array")
    m, n = A.shape
    scale = float(np.max(np.abs(A))) if A.size else 0.0
    rows = list(range(m))
    rank = 0
    for k in range(min(m, n)):
        sub = np.abs(A[k:, k:])
        i, j = np.unravel_index(int(np.argmax(sub)), sub.shape)
        if sub[i, j] <= tol * scale or scale == 0.0:
            break
        i += k
        j += k
        A[[k, i]] = A[[i, k]]
        rows[k], rows[i] = rows[i], rows[k]
        A[:, [k, j]] = A[:, [j, k]]
        A[k + 1:, k:] -= np.outer(A[k + 1:, k] / A[k, k], A[k, k:])
        rank += 1
    return rank, sorted(rows[:rank])


def matrix_rank(M, tol=1e-9):
    return row_basis(M, tol)[0]
