"""Matrix-class predicates for absolute value equations.

Each predicate returns a :class:`Verdict` whose ``value`` is ``True``,
``False`` or ``None`` (unknown: the decision sits inside a numerical margin
or beyond an enumeration limit).  Decided verdicts carry a certificate that
can be re-checked without trusting the code that produced it.
"""

from dataclasses import dataclass, field
from itertools import product
import math
from typing import Any, Optional

import numpy as np

from ._validation import check_matrix, check_symmetric, is_symmetric
from . import linalg
from .core import DEFAULT_ENUM_LIMIT, sign_vectors
from .linalg import DECISION_MARGIN
from .lp import EQ, LinearConstraint, feasible

INV_NONNEG_TOL = 1e-10
DET_RTOL = 1e-9
DEFAULT_CONVEXITY_LIMIT = 6


@dataclass
class Verdict:
    value: Optional[bool]
    method: str
    certificate: Any = None
    details: dict = field(default_factory=dict)

    @property
    def is_true(self):
        return self.value is True

    @property
    def is_false(self):
        return self.value is False

    @property
    def is_unknown(self):
        return self.value is None

    def to_dict(self):
        return {
            "value": "unknown" if self.value is None else self.value,
            "method": self.method,
            "certificate": _jsonable(self.certificate),
            "details": _jsonable(self.details),
        }


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return _jsonable(obj.item())
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


@dataclass
class ClassificationReport:
    verdicts: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.verdicts[key]

    def __setitem__(self, key, verdict):
        self.verdicts[key] = verdict

    def __contains__(self, key):
        return key in self.verdicts

    def items(self):
        return self.verdicts.items()

    def to_dict(self):
        return {k: v.to_dict() for k, v in self.verdicts.items()}


@dataclass
class IntervalMatrix:
    """The set of matrices entrywise between ``lo`` and ``hi``."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        self.lo = check_matrix(self.lo, name="lo")
        self.hi = check_matrix(self.hi, name="hi")
        if self.lo.shape != self.hi.shape:
            raise ValueError("bound matrices differ in shape")
        if np.any(self.lo > self.hi):
            raise ValueError("lo must not exceed hi")

    @classmethod
    def from_midpoint(cls, mid, rad):
        mid = check_matrix(mid)
        rad = np.broadcast_to(np.asarray(rad, dtype=float), mid.shape)
        return cls(mid - rad, mid + rad)

    @property
    def midpoint(self):
        return 0.5 * (self.lo + self.hi)

    @property
    def radius(self):
        return 0.5 * (self.hi - self.lo)


def strictly_less(value, bound, margin=DECISION_MARGIN):
    """Three-valued ``value < bound`` with an undecided band of width ``margin``."""
    if value < bound - margin:
        return True
    if value > bound + margin:
        return False
    return None


def _hadamard(M):
    return float(np.prod(np.linalg.norm(M, axis=1)))


def _over_limit(method, n, limit):
    return Verdict(None, method, details={"reason": f"n = {n} exceeds limit {limit}"})


def is_z_matrix(A):
    A = check_matrix(A)
    off = A - np.diag(np.diag(A))
    return bool(np.all(off <= 0))


def is_m_matrix(A):
    """Z-matrix with a nonnegative inverse."""
    A = check_matrix(A)
    if not is_z_matrix(A):
        return False
    f = linalg.lu_factor(A)
    if f.singular:
        return False
    return bool(np.all(f.solve(np.eye(A.shape[0])) >= -INV_NONNEG_TOL))


def _nonneg_inverse(M):
    """``(inverse or None, first negative entry or None)``."""
    f = linalg.lu_factor(M)
    if f.singular:
        return None, None
    R = f.solve(np.eye(M.shape[0]))
    bad = np.argwhere(R < -INV_NONNEG_TOL)
    return R, (tuple(int(i) for i in bad[0]) if len(bad) else None)


# ----------------------------------------------------------------------------
# unique solvability


def unique_solvability_oracle(A, enum_limit=DEFAULT_ENUM_LIMIT):
    """Regularity of ``[A - I, A + I]``, i.e. unique solvability for every b.

    The interval is regular iff ``det(A + D_s)`` is nonzero with one sign over
    all ``s in {-1, 1}^n``.  A numerically singular ``A + D_s`` is itself a
    singular member and decides ``False``.
    """
    A = check_matrix(A, name="A")
    n = A.shape[0]
    method = "vertex-determinants"
    if n > enum_limit:
        return _over_limit(method, n, enum_limit)
    ref = None
    borderline = None
    for s in sign_vectors(n):
        M = A + np.diag(s)
        f = linalg.lu_factor(M)
        if f.singular:
            return Verdict(False, method, {"singular_s": s})
        d = f.det
        if abs(d) < DET_RTOL * _hadamard(M):
            borderline = borderline if borderline is not None else s
            continue
        sign = 1.0 if d > 0 else -1.0
        if ref is None:
            ref = (s, sign)
        elif sign != ref[1]:
            return Verdict(False, method, {"sign_change": (ref[0], s)})
    if borderline is not None:
        return Verdict(None, method, details={"borderline_s": borderline})
    return Verdict(True, method, {"det_sign": ref[1]})


def regularity_sufficient(A):
    """Cheap sufficient tests for regularity of ``[A - I, A + I]``."""
    A = check_matrix(A, name="A")
    n = A.shape[0]
    rep = ClassificationReport()

    f = linalg.lu_factor(A)
    if f.singular:
        rep["rho_abs_inverse"] = Verdict(False, "rho(|A^-1|) < 1", details={"reason": "A singular"})
    else:
        rho = linalg.spectral_radius_nonneg(np.abs(f.solve(np.eye(n))))
        rep["rho_abs_inverse"] = Verdict(strictly_less(rho, 1.0), "rho(|A^-1|) < 1",
                                         rho, {"rho": rho})

    smin = linalg.min_singular_value(A)
    rep["sigma_min"] = Verdict(strictly_less(-smin, -1.0), "sigma_min(A) > 1", smin,
                               {"sigma_min": smin})

    if is_symmetric(A):
        sig_m = linalg.signature(A - np.eye(n))
        sig_p = linalg.signature(A + np.eye(n))
        same = sig_m == sig_p and sig_m.n_zero == 0
        rep["symmetric_signature"] = Verdict(
            same, "signature(A - I) == signature(A + I)",
            {"minus": tuple(sig_m), "plus": tuple(sig_p)})
    else:
        rep["symmetric_signature"] = Verdict(None, "signature(A - I) == signature(A + I)",
                                             details={"reason": "A not symmetric"})
    return rep


# ----------------------------------------------------------------------------
# nonnegativity


def nonneg_unique_solvability(A):
    """Unique nonnegative solution for every ``b >= 0`` iff ``(A + I)^-1 >= 0``."""
    A = check_matrix(A, name="A")
    R, bad = _nonneg_inverse(A + np.eye(A.shape[0]))
    method = "(A + I)^-1 >= 0"
    if R is None:
        return Verdict(False, method, details={"reason": "A + I singular"})
    if bad is not None:
        return Verdict(False, method, {"inverse": R, "negative_entry": bad})
    return Verdict(True, method, {"inverse": R})


def rank_one_factor(A, tol=1e-8):
    """``(u, v)`` with ``A = u v^T`` when A has numerical rank one, else None."""
    A = check_matrix(A)
    amax = float(np.max(np.abs(A)))
    if amax == 0.0:
        return None
    i, j = np.unravel_index(int(np.argmax(np.abs(A))), A.shape)
    u = A[:, j].copy()
    v = A[i, :] / A[i, j]
    if np.max(np.abs(A - np.outer(u, v))) <= tol * amax:
        return u, v
    return None


def _sherman_morrison_inverse(u, w):
    """``(I + u w^T)^-1`` or None when singular."""
    c = 1.0 + float(w @ u)
    if abs(c) <= 1e-12 * max(1.0, float(np.abs(w) @ np.abs(u))):
        return None
    return np.eye(u.shape[0]) - np.outer(u, w) / c


def _rank_one_candidates(u, v, free_limit):
    """Sign vectors that can make ``(I + u (D_s v)^T)^-1`` nonnegative.

    Off-diagonal entries are ``-u_i s_j v_j / c`` with ``c = 1 + sum s_j v_j u_j``,
    which pins ``s_j`` once the sign of ``c`` is guessed.  Coordinates left
    unconstrained are enumerated.
    """
    n = u.shape[0]
    for c_sign in (1.0, -1.0):
        forced = np.zeros(n)
        ok = True
        for j in range(n):
            if v[j] == 0:
                continue
            others = np.delete(u, j)
            others = others[others != 0]
            if others.size == 0:
                continue
            if np.all(others > 0):
                forced[j] = -c_sign * np.sign(v[j])
            elif np.all(others < 0):
                forced[j] = c_sign * np.sign(v[j])
            else:
                ok = False
                break
        if not ok:
            continue
        free = np.flatnonzero(forced == 0)
        if free.size > free_limit:
            yield None
            continue
        for fill in product((-1.0, 1.0), repeat=free.size):
            s = forced.copy()
            s[free] = fill
            yield s


def orthant_solvability_search(A, enum_limit=DEFAULT_ENUM_LIMIT, factor=None):
    """Find ``s`` with ``(A D_s + I)^-1 >= 0`` (solvability for all ``b >= 0``).

    Rank-one matrices use the Sherman-Morrison form and a sign-pattern
    reduction, so they are handled at any size.
    """
    A = check_matrix(A, name="A")
    n = A.shape[0]
    if factor is None:
        factor = rank_one_factor(A)
    if factor is not None:
        u, v = (np.asarray(f, dtype=float) for f in factor)
        method = "sherman-morrison"
        hit_limit = False
        for s in _rank_one_candidates(u, v, enum_limit):
            if s is None:
                hit_limit = True
                continue
            R = _sherman_morrison_inverse(u, s * v)
            if R is not None and np.all(R >= -INV_NONNEG_TOL):
                return Verdict(True, method, {"s": s, "inverse": R})
        if hit_limit:
            return Verdict(None, method, details={"reason": "too many free signs"})
        return Verdict(False, method, details={"searched": "all admissible sign patterns"})

    method = "orthant-enumeration"
    if n > enum_limit:
        return _over_limit(method, n, enum_limit)
    for s in sign_vectors(n):
        R, bad = _nonneg_inverse(A * s + np.eye(n))
        if R is not None and bad is None:
            return Verdict(True, method, {"s": s, "inverse": R})
    return Verdict(False, method, details={"searched": 2 ** n})


def rho_sign_condition(A):
    """``rho(A) < 1`` and ``A D_s <= 0`` for some ``s``.

    Such ``s`` exists iff every column of A is of one sign; then the AVE is
    solvable for each ``b >= 0`` with a unique solution in orthant ``s``.
    """
    A = check_matrix(A, name="A")
    n = A.shape[0]
    method = "rho(A) < 1 and A D_s <= 0"
    s = np.ones(n)
    for j in range(n):
        col = A[:, j]
        if np.all(col <= 0):
            s[j] = 1.0
        elif np.all(col >= 0):
            s[j] = -1.0
        else:
            return Verdict(False, method, details={"mixed_column": j})
    rho = linalg.spectral_radius_general(A)
    details = {"rho": rho, "A_nonpositive": bool(np.all(A <= 0))}
    return Verdict(strictly_less(rho, 1.0), method, {"s": s, "rho": rho}, details)


def inverse_nonneg_interval(M, regular=None):
    """Inverse nonnegativity of an interval matrix.

    Kuttler: ``[lo, hi]`` is inverse nonnegative iff ``lo^-1 >= 0`` and
    ``hi^-1 >= 0``.  If a true regularity verdict is supplied, ``hi^-1 >= 0``
    alone suffices.
    """
    if not isinstance(M, IntervalMatrix):
        M = IntervalMatrix(*M)
    R_hi, bad_hi = _nonneg_inverse(M.hi)
    if regular is not None and regular.is_true:
        method = "regular + hi^-1 >= 0"
        if R_hi is None:
            return Verdict(False, method, details={"reason": "hi singular"})
        return Verdict(bad_hi is None, method, {"hi_inverse": R_hi, "negative_entry": bad_hi})
    method = "kuttler"
    R_lo, bad_lo = _nonneg_inverse(M.lo)
    if R_lo is None or R_hi is None:
        return Verdict(False, method, details={"reason": "a bound matrix is singular"})
    cert = {"lo_inverse": R_lo, "hi_inverse": R_hi}
    if bad_lo is not None or bad_hi is not None:
        cert["negative_entry"] = {"lo": bad_lo, "hi": bad_hi}
        return Verdict(False, method, cert)
    return Verdict(True, method, cert)


def interval_m_matrix(M):
    """``[lo, hi]`` is an M-matrix iff lo is one and hi is a Z-matrix."""
    if not isinstance(M, IntervalMatrix):
        M = IntervalMatrix(*M)
    method = "lo M-matrix and hi Z-matrix"
    if not is_z_matrix(M.lo):
        return Verdict(False, method, details={"reason": "lo has a positive off-diagonal entry"})
    if not is_z_matrix(M.hi):
        return Verdict(False, method, details={"reason": "hi has a positive off-diagonal entry"})
    R, bad = _nonneg_inverse(M.lo)
    if R is None:
        return Verdict(False, method, details={"reason": "lo singular"})
    if bad is not None:
        return Verdict(False, method, {"lo_inverse": R, "negative_entry": bad})
    return Verdict(True, method, {"lo_inverse": R})


def interval_pd_rank1(A, enum_limit=DEFAULT_ENUM_LIMIT):
    """Positive definiteness of ``[A - ee^T, A + ee^T]`` for symmetric A.

    The minimum of ``x^T (A + Delta) x`` over symmetric ``|Delta| <= ee^T`` is
    attained at ``Delta = -z z^T`` with ``z = sgn(x)``, so it suffices to check
    ``A - z z^T`` for ``z in {-1, 1}^n`` up to sign.
    """
    A = check_symmetric(A, rtol=1e-12, name="A")
    n = A.shape[0]
    lam_min = float(linalg.sym_eigenvalues(A)[-1])
    if lam_min > n + DECISION_MARGIN:
        return Verdict(True, "lambda_min(A) > n", lam_min, {"lambda_min": lam_min})
    method = "rank-one vertices"
    if n > enum_limit:
        return _over_limit(method, n, enum_limit)
    borderline = None
    for tail in product((-1.0, 1.0), repeat=n - 1):
        z = np.array((1.0,) + tail)
        lam = float(linalg.sym_eigenvalues(A - np.outer(z, z))[-1])
        if lam < -DECISION_MARGIN:
            return Verdict(False, method, {"z": z, "lambda_min": lam})
        if lam <= DECISION_MARGIN:
            borderline = borderline if borderline is not None else z
    if borderline is not None:
        return Verdict(None, method, details={"borderline_z": borderline})
    return Verdict(True, method, {"checked": 2 ** (n - 1)})


# ----------------------------------------------------------------------------
# finiteness and boundedness


def finiteness_all_b(A, enum_limit=DEFAULT_ENUM_LIMIT):
    """``S(b)`` finite for every b iff every ``A + D_s`` is nonsingular."""
    A = check_matrix(A, name="A")
    n = A.shape[0]
    method = "vertex-nonsingularity"
    if n > enum_limit:
        return _over_limit(method, n, enum_limit)
    borderline = None
    for s in sign_vectors(n):
        M = A + np.diag(s)
        f = linalg.lu_factor(M)
        if f.singular:
            return Verdict(False, method, {"singular_s": s})
        if abs(f.det) < DET_RTOL * _hadamard(M) and borderline is None:
            borderline = s
    if borderline is not None:
        return Verdict(None, method, details={"borderline_s": borderline})
    return Verdict(True, method, {"checked": 2 ** n})


def finiteness_sufficient(A, C=None):
    """Four sufficient conditions for finiteness of ``S(b)`` for every b."""
    A = check_matrix(A, name="A")
    n = A.shape[0]
    rep = ClassificationReport()
    absA = np.abs(A)

    lhs = linalg.spectral_radius_nonneg(absA + absA.T)
    gram_min = linalg.min_singular_value(A) ** 2
    rep["rho_sym_vs_gram"] = Verdict(
        strictly_less(lhs, 1.0 + gram_min), "rho(|A| + |A|^T) < 1 + lambda_min(A^T A)",
        {"lhs": lhs, "rhs": 1.0 + gram_min}, {"lhs": lhs, "rhs": 1.0 + gram_min})

    norm2 = linalg.spectral_norm(A)
    rep["spectral_norm_half"] = Verdict(strictly_less(norm2, 0.5), "||A||_2 < 1/2",
                                        norm2, {"norm2": norm2})

    rho = linalg.spectral_radius_nonneg(absA)
    rep["rho_abs"] = Verdict(strictly_less(rho, 1.0), "rho(|A|) < 1", rho, {"rho": rho})

    C = np.eye(n) if C is None else check_matrix(C, name="C")
    if C.shape != A.shape:
        raise ValueError("C must have the shape of A")
    rho_c = linalg.spectral_radius_nonneg(np.abs(C @ A) + np.abs(np.eye(n) - C))
    rep["rho_c_condition"] = Verdict(strictly_less(rho_c, 1.0), "rho(|CA| + |I - C|) < 1",
                                     {"C": C, "rho": rho_c}, {"rho": rho_c})
    return rep


def boundedness_all_b(A, enum_limit=DEFAULT_ENUM_LIMIT):
    """``S(b)`` bounded for every b iff ``Ax + |x| = 0`` has only ``x = 0``."""
    A = check_matrix(A, name="A")
    n = A.shape[0]
    method = "homogeneous-orthant-lp"
    if n > enum_limit:
        return _over_limit(method, n, enum_limit)
    for s in sign_vectors(n):
        M = A + np.diag(s)
        if not linalg.is_singular(M):
            continue
        cons = [LinearConstraint(row, EQ, 0.0) for row in M]
        cons.append(LinearConstraint(s.copy(), EQ, 1.0))
        x = feasible(cons, n, lower=np.where(s > 0, 0.0, -np.inf),
                     upper=np.where(s < 0, 0.0, np.inf))
        if x is not None:
            return Verdict(False, method, {"s": s, "x": x})
    return Verdict(True, method, {"checked": 2 ** n})


def convexity_all_b(A, convexity_limit=DEFAULT_CONVEXITY_LIMIT):
    """``S(b)`` convex for every b.

    Searches for ``x1, x2`` with ``A(x1 - x2) = |x2| - |x1|`` and
    ``x1_i * x2_i < 0`` for some i, one LP per unordered orthant pair and
    coordinate.  Strictness becomes ``s_i x_i >= 1`` by positive homogeneity.
    """
    A = check_matrix(A, name="A")
    n = A.shape[0]
    method = "orthant-pair-lp"
    if n > convexity_limit:
        return _over_limit(method, n, convexity_limit)
    signs = list(sign_vectors(n))
    for a in range(len(signs)):
        s1 = signs[a]
        M1 = A + np.diag(s1)
        for c in range(a + 1, len(signs)):
            s2 = signs[c]
            M2 = A + np.diag(s2)
            rows = np.hstack([M1, -M2])
            cons = [LinearConstraint(r, EQ, 0.0) for r in rows]
            base_lo = np.concatenate([np.where(s1 > 0, 0.0, -np.inf), np.where(s2 > 0, 0.0, -np.inf)])
            base_hi = np.concatenate([np.where(s1 < 0, 0.0, np.inf), np.where(s2 < 0, 0.0, np.inf)])
            for i in np.flatnonzero(s1 != s2):
                lo, hi = base_lo.copy(), base_hi.copy()
                for k, sk in ((i, s1[i]), (n + i, s2[i])):
                    if sk > 0:
                        lo[k] = 1.0
                    else:
                        hi[k] = -1.0
                z = feasible(cons, 2 * n, lower=lo, upper=hi)
                if z is not None:
                    x1, x2 = z[:n], z[n:]
                    return Verdict(False, method, {
                        "x1": x1, "x2": x2, "b": A @ x1 + np.abs(x1), "coordinate": int(i)})
    return Verdict(True, method, {"pairs_checked": len(signs) * (len(signs) - 1) // 2})
