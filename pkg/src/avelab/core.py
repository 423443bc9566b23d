"""Absolute value equations ``Ax + |x| = b``: orthant pieces and solution sets.

Inside the closed orthant ``D_s x >= 0`` the absolute value is linear,
``|x| = D_s x``, so the part of the solution set lying there is the polyhedron
``{x : (A + D_s) x = b, D_s x >= 0}``.  Enumerating all ``2^n`` orthants gives
an exact description of the whole solution set at desk scale.
"""

from dataclasses import dataclass, field
from itertools import combinations, product
import logging

import numpy as np

from ._validation import DimensionError, check_matrix, check_sign_vector, check_vector
from . import linalg
from .lp import EQ, LinearConstraint, feasible

logger = logging.getLogger(__name__)

SIGN_TOL = 1e-9
DEDUP_TOL = 1e-8
DEFAULT_ENUM_LIMIT = 12


def sign_vectors(n):
    """All ``s`` in ``{-1, +1}^n`` in lexicographic order (-1 before +1)."""
    for s in product((-1.0, 1.0), repeat=n):
        yield np.array(s)


def sgn(x, tol=0.0):
    """Entrywise sign with ``sgn(0) = 0``; ``|x_i| <= tol`` counts as zero."""
    x = np.asarray(x, dtype=float)
    out = np.sign(x)
    out[np.abs(x) <= tol] = 0.0
    return out


@dataclass
class AveInstance:
    """The system ``A x + |x| = b``."""

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        self.A = check_matrix(self.A, name="A")
        self.b = check_vector(self.b, self.A.shape[0], name="b")

    @property
    def n(self):
        return self.A.shape[0]

    def orthant_matrix(self, s):
        return self.A + np.diag(s)


@dataclass
class OrthantPiece:
    """Part of the solution set inside one closed orthant."""

    s: np.ndarray
    status: str  # "empty" | "point" | "polytope" | "unbounded"
    dim: int = -1
    vertices: list = field(default_factory=list)
    rays: list = field(default_factory=list)
    matrix_singular: bool = False

    @property
    def is_empty(self):
        return self.status == "empty"

    @property
    def is_infinite(self):
        return self.status in ("polytope", "unbounded")

    def contains(self, inst, x, tol=1e-8):
        r = inst.orthant_matrix(self.s) @ x - inst.b
        return bool(np.max(np.abs(r), initial=0.0) <= tol and np.all(self.s * x >= -tol))

    def sample(self, rng, ray_scale=1.0):
        """Random point of the piece: convex combination of vertices plus
        nonnegative combination of rays."""
        V = np.array(self.vertices)
        w = rng.dirichlet(np.ones(len(V)))
        x = w @ V
        for r in self.rays:
            x = x + rng.exponential(ray_scale) * r
        return x

    def to_dict(self):
        return {
            "s": [int(v) for v in self.s],
            "status": self.status,
            "dim": self.dim,
            "vertices": [v.tolist() for v in self.vertices],
            "rays": [r.tolist() for r in self.rays],
            "matrix_singular": self.matrix_singular,
        }


@dataclass
class SolutionSetDescription:
    pieces: list
    is_empty: bool
    is_finite: bool
    is_bounded: bool
    sign_consistent: bool
    is_connected: bool
    points: list
    infinite_orthant_count: int
    consistent_sign: np.ndarray = None

    def to_dict(self):
        return {
            "is_empty": self.is_empty,
            "is_finite": self.is_finite,
            "is_bounded": self.is_bounded,
            "sign_consistent": self.sign_consistent,
            "is_connected": self.is_connected,
            "infinite_orthant_count": self.infinite_orthant_count,
            "points": [p.tolist() for p in self.points] if self.is_finite else None,
            "pieces": [p.to_dict() for p in self.pieces],
        }


def residual(inst, x):
    """``A x + |x| - b``."""
    x = check_vector(x, inst.n, name="x")
    return inst.A @ x + np.abs(x) - inst.b


def is_solution(inst, x, tol=1e-8):
    return bool(np.max(np.abs(residual(inst, x)), initial=0.0) <= tol)


def _dedup(vectors, tol=DEDUP_TOL):
    out = []
    for v in vectors:
        if not any(np.max(np.abs(v - u), initial=0.0) <= tol for u in out):
            out.append(v)
    return out


def _normalize_ray(r):
    return r / np.max(np.abs(r)) + 0.0


def orthant_piece(inst, s):
    """Solution-set piece of ``inst`` in the orthant ``D_s x >= 0``."""
    n = inst.n
    s = check_sign_vector(s, n)
    M = inst.orthant_matrix(s)
    lu = linalg.lu_factor(M)
    if not lu.singular:
        x = lu.solve(inst.b)
        if np.all(s * x >= -SIGN_TOL):
            return OrthantPiece(s, "point", 0, [x + 0.0], [])
        return OrthantPiece(s, "empty")

    # singular: work in y = D_s x >= 0, where (A D_s + I) y = b
    N = M * s  # scales column j by s_j
    cons = [LinearConstraint(N[i], EQ, inst.b[i]) for i in range(n)]
    if feasible(cons, n, lower=np.zeros(n)) is None:
        return OrthantPiece(s, "empty", matrix_singular=True)
    rank, rows = linalg.row_basis(N)
    Nr, br = N[rows], inst.b[rows]

    verts, rays = [], []
    for cols in combinations(range(n), rank):
        cols = list(cols)
        if rank:
            f = linalg.lu_factor(Nr[:, cols])
            if f.singular:
                continue
            yb = f.solve(br)
        else:
            f, yb = None, np.zeros(0)
        if np.all(yb >= -SIGN_TOL):
            y = np.zeros(n)
            y[cols] = np.maximum(yb, 0.0)
            if np.max(np.abs(N @ y - inst.b), initial=0.0) <= 1e-8 * (1 + np.max(np.abs(inst.b))):
                verts.append(s * y + 0.0)
        for j in range(n):
            if j in cols:
                continue
            d = np.zeros(n)
            d[j] = 1.0
            if rank:
                d[cols] = -f.solve(Nr[:, j])
            if np.all(d >= -SIGN_TOL):
                d = np.maximum(d, 0.0)
                rays.append(_normalize_ray(s * d))
    verts = _dedup(verts)
    rays = _dedup(rays, 1e-9)
    if not verts:
        # LP said feasible but no basic solution survived the tolerances
        logger.warning("no vertex recovered in orthant %s", s)
        return OrthantPiece(s, "empty", matrix_singular=True)
    span = [v - verts[0] for v in verts[1:]] + rays
    dim = linalg.matrix_rank(np.array(span)) if span else 0
    if rays:
        status = "unbounded"
    elif len(verts) == 1:
        status = "point"
    else:
        status = "polytope"
    return OrthantPiece(s, status, dim, verts, rays, matrix_singular=True)


def _check_limit(n, enum_limit):
    if n > enum_limit:
        raise DimensionError(f"n = {n} exceeds the enumeration limit {enum_limit}")


def _pieces_touch(inst, p, q):
    for v in p.vertices:
        if np.all(q.s * v >= -SIGN_TOL):
            return True
    for v in q.vertices:
        if np.all(p.s * v >= -SIGN_TOL):
            return True
    n = inst.n
    cons = [LinearConstraint(row, EQ, bi)
            for M in (inst.orthant_matrix(p.s), inst.orthant_matrix(q.s))
            for row, bi in zip(M, inst.b)]
    lower = np.where((p.s > 0) & (q.s > 0), 0.0, -np.inf)
    upper = np.where((p.s < 0) & (q.s < 0), 0.0, np.inf)
    mixed = p.s != q.s
    lower[mixed] = 0.0
    upper[mixed] = 0.0
    return feasible(cons, n, lower=lower, upper=upper) is not None


def _connected(inst, pieces):
    parent = list(range(len(pieces)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            ri, rj = find(i), find(j)
            if ri != rj and _pieces_touch(inst, pieces[i], pieces[j]):
                parent[rj] = ri
    return len({find(i) for i in range(len(pieces))}) <= 1


def _consistent_sign(pieces, n):
    """Sign vector of a closed orthant containing every piece, or None."""
    s = np.ones(n)
    for i in range(n):
        vals = [v[i] for p in pieces for v in p.vertices] + [r[i] for p in pieces for r in p.rays]
        if all(v >= -SIGN_TOL for v in vals):
            s[i] = 1.0
        elif all(v <= SIGN_TOL for v in vals):
            s[i] = -1.0
        else:
            return None
    return s


def enumerate_solution_set(inst, enum_limit=DEFAULT_ENUM_LIMIT):
    """Exact description of ``{x : A x + |x| = b}`` by orthant enumeration."""
    _check_limit(inst.n, enum_limit)
    pieces = [p for p in (orthant_piece(inst, s) for s in sign_vectors(inst.n)) if not p.is_empty]
    is_empty = not pieces
    is_finite = all(p.status == "point" for p in pieces)
    is_bounded = all(not p.rays for p in pieces)
    consistent = _consistent_sign(pieces, inst.n)
    points = _dedup([p.vertices[0] for p in pieces]) if is_finite else []
    return SolutionSetDescription(
        pieces=pieces,
        is_empty=is_empty,
        is_finite=is_finite,
        is_bounded=is_bounded,
        sign_consistent=consistent is not None,
        is_connected=_connected(inst, pieces),
        points=points,
        infinite_orthant_count=sum(p.is_infinite for p in pieces),
        consistent_sign=consistent,
    )


def is_isolated(inst, x_star, tol=1e-8):
    """Whether the solution ``x_star`` is isolated.

    Checks nonsingularity of ``A + D_s`` for every orthant containing
    ``x_star`` (``2^k`` orthants, ``k`` = number of zero coordinates).
    """
    x_star = check_vector(x_star, inst.n, name="x_star")
    if not is_solution(inst, x_star, tol):
        raise ValueError("x_star is not a solution")
    s_star = sgn(x_star, tol)
    zeros = np.flatnonzero(s_star == 0)
    for fill in product((-1.0, 1.0), repeat=len(zeros)):
        s = s_star.copy()
        s[zeros] = fill
        if linalg.is_singular(inst.orthant_matrix(s)):
            return False
    return True


@dataclass
class OrthantCensus:
    count: int
    diagnostics: dict


class InternalConsistencyError(AssertionError):
    """A computed solution set contradicts a proven structural fact."""


def infinite_orthant_census(inst, enum_limit=DEFAULT_ENUM_LIMIT, description=None):
    """Count orthants holding infinitely many solutions.

    At most ``2^n - 1`` orthants can; when exactly that many do, ``b = 0``,
    ``det A`` equals the product of the diagonal and ``|a_ii| = 1``.
    """
    desc = description or enumerate_solution_set(inst, enum_limit)
    n = inst.n
    count = desc.infinite_orthant_count
    diag = {"n": n, "limit": 2 ** n - 1, "violations": []}
    if count >= 2 ** n:
        raise InternalConsistencyError("every orthant reported infinitely many solutions")
    if count == 2 ** n - 1:
        A = inst.A
        scale = max(1.0, float(np.max(np.abs(A))) ** n)
        checks = {
            "b_zero": bool(np.max(np.abs(inst.b)) <= 1e-9),
            "det_is_diagonal_product": bool(
                abs(linalg.det(A) - float(np.prod(np.diag(A)))) <= 1e-9 * scale),
            "unit_diagonal": bool(np.all(np.abs(np.abs(np.diag(A)) - 1.0) <= 1e-9)),
        }
        diag["checks"] = checks
        diag["violations"] = [k for k, ok in checks.items() if not ok]
        if diag["violations"]:
            raise InternalConsistencyError(
                f"2^n - 1 infinite orthants but {diag['violations']} fail")
    return OrthantCensus(count, diag)
