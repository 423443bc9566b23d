import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from avelab import oracle
from avelab._validation import DimensionError
from avelab.core import (AveInstance, InternalConsistencyError, enumerate_solution_set,
                         infinite_orthant_census, is_isolated, is_solution, orthant_piece,
                         residual, sgn, sign_vectors)

from conftest import SQ5, planar

PHI = (1 + SQ5) / 2


def check_piece(inst, p):
    M = inst.orthant_matrix(p.s)
    for v in p.vertices:
        assert np.max(np.abs(M @ v - inst.b)) <= 1e-8
        assert np.all(p.s * v >= -1e-9)
    for r in p.rays:
        assert np.max(np.abs(M @ r)) <= 1e-8
        assert np.all(p.s * r >= -1e-9)
        assert np.max(np.abs(r)) == pytest.approx(1.0)
    if p.status == "point":
        assert len(p.vertices) == 1 and not p.rays and p.dim == 0
    if p.status == "unbounded":
        assert p.rays and p.dim >= 1
    if p.status == "polytope":
        assert not p.rays and len(p.vertices) >= 2 and p.dim >= 1


def distance_to_piece(inst, p, x):
    """inf-norm distance from ``x`` to a piece, by LP over the orthant system."""
    n = inst.n
    M = inst.orthant_matrix(p.s)
    c = np.append(np.zeros(n), 1.0)
    I = np.eye(n)
    A_ub = np.vstack([np.hstack([-I, -np.ones((n, 1))]), np.hstack([I, -np.ones((n, 1))]),
                      np.hstack([-np.diag(p.s), np.zeros((n, 1))])])
    b_ub = np.concatenate([-x, x, np.zeros(n)])
    A_eq = np.hstack([M, np.zeros((n, 1))])
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=inst.b,
                  bounds=[(None, None)] * n + [(0, None)], method="highs")
    return res.fun if res.status == 0 else np.inf


def small_integer_instance(seed, n=2, b_zero=False):
    g = np.random.default_rng(seed)
    A = g.integers(-2, 3, (n, n)).astype(float)
    b = np.zeros(n) if b_zero else g.integers(-2, 3, n).astype(float)
    return AveInstance(A, b)


class TestInstance:
    def test_rejects_bad_shapes(self):
        with pytest.raises(DimensionError):
            AveInstance(np.ones((2, 3)), [1, 1])
        with pytest.raises(DimensionError):
            AveInstance(np.eye(2), [1, 1, 1])

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            AveInstance([[np.nan]], [0])

    def test_sign_vectors_lexicographic(self):
        got = [tuple(s) for s in sign_vectors(2)]
        assert got == [(-1, -1), (-1, 1), (1, -1), (1, 1)]

    def test_sgn_keeps_zero(self):
        np.testing.assert_array_equal(sgn([-2.0, 0.0, 1e-12, 3.0], tol=1e-9), [-1, 0, 0, 1])


class TestResidual:
    @pytest.mark.parametrize("A, b, x", [
        ([[1, 2], [2, 1]], [2, 2], [1, 0]),
        (np.eye(2), [0, 0], [-1, -1]),
    ])
    def test_zero_residual(self, A, b, x):
        np.testing.assert_array_equal(residual(AveInstance(A, b), x), [0, 0])

    def test_origin_gives_minus_b(self, rng):
        inst = oracle.random_instance(4, seed=3)
        np.testing.assert_array_equal(residual(inst, np.zeros(4)), -inst.b)

    def test_dimension_check(self):
        with pytest.raises(DimensionError):
            residual(AveInstance(np.eye(2), [0, 0]), [1, 2, 3])

    def test_is_solution_examples(self):
        d = planar("d")
        assert is_solution(d, [-1, -1])
        assert not is_solution(d, [0, 0])
        assert is_solution(planar("f"), [1, PHI])


class TestOrthantPiece:
    def test_segment(self):
        p = orthant_piece(planar("a"), [1, 1])
        assert p.status == "polytope" and p.dim == 1 and not p.rays
        got = sorted(tuple(np.round(v, 12)) for v in p.vertices)
        assert got == [(0.0, 1.0), (1.0, 0.0)]

    def test_half_axis(self):
        p = orthant_piece(planar("b"), [1, -1])
        assert p.status == "unbounded"
        np.testing.assert_allclose(p.vertices, [[0, 0]], atol=1e-12)
        np.testing.assert_allclose(p.rays, [[1, 0]], atol=1e-12)

    def test_ray_from_vertex(self):
        p = orthant_piece(planar("c"), [1, 1])
        assert p.status == "unbounded" and p.dim == 1
        np.testing.assert_allclose(p.vertices, [[0, 1]], atol=1e-12)
        np.testing.assert_allclose(p.rays, [[1, 1]], atol=1e-12)

    def test_nonsingular_point_and_empty(self):
        inst = AveInstance(np.eye(2), [1, 1])
        assert orthant_piece(inst, [1, 1]).status == "point"
        assert orthant_piece(inst, [-1, -1]).status == "empty"

    def test_pieces_valid(self, planar_instance):
        _, inst = planar_instance
        for s in sign_vectors(2):
            check_piece(inst, orthant_piece(inst, s))


class TestEnumerate:
    def test_segment_flags(self):
        d = enumerate_solution_set(planar("a"))
        assert d.is_bounded and not d.is_finite and d.sign_consistent and d.is_connected

    def test_ray_plus_point(self):
        d = enumerate_solution_set(planar("d"))
        assert not d.is_bounded and not d.is_connected and not d.sign_consistent

    def test_two_lines_3d(self):
        A = [[6, -8, 3], [9, -13, 5], [12, -18, 7]]
        inst = AveInstance(A, [1, 3, 6])
        d = enumerate_solution_set(inst)
        lines = [p for p in d.pieces if p.dim == 1]
        assert [tuple(p.s) for p in lines] == [(-1, -1, -1), (1, 1, 1)]
        # the remaining pieces are the rays' endpoints on the x1 = 0 face
        assert all(p.status == "point" for p in d.pieces if p.dim != 1)
        for p, pt in zip(lines, ([-1, -3, -6], [1, 3, 6])):
            assert p.dim == 1
            assert distance_to_piece(inst, p, np.array(pt, float)) <= 1e-9

    def test_empty_conventions(self):
        d = enumerate_solution_set(AveInstance(np.eye(2), [-1, -1]))
        assert d.is_empty and d.is_finite and d.is_bounded and d.points == []

    def test_unique_point(self):
        d = enumerate_solution_set(AveInstance(2 * np.eye(2), [3, 3]))
        assert d.is_finite and len(d.points) == 1
        np.testing.assert_allclose(d.points[0], [1, 1])

    def test_boundary_point_deduplicated(self):
        # x = 0 is the only solution and lies in all four closed quadrants
        d = enumerate_solution_set(AveInstance(3 * np.eye(2), [0, 0]))
        assert len(d.pieces) == 4 and len(d.points) == 1

    def test_limit(self):
        with pytest.raises(ValueError):
            enumerate_solution_set(AveInstance(np.eye(3), np.zeros(3)), enum_limit=2)

    def test_deterministic(self):
        inst = planar("b")
        a = enumerate_solution_set(inst).to_dict()
        assert a == enumerate_solution_set(inst).to_dict()


class TestIsolated:
    def test_examples(self):
        assert is_isolated(planar("d"), [-1, -1])
        assert not is_isolated(planar("b"), [0, 0])
        assert is_isolated(AveInstance(np.eye(2), [1, 1]), [0.5, 0.5])

    def test_requires_solution(self):
        with pytest.raises(ValueError):
            is_isolated(planar("d"), [0, 0])


class TestCensus:
    def test_identity_has_seven(self):
        c = infinite_orthant_census(AveInstance(np.eye(3), np.zeros(3)))
        assert c.count == 7
        assert c.diagnostics["violations"] == []
        assert all(c.diagnostics["checks"].values())

    def test_block_instance(self):
        inst = AveInstance([[0, 0, -1], [0, 0, -1], [0, 0, 1]], [2, 2, 0])
        d = enumerate_solution_set(inst)
        infinite = {tuple(p.s) for p in d.pieces if p.is_infinite}
        assert infinite == {s for s in itertools.product((-1, 1), repeat=3) if s[2] == -1}
        for s in infinite:
            assert is_solution(inst, np.array(s, float))
        assert infinite_orthant_census(inst, description=d).count == 4

    def test_segment_count(self):
        assert infinite_orthant_census(planar("a")).count == 1

    def test_forged_description_raises(self):
        inst = AveInstance(np.eye(1), [0])
        d = enumerate_solution_set(inst)
        d.infinite_orthant_count = 2
        with pytest.raises(InternalConsistencyError):
            infinite_orthant_census(inst, description=d)


CORPUS_2D = [small_integer_instance(seed) for seed in range(150)]
CORPUS_2D_HOMOGENEOUS = [small_integer_instance(seed, b_zero=True) for seed in range(80)]
CORPUS_3D = [small_integer_instance(seed, n=3, b_zero=seed % 3 == 0) for seed in range(60)]


class TestCorpusProperties:
    @pytest.mark.parametrize("inst", CORPUS_2D + CORPUS_3D)
    def test_piece_points_are_solutions(self, inst, rng):
        d = enumerate_solution_set(inst)
        for p in d.pieces:
            check_piece(inst, p)
            for _ in range(5):
                assert is_solution(inst, p.sample(rng))
        assert infinite_orthant_census(inst, description=d).count <= 2 ** inst.n - 1

    @pytest.mark.parametrize("inst", CORPUS_2D)
    def test_no_infinite_opposite_quadrants(self, inst):
        if not np.any(inst.b):
            return
        d = enumerate_solution_set(inst)
        infinite = {tuple(p.s) for p in d.pieces if p.is_infinite}
        for s in infinite:
            assert tuple(-v for v in s) not in infinite

    @pytest.mark.parametrize("inst", CORPUS_2D_HOMOGENEOUS + [i for i in CORPUS_3D if not i.b.any()])
    def test_homogeneous_connected(self, inst):
        assert enumerate_solution_set(inst).is_connected

    @pytest.mark.parametrize("inst", CORPUS_2D + CORPUS_3D)
    def test_sign_consistent_is_convex(self, inst, rng):
        d = enumerate_solution_set(inst)
        if not d.sign_consistent or d.is_empty:
            return
        for _ in range(20):
            p, q = rng.choice(len(d.pieces), 2)
            x1, x2 = d.pieces[p].sample(rng), d.pieces[q].sample(rng)
            assert oracle.midpoint_is_solution(inst.A, inst.b, x1, x2)

    @pytest.mark.parametrize("seed", range(40))
    def test_grid_scan_agrees(self, seed, rng):
        inst = small_integer_instance(1000 + seed)
        d = enumerate_solution_set(inst)
        # step 1/8 puts every rational solution with small denominators on the grid
        scan = oracle.residual_grid_scan(inst, step=0.125, threshold=1e-6)
        for x in scan.points:
            assert min(distance_to_piece(inst, p, x) for p in d.pieces) <= 1e-5
        for p in d.pieces:
            for _ in range(5):
                x = p.sample(rng, ray_scale=0.5)
                assert np.max(np.abs(residual(inst, x))) < 1e-6

    def test_finite_sets_match_brute_force(self):
        for inst in CORPUS_2D + CORPUS_3D:
            pts, singular_hit = oracle.solution_points(inst.A, inst.b)
            d = enumerate_solution_set(inst)
            if singular_hit or not d.is_finite:
                continue
            assert len(pts) == len(d.points)
            for x in pts:
                assert any(np.allclose(x, y, atol=1e-8) for y in d.points)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1), st.integers(1, 4))
    def test_random_real_instances(self, seed, n):
        inst = oracle.random_instance(n, seed)
        d = enumerate_solution_set(inst)
        pts, singular_hit = oracle.solution_points(inst.A, inst.b)
        if not singular_hit:
            assert d.is_finite and len(d.points) == len(pts)
        for x in d.points:
            assert is_solution(inst, x)
