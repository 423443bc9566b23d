import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from avelab import oracle
from avelab.core import AveInstance, enumerate_solution_set, is_solution
from avelab.solvers import SolveOutcome, algorithm1, picard, solve_auto

from conftest import planar


def contraction_instance(seed, n, target=0.5):
    """Random A with rho(|A^-1|) close to ``target``."""
    g = np.random.default_rng(seed)
    B = g.uniform(-1, 1, (n, n))
    Binv = np.linalg.inv(B)
    rho = np.max(np.abs(np.linalg.eigvals(np.abs(Binv))))
    A = B * (rho / target)
    return AveInstance(A, g.uniform(-3, 3, n))


class TestAlgorithm1:
    def test_nonnegative_start(self):
        out = algorithm1(AveInstance([[3, -1], [-1, 3]], [1, 1]))
        np.testing.assert_allclose(out.solution, [1 / 3, 1 / 3], atol=1e-15)
        assert out.iterations == 1 and out.details["sign_changes"] == 0

    def test_nonpositive_solution(self):
        out = algorithm1(AveInstance([[3, -1], [-1, 3]], [-1, -1]))
        np.testing.assert_allclose(out.solution, [-1, -1], atol=1e-14)
        assert out.iterations <= 3

    def test_zero_rhs(self):
        out = algorithm1(AveInstance([[3.0]], [0.0]))
        assert out.solution[0] == 0.0 and out.iterations == 1

    def test_precondition(self):
        with pytest.raises(ValueError):
            algorithm1(AveInstance([[1, 2], [2, 1]], [1, 1]))

    def test_pass_count_can_reach_n_plus_one(self):
        # x0 = -1/4 flips the only sign, so a second pass is needed to confirm x = -1/2
        out = algorithm1(AveInstance([[3.0]], [-1.0]))
        np.testing.assert_allclose(out.solution, [-0.5])
        assert out.iterations == 2
        assert out.details["sign_changes"] <= 1

    @pytest.mark.parametrize("seed", range(150))
    def test_monotone_and_sign_change_bound(self, seed):
        n = 1 + seed % 8
        inst = oracle.inverse_nonneg_generator(n, seed)
        out = algorithm1(inst)
        its = out.details["iterates"]
        for a, b in zip(its, its[1:]):
            assert np.all(b <= a + 1e-10)
        assert out.details["sign_changes"] <= n
        assert out.iterations <= n + 1
        assert out.iterations == out.details["sign_changes"] + 1
        assert is_solution(inst, out.solution)

    @pytest.mark.parametrize("seed", range(40))
    def test_matches_enumeration(self, seed):
        n = 2 + seed % 5
        inst = oracle.inverse_nonneg_generator(n, seed + 500)
        d = enumerate_solution_set(inst)
        assert len(d.points) == 1
        np.testing.assert_allclose(algorithm1(inst).solution, d.points[0], atol=1e-7)


class TestPicard:
    @pytest.mark.parametrize("b, x", [([3, 3], [0.75, 0.75]), ([-3, -3], [-1.5, -1.5])])
    def test_diagonal(self, b, x):
        out = picard(AveInstance(3 * np.eye(2), b))
        assert out.converged
        np.testing.assert_allclose(out.solution, x, atol=1e-12)

    def test_zero(self):
        out = picard(AveInstance(-3 * np.eye(2), [0, 0]))
        np.testing.assert_array_equal(out.solution, [0, 0])

    def test_precondition(self):
        with pytest.raises(ValueError):
            picard(AveInstance(0.5 * np.eye(2), [1, 1]))
        with pytest.raises(ValueError):
            picard(AveInstance(np.zeros((2, 2)), [1, 1]))

    def test_not_converged_flag(self):
        inst = contraction_instance(1, 4, target=0.9)
        out = picard(inst, max_iter=2)
        assert not out.converged and out.status == "not_converged"

    @pytest.mark.parametrize("seed", range(40))
    def test_geometric_rate(self, seed):
        n = 2 + seed % 5
        inst = contraction_instance(seed, n, target=0.3 + 0.01 * (seed % 50))
        out = picard(inst)
        assert out.converged
        assert out.details["observed_ratio"] <= out.details["rho"] + 0.05
        assert is_solution(inst, out.solution)
        d = enumerate_solution_set(inst)
        np.testing.assert_allclose(out.solution, d.points[0], atol=1e-7)


class TestSolveAuto:
    def test_shortcut(self):
        out = solve_auto(AveInstance(-0.5 * np.eye(2), [1, 1]))
        assert out.method == "rho_sign_condition"
        np.testing.assert_allclose(out.solution, [2, 2])
        np.testing.assert_array_equal(out.details["orthant"], [1, 1])

    def test_enumeration(self):
        out = solve_auto(planar("a"))
        assert out.method == "enumeration" and out.status == "enumerated"
        assert [p.status for p in out.solution.pieces].count("polytope") == 1
        assert is_solution(planar("a"), out.point)

    @pytest.mark.parametrize("b", [[-1, 3], [-2, -2], [0.5, -4]])
    def test_iterative(self, b):
        out = solve_auto(AveInstance(3 * np.eye(2), b))
        assert out.method in ("algorithm1", "picard")
        assert is_solution(AveInstance(3 * np.eye(2), b), out.solution)

    def test_nonnegative_rhs_prefers_shortcut(self):
        inst = AveInstance(3 * np.eye(2), [1, 2])
        out = solve_auto(inst)
        assert out.method == "nonneg_unique_solvability"
        np.testing.assert_allclose(out.solution, algorithm1(inst).solution, atol=1e-15)

    def test_greatest_element_branch(self):
        # Z-matrix, A + I an M-matrix, but [A - I, A + I] not inverse nonnegative
        A = np.array([[0.0, -0.5], [-0.5, 0.0]])
        inst = AveInstance(A, [-1, 2])
        out = solve_auto(inst)
        assert out.method == "greatest_element"
        np.testing.assert_allclose(out.point, [0, 2], atol=1e-12)
        for p in enumerate_solution_set(inst).pieces:
            assert np.all(out.point >= np.array(p.vertices) - 1e-8)

    def test_empty(self):
        out = solve_auto(AveInstance(np.eye(2), [-1, -1]))
        assert out.status == "empty" and out.point is None

    def test_undecided(self):
        A = np.ones((14, 14))
        out = solve_auto(AveInstance(A, -np.ones(14)), enum_limit=12)
        assert out.status == "undecided" and not out.converged

    def test_to_dict_plain(self):
        d = solve_auto(planar("d")).to_dict()
        assert d["method"] == "enumeration"
        assert isinstance(d["solution"]["pieces"], list)

    def test_point_of_description(self):
        out = SolveOutcome("x", "solved", np.array([1.0]))
        assert out.point[0] == 1.0

    @settings(max_examples=80, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1), st.integers(1, 5))
    def test_agrees_with_enumeration(self, seed, n):
        inst = oracle.random_instance(n, seed)
        if seed % 3 == 0:
            inst = AveInstance(inst.A + 4 * np.eye(n), inst.b)
        out = solve_auto(inst)
        d = enumerate_solution_set(inst)
        if out.method != "enumeration" and out.point is not None:
            assert is_solution(inst, out.point)
            if d.is_finite and len(d.points) == 1:
                np.testing.assert_allclose(out.point, d.points[0], atol=1e-7)
        if d.is_empty:
            assert out.status == "empty"
