import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from avelab import lp
from avelab._validation import DimensionError
from avelab.lp import EQ, GE, LE, LinearConstraint, LinearProgram


def row(coef, rel, rhs):
    return LinearConstraint(np.asarray(coef, dtype=float), rel, rhs)


class TestExamples:
    def test_max_single_bound(self):
        out = lp.solve(LinearProgram([1.0], [row([1], LE, 2)], sense="max"))
        assert out.optimal
        assert out.point[0] == pytest.approx(2.0, abs=1e-12)
        assert out.value == pytest.approx(2.0)

    def test_contradictory_bounds(self):
        cons = [row([1], GE, 1), row([1], LE, 0)]
        assert lp.feasible(cons) is None
        assert lp.solve(LinearProgram([0.0], cons)).status == "infeasible"

    def test_segment_vertex(self):
        prog = LinearProgram([1.0, 0.0], [row([2, 2], EQ, 2)], sense="max", lower=np.zeros(2))
        out = lp.solve(prog)
        np.testing.assert_allclose(out.point, [1.0, 0.0], atol=1e-12)

    def test_strict_system_homogenized(self):
        A = -2 * np.eye(2)
        cons = [row(r, LE, -1) for r in A + np.eye(2)] + [row(r, LE, -1) for r in A - np.eye(2)]
        x = lp.feasible(cons)
        assert x is not None
        assert max(c.violation(x) for c in cons) <= 1e-9

    def test_strict_system_infeasible_for_identity(self):
        A = np.eye(2)
        cons = [row(r, LE, -1) for r in A + np.eye(2)] + [row(r, LE, -1) for r in A - np.eye(2)]
        assert lp.feasible(cons) is None

    def test_segment_feasibility(self):
        x = lp.feasible([row([1, 1], EQ, 1)], lower=np.zeros(2))
        assert x is not None
        assert x.sum() == pytest.approx(1.0) and np.all(x >= -1e-9)

    def test_unbounded(self):
        out = lp.solve(LinearProgram([1.0, 1.0], [row([1, -1], LE, 0)], sense="max"))
        assert out.status == "unbounded"
        assert out.ray is not None and out.ray.sum() > 0

    def test_bounds_only(self):
        prog = LinearProgram([1.0, -1.0], [], lower=[-1, -2], upper=[3, 5])
        out = lp.solve(prog)
        np.testing.assert_allclose(out.point, [-1, 5])


class TestValidation:
    def test_bad_relation(self):
        with pytest.raises(ValueError):
            LinearConstraint([1.0], "<>", 0)

    def test_unicode_relations(self):
        assert LinearConstraint([1.0], "≤", 0).relation == LE
        assert LinearConstraint([1.0], "==", 0).relation == EQ

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            LinearProgram([1.0, 2.0], [row([1], LE, 0)])
        with pytest.raises(DimensionError):
            LinearProgram([1.0], [], lower=[0, 0])

    def test_crossed_bounds(self):
        with pytest.raises(ValueError):
            LinearProgram([1.0], [], lower=[1], upper=[0])

    def test_bad_sense(self):
        with pytest.raises(ValueError):
            LinearProgram([1.0], [], sense="maximise")


def _random_lp(seed):
    g = np.random.default_rng(seed)
    n = int(g.integers(1, 7))
    m = int(g.integers(1, 13))
    G = g.uniform(-3, 3, (m, n))
    x0 = g.uniform(0, 2, n)
    h = G @ x0 + g.uniform(0, 1, m)  # x0 strictly feasible
    c = g.uniform(-1, 1, n)
    return c, G, h, x0


class TestAgainstHighs:
    @settings(max_examples=120, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_matches_linprog(self, seed):
        c, G, h, _ = _random_lp(seed)
        n = c.shape[0]
        ref = linprog(c, A_ub=G, b_ub=h, bounds=[(0, 10)] * n, method="highs")
        prog = LinearProgram(c, [row(gi, LE, hi) for gi, hi in zip(G, h)],
                             lower=np.zeros(n), upper=np.full(n, 10.0))
        out = lp.solve(prog)
        assert ref.status == 0 and out.optimal
        assert out.value == pytest.approx(ref.fun, abs=1e-8 * max(1.0, abs(ref.fun)))
        assert prog.max_violation(out.point) <= 1e-9

    @settings(max_examples=80, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_strong_duality(self, seed):
        # primal: min c x, G x <= h, x >= 0 with c >= 0 so it is bounded
        c, G, h, _ = _random_lp(seed)
        c = np.abs(c) + 0.1
        m, n = G.shape
        primal = lp.solve(LinearProgram(c, [row(gi, LE, hi) for gi, hi in zip(G, h)],
                                        lower=np.zeros(n)))
        # dual: max -h y, -G^T y <= c, y >= 0
        dual = lp.solve(LinearProgram(-h, [row(-G[:, j], LE, c[j]) for j in range(n)],
                                      sense="max", lower=np.zeros(m)))
        assert primal.optimal and dual.optimal
        assert primal.value == pytest.approx(dual.value, abs=1e-7)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_infeasible_agrees(self, seed):
        g = np.random.default_rng(seed)
        n = int(g.integers(1, 5))
        G = g.uniform(-1, 1, (2, n))
        G[1] = -G[0]
        h = np.array([-1.0, -g.uniform(0.1, 1)])  # a x <= -1 and a x >= t > 0
        assert lp.feasible([row(gi, LE, hi) for gi, hi in zip(G, h)]) is None
        ref = linprog(np.zeros(n), A_ub=G, b_ub=h, bounds=[(None, None)] * n, method="highs")
        assert ref.status == 2


class TestDeterminism:
    def test_repeat_identical(self):
        c, G, h, _ = _random_lp(7)
        prog = LinearProgram(c, [row(gi, LE, hi) for gi, hi in zip(G, h)],
                             lower=np.zeros(c.shape[0]), upper=np.full(c.shape[0], 5.0))
        first = lp.solve(prog)
        for _ in range(3):
            again = lp.solve(prog)
            np.testing.assert_array_equal(again.point, first.point)
            assert again.value == first.value

    def test_degenerate_does_not_cycle(self):
        # a classic degenerate instance on which Dantzig's rule cycles
        cons = [row([0.5, -5.5, -2.5, 9], LE, 0),
                row([0.5, -1.5, -0.5, 1], LE, 0),
                row([1, 0, 0, 0], LE, 1)]
        out = lp.solve(LinearProgram([10, -57, -9, -24], cons, sense="max", lower=np.zeros(4)))
        assert out.optimal
        assert out.value == pytest.approx(1.0)
