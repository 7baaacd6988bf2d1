"""Randomized solver: the lifted body, hit-and-run moves, annealing."""

import math

import numpy as np
import pytest

from partialq.errors import DataError, InfeasibleStart, NotInBody, TauOutOfRange
from partialq.models import ProductModel, UniformMarginal, UnitSquareModel
from partialq.solver import (
    SolveProblem,
    _chord,
    anneal_optimize,
    hit_and_run_step,
    mc_probability_oracle,
)


def _square_problem(tau=0.5, pbar=0.3):
    return SolveProblem.from_model(UnitSquareModel(), tau, pbar)


class TestProblem:
    def test_membership_semantics(self):
        prob = _square_problem()
        assert prob.contains(math.log(0.45), np.array([0.5, 0.5]))
        # v above the achievable mass at the center
        assert not prob.contains(math.log(0.72), np.array([0.5, 0.5]))
        # v below pbar
        assert not prob.contains(math.log(0.2), np.array([0.5, 0.5]))
        # x outside the box
        assert not prob.contains(math.log(0.4), np.array([1.5, 0.5]))

    def test_validation(self):
        with pytest.raises(TauOutOfRange):
            SolveProblem.from_model(UnitSquareModel(), 1.2, 0.3)
        with pytest.raises(DataError):
            SolveProblem.from_model(UnitSquareModel(), 0.5, 1.5)

    def test_membership_convex_on_segments(self):
        # inside points between two inside points, sampled haphazardly
        prob = _square_problem()
        rng = np.random.default_rng(0)
        pts = []
        while len(pts) < 2:
            v = rng.uniform(math.log(0.3), 0.0)
            x = rng.uniform(0, 1, size=2)
            if prob.contains(v, x):
                pts.append(np.concatenate([[v], x]))
        a, b = pts
        for lam in np.linspace(0, 1, 11):
            mid = (1 - lam) * a + lam * b
            assert prob.contains(mid[0], mid[1:])


class TestChord:
    def test_endpoints_bracket_the_body(self):
        prob = _square_problem()
        state = np.array([math.log(0.4), 0.5, 0.5])
        rng = np.random.default_rng(1)
        for _ in range(20):
            d = rng.standard_normal(3)
            d /= np.linalg.norm(d)
            t_lo, t_hi = _chord(prob, state, d)
            assert t_lo <= 0.0 <= t_hi
            inside = state + (t_hi - 1e-6) * d
            assert prob.contains(inside[0], inside[1:])
            outside = state + (t_hi + 1e-5) * d
            v, x = outside[0], outside[1:]
            # just beyond the boundary is outside unless we hit the box wall
            on_wall = (v > -1e-9 or v < prob._vmin + 1e-9
                       or np.any(x < prob.lo + 1e-9) or np.any(x > prob.hi - 1e-9))
            assert on_wall or not prob.contains(v, x)

    def test_outside_start_rejected(self):
        prob = _square_problem()
        with pytest.raises(NotInBody):
            _chord(prob, np.array([math.log(0.9), 0.5, 0.5]),
                   np.array([1.0, 0.0, 0.0]))

    def test_step_stays_inside(self):
        prob = _square_problem()
        state = np.array([math.log(0.35), 0.5, 0.5])
        rng = np.random.default_rng(2)
        chol = np.eye(3)
        for _ in range(200):
            state = hit_and_run_step(prob, state, 5.0, rng, chol)
            assert prob.contains(state[0], state[1:])


class TestAnneal:
    def test_unit_square_converges(self):
        res = anneal_optimize(_square_problem(), seed=0)
        assert np.linalg.norm(res.x - 0.5) < 0.05
        assert res.p >= 0.475
        assert res.trace == sorted(res.trace)  # best value never degrades

    def test_off_median_level(self):
        m = UnitSquareModel()
        res = anneal_optimize(SolveProblem.from_model(m, 0.25, 0.3), seed=1)
        truth = m.quantile(0.25)
        assert np.linalg.norm(res.x - truth.points[0]) < 0.07
        assert res.p == pytest.approx(truth.p, abs=0.03)

    def test_three_dims(self):
        m = ProductModel([UniformMarginal(0, 1)] * 3)
        res = anneal_optimize(SolveProblem.from_model(m, 0.5, 0.15), seed=2)
        assert res.p >= 0.95 * 0.25
        assert np.linalg.norm(res.x - 0.5) < 0.1

    def test_infeasible_pbar(self):
        # the comparable mass at the median is 1/2, so 0.9 is unattainable
        with pytest.raises(InfeasibleStart):
            anneal_optimize(_square_problem(pbar=0.9), seed=3)


class TestMcOracle:
    def test_conservative_and_close(self):
        m = UnitSquareModel()
        log_below, log_above = mc_probability_oracle(m.sample, m.order,
                                                     n=200_000, seed=4)
        x = np.array([0.6, 0.7])
        assert log_below(x) <= math.log(m.prob_below(x)) + 1e-9
        assert log_below(x) == pytest.approx(math.log(m.prob_below(x)), abs=0.02)
        assert log_above(x) == pytest.approx(math.log(m.prob_above(x)), abs=0.03)

    def test_solve_through_mc_oracle(self):
        m = UnitSquareModel()
        log_below, log_above = mc_probability_oracle(m.sample, m.order,
                                                     n=100_000, seed=5)
        prob = SolveProblem(log_below, log_above, 0.5, 0.3,
                            (np.zeros(2), np.ones(2)))
        res = anneal_optimize(prob, seed=6)
        assert np.linalg.norm(res.x - 0.5) < 0.08
