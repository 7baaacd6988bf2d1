"""Envelopes, rearrangement, and the monotonicity diagnostic."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from partialq.curves import QuantileCurve
from partialq.errors import CurveGridError, DataError, NotALattice
from partialq.monotonize import (
    curve_distance,
    envelopes,
    monotonicity_diagnostic,
    rearrange,
    rearrangement_improvement,
)
from partialq.orders import ConicOrder, ScoreOrder


def _curve(points, taus=None, p=None):
    points = np.asarray(points, float)
    m = points.shape[0]
    if taus is None:
        taus = np.linspace(0.1, 0.9, m)
    if p is None:
        p = np.full(m, 0.5)
    return QuantileCurve(taus, points, p)


def _random_curve(rng, m=12, d=2):
    return _curve(rng.uniform(size=(m, d)))


class TestQuantileCurve:
    def test_grid_validation(self):
        with pytest.raises(CurveGridError):
            QuantileCurve([0.5, 0.3], [[0.0], [0.1]], [0.5, 0.5])
        with pytest.raises(CurveGridError):
            QuantileCurve([0.3, 0.5], [[0.0]], [0.5, 0.5])

    def test_json_round_trip(self, tmp_path):
        c = _curve([[0.1, 0.2], [0.3, 0.4]])
        path = tmp_path / "c.json"
        c.save(path)
        back = QuantileCurve.load(path)
        np.testing.assert_array_equal(back.points, c.points)
        assert back.to_json() == c.to_json()

    def test_schema_rejected(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text('{"schema": "pq-v0", "kind": "quantile-curve"}')
        with pytest.raises(DataError):
            QuantileCurve.load(path)

    def test_cell_weights_uniform_grid(self):
        c = _curve(np.zeros((5, 1)), taus=np.linspace(0.1, 0.9, 5))
        w = c.cell_weights()
        assert w.sum() == pytest.approx(1.0)
        np.testing.assert_allclose(w[1:-1], w[1], atol=1e-15)


class TestEnvelopes:
    def test_sandwich_random_curves(self):
        rng = np.random.default_rng(0)
        order = ConicOrder(2)
        for _ in range(50):
            c = _random_curve(rng)
            env = envelopes(c, order)
            r = rearrange(c)
            assert np.all(env.upper.points <= r.points + 1e-12)
            assert np.all(r.points <= env.lower.points + 1e-12)

    def test_envelopes_are_monotone(self):
        rng = np.random.default_rng(1)
        order = ConicOrder(3)
        c = _random_curve(rng, m=15, d=3)
        env = envelopes(c, order)
        assert env.upper.is_monotone(order)
        assert env.lower.is_monotone(order)

    def test_monotone_curve_unchanged(self):
        order = ConicOrder(2)
        c = _curve(np.cumsum(np.ones((6, 2)) * 0.1, axis=0))
        env = envelopes(c, order)
        np.testing.assert_array_equal(env.upper.points, c.points)
        np.testing.assert_array_equal(env.lower.points, c.points)

    def test_needs_lattice(self):
        c = _curve([[0.1], [0.2]])
        with pytest.raises(NotALattice):
            envelopes(c, ScoreOrder())


class TestRearrange:
    def test_sorts_each_coordinate_on_uniform_grid(self):
        rng = np.random.default_rng(2)
        c = _random_curve(rng, m=20, d=3)
        r = rearrange(c)
        np.testing.assert_allclose(r.points, np.sort(c.points, axis=0))

    def test_idempotent(self):
        rng = np.random.default_rng(3)
        c = _random_curve(rng)
        r = rearrange(c)
        rr = rearrange(r)
        np.testing.assert_array_equal(r.points, rr.points)

    def test_weighted_grid_keeps_distribution(self):
        taus = np.array([0.1, 0.2, 0.5, 0.9])
        c = _curve([[0.4], [0.1], [0.3], [0.2]], taus=taus)
        r = rearrange(c)
        assert np.all(np.diff(r.points[:, 0]) >= 0)
        assert set(np.round(r.points[:, 0], 12)) <= set(np.round(c.points[:, 0], 12))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10 ** 6))
    def test_improvement_toward_monotone_targets(self, seed):
        rng = np.random.default_rng(seed)
        m, d = 10, 2
        truth = np.cumsum(rng.uniform(0, 0.2, size=(m, d)), axis=0)
        noisy = truth + rng.normal(0, 0.3, size=(m, d))
        c = _curve(noisy)
        t = _curve(truth)
        for kappa in (1.0, 2.0, 4.0):
            before, after = rearrangement_improvement(c, t, kappa)
            assert after <= before + 1e-12

    def test_distance_grid_mismatch(self):
        a = _curve(np.zeros((4, 1)))
        b = _curve(np.zeros((5, 1)))
        with pytest.raises(DataError):
            curve_distance(a, b)

    def test_bad_kappa(self):
        a = _curve(np.zeros((4, 1)))
        with pytest.raises(DataError):
            curve_distance(a, a, kappa=0.5)


class TestDiagnostic:
    def test_monotone_verdict(self):
        order = ConicOrder(2)
        c = _curve(np.cumsum(np.ones((5, 2)) * 0.1, axis=0))
        diag = monotonicity_diagnostic(c, order)
        assert diag.verdict == "monotone"
        assert diag.distance == pytest.approx(0.0, abs=1e-15)

    def test_inconclusive_without_bound(self):
        order = ConicOrder(1)
        c = _curve([[0.5], [0.2], [0.8]])
        assert monotonicity_diagnostic(c, order).verdict == "inconclusive"

    def test_rejects_monotonicity_with_tight_bound(self):
        order = ConicOrder(1)
        c = _curve([[0.9], [0.1], [0.9], [0.1]])
        diag = monotonicity_diagnostic(c, order, error_bound=0.01)
        assert diag.verdict == "not-monotone"
        assert diag.distance > diag.threshold

    def test_loose_bound_stays_inconclusive(self):
        order = ConicOrder(1)
        c = _curve([[0.55], [0.45], [0.6]])
        diag = monotonicity_diagnostic(c, order, error_bound=1.0)
        assert diag.verdict == "inconclusive"
