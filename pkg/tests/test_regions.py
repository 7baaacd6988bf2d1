"""Dispersion regions: membership, nestedness, calibration."""

import numpy as np
import pytest

from partialq.errors import DataError
from partialq.estimators import Sample
from partialq.models import ScoreModel, UniformMarginal, UnitSquareModel
from partialq.regions import (
    calibrate_theta,
    coverage_grid,
    field_values,
    membership,
    region,
)


@pytest.fixture(scope="module")
def square_values():
    m = UnitSquareModel()
    pts = coverage_grid(m, shape=81)
    return m, pts, field_values(m, pts)


class TestMembership:
    def test_center_always_in(self, square_values):
        m, pts, vals = square_values
        for theta, eta in ((0.0, 0.0), (0.3, 0.1), (1.0, 1.0)):
            r = region(m, theta, eta, pts, values=vals)
            i = int(np.argmin(np.linalg.norm(pts - 0.5, axis=1)))
            assert r.member[i]

    def test_full_region_at_one_one(self, square_values):
        m, pts, vals = square_values
        r = region(m, 1.0, 1.0, pts, values=vals)
        assert bool(np.all(r.member))
        assert r.coverage == pytest.approx(1.0)

    def test_tight_region_is_median_point(self):
        m = UnitSquareModel()
        pts = coverage_grid(m, shape=81)  # odd count includes the center
        vals = field_values(m, pts)
        r = region(m, 0.0, 0.0, pts, values=vals)
        inside = pts[r.member]
        assert len(inside) == 1
        np.testing.assert_allclose(inside[0], [0.5, 0.5], atol=1e-12)

    def test_nested_in_both_parameters(self, square_values):
        m, pts, vals = square_values
        levels = [0.0, 0.25, 0.5, 0.75, 1.0]
        members = {(t, e): membership(vals, t, e) for t in levels for e in levels}
        for i, t in enumerate(levels):
            for j, e in enumerate(levels):
                for t2 in levels[i:]:
                    for e2 in levels[j:]:
                        grow = members[(t2, e2)]
                        assert not np.any(members[(t, e)] & ~grow)

    def test_bad_levels(self, square_values):
        m, pts, vals = square_values
        with pytest.raises(DataError):
            membership(vals, -0.1, 0.5)


class TestUnivariateReduction:
    def test_interval_matches_quantiles(self):
        m = ScoreModel(UniformMarginal(0.0, 1.0))
        pts = coverage_grid(m, shape=4001)
        vals = field_values(m, pts)
        for theta in (0.2, 0.5, 0.8):
            r = region(m, theta, 1.0, pts, values=vals)
            inside = pts[r.member][:, 0]
            lo, hi = (1 - theta) / 2, (1 + theta) / 2
            assert inside.min() == pytest.approx(lo, abs=1e-3)
            assert inside.max() == pytest.approx(hi, abs=1e-3)
            assert r.coverage == pytest.approx(theta, abs=2e-3)


class TestSampleSource:
    def test_sample_region_tracks_model(self):
        m = UnitSquareModel()
        rng = np.random.default_rng(0)
        s = Sample(m.sample(3000, rng), m.order)
        pts = coverage_grid(m, shape=41)
        r_model = region(m, 0.5, 0.5, pts)
        r_sample = region(s, 0.5, 0.5, pts)
        agree = np.mean(r_model.member == r_sample.member)
        assert agree > 0.9


class TestCalibration:
    def test_zero_kappa(self, square_values):
        m, pts, vals = square_values
        assert calibrate_theta(m, 0.0, values=vals) == 0.0

    def test_monotone_in_kappa(self, square_values):
        m, pts, vals = square_values
        thetas = [calibrate_theta(m, k, values=vals) for k in (0.25, 0.5, 0.75)]
        assert thetas[0] <= thetas[1] <= thetas[2]

    def test_calibrated_region_covers(self, square_values):
        m, pts, vals = square_values
        kappa = 0.5
        theta = calibrate_theta(m, kappa, values=vals)
        r = region(m, theta, theta, pts, values=vals)
        assert r.coverage >= kappa - 1e-9
        r_less = region(m, max(theta - 0.01, 0.0), max(theta - 0.01, 0.0),
                        pts, values=vals)
        assert r_less.coverage <= r.coverage

    def test_g_validation(self, square_values):
        m, pts, vals = square_values
        with pytest.raises(DataError):
            calibrate_theta(m, 0.5, g=lambda t: 1.0 - t, values=vals)
        with pytest.raises(DataError):
            calibrate_theta(m, 0.5, g=lambda t: t / 2, values=vals)

    def test_kappa_range(self, square_values):
        m, pts, vals = square_values
        with pytest.raises(DataError):
            calibrate_theta(m, 1.5, values=vals)
