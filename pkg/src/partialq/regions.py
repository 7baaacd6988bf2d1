"""Central dispersion regions built from the index and comparable mass.

A point belongs to the (theta, eta) region when its conditional
probabilities of being exceeded and of exceeding are each at least
(1 - theta) / 2, and its comparable mass is at least a (1 - eta) fraction
of the comparable mass at the quantile point of its own index.  Regions are
nested in both parameters, which makes the coverage level calibrate by
bisection.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DataError, NumericError
from .estimators import Sample, _candidate_counts, estimate_curve
from .models import Model


@dataclass
class FieldValues:
    """Index quantities evaluated on a set of points."""
    points: np.ndarray
    below: np.ndarray
    above: np.ndarray
    p: np.ndarray
    tau: np.ndarray        # nan where p == 0
    p_ref: np.ndarray      # comparable mass at the quantile point of tau
    weights: np.ndarray    # probability weights of the points under the source


@dataclass
class Region:
    theta: float
    eta: float
    points: np.ndarray
    member: np.ndarray
    coverage: float


def field_values(source, points, tau_grid=None):
    """Evaluate the index field of a model or sample on given points.

    The result can be reused across many (theta, eta) pairs; this is what
    makes calibration cheap.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points.reshape(-1, 1)
    if isinstance(source, Model):
        vals = [source.cdf_pair(x if points.shape[1] > 1 else x[0:1]) for x in points]
        below = np.array([v.below for v in vals])
        above = np.array([v.above for v in vals])
        p = np.array([v.p for v in vals])
        tau = np.array([v.tau if v.tau is not None else np.nan for v in vals])
        p_ref = np.array([source.p_tau(t) if np.isfinite(t) and 0 < t < 1 else np.nan
                          for t in tau])
        weights = _model_weights(source, points)
    elif isinstance(source, Sample):
        n = source.n
        b, a, c = _candidate_counts(source, points)
        below, above, p = b / n, a / n, c / n
        with np.errstate(invalid="ignore", divide="ignore"):
            tau = np.where(c > 0, b / np.maximum(c, 1), np.nan)
        if tau_grid is None:
            tau_grid = np.linspace(0.02, 0.98, 49)
        curve = estimate_curve(source, tau_grid)
        p_ref = np.interp(tau, curve.taus, curve.p)
        p_ref = np.where(np.isfinite(tau), p_ref, np.nan)
        weights = np.full(len(points), 1.0 / len(points))
    else:
        raise DataError(f"unsupported source {type(source).__name__}")
    return FieldValues(points, below, above, p, tau, p_ref, weights)


def _model_weights(model, points):
    dens = getattr(model, "density", None)
    if dens is None:
        w = np.full(len(points), 1.0)
    else:
        w = np.asarray([dens(x) for x in points], dtype=float)
    total = w.sum()
    if total <= 0:
        raise NumericError("grid carries no mass under the model")
    return w / total


def membership(values, theta, eta):
    """Region membership on precomputed field values.

    Where the comparable mass vanishes the conditional probabilities count
    as one, so such points enter only once eta reaches 1.
    """
    theta = float(theta)
    eta = float(eta)
    if not 0.0 <= theta <= 1.0 or not 0.0 <= eta <= 1.0:
        raise DataError("theta and eta must lie in [0, 1]")
    lim = (1.0 - theta) / 2.0
    with np.errstate(invalid="ignore", divide="ignore"):
        cond_lo = np.where(values.p > 0, values.below / values.p, 1.0)
        cond_up = np.where(values.p > 0, values.above / values.p, 1.0)
    ref = np.where(np.isfinite(values.p_ref), values.p_ref, np.nanmax(values.p_ref)
                   if np.any(np.isfinite(values.p_ref)) else 1.0)
    ok = (cond_lo >= lim - 1e-12) & (cond_up >= lim - 1e-12)
    ok &= values.p >= (1.0 - eta) * ref - 1e-12
    return ok


def region(source, theta, eta, points, values=None):
    """Dispersion region of a model or sample on a point grid."""
    if values is None:
        values = field_values(source, points)
    member = membership(values, theta, eta)
    coverage = float(values.weights[member].sum())
    return Region(float(theta), float(eta), values.points, member, coverage)


def coverage_grid(source, dim=None, shape=60, box=None):
    """Uniform evaluation grid over the support of the source."""
    if box is None:
        if isinstance(source, Model):
            box = source.support_box()
        else:
            data = np.asarray(source.data, float)
            box = (data.min(axis=0), data.max(axis=0))
    lo, hi = (np.atleast_1d(np.asarray(b, float)) for b in box)
    d = lo.size if dim is None else dim
    axes = [np.linspace(lo[j], hi[j], shape) for j in range(d)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([m.ravel() for m in mesh])


def calibrate_theta(source, kappa, g=None, points=None, values=None, tol=1e-3):
    """Smallest theta whose region, at width eta = g(theta), covers kappa.

    g must be a nondecreasing map of [0, 1] onto itself with g(0) = 0 and
    g(1) = 1; by default it is the identity.  Solved by bisection since the
    coverage is nondecreasing in theta.
    """
    kappa = float(kappa)
    if not 0.0 <= kappa <= 1.0:
        raise DataError("kappa must lie in [0, 1]")
    if g is None:
        g = lambda t: t
    probe = np.linspace(0.0, 1.0, 101)
    gv = np.array([float(g(t)) for t in probe])
    if abs(gv[0]) > 1e-12 or abs(gv[-1] - 1.0) > 1e-12:
        raise DataError("g must satisfy g(0) = 0 and g(1) = 1")
    if np.any(np.diff(gv) < -1e-12):
        raise DataError("g must be nondecreasing")
    if kappa == 0.0:
        return 0.0
    if values is None:
        if points is None:
            points = coverage_grid(source)
        values = field_values(source, points)

    def cov(theta):
        member = membership(values, theta, g(theta))
        return float(values.weights[member].sum())

    lo, hi = 0.0, 1.0
    if cov(1.0) < kappa - 1e-12:
        raise NumericError("even the full region fails the coverage target")
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if cov(mid) >= kappa:
            hi = mid
        else:
            lo = mid
    return hi
