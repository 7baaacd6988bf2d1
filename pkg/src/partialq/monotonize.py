"""Monotonization of estimated quantile curves.

Three repairs are provided for a curve that fails to be nondecreasing in the
order: the envelope from above (running meet of later points), the envelope
from below (running join of earlier points), and the coordinatewise
monotone rearrangement, which sorts each coordinate in tau using the grid's
cell weights.  The rearrangement never increases the weighted L_kappa
distance to any monotone target, which yields a finite-sample diagnostic
for monotonicity of the population curve.
"""

from dataclasses import dataclass

import numpy as np

from .curves import QuantileCurve
from .errors import DataError, NotALattice


@dataclass
class Envelopes:
    upper: QuantileCurve      # meet over levels >= tau; sits below the curve
    lower: QuantileCurve      # join over levels <= tau; sits above the curve


def envelopes(curve, order):
    """Monotone envelopes of a curve under a lattice order."""
    if not getattr(order, "is_lattice", False):
        raise NotALattice("envelopes need a lattice order")
    m = len(curve.taus)
    up = curve.points.copy()
    for i in range(m - 2, -1, -1):
        up[i] = order.meet(up[i], up[i + 1])
    lo = curve.points.copy()
    for i in range(1, m):
        lo[i] = order.join(lo[i], lo[i - 1])
    upper = QuantileCurve(curve.taus, up, curve.p, meta=dict(curve.meta, repair="meet-envelope"))
    lower = QuantileCurve(curve.taus, lo, curve.p, meta=dict(curve.meta, repair="join-envelope"))
    return Envelopes(upper, lower)


def _weighted_sort(values, weights):
    """Monotone rearrangement of a step function given by cell weights.

    Returns the nondecreasing step function with the same weighted value
    distribution, evaluated on the same cells.
    """
    order = np.argsort(values, kind="stable")
    sv = values[order]
    cw = np.cumsum(weights[order])
    target = np.cumsum(weights)
    idx = np.searchsorted(cw, target - 1e-12, side="left")
    idx = np.clip(idx, 0, len(sv) - 1)
    return sv[idx]


def rearrange(curve):
    """Coordinatewise monotone rearrangement of a curve.

    Each coordinate is rearranged to be nondecreasing in tau while keeping
    its weighted distribution of values; with a uniform grid this is a
    plain sort along tau.
    """
    w = curve.cell_weights()
    pts = np.column_stack([
        _weighted_sort(curve.points[:, j], w) for j in range(curve.dim)
    ])
    return QuantileCurve(curve.taus, pts, curve.p,
                         meta=dict(curve.meta, repair="rearrangement"))


def curve_distance(a, b, kappa=2.0):
    """Weighted L_kappa distance between two curves on the same grid."""
    if a.taus.shape != b.taus.shape or np.any(a.taus != b.taus):
        raise DataError("curves live on different tau grids")
    if not np.isfinite(kappa) or kappa < 1:
        raise DataError("kappa must be at least 1")
    w = a.cell_weights()
    diff = np.abs(a.points - b.points) ** kappa
    return float((w @ diff.sum(axis=1)) ** (1.0 / kappa))


def rearrangement_improvement(curve, target, kappa=2.0):
    """Distances of a curve and of its rearrangement to a monotone target.

    When the target is monotone in each coordinate the second number never
    exceeds the first.
    """
    rear = rearrange(curve)
    return curve_distance(curve, target, kappa), curve_distance(rear, target, kappa)


@dataclass
class MonotonicityDiagnostic:
    distance: float          # L_kappa distance to own rearrangement
    threshold: object        # 2 * error bound, or None if no bound given
    verdict: str             # "monotone", "inconclusive", or "not-monotone"


def monotonicity_diagnostic(curve, order, kappa=2.0, error_bound=None):
    """Test evidence against monotonicity of the population curve.

    The rearrangement can move an estimate by at most twice the estimation
    error when the population curve is monotone, so a distance above twice
    the supplied uniform error bound is incompatible with monotonicity.
    """
    d = curve_distance(curve, rearrange(curve), kappa)
    if curve.is_monotone(order):
        return MonotonicityDiagnostic(d, None, "monotone")
    if error_bound is None:
        return MonotonicityDiagnostic(d, None, "inconclusive")
    threshold = 2.0 * float(error_bound)
    verdict = "not-monotone" if d > threshold else "inconclusive"
    return MonotonicityDiagnostic(d, threshold, verdict)
