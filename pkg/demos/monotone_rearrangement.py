"""Repairing non-monotone quantile curves.

Perturbs a monotone curve, then shows that the weighted coordinatewise
rearrangement always moves it closer to the truth, and that the meet/join
envelopes sandwich the original curve.
"""

import numpy as np

from partialq import (
    ConicOrder,
    QuantileCurve,
    UnitSquareModel,
    curve_distance,
    envelopes,
    monotonicity_diagnostic,
    rearrange,
)


def main():
    model = UnitSquareModel()
    order = ConicOrder(2)
    taus = np.linspace(0.1, 0.9, 33)
    truth = np.array([model.quantile(t).points[0] for t in taus])

    rng = np.random.default_rng(7)
    noisy = truth + rng.normal(scale=0.05, size=truth.shape)
    curve = QuantileCurve(taus, noisy, p=np.full(taus.size, 0.5))
    print(f"noisy curve monotone: {curve.is_monotone(order)}")

    fixed = rearrange(curve)
    print(f"rearranged monotone:  {fixed.is_monotone(order)}")

    ref = QuantileCurve(taus, truth, p=np.full(taus.size, 0.5))
    for kappa in (1.0, 2.0, 4.0):
        before = curve_distance(curve, ref, kappa)
        after = curve_distance(fixed, ref, kappa)
        print(f"  kappa={kappa:.0f}: distance to truth {before:.4f} -> {after:.4f}")

    env = envelopes(curve, order)
    ok = np.all(env.upper.points <= curve.points + 1e-12) and \
        np.all(curve.points <= env.lower.points + 1e-12)
    print(f"envelopes sandwich the curve pointwise: {bool(ok)}")

    diag = monotonicity_diagnostic(curve, order, kappa=2.0, error_bound=0.01)
    print(f"diagnostic: distance {diag.distance:.4f}, verdict {diag.verdict}")


if __name__ == "__main__":
    main()
