"""Closed-form quantiles of the bundled models.

Walks the built-in distributions whose partial quantiles are known exactly
and prints the quantile points, comparable mass, and the comparability
constant for each.
"""

import numpy as np

from partialq import (
    ProductModel,
    TwoSquaresApartModel,
    TwoSquaresChainModel,
    UniformMarginal,
    UnitSquareModel,
)


def describe(name, model, taus):
    print(f"\n{name}")
    print("-" * len(name))
    for tau in taus:
        q = model.quantile(tau)
        pts = ", ".join(str(np.round(np.atleast_1d(p), 4)) for p in q.points)
        print(f"  tau={tau:4.2f}  points: {pts}  p={q.p:.4f}")
    value, tau_star = model.comparability()
    print(f"  comparability {value:.4f} attained at tau = {tau_star}")


def main():
    taus = [0.1, 0.25, 0.5, 0.75, 0.9]

    describe("Uniform on the unit square", UnitSquareModel(), taus)

    describe("Two ordered squares, touching at a corner",
             TwoSquaresChainModel(), taus)

    # Here the components are mutually incomparable, so the quantile can
    # sit in either square and the argmax set has two points away from the
    # median level.
    describe("Two squares ordered apart", TwoSquaresApartModel(), taus)

    for d in (2, 3, 4):
        model = ProductModel([UniformMarginal()] * d)
        describe(f"Independent uniforms, d={d}", model, [0.25, 0.5, 0.75])
        print(f"  (comparability halves with each extra dimension: "
              f"{model.comparability()[0]:.4f} = 1/2^{d - 1})")


if __name__ == "__main__":
    main()
