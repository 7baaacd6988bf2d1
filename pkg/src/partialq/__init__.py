"""Quantiles of multivariate random variables under partial orders.

The package splits into small layers: orders define "below", models carry
population probabilities in closed form, estimators do the plug-in work on
samples, and the remaining modules monotonize curves, build central
regions, and search log-concave laws with a randomized solver.
"""

from .curves import QuantileCurve
from .errors import (
    DataError,
    NumericError,
    NotALattice,
    NotAPartialOrder,
    PartialQError,
    TauOutOfRange,
)
from .estimators import (
    Sample,
    default_slack,
    estimate_comparability,
    estimate_curve,
    estimate_index,
    estimate_index_field,
    estimate_point,
    index_covariance,
    influence_index,
    lattice_candidates,
)
from .models import (
    ExponentialMarginal,
    IntervalModel,
    NormalMarginal,
    ProductModel,
    ScoreModel,
    SimplexModel,
    TwoSquaresApartModel,
    TwoSquaresChainModel,
    UniformMarginal,
    UnitSquareModel,
    index_law_cdf,
    model_from_config,
)
from .monotonize import (
    curve_distance,
    envelopes,
    monotonicity_diagnostic,
    rearrange,
    rearrangement_improvement,
)
from .orders import (
    Comparison,
    ConicOrder,
    DagOrder,
    FiniteDistribution,
    IntervalOrder,
    ScoreOrder,
    finite_quantiles,
)
from .regions import calibrate_theta, coverage_grid, field_values, region
from .solver import SolveProblem, anneal_optimize, mc_probability_oracle

__version__ = "0.1.0"
