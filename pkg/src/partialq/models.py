"""Population models with closed-form order statistics.

Each model knows its own partial order and can report, for a point x, the
probabilities of falling below x, above x, and in the comparable set of x,
together with the induced index tau(x).  Models with known closed forms also
return quantile points, the p(tau) curve, and the comparability constant
directly; otherwise those come from grid minimization.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, TauOutOfRange
from .orders import (
    ConicOrder,
    DagOrder,
    IntervalOrder,
    ScoreOrder,
    FiniteDistribution,
    finite_quantiles,
    load_counts_csv,
    load_edge_list,
)


def _check_tau(tau):
    tau = float(tau)
    if not 0.0 < tau < 1.0:
        raise TauOutOfRange(tau)
    return tau


@dataclass
class IndexValues:
    """Population index quantities at a point."""
    below: float
    above: float
    p: float
    tau: object  # float, or None when p == 0


@dataclass
class QuantileResult:
    points: list
    p: float
    tau: float
    note: str = ""


class Model:
    """Base population model."""

    def cdf_pair(self, x):
        below = self.prob_below(x)
        above = self.prob_above(x)
        p = below + above
        tau = below / p if p > 0 else None
        return IndexValues(below, above, p, tau)

    def prob_below(self, x):
        raise NotImplementedError

    def prob_above(self, x):
        raise NotImplementedError

    def quantile(self, tau):
        raise NotImplementedError

    def p_tau(self, tau):
        return self.quantile(tau).p

    def comparability(self, step=1e-4):
        """Minimum of p(tau) over (0, 1) and its argmin, by grid search."""
        taus = np.arange(step, 1.0, step)
        vals = np.array([self.p_tau(t) for t in taus])
        i = int(np.argmin(vals))
        return float(vals[i]), float(taus[i])

    def sample(self, n, rng):
        raise NotImplementedError


# ---------------------------------------------------------------------------
# Uniform laws on unions of axis-aligned boxes, componentwise order.

class BoxUnionModel(Model):
    """Uniform distribution on a disjoint union of axis-aligned boxes."""

    def __init__(self, boxes):
        # each box is (lo, hi) arrays
        self.boxes = [(np.asarray(lo, float), np.asarray(hi, float)) for lo, hi in boxes]
        self.dim = self.boxes[0][0].size
        self._vols = np.array([np.prod(hi - lo) for lo, hi in self.boxes])
        self.total = float(self._vols.sum())
        self.order = ConicOrder(self.dim)

    def prob_below(self, x):
        x = np.asarray(x, float)
        acc = 0.0
        for lo, hi in self.boxes:
            acc += float(np.prod(np.clip(np.minimum(hi, x) - lo, 0.0, None)))
        return acc / self.total

    def prob_above(self, x):
        x = np.asarray(x, float)
        acc = 0.0
        for lo, hi in self.boxes:
            acc += float(np.prod(np.clip(hi - np.maximum(lo, x), 0.0, None)))
        return acc / self.total

    def support_box(self):
        lo = np.min([b[0] for b in self.boxes], axis=0)
        hi = np.max([b[1] for b in self.boxes], axis=0)
        return lo, hi

    def density(self, x):
        x = np.asarray(x, float)
        for lo, hi in self.boxes:
            if np.all(x >= lo) and np.all(x <= hi):
                return 1.0 / self.total
        return 0.0

    def sample(self, n, rng):
        probs = self._vols / self.total
        idx = rng.choice(len(self.boxes), size=n, p=probs)
        out = np.empty((n, self.dim))
        for k, (lo, hi) in enumerate(self.boxes):
            mask = idx == k
            m = int(mask.sum())
            if m:
                out[mask] = rng.uniform(lo, hi, size=(m, self.dim))
        return out


class UnitSquareModel(BoxUnionModel):
    """Uniform on the unit square under the componentwise order."""

    def __init__(self):
        super().__init__([(np.zeros(2), np.ones(2))])

    def quantile(self, tau):
        tau = _check_tau(tau)
        r = math.sqrt(tau) / (math.sqrt(tau) + math.sqrt(1.0 - tau))
        p = 1.0 / (1.0 + 2.0 * math.sqrt(tau * (1.0 - tau)))
        return QuantileResult([np.array([r, r])], p, tau)

    def comparability(self, step=1e-4):
        return 0.5, 0.5


class TwoSquaresApartModel(BoxUnionModel):
    """Uniform on two order-incomparable unit-side-2 squares.

    The squares sit off the diagonal, so mass in one square is never
    comparable to mass in the other; every quantile has two symmetric
    representatives and the comparability constant is 1/4.
    """

    def __init__(self):
        super().__init__([
            (np.array([-1.0, 1.0]), np.array([1.0, 3.0])),
            (np.array([1.0, -1.0]), np.array([3.0, 1.0])),
        ])

    def quantile(self, tau):
        tau = _check_tau(tau)
        s = math.sqrt(tau) / (math.sqrt(tau) + math.sqrt(1.0 - tau))
        p = (s ** 2 + (1.0 - s) ** 2) / 2.0
        pts = [
            np.array([-1.0 + 2.0 * s, 1.0 + 2.0 * s]),
            np.array([1.0 + 2.0 * s, -1.0 + 2.0 * s]),
        ]
        return QuantileResult(pts, p, tau)

    def comparability(self, step=1e-4):
        return 0.25, 0.5


class TwoSquaresChainModel(BoxUnionModel):
    """Uniform on two unit squares meeting at a corner along the diagonal."""

    def __init__(self):
        super().__init__([
            (np.zeros(2), np.ones(2)),
            (np.ones(2), np.full(2, 2.0)),
        ])

    @staticmethod
    def _s(tau):
        # root in (0, 1) of c s^2 + s - 1 = 0 with c = 1/(2 tau) - 1
        c = 1.0 / (2.0 * tau) - 1.0
        if abs(c) < 1e-14:
            return 1.0
        return (math.sqrt(1.0 + 4.0 * c) - 1.0) / (2.0 * c)

    def quantile(self, tau):
        tau = _check_tau(tau)
        if tau < 0.5:
            s = self._s(tau)
            pt = np.array([s, s])
        elif tau > 0.5:
            s = self._s(1.0 - tau)
            pt = np.array([2.0 - s, 2.0 - s])
        else:
            s = 1.0
            pt = np.array([1.0, 1.0])
        p = (1.0 + (1.0 - s) ** 2 + s ** 2) / 2.0
        return QuantileResult([pt], p, tau)

    def comparability(self, step=1e-4):
        # p(s) = (1 + (1-s)^2 + s^2)/2 is minimized at s = 1/2, where the
        # index works out to 1/6 (and 5/6 on the mirror branch).
        return 0.75, 1.0 / 6.0


# ---------------------------------------------------------------------------
# Independent coordinates, componentwise order.

class Marginal:
    name = "marginal"

    def cdf(self, x):
        raise NotImplementedError

    def quantile(self, u):
        raise NotImplementedError

    def pdf(self, x):
        raise NotImplementedError

    def sample(self, n, rng):
        return self.quantile(rng.uniform(size=n))


class UniformMarginal(Marginal):
    name = "uniform"

    def __init__(self, a=0.0, b=1.0):
        if not b > a:
            raise DataError(f"uniform needs b > a, got ({a}, {b})")
        self.a, self.b = float(a), float(b)

    def cdf(self, x):
        return np.clip((np.asarray(x, float) - self.a) / (self.b - self.a), 0.0, 1.0)

    def quantile(self, u):
        return self.a + (self.b - self.a) * np.asarray(u, float)

    def pdf(self, x):
        return 1.0 / (self.b - self.a) if self.a <= x <= self.b else 0.0


class NormalMarginal(Marginal):
    name = "normal"

    def __init__(self, mu=0.0, sigma=1.0):
        if sigma <= 0:
            raise DataError(f"normal needs sigma > 0, got {sigma}")
        self.mu, self.sigma = float(mu), float(sigma)

    def cdf(self, x):
        from scipy.special import ndtr
        return ndtr((np.asarray(x, float) - self.mu) / self.sigma)

    def quantile(self, u):
        from scipy.special import ndtri
        return self.mu + self.sigma * ndtri(np.asarray(u, float))

    def pdf(self, x):
        z = (float(x) - self.mu) / self.sigma
        return math.exp(-0.5 * z * z) / (self.sigma * math.sqrt(2.0 * math.pi))


class ExponentialMarginal(Marginal):
    name = "exponential"

    def __init__(self, rate=1.0):
        if rate <= 0:
            raise DataError(f"exponential needs rate > 0, got {rate}")
        self.rate = float(rate)

    def cdf(self, x):
        x = np.asarray(x, float)
        return np.where(x > 0, -np.expm1(-self.rate * x), 0.0)

    def quantile(self, u):
        return -np.log1p(-np.asarray(u, float)) / self.rate

    def pdf(self, x):
        return self.rate * math.exp(-self.rate * float(x)) if x >= 0 else 0.0


class ProductModel(Model):
    """Independent coordinates with given marginals, componentwise order."""

    def __init__(self, marginals):
        self.marginals = list(marginals)
        self.dim = len(self.marginals)
        if self.dim == 0:
            raise DataError("need at least one marginal")
        self.order = ConicOrder(self.dim)

    def prob_below(self, x):
        x = np.asarray(x, float)
        return float(np.prod([m.cdf(x[j]) for j, m in enumerate(self.marginals)]))

    def prob_above(self, x):
        x = np.asarray(x, float)
        return float(np.prod([1.0 - m.cdf(x[j]) for j, m in enumerate(self.marginals)]))

    def quantile(self, tau):
        tau = _check_tau(tau)
        d = self.dim
        a = tau ** (1.0 / d)
        b = (1.0 - tau) ** (1.0 / d)
        s = a / (a + b)
        pt = np.array([m.quantile(s) for m in self.marginals], dtype=float)
        p = (a + b) ** (-d)
        return QuantileResult([pt], p, tau)

    def comparability(self, step=1e-4):
        return 0.5 ** (self.dim - 1), 0.5

    def support_box(self):
        lo = np.array([m.quantile(1e-9) for m in self.marginals], float)
        hi = np.array([m.quantile(1 - 1e-9) for m in self.marginals], float)
        return lo, hi

    def density(self, x):
        x = np.atleast_1d(np.asarray(x, float))
        return float(np.prod([m.pdf(x[j]) for j, m in enumerate(self.marginals)]))

    def sample(self, n, rng):
        cols = [np.asarray(m.sample(n, rng), float) for m in self.marginals]
        return np.column_stack(cols)


def index_law_cdf(d, tau, method="fft", n_mc=10 ** 6, seed=0):
    """CDF of the random index of an observation, independent continuous case.

    For d independent coordinates, P(tau(X) <= tau) equals the probability
    that a sum of d standard logistic variables falls below log(tau/(1-tau)).
    The "fft" method convolves a discretized logistic density (error well
    below 1e-6); "mc" averages over n_mc draws (standard error at most
    0.5 / sqrt(n_mc)).
    """
    tau = _check_tau(tau)
    d = int(d)
    if d < 1:
        raise DataError("d must be at least 1")
    if d == 1:
        return tau
    t = math.log(tau / (1.0 - tau))
    if method == "mc":
        rng = np.random.default_rng(seed)
        z = rng.logistic(size=(n_mc, d)).sum(axis=1)
        return float(np.mean(z <= t))
    if method != "fft":
        raise DataError(f"unknown method {method!r}")
    from scipy.signal import fftconvolve

    dx = 2e-3
    half = 25.0 + 8.0 * d
    grid = np.arange(-half, half + dx, dx)
    pdf = np.exp(-np.abs(grid)) / (1.0 + np.exp(-np.abs(grid))) ** 2
    dens = pdf
    lo = -half
    for _ in range(d - 1):
        dens = fftconvolve(dens, pdf) * dx
        lo += -half
    xs = lo + dx * np.arange(dens.size)
    cdf = (np.cumsum(dens) - 0.5 * dens) * dx
    cdf /= cdf[-1] + 0.5 * dens[-1] * dx
    return float(np.interp(t, xs, cdf))


# ---------------------------------------------------------------------------
# Random subintervals of [0, 1] under the covering order.

class IntervalModel(Model):
    """Intervals [A, B] with (A, B) uniform on {0 <= a <= b <= 1}.

    A point is an interval; x is below y when y covers x.  Wider intervals
    sit higher in the order.
    """

    def __init__(self):
        self.dim = 2
        self.order = IntervalOrder()

    def prob_below(self, x):
        a, b = float(x[0]), float(x[1])
        if not 0.0 <= a <= b <= 1.0:
            raise DataError(f"not a subinterval of [0, 1]: {x}")
        return (b - a) ** 2

    def prob_above(self, x):
        a, b = float(x[0]), float(x[1])
        if not 0.0 <= a <= b <= 1.0:
            raise DataError(f"not a subinterval of [0, 1]: {x}")
        return 2.0 * a * (1.0 - b)

    def quantile(self, tau):
        tau = _check_tau(tau)
        a = math.sqrt(2.0 * (1.0 - tau) / tau)
        w = 1.0 / (2.0 + 2.0 * a)
        pt = np.array([0.5 - w, 0.5 + w])
        p = (1.0 / (1.0 + a)) ** 2 + 2.0 * (0.5 - 1.0 / (2.0 + 2.0 * a)) ** 2
        return QuantileResult([pt], p, tau)

    def sample(self, n, rng):
        u = rng.uniform(size=(n, 2))
        return np.sort(u, axis=1)


# ---------------------------------------------------------------------------
# Complete orders through a score.

class ScoreModel(Model):
    """Scalar law under the complete order of the real line.

    Every pair is comparable, so p(x) = 1 and the index is the ordinary CDF.
    """

    def __init__(self, marginal):
        self.marginal = marginal
        self.dim = 1
        self.order = ScoreOrder()

    def prob_below(self, x):
        return float(self.marginal.cdf(np.atleast_1d(np.asarray(x, float))[0]))

    def prob_above(self, x):
        return 1.0 - self.prob_below(x)

    def quantile(self, tau):
        tau = _check_tau(tau)
        return QuantileResult([np.atleast_1d(self.marginal.quantile(tau))], 1.0, tau)

    def comparability(self, step=1e-4):
        return 1.0, 0.5

    def support_box(self):
        return (np.atleast_1d(self.marginal.quantile(1e-9)),
                np.atleast_1d(self.marginal.quantile(1 - 1e-9)))

    def density(self, x):
        return self.marginal.pdf(np.atleast_1d(np.asarray(x, float))[0])

    def sample(self, n, rng):
        return np.asarray(self.marginal.sample(n, rng), float).reshape(-1, 1)


# ---------------------------------------------------------------------------
# Degenerate case: uniform law on the probability simplex.

class SimplexModel(Model):
    """Uniform law on the open probability simplex, componentwise order.

    Distinct points of the simplex are never componentwise ordered, so every
    comparable set has probability zero and the index is undefined
    everywhere.  By convention the conditional probabilities are reported as
    one, every tau-surface is the whole simplex, and the comparability
    constant is zero.
    """

    degenerate = True

    def __init__(self, dim=3):
        if dim < 2:
            raise DataError("simplex needs dimension at least 2")
        self.dim = int(dim)
        self.order = ConicOrder(self.dim)

    def cdf_pair(self, x):
        return IndexValues(0.0, 0.0, 0.0, None)

    def prob_below(self, x):
        return 0.0

    def prob_above(self, x):
        return 0.0

    def conditional_pair(self, x):
        """Conventional conditional probabilities given comparability."""
        return 1.0, 1.0

    def quantile(self, tau):
        _check_tau(tau)
        return QuantileResult([], 0.0, float(tau), note="entire simplex")

    def comparability(self, step=1e-4):
        return 0.0, None

    def sample(self, n, rng):
        return rng.dirichlet(np.ones(self.dim), size=n)


# ---------------------------------------------------------------------------
# Finite labelled spaces.

class FiniteModel(Model):
    """Finite labelled space with an explicit order and atom masses."""

    def __init__(self, dist, order):
        self.dist = dist
        self.order = order

    def cdf_pair(self, x):
        table = finite_quantiles(self.dist, self.order)
        row = table.row(x)
        return IndexValues(row.below, row.above, row.p, row.tau)

    def quantile(self, tau):
        tau = _check_tau(tau)
        table = finite_quantiles(self.dist, self.order, taus=[tau])
        best = table.argmax[tau]
        p = table.row(best[0]).p if best else 0.0
        return QuantileResult(best, float(p), tau)

    def comparability(self, step=1e-3):
        taus = np.arange(step, 1.0, step)
        table = finite_quantiles(self.dist, self.order, taus=list(taus))
        best_p = None
        best_t = None
        for t in taus:
            labs = table.argmax[float(t)]
            p = float(table.row(labs[0]).p) if labs else 0.0
            if best_p is None or p < best_p:
                best_p, best_t = p, float(t)
        return best_p, best_t

    def sample(self, n, rng):
        return self.dist.sample(n, rng)


# ---------------------------------------------------------------------------
# Configuration files.

_MARGINALS = {
    "uniform": lambda c: UniformMarginal(c.get("a", 0.0), c.get("b", 1.0)),
    "normal": lambda c: NormalMarginal(c.get("mu", 0.0), c.get("sigma", 1.0)),
    "exponential": lambda c: ExponentialMarginal(c.get("rate", 1.0)),
}


def marginal_from_config(cfg):
    kind = cfg.get("dist")
    if kind not in _MARGINALS:
        raise DataError(f"unknown marginal {kind!r}")
    return _MARGINALS[kind](cfg)


def model_from_config(cfg):
    """Build a model from a config dict, JSON path, or shorthand name."""
    if isinstance(cfg, str):
        shortcuts = {
            "unit-square": UnitSquareModel,
            "two-squares-apart": TwoSquaresApartModel,
            "two-squares-chain": TwoSquaresChainModel,
            "intervals": IntervalModel,
        }
        if cfg in shortcuts:
            return shortcuts[cfg]()
        with open(cfg) as fh:
            cfg = json.load(fh)
    kind = cfg.get("kind")
    if kind == "unit-square":
        return UnitSquareModel()
    if kind == "two-squares-apart":
        return TwoSquaresApartModel()
    if kind == "two-squares-chain":
        return TwoSquaresChainModel()
    if kind == "box-union":
        return BoxUnionModel([(b["lo"], b["hi"]) for b in cfg["boxes"]])
    if kind == "independent-product":
        return ProductModel([marginal_from_config(m) for m in cfg["marginals"]])
    if kind == "intervals":
        return IntervalModel()
    if kind == "score":
        return ScoreModel(marginal_from_config(cfg["dist"]))
    if kind == "simplex":
        return SimplexModel(cfg.get("dim", 3))
    if kind == "finite":
        dist = load_counts_csv(cfg["counts"])
        labels, edges = load_edge_list(cfg["edges"])
        extra = [lab for lab in dist.labels if lab not in labels]
        order = DagOrder(labels + extra, edges, transitive=cfg.get("transitive", True))
        return FiniteModel(dist, order)
    raise DataError(f"unknown model kind {kind!r}")
