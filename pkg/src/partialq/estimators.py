"""Plug-in estimation of indices, quantile points, curves, and comparability.

All estimators work from a Sample: observations plus the order they live
under.  Counting order relations is the hot loop, so the candidate-set
routines use the order's vectorized masks and, for componentwise orders,
full pairwise boolean matrices.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .curves import QuantileCurve
from .errors import DataError, EmptyCandidateSet, TauOutOfRange, ZeroComparability
from .orders import ConicOrder, DagOrder, Order


@dataclass
class Sample:
    """Observations under a partial order.

    data is an (n, d) float array for geometric orders, or a list of labels
    for finite spaces.
    """

    data: object
    order: Order

    def __post_init__(self):
        if isinstance(self.data, np.ndarray) and self.data.ndim == 1:
            self.data = self.data.reshape(-1, 1)

    @property
    def n(self):
        return len(self.data)

    @property
    def is_labelled(self):
        return not isinstance(self.data, np.ndarray)


@dataclass
class IndexEstimate:
    x: object
    n: int
    below: int
    above: int
    comparable: int
    p_hat: float
    tau_hat: object          # float, or None when nothing is comparable
    se: object               # float, or None when tau_hat is None


@dataclass
class PointEstimate:
    x: object
    tau: float
    tau_hat: float
    p_hat: float
    feasible: bool
    slack: float
    n_candidates: int


@dataclass
class ComparabilityEstimate:
    value: float
    tau_star: float
    se: float
    curve: QuantileCurve


def default_slack(sample):
    """Constraint slack for the point estimator.

    Componentwise and cone orders admit a dimension-driven 2 d / n rate;
    finite labelled spaces need no slack at all; anything else falls back to
    sqrt(log n / n).
    """
    n = sample.n
    order = sample.order
    if isinstance(order, ConicOrder):
        return 2.0 * order.dim / n
    if isinstance(order, DagOrder):
        return 0.0
    return math.sqrt(math.log(n) / n)


def _counts_at(sample, x):
    le = sample.order.leq_mask(sample.data, x)
    ge = sample.order.geq_mask(sample.data, x)
    return int(le.sum()), int(ge.sum()), int((le | ge).sum())


def estimate_index(sample, x):
    """Empirical index of a point: share of comparables that sit below it."""
    below, above, comp = _counts_at(sample, x)
    n = sample.n
    p_hat = comp / n
    if comp == 0:
        return IndexEstimate(x, n, below, above, comp, p_hat, None, None)
    tau_hat = below / comp
    se = math.sqrt(tau_hat * (1.0 - tau_hat) / (n * p_hat))
    return IndexEstimate(x, n, below, above, comp, p_hat, tau_hat, se)


def estimate_index_field(sample, points):
    """Index estimate at each of many points."""
    return [estimate_index(sample, x) for x in points]


def _dominance_counts_2d(P, Q):
    """For each row of Q, the number of rows of P componentwise <=.

    Offline sweep in the first coordinate with a Fenwick tree over ranks of
    the second; O((n + m) log(n + m)) instead of the n * m pairwise matrix.
    """
    n, m = len(P), len(Q)
    uy = np.unique(np.concatenate([P[:, 1], Q[:, 1]]))
    size = len(uy)
    p_rank = (np.searchsorted(uy, P[:, 1]) + 1).tolist()
    q_rank = np.searchsorted(uy, Q[:, 1], side="right").tolist()
    po = np.argsort(P[:, 0], kind="stable")
    px = P[po, 0].tolist()
    pr = [p_rank[i] for i in po]
    qx = Q[:, 0].tolist()
    tree = [0] * (size + 1)
    out = np.empty(m, dtype=np.int64)
    i = 0
    for j in np.argsort(Q[:, 0], kind="stable").tolist():
        x = qx[j]
        while i < n and px[i] <= x:
            k = pr[i]
            while k <= size:
                tree[k] += 1
                k += k & -k
            i += 1
        s = 0
        k = q_rank[j]
        while k > 0:
            s += tree[k]
            k -= k & -k
        out[j] = s
    return out


def _counts_orthant_2d(data, cand):
    """Fast path of _candidate_counts for the planar componentwise order."""
    below = _dominance_counts_2d(data, cand)
    above = _dominance_counts_2d(-data, -cand)
    view = [("a", data.dtype), ("b", data.dtype)]
    dv = np.sort(np.ascontiguousarray(data).view(view).ravel())
    cv = np.ascontiguousarray(cand).view(view).ravel()
    equal = (np.searchsorted(dv, cv, side="right")
             - np.searchsorted(dv, cv, side="left"))
    comp = below + above - equal
    return below, above, comp


def _candidate_counts(sample, candidates):
    """below/above/comparable counts of every candidate, as arrays."""
    order = sample.order
    data = sample.data
    if (isinstance(order, ConicOrder) and order.generators is None
            and isinstance(data, np.ndarray) and data.shape[1] == 2):
        cand = np.asarray(candidates, dtype=float)
        return _counts_orthant_2d(np.asarray(data, dtype=float), cand)
    le = order.pairwise_leq(data, candidates)          # data[i] below cand[j]
    if candidates is data:
        ge = le.T
    else:
        ge = order.pairwise_leq(candidates, data).T    # cand[j] below data[i]
    below = le.sum(axis=0).astype(int)
    above = ge.sum(axis=0).astype(int)
    comp = (le | ge).sum(axis=0).astype(int)
    return below, above, comp


def lattice_candidates(sample, neighbors=1):
    """Sample points augmented with meets and joins of near neighbors.

    Only available for lattice orders.  Each observation contributes the
    meet and join with each of its `neighbors` nearest neighbors;
    duplicates are dropped.
    """
    from scipy.spatial import cKDTree

    order = sample.order
    if not getattr(order, "is_lattice", False):
        raise DataError("candidate augmentation needs a lattice order")
    X = np.asarray(sample.data, float)
    tree = cKDTree(X)
    k = min(neighbors + 1, len(X))
    _, idx = tree.query(X, k=k)
    idx = np.atleast_2d(idx)
    out = [X]
    for j in range(1, k):
        nb = X[idx[:, j]]
        out.append(np.minimum(X, nb))
        out.append(np.maximum(X, nb))
    cand = np.vstack(out)
    return np.unique(cand, axis=0)


def _resolve_candidates(sample, candidates):
    if candidates is None or (isinstance(candidates, str) and candidates == "sample"):
        return sample.data
    if isinstance(candidates, str):
        if candidates == "lattice":
            return lattice_candidates(sample)
        raise DataError(f"unknown candidate strategy {candidates!r}")
    return candidates


def estimate_point(sample, tau, candidates=None, slack=None):
    """Quantile point estimate at level tau.

    Maximizes the comparable share over candidates subject to the two index
    constraints, relaxed by the slack.  Ties go to the candidate whose
    estimated index is closest to tau, then to the lexicographically
    smallest point.  If no candidate is feasible the least-violating one is
    returned with feasible=False.
    """
    tau = float(tau)
    if not 0.0 < tau < 1.0:
        raise TauOutOfRange(tau)
    cand = _resolve_candidates(sample, candidates)
    if len(cand) == 0:
        raise EmptyCandidateSet("no candidates supplied")
    if slack is None:
        slack = default_slack(sample)
    n = sample.n
    below, above, comp = _candidate_counts(sample, cand)
    p_hat = comp / n
    viol_up = (1.0 - tau) * p_hat - above / n
    viol_lo = tau * p_hat - below / n
    violation = np.maximum(np.maximum(viol_up, viol_lo), 0.0)
    feasible = violation <= slack + 1e-12
    if not np.any(comp > 0):
        raise ZeroComparability("no candidate is comparable to any observation")

    with np.errstate(invalid="ignore", divide="ignore"):
        tau_hat = np.where(comp > 0, below / np.maximum(comp, 1), np.nan)
    if np.any(feasible):
        pool = np.flatnonzero(feasible)
        best_p = p_hat[pool].max()
        pool = pool[p_hat[pool] == best_p]
        gaps = np.abs(tau_hat[pool] - tau)
        pool = pool[gaps == gaps.min()]
        j = pool[_lexi_smallest(cand, pool)]
        ok = True
    else:
        pool = np.flatnonzero(violation == violation.min())
        j = pool[_lexi_smallest(cand, pool)]
        ok = False
    x = cand[j] if not sample.is_labelled or isinstance(cand, np.ndarray) else cand[int(j)]
    return PointEstimate(
        x=x,
        tau=tau,
        tau_hat=float(tau_hat[j]) if comp[j] > 0 else float("nan"),
        p_hat=float(p_hat[j]),
        feasible=ok,
        slack=float(slack),
        n_candidates=len(cand),
    )


def _lexi_smallest(cand, pool):
    if isinstance(cand, np.ndarray) and cand.ndim == 2:
        sub = cand[pool]
        return int(np.lexsort(sub.T[::-1])[0])
    sub = [cand[int(i)] for i in pool]
    return int(min(range(len(sub)), key=lambda k: str(sub[k])))


def estimate_curve(sample, taus, candidates=None, slack=None):
    """Point estimates across a tau grid, packaged as a QuantileCurve.

    The candidate counts are computed once and reused for every tau.  The
    curve's meta records which levels were feasible.
    """
    taus = np.asarray(taus, dtype=float)
    if taus.ndim != 1 or taus.size == 0:
        raise DataError("need a nonempty 1-d tau grid")
    if np.any((taus <= 0) | (taus >= 1)):
        raise TauOutOfRange("grid values must lie in (0, 1)")
    cand = _resolve_candidates(sample, candidates)
    if sample.is_labelled:
        raise DataError("curves need numeric observations")
    if slack is None:
        slack = default_slack(sample)
    n = sample.n
    below, above, comp = _candidate_counts(sample, cand)
    if not np.any(comp > 0):
        raise ZeroComparability("no candidate is comparable to any observation")
    p_hat = comp / n
    with np.errstate(invalid="ignore", divide="ignore"):
        tau_hat = np.where(comp > 0, below / np.maximum(comp, 1), np.nan)
    cand = np.asarray(cand, float)
    points = np.empty((taus.size, cand.shape[1]))
    pvals = np.empty(taus.size)
    feas = np.empty(taus.size, dtype=bool)
    for k, t in enumerate(taus):
        viol_up = (1.0 - t) * p_hat - above / n
        viol_lo = t * p_hat - below / n
        violation = np.maximum(np.maximum(viol_up, viol_lo), 0.0)
        feasible = violation <= slack + 1e-12
        if np.any(feasible):
            pool = np.flatnonzero(feasible)
            best_p = p_hat[pool].max()
            pool = pool[p_hat[pool] == best_p]
            gaps = np.abs(tau_hat[pool] - t)
            pool = pool[gaps == gaps.min()]
            j = pool[_lexi_smallest(cand, pool)]
            feas[k] = True
        else:
            pool = np.flatnonzero(violation == violation.min())
            j = pool[_lexi_smallest(cand, pool)]
            feas[k] = False
        points[k] = cand[j]
        pvals[k] = p_hat[j]
    curve = QuantileCurve(taus, points, pvals,
                          meta={"n": n, "slack": float(slack),
                                "feasible": feas.tolist()})
    curve.meta["monotone"] = curve.is_monotone(sample.order)
    return curve


def estimate_comparability(sample, taus=None, candidates=None, slack=None):
    """Minimum over the tau grid of the estimated comparable mass at the
    quantile point, with its argmin and a binomial standard error."""
    if taus is None:
        taus = np.linspace(0.05, 0.95, 19)
    curve = estimate_curve(sample, taus, candidates=candidates, slack=slack)
    i = int(np.argmin(curve.p))
    value = float(curve.p[i])
    se = math.sqrt(max(value * (1.0 - value), 0.0) / sample.n)
    return ComparabilityEstimate(value, float(curve.taus[i]), se, curve)


def influence_index(order, x, y, tau_x, p_x):
    """Influence of an observation at y on (tau(x), p(x)).

    Returns the pair of influence values; averaging them over the sample
    gives zero at the empirical plug-in.
    """
    if p_x <= 0:
        raise ZeroComparability("influence undefined where p(x) = 0")
    le = 1.0 if order.leq(y, x) else 0.0
    ge = 1.0 if order.leq(x, y) else 0.0
    comp = 1.0 if (le or ge) else 0.0
    if_tau = (le - tau_x * comp) / p_x
    if_p = comp - p_x
    return if_tau, if_p


def index_covariance(sample, z, y):
    """Estimated asymptotic covariance of the index estimates at z and y.

    The formula combines the joint frequencies of the lower sets and the
    comparable sets of the two points.  With z equal to y it reduces to
    tau (1 - tau) / p.
    """
    order = sample.order
    data = sample.data
    n = sample.n
    wz = order.leq_mask(data, z)
    wy = order.leq_mask(data, y)
    cz = wz | order.geq_mask(data, z)
    cy = wy | order.geq_mask(data, y)
    Pwz, Pwy = wz.mean(), wy.mean()
    pz, py = cz.mean(), cy.mean()
    if Pwz == 0 or Pwy == 0 or pz == 0 or py == 0:
        raise ZeroComparability("covariance undefined with empty sets")
    tz, ty = Pwz / pz, Pwy / py
    term = ((wz & wy).mean() / (Pwz * Pwy)
            + (cz & cy).mean() / (pz * py)
            - (cz & wy).mean() / (pz * Pwy)
            - (wz & cy).mean() / (Pwz * py))
    return tz * ty * term


# ---------------------------------------------------------------------------
# Observation files.

def read_observations_csv(path):
    """Read observations from a CSV with a header row.

    All-numeric columns become an (n, d) float array; otherwise the first
    column is taken as a label list.
    """
    with open(path) as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataError(f"{path}: empty file")
        rows = [r for r in reader if r]
    if not rows:
        raise DataError(f"{path}: no observations")
    try:
        arr = np.array([[float(v) for v in r] for r in rows], dtype=float)
    except ValueError:
        return [r[0].strip() for r in rows]
    if any(len(r) != len(header) for r in rows):
        raise DataError(f"{path}: ragged rows")
    return arr


def write_observations_csv(path, data, header=None):
    data = np.asarray(data)
    if data.ndim == 1:
        data = data.reshape(-1, 1)
    if header is None:
        header = [f"x{j + 1}" for j in range(data.shape[1])]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in data:
            writer.writerow([repr(float(v)) for v in row])
