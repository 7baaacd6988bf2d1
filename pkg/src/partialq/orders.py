"""Partial orders on sample spaces, and exact quantiles on finite spaces.

An order object answers "is x below y" for points of its space and, when the
order comes from a lattice, computes meets and joins.  Vectorized mask
helpers are provided because the estimators count order relations against
thousands of observations at a time.
"""

import enum
import csv
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (
    DimensionMismatch,
    NotALattice,
    NotAPartialOrder,
    UnknownLabel,
    UnnormalizedDistribution,
    TauOutOfRange,
    DataError,
)

_FEAS_TOL = 1e-9


class Comparison(enum.Enum):
    PRECEDES = "precedes"
    SUCCEEDS = "succeeds"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


class Order:
    """Base class. Subclasses implement leq(x, y) meaning x is below y."""

    transitive = True
    is_lattice = False

    def leq(self, x, y):
        raise NotImplementedError

    def compare(self, x, y):
        le = self.leq(x, y)
        ge = self.leq(y, x)
        if le and ge:
            return Comparison.EQUAL
        if le:
            return Comparison.PRECEDES
        if ge:
            return Comparison.SUCCEEDS
        return Comparison.INCOMPARABLE

    def leq_mask(self, points, x):
        """Boolean mask over points: points[i] below x."""
        return np.array([self.leq(p, x) for p in points], dtype=bool)

    def geq_mask(self, points, x):
        return np.array([self.leq(x, p) for p in points], dtype=bool)

    def pairwise_leq(self, points, candidates):
        """Matrix M with M[i, j] = points[i] below candidates[j]."""
        return np.column_stack([self.leq_mask(points, c) for c in candidates])

    def meet(self, x, y):
        raise NotALattice(f"{type(self).__name__} has no meet operation")

    def join(self, x, y):
        raise NotALattice(f"{type(self).__name__} has no join operation")


class ConicOrder(Order):
    """Order induced by a closed convex cone: x below y iff y - x is in the cone.

    With no generators the cone is the nonnegative orthant, which makes the
    order the componentwise one and a lattice (min/max).  A generator matrix
    (one generator per row) gives a general cone; it must be proper, meaning
    full-dimensional and containing no line.
    """

    is_lattice = True

    def __init__(self, dim, generators=None):
        self.dim = int(dim)
        if generators is None:
            self.generators = None
        else:
            G = np.asarray(generators, dtype=float)
            if G.ndim != 2 or G.shape[1] != self.dim:
                raise DimensionMismatch(self.dim, G.shape)
            self._check_proper(G)
            self.generators = G
            self.is_lattice = False

    @staticmethod
    def _check_proper(G):
        from scipy.optimize import linprog

        if np.linalg.matrix_rank(G) < G.shape[1]:
            raise NotAPartialOrder("cone generators do not span the space")
        # Pointedness: no nonzero nonnegative combination of generators is 0.
        # Normalize with sum(lam) = 1 and test feasibility of G^T lam = 0.
        k = G.shape[0]
        A_eq = np.vstack([G.T, np.ones((1, k))])
        b_eq = np.append(np.zeros(G.shape[1]), 1.0)
        res = linprog(np.zeros(k), A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * k)
        if res.status == 0:
            raise NotAPartialOrder("cone contains a line; order is not antisymmetric")

    def _in_cone(self, v):
        if self.generators is None:
            return bool(np.all(v >= 0))
        from scipy.optimize import nnls

        _, resid = nnls(self.generators.T, np.asarray(v, dtype=float))
        return resid <= _FEAS_TOL * max(1.0, float(np.linalg.norm(v)))

    def leq(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.shape != (self.dim,) or y.shape != (self.dim,):
            raise DimensionMismatch(self.dim, (x.shape, y.shape))
        return self._in_cone(y - x)

    def leq_mask(self, points, x):
        points = np.asarray(points, dtype=float)
        if self.generators is None:
            return np.all(points <= np.asarray(x, dtype=float), axis=1)
        return super().leq_mask(points, x)

    def geq_mask(self, points, x):
        points = np.asarray(points, dtype=float)
        if self.generators is None:
            return np.all(points >= np.asarray(x, dtype=float), axis=1)
        return super().geq_mask(points, x)

    def pairwise_leq(self, points, candidates):
        if self.generators is None:
            P = np.asarray(points, dtype=float)
            C = np.asarray(candidates, dtype=float)
            return np.all(P[:, None, :] <= C[None, :, :], axis=2)
        return super().pairwise_leq(points, candidates)

    def meet(self, x, y):
        if self.generators is not None:
            raise NotALattice("general cone orders are not lattices")
        return np.minimum(np.asarray(x, float), np.asarray(y, float))

    def join(self, x, y):
        if self.generators is not None:
            raise NotALattice("general cone orders are not lattices")
        return np.maximum(np.asarray(x, float), np.asarray(y, float))


class DagOrder(Order):
    """Order on a finite labelled space given by a directed graph.

    An edge "a -> b" means a is below b.  By default edges are closed under
    transitivity (the graph must be acyclic).  With transitive=False the
    stated arcs plus reflexivity are the entire relation, which models
    deliberately non-transitive preferences; antisymmetry of the arcs is
    still enforced.
    """

    def __init__(self, labels, edges, transitive=True):
        self.labels = list(labels)
        if len(set(self.labels)) != len(self.labels):
            raise DataError("duplicate labels")
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self.transitive = bool(transitive)
        self.edges = [(str(a), str(b)) for a, b in edges]
        for a, b in self.edges:
            if a not in self._index or b not in self._index:
                raise UnknownLabel(a if a not in self._index else b)
        if self.transitive:
            self._above = self._closure()
        else:
            for a, b in self.edges:
                if a != b and (b, a) in set(self.edges):
                    raise NotAPartialOrder(f"arcs {a}->{b} and {b}->{a} both present")
            self._above = {lab: {lab} for lab in self.labels}
            for a, b in self.edges:
                self._above[a].add(b)

    def _closure(self):
        succ = {lab: set() for lab in self.labels}
        for a, b in self.edges:
            succ[a].add(b)
        above = {}
        for lab in self.labels:
            seen = set()
            stack = [lab]
            while stack:
                u = stack.pop()
                for v in succ[u]:
                    if v == lab:
                        raise NotAPartialOrder(f"cycle through {lab!r}")
                    if v not in seen:
                        seen.add(v)
                        stack.append(v)
            seen.add(lab)
            above[lab] = seen
        return above

    def leq(self, x, y):
        if x not in self._index:
            raise UnknownLabel(x)
        if y not in self._index:
            raise UnknownLabel(y)
        return y in self._above[x]

    def leq_mask(self, points, x):
        ups = {lab for lab in self.labels if x in self._above[lab]}
        return np.array([p in ups for p in points], dtype=bool)

    def geq_mask(self, points, x):
        up = self._above[x]
        return np.array([p in up for p in points], dtype=bool)


class ScoreOrder(Order):
    """Complete order through a real-valued score: x below y iff u(x) <= u(y)."""

    def __init__(self, score=None):
        self.score = score if score is not None else _first_coordinate

    def leq(self, x, y):
        return float(self.score(x)) <= float(self.score(y))

    def _scores(self, points):
        points = list(points)
        return np.array([float(self.score(p)) for p in points], dtype=float)

    def leq_mask(self, points, x):
        return self._scores(points) <= float(self.score(x))

    def geq_mask(self, points, x):
        return self._scores(points) >= float(self.score(x))


def _first_coordinate(x):
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    return arr[0]


class IntervalOrder(Order):
    """Covering order on closed intervals: x below y iff x is contained in y.

    Points are pairs (lo, hi) with lo <= hi.
    """

    def leq(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return bool(x[0] >= y[0] and x[1] <= y[1])

    def leq_mask(self, points, x):
        P = np.asarray(points, dtype=float)
        x = np.asarray(x, dtype=float)
        return (P[:, 0] >= x[0]) & (P[:, 1] <= x[1])

    def geq_mask(self, points, x):
        P = np.asarray(points, dtype=float)
        x = np.asarray(x, dtype=float)
        return (P[:, 0] <= x[0]) & (P[:, 1] >= x[1])


@dataclass
class FiniteDistribution:
    """Probability masses on a finite labelled space.

    Masses may be Fractions (exact mode, used by the quantile table) or
    floats.  They must sum to one within 1e-12.
    """

    labels: list
    masses: list

    def __post_init__(self):
        if len(self.labels) != len(self.masses):
            raise DataError("labels and masses differ in length")
        total = sum(self.masses)
        if isinstance(total, Fraction):
            if total != 1:
                raise UnnormalizedDistribution(total)
        elif abs(float(total) - 1.0) > 1e-12:
            raise UnnormalizedDistribution(total)
        self._mass = dict(zip(self.labels, self.masses))

    @classmethod
    def from_counts(cls, labels, counts):
        counts = [int(c) for c in counts]
        if any(c < 0 for c in counts):
            raise DataError("negative count")
        total = sum(counts)
        if total == 0:
            raise DataError("all counts are zero")
        return cls(list(labels), [Fraction(c, total) for c in counts])

    def mass(self, label):
        if label not in self._mass:
            raise UnknownLabel(label)
        return self._mass[label]

    def sample(self, n, rng):
        probs = np.array([float(m) for m in self.masses])
        idx = rng.choice(len(self.labels), size=n, p=probs)
        return [self.labels[i] for i in idx]


@dataclass
class FiniteQuantileRow:
    label: object
    p: object            # mass of the comparable set
    tau: object          # index, None when p == 0
    below: object        # mass of {y below x}
    above: object


@dataclass
class FiniteQuantileTable:
    rows: list
    surfaces: dict = field(default_factory=dict)   # tau -> list of labels in the surface
    argmax: dict = field(default_factory=dict)     # tau -> labels maximizing p on the surface

    def row(self, label):
        for r in self.rows:
            if r.label == label:
                return r
        raise UnknownLabel(label)


def finite_quantiles(dist, order, taus=()):
    """Exact index table and quantile surfaces on a finite space.

    For each atom x: below = P(X below x), above = P(X above x),
    p = P(X comparable to x), tau = below / p.  For each requested tau the
    surface is {x : above >= (1 - tau) p and below >= tau p} and the quantile
    points are the surface atoms of maximal p.  With Fraction masses every
    quantity is exact; tau values are taken at their binary float value.
    """
    labels = list(dist.labels)
    table = FiniteQuantileTable(rows=[])
    zero = Fraction(0) if isinstance(dist.masses[0], Fraction) else 0.0
    for x in labels:
        below = zero
        above = zero
        comp = zero
        for y in labels:
            le = order.leq(y, x)
            ge = order.leq(x, y)
            m = dist.mass(y)
            if le:
                below = below + m
            if ge:
                above = above + m
            if le or ge:
                comp = comp + m
        tau = (below / comp) if comp != 0 else None
        table.rows.append(FiniteQuantileRow(x, comp, tau, below, above))
    for t in taus:
        if not 0 < float(t) < 1:
            raise TauOutOfRange(t)
        tf = Fraction(t) if isinstance(zero, Fraction) else float(t)
        members = [
            r for r in table.rows
            if r.p != 0 and r.above >= (1 - tf) * r.p and r.below >= tf * r.p
        ]
        table.surfaces[float(t)] = [r.label for r in members]
        if members:
            best = max(r.p for r in members)
            table.argmax[float(t)] = [r.label for r in members if r.p == best]
        else:
            table.argmax[float(t)] = []
    return table


def load_edge_list(path):
    """Read a text file of lines "src -> dst"; returns (labels, edges).

    Blank lines and lines starting with # are skipped.  Labels are collected
    in order of first appearance.
    """
    labels = []
    seen = set()
    edges = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "->" not in line:
                raise DataError(f"{path}:{lineno}: expected 'src -> dst'")
            a, b = (part.strip() for part in line.split("->", 1))
            if not a or not b:
                raise DataError(f"{path}:{lineno}: empty label")
            edges.append((a, b))
            for lab in (a, b):
                if lab not in seen:
                    seen.add(lab)
                    labels.append(lab)
    return labels, edges


def load_counts_csv(path):
    """Read a "label,count" CSV (with header) into a FiniteDistribution."""
    labels = []
    counts = []
    with open(path) as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataError(f"{path}: empty file")
        for row in reader:
            if not row:
                continue
            if len(row) != 2:
                raise DataError(f"{path}: expected two columns, got {row}")
            labels.append(row[0].strip())
            try:
                counts.append(int(row[1]))
            except ValueError as exc:
                raise DataError(f"{path}: bad count {row[1]!r}") from exc
    return FiniteDistribution.from_counts(labels, counts)


def load_cone_csv(path):
    """Read cone generators, one generator per CSV row, into a ConicOrder."""
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rows.append([float(v) for v in line.split(",")])
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: bad number") from exc
    if not rows:
        raise DataError(f"{path}: no generators")
    G = np.array(rows, dtype=float)
    return ConicOrder(G.shape[1], generators=G)
