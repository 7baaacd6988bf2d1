"""Quantile curves indexed by tau, with JSON round-tripping.

The serialized form carries a schema tag ("pq-v1") so downstream tools can
reject files they do not understand.  Serialization is deterministic: keys
are sorted and floats use their shortest repr.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import CurveGridError, DataError

SCHEMA = "pq-v1"


@dataclass
class QuantileCurve:
    """Points x(tau) on an ascending tau grid, with their comparable mass."""

    taus: np.ndarray
    points: np.ndarray          # shape (m, d)
    p: np.ndarray               # shape (m,)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.taus = np.asarray(self.taus, dtype=float)
        self.points = np.asarray(self.points, dtype=float)
        self.p = np.asarray(self.p, dtype=float)
        if self.taus.ndim != 1 or self.taus.size == 0:
            raise CurveGridError("tau grid must be a nonempty 1-d array")
        if np.any(np.diff(self.taus) <= 0):
            raise CurveGridError("tau grid must be strictly increasing")
        if self.points.ndim != 2 or self.points.shape[0] != self.taus.size:
            raise CurveGridError("points must be (len(taus), d)")
        if self.p.shape != self.taus.shape:
            raise CurveGridError("p must match the tau grid")

    @property
    def dim(self):
        return self.points.shape[1]

    def is_monotone(self, order):
        """True when consecutive points are nondecreasing in the order."""
        for i in range(len(self.taus) - 1):
            if not order.leq(self.points[i], self.points[i + 1]):
                return False
        return True

    def cell_weights(self):
        """Cell weights of the tau grid, normalized to sum to one.

        Each grid value owns the cell between the midpoints to its
        neighbors, with the end cells extended by half a step, so a
        uniformly spaced grid gets exactly uniform weights.
        """
        t = self.taus
        if t.size == 1:
            return np.ones(1)
        mids = (t[:-1] + t[1:]) / 2.0
        lo = t[0] - (t[1] - t[0]) / 2.0
        hi = t[-1] + (t[-1] - t[-2]) / 2.0
        edges = np.concatenate([[lo], mids, [hi]])
        w = np.diff(edges)
        return w / w.sum()

    def to_dict(self):
        return {
            "schema": SCHEMA,
            "kind": "quantile-curve",
            "taus": self.taus.tolist(),
            "points": self.points.tolist(),
            "p": self.p.tolist(),
            "meta": self.meta,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, obj):
        if obj.get("schema") != SCHEMA:
            raise DataError(f"unsupported schema {obj.get('schema')!r}")
        if obj.get("kind") != "quantile-curve":
            raise DataError(f"not a quantile curve: kind={obj.get('kind')!r}")
        return cls(
            np.asarray(obj["taus"], float),
            np.asarray(obj["points"], float),
            np.asarray(obj["p"], float),
            dict(obj.get("meta", {})),
        )

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_json())
            fh.write("\n")
