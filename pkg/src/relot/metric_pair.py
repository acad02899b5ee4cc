"""Finite metric pairs (X, d, A).

A metric pair is a finite working set of points together with a metric ``d``
and a closed reservoir subset ``A``.  The reservoir never appears as explicit
points: everything the transport problem needs from ``A`` is the distance
function ``d_A(x) = inf_{a in A} d(x, a)``.

Three geometries are supported:

* ``euclidean``: points in R^k, reservoir given as a finite point set or a
  hyperplane,
* ``halfplane``: persistence-diagram points ``(birth, death)`` with the
  diagonal as reservoir, under the L-infinity or L2 norm,
* ``explicit``: a distance matrix plus a vector of reservoir distances.

Values stay exact (``Fraction``) whenever the inputs are integers or fractions
and the geometry allows it (1-d Euclidean, L-infinity half-plane, explicit);
otherwise they are floats.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

from .errors import GeometryError

__all__ = [
    "MetricPair",
    "dist",
    "dist_to_reservoir",
    "dbar",
    "dp_cost",
]

EXHAUSTIVE_CHECK_LIMIT = 512
SAMPLED_TRIPLES = 10_000
_REL_TOL = 1e-12


def _is_exact(v) -> bool:
    return isinstance(v, Rational) and not isinstance(v, bool)


def _num(v, exact: bool):
    if exact:
        return Fraction(v)
    v = float(v)
    if not math.isfinite(v):
        raise GeometryError(f"non-finite coordinate {v!r}")
    return v


def power(x, p):
    """``x ** p`` that keeps Fractions exact for integral ``p``."""
    if float(p).is_integer():
        return x ** int(p)
    return float(x) ** float(p)


def _check_p(p) -> None:
    if not p >= 1:
        raise ValueError(f"cost exponent p must be >= 1, got {p!r}")


class MetricPair:
    """Immutable finite metric pair.

    Use one of the constructors :meth:`euclidean`, :meth:`real_line`,
    :meth:`halfplane` or :meth:`explicit`; do not call ``__init__`` directly.
    Points are identified by their index ``0 .. n-1``.
    """

    __slots__ = ("kind", "n", "exact", "_coords", "_reservoir", "_norm",
                 "_matrix", "_d_a", "_dense")

    def __init__(self, kind, n, exact, coords=None, reservoir=None, norm=None,
                 matrix=None, d_a=None):
        self.kind = kind
        self.n = n
        self.exact = exact
        self._coords = coords
        self._reservoir = reservoir
        self._norm = norm
        self._matrix = matrix
        self._d_a = d_a
        self._dense = None

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def euclidean(cls, coords, reservoir_points=None, *, hyperplane=None,
                  seed=None) -> "MetricPair":
        """Points in R^k with reservoir a finite point set or a hyperplane.

        ``coords`` is a sequence of scalars (k = 1) or of length-k sequences.
        ``hyperplane`` is ``(normal, offset)`` describing ``{x : normal.x = offset}``.
        Exactly one reservoir description must be given.
        """
        if (reservoir_points is None) == (hyperplane is None):
            raise GeometryError("give exactly one of reservoir_points / hyperplane")
        pts = [tuple(c) if isinstance(c, (list, tuple, np.ndarray)) else (c,)
               for c in coords]
        dim = len(pts[0]) if pts else None
        if reservoir_points is not None:
            res = [tuple(r) if isinstance(r, (list, tuple, np.ndarray)) else (r,)
                   for r in reservoir_points]
            if not res:
                raise GeometryError("reservoir must be non-empty")
            if dim is None:
                dim = len(res[0])
            flat = [v for q in pts + res for v in q]
        else:
            normal, offset = hyperplane
            normal = tuple(normal)
            if dim is None:
                dim = len(normal)
            flat = [v for q in pts for v in q] + list(normal) + [offset]
        if any(len(q) != dim for q in pts):
            raise GeometryError("all points must have the same dimension")
        exact = dim == 1 and all(_is_exact(v) for v in flat)
        pts = [tuple(_num(v, exact) for v in q) for q in pts]
        if reservoir_points is not None:
            if any(len(r) != dim for r in res):
                raise GeometryError("reservoir points must match point dimension")
            res = [tuple(_num(v, exact) for v in r) for r in res]
            reservoir = ("points", res)
            d_a = [min(_euclid(q, r) for r in res) for q in pts]
        else:
            if len(normal) != dim:
                raise GeometryError("hyperplane normal must match point dimension")
            nrm = [float(v) for v in normal]
            scale = math.sqrt(sum(v * v for v in nrm))
            if scale == 0:
                raise GeometryError("hyperplane normal must be non-zero")
            reservoir = ("hyperplane", (tuple(nrm), float(offset)))
            d_a = [abs(sum(a * float(b) for a, b in zip(nrm, q)) - float(offset)) / scale
                   for q in pts]
        pair = cls("euclidean", len(pts), exact, coords=pts, reservoir=reservoir,
                   d_a=d_a)
        pair._validate(seed)
        return pair

    @classmethod
    def real_line(cls, coords: Sequence, reservoir=(0,), *, seed=None) -> "MetricPair":
        """Points on the real line; the reservoir is a finite set of reals (default {0})."""
        return cls.euclidean(list(coords), list(reservoir), seed=seed)

    @classmethod
    def halfplane(cls, points, norm: str = "linf", *, seed=None) -> "MetricPair":
        """Persistence-diagram points ``(birth, death)`` with the diagonal as reservoir."""
        norm = norm.lower()
        if norm not in ("linf", "l2"):
            raise GeometryError(f"norm must be 'linf' or 'l2', got {norm!r}")
        pts = [tuple(q) for q in points]
        if any(len(q) != 2 for q in pts):
            raise GeometryError("half-plane points are (birth, death) pairs")
        exact = norm == "linf" and all(_is_exact(v) for q in pts for v in q)
        pts = [(_num(b, exact), _num(d, exact)) for b, d in pts]
        for b, d in pts:
            if b > d:
                raise GeometryError(f"point ({b}, {d}) lies below the diagonal")
        if norm == "linf":
            d_a = [(d - b) / 2 for b, d in pts]
        else:
            d_a = [(d - b) / math.sqrt(2.0) for b, d in pts]
        pair = cls("halfplane", len(pts), exact, coords=pts, norm=norm, d_a=d_a)
        pair._validate(seed)
        return pair

    @classmethod
    def explicit(cls, matrix, reservoir, *, seed=None) -> "MetricPair":
        """Distance matrix plus the vector of distances to the reservoir.

        The matrix must be symmetric with zero diagonal and satisfy the triangle
        inequality; ``reservoir`` must be 1-Lipschitz with respect to it.
        """
        rows = [list(r) for r in matrix]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise GeometryError("distance matrix must be square")
        reservoir = list(reservoir)
        if len(reservoir) != n:
            raise GeometryError("need one reservoir distance per point")
        exact = all(_is_exact(v) for r in rows for v in r) and all(
            _is_exact(v) for v in reservoir)
        mat = tuple(tuple(_num(v, exact) for v in r) for r in rows)
        d_a = [_num(v, exact) for v in reservoir]
        pair = cls("explicit", n, exact, matrix=mat, d_a=d_a)
        pair._validate(seed)
        return pair

    # ------------------------------------------------------------------
    # evaluation

    def _check_index(self, a) -> int:
        if not isinstance(a, (int, np.integer)) or isinstance(a, bool) or not 0 <= a < self.n:
            raise IndexError(f"point index {a!r} out of range for {self.n} points")
        return int(a)

    def dist(self, a: int, b: int):
        """The ambient distance d(a, b)."""
        a = self._check_index(a)
        b = self._check_index(b)
        if a == b:
            return Fraction(0) if self.exact else 0.0
        if self.kind == "explicit":
            return self._matrix[a][b]
        p, q = self._coords[a], self._coords[b]
        if self.kind == "euclidean":
            return _euclid(p, q)
        if self._norm == "linf":
            return max(abs(p[0] - q[0]), abs(p[1] - q[1]))
        return math.hypot(p[0] - q[0], p[1] - q[1])

    def dist_to_reservoir(self, x: int):
        """d_A(x), the distance from point ``x`` to the reservoir."""
        return self._d_a[self._check_index(x)]

    def dbar(self, a: int, b: int):
        """The relative cost min(d(a, b), d_A(a) + d_A(b))."""
        return min(self.dist(a, b), self._d_a[a] + self._d_a[b])

    def dp_cost_pow(self, p, a: int, b: int):
        """``d_p(a, b) ** p`` = min(d^p, d_A(a)^p + d_A(b)^p), exact for integral p."""
        _check_p(p)
        return min(power(self.dist(a, b), p),
                   power(self._d_a[a], p) + power(self._d_a[b], p))

    def dp_cost(self, p, a: int, b: int):
        """d_p(a, b) = min(d(a, b), (d_A(a)^p + d_A(b)^p)^(1/p))."""
        _check_p(p)
        if p == 1:
            return self.dbar(a, b)
        d = self.dist(a, b)
        via = power(self._d_a[a], p) + power(self._d_a[b], p)
        if power(d, p) <= via:
            return d
        return float(via) ** (1.0 / p)

    def reservoir_vector(self) -> np.ndarray:
        """d_A for every point, as a float array."""
        return np.array([float(v) for v in self._d_a], dtype=float)

    def distance_matrix(self) -> np.ndarray:
        """Dense float matrix of d over all points (cached)."""
        if self._dense is None:
            n = self.n
            if self.kind == "explicit":
                m = np.array([[float(v) for v in r] for r in self._matrix], dtype=float)
                m = m.reshape(n, n)
            else:
                c = np.array([[float(v) for v in q] for q in self._coords], dtype=float)
                c = c.reshape(n, -1)
                diff = np.abs(c[:, None, :] - c[None, :, :])
                if self.kind == "halfplane" and self._norm == "linf":
                    m = diff.max(axis=2) if n else np.zeros((0, 0))
                else:
                    m = np.sqrt((diff ** 2).sum(axis=2))
            m.setflags(write=False)
            self._dense = m
        return self._dense

    def dbar_matrix(self) -> np.ndarray:
        d_a = self.reservoir_vector()
        return np.minimum(self.distance_matrix(), d_a[:, None] + d_a[None, :])

    def dp_matrix(self, p) -> np.ndarray:
        """Float matrix of d_p over all points."""
        _check_p(p)
        d_a = self.reservoir_vector()
        via = (d_a[:, None] ** p + d_a[None, :] ** p) ** (1.0 / p)
        return np.minimum(self.distance_matrix(), via)

    # ------------------------------------------------------------------
    # description / serialization

    @property
    def coords(self):
        return None if self._coords is None else list(self._coords)

    @property
    def norm(self):
        return self._norm

    def to_dict(self) -> dict:
        """Geometry descriptor in the JSON instance schema."""
        if self.kind == "explicit":
            return {"kind": "explicit",
                    "matrix": [list(r) for r in self._matrix],
                    "reservoir": list(self._d_a)}
        if self.kind == "halfplane":
            return {"kind": "halfplane", "norm": self._norm,
                    "points": [list(q) for q in self._coords]}
        out = {"kind": "euclidean", "coords": [list(q) for q in self._coords]}
        tag, res = self._reservoir
        if tag == "points":
            out["reservoir"] = {"points": [list(r) for r in res]}
        else:
            out["reservoir"] = {"hyperplane": {"normal": list(res[0]), "offset": res[1]}}
        return out

    def __repr__(self):
        return f"MetricPair(kind={self.kind!r}, n={self.n}, exact={self.exact})"

    # ------------------------------------------------------------------
    # validation

    def _validate(self, seed) -> None:
        d_a = self.reservoir_vector()
        if not np.all(np.isfinite(d_a)) or np.any(d_a < 0):
            raise GeometryError("reservoir distances must be finite and >= 0")
        n = self.n
        if n == 0:
            return
        D = self.distance_matrix()
        scale = max(1.0, float(D.max()) if D.size else 0.0, float(d_a.max()))
        tol = _REL_TOL * scale
        if self.kind == "explicit":
            if not np.all(np.isfinite(D)) or np.any(D < 0):
                raise GeometryError("distances must be finite and >= 0")
            if np.any(np.diag(D) != 0):
                raise GeometryError("distance matrix must have zero diagonal")
            if not np.array_equal(D, D.T):
                raise GeometryError("distance matrix must be symmetric")
            if n <= EXHAUSTIVE_CHECK_LIMIT:
                for k in range(n):
                    if np.any(D > D[:, k, None] + D[None, k, :] + tol):
                        raise GeometryError("distance matrix violates the triangle inequality")
            else:
                rng = np.random.default_rng(seed)
                i, j, k = rng.integers(0, n, size=(3, SAMPLED_TRIPLES))
                if np.any(D[i, k] > D[i, j] + D[j, k] + tol):
                    raise GeometryError("distance matrix violates the triangle inequality")
            lip = np.abs(d_a[:, None] - d_a[None, :]) <= D + tol
            if not lip.all():
                raise GeometryError("reservoir distances are not 1-Lipschitz")
        else:
            rng = np.random.default_rng(seed)
            if n * n <= SAMPLED_TRIPLES:
                ok = np.abs(d_a[:, None] - d_a[None, :]) <= D + tol
            else:
                i, j = rng.integers(0, n, size=(2, SAMPLED_TRIPLES))
                ok = np.abs(d_a[i] - d_a[j]) <= D[i, j] + tol
            if not np.all(ok):
                raise GeometryError("reservoir distance inconsistent with the metric")


def _euclid(p, q):
    if len(p) == 1:
        return abs(p[0] - q[0])
    return math.sqrt(sum((float(a) - float(b)) ** 2 for a, b in zip(p, q)))


def dist(pair: MetricPair, a: int, b: int):
    return pair.dist(a, b)


def dist_to_reservoir(pair: MetricPair, x: int):
    return pair.dist_to_reservoir(x)


def dbar(pair: MetricPair, a: int, b: int):
    return pair.dbar(a, b)


def dp_cost(pair: MetricPair, p, a: int, b: int):
    return pair.dp_cost(p, a, b)
