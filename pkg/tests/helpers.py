"""Random instance generators shared by the test modules."""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from hypothesis import strategies as st

from relot import Coupling, MetricPair, make_measure

GEOMETRIES = ("line", "plane", "hyperplane", "halfplane_linf", "halfplane_l2", "explicit")
EXACT_GEOMETRIES = ("line", "halfplane_linf", "explicit")


def random_pair(rng: np.random.Generator, n: int, kind: str = "line") -> MetricPair:
    """A metric pair on ``n`` points; exact kinds use integer data."""
    if kind == "line":
        coords = [int(v) for v in rng.integers(-20, 21, size=n)]
        return MetricPair.real_line(coords, [0])
    if kind == "plane":
        pts = rng.uniform(-5, 5, size=(n, 2)).tolist()
        res = rng.uniform(-5, 5, size=(2, 2)).tolist()
        return MetricPair.euclidean(pts, res)
    if kind == "hyperplane":
        pts = rng.uniform(-5, 5, size=(n, 3)).tolist()
        normal = rng.normal(size=3).tolist()
        return MetricPair.euclidean(pts, hyperplane=(normal, float(rng.uniform(-1, 1))))
    if kind in ("halfplane_linf", "halfplane_l2"):
        births = rng.integers(0, 20, size=n)
        deaths = births + rng.integers(0, 15, size=n)
        pts = [(int(b), int(d)) for b, d in zip(births, deaths)]
        return MetricPair.halfplane(pts, kind.split("_")[1])
    if kind == "explicit":
        # L1 distances between integer points; reservoir is a set of integer points
        pts = rng.integers(-6, 7, size=(n, 3))
        res = rng.integers(-6, 7, size=(2, 3))
        mat = [[int(np.abs(p - q).sum()) for q in pts] for p in pts]
        d_a = [int(min(np.abs(p - r).sum() for r in res)) for p in pts]
        return MetricPair.explicit(mat, d_a)
    raise ValueError(kind)


def random_weight(rng, rational: bool):
    if rational:
        return Fraction(int(rng.integers(1, 13)), int(rng.integers(1, 5)))
    return float(rng.uniform(0.1, 3.0))


def random_measure(rng, pair: MetricPair, k: int, *, rational: bool = True, unit: bool = False):
    """Measure on up to ``k`` distinct points off the reservoir."""
    off = [x for x in range(pair.n) if pair.dist_to_reservoir(x) > 0]
    if not off or k == 0:
        return make_measure(pair, [], rational=rational)[0]
    pts = rng.choice(off, size=min(k, len(off)), replace=False)
    raw = [(int(x), 1 if unit else random_weight(rng, rational)) for x in pts]
    return make_measure(pair, raw, rational=rational)[0]


def random_coupling(rng, pair: MetricPair, k: int, *, rational: bool = True) -> Coupling:
    off = [x for x in range(pair.n) if pair.dist_to_reservoir(x) > 0]
    direct, to_res, from_res = {}, {}, {}
    for _ in range(k):
        x, y = (int(v) for v in rng.choice(off, size=2))
        direct[(x, y)] = random_weight(rng, rational)
    for _ in range(int(rng.integers(0, k + 1))):
        to_res[int(rng.choice(off))] = random_weight(rng, rational)
    for _ in range(int(rng.integers(0, k + 1))):
        from_res[int(rng.choice(off))] = random_weight(rng, rational)
    return Coupling(pair, direct, to_res, from_res, rational=rational)


def rel_close(a, b, tol):
    a, b = float(a), float(b)
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def root(v, p):
    v = float(v)
    return v if p == 1 else math.pow(v, 1.0 / p)


seeds = st.integers(min_value=0, max_value=2**32 - 1)
