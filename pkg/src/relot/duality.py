"""Dual problems and duality-gap certificates.

``kr_dual`` maximises ``mu(f) - nu(f)`` over potentials ``f`` on the union of
the supports that are 1-Lipschitz for the relative cost ``dbar`` and bounded
by ``|f| <= d_A``.  These are exactly the restrictions of 1-Lipschitz
functions vanishing on the reservoir (extend over ``dbar`` by McShane).

``mk_dual`` maximises ``mu(f) + nu(g)`` subject to ``f(x) + g(y) <= h(x, y)``
for a general non-negative pair cost with reservoir columns.

Both LPs are solved by the dense simplex shared with ``oracle_lp``; the
primal side always comes from the network simplex, so each certificate
compares two independent computations.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence

import numpy as np

from ._lp import solve_lp
from .errors import PairMismatchError, SolverError
from .measure import DiscreteMeasure, SignedMeasure, _same_pair, jordan
from .metric_pair import MetricPair, power
from .solver import kr_norm, min_cost_coupling, solve_w1

__all__ = [
    "DualCertificate",
    "PairCost",
    "kr_dual",
    "mk_dual",
    "op_norm",
    "c_transform",
    "double_conjugate",
    "kr_feasible",
    "mk_feasible",
]

FEAS_TOL = 1e-9
GAP_TOL = 1e-7


@dataclass
class DualCertificate:
    """Optimal dual potentials and the gap to the primal optimum.

    ``potential_g`` is ``None`` for the Kantorovich-Rubinstein dual, where the
    second potential is ``-potential_f``.
    """

    value: object
    potential_f: Dict[int, object]
    potential_g: Optional[Dict[int, object]]
    primal: object
    gap: object
    method: str = "lp"


class PairCost:
    """Non-negative cost on pairs of points plus its two reservoir columns.

    ``to_reservoir[x]`` is the cost of sending x into the reservoir
    (``inf_a h(x, a)``) and ``from_reservoir[y]`` the cost of drawing y from
    it (``inf_a h(a, y)``).  Both columns are required.
    """

    def __init__(self, matrix, to_reservoir, from_reservoir, pair: MetricPair = None):
        if to_reservoir is None or from_reservoir is None:
            raise ValueError("pair cost needs both reservoir columns")
        self.matrix = [list(r) for r in matrix]
        self.to_reservoir = list(to_reservoir)
        self.from_reservoir = list(from_reservoir)
        self.pair = pair
        n = len(self.matrix)
        if any(len(r) != n for r in self.matrix):
            raise ValueError("cost matrix must be square")
        if len(self.to_reservoir) != n or len(self.from_reservoir) != n:
            raise ValueError("reservoir columns must have one entry per point")
        vals = [v for r in self.matrix for v in r] + self.to_reservoir + self.from_reservoir
        if any(not np.isfinite(float(v)) or v < 0 for v in vals):
            raise ValueError("pair costs must be finite and non-negative")

    @property
    def n(self):
        return len(self.matrix)

    @classmethod
    def from_metric(cls, pair: MetricPair, p=1) -> "PairCost":
        """``h = d_p ** p`` with reservoir columns ``d_A ** p``; ``p = 1`` gives dbar."""
        idx = range(pair.n)
        d_a = [power(pair.dist_to_reservoir(x), p) for x in idx]
        return cls([[pair.dp_cost_pow(p, x, y) for y in idx] for x in idx], d_a, d_a, pair)

    def _check(self, pair: MetricPair):
        if (self.pair is not None and self.pair is not pair) or self.n != pair.n:
            raise PairMismatchError("pair cost was built for a different metric pair")


def _conv(exact):
    return Fraction if exact else float


def _within(primal, dual, exact):
    if exact:
        return primal == dual
    return -FEAS_TOL * max(1.0, abs(float(primal))) <= float(primal) - float(dual) \
        <= GAP_TOL * max(1.0, abs(float(primal)))


def kr_feasible(pair: MetricPair, f: Dict[int, object], tol: float = FEAS_TOL) -> bool:
    """Check ``f(x) - f(y) <= dbar(x, y)`` and ``|f| <= d_A`` on the keys of ``f``."""
    pts = list(f)
    for x in pts:
        if abs(f[x]) > pair.dist_to_reservoir(x) + tol:
            return False
        for y in pts:
            if f[x] - f[y] > pair.dbar(x, y) + tol:
                return False
    return True


def mk_feasible(h: PairCost, f: Dict[int, object], g: Dict[int, object],
                tol: float = FEAS_TOL) -> bool:
    """Check ``f + g <= h`` and the two reservoir bounds."""
    if any(f[x] > h.to_reservoir[x] + tol for x in f):
        return False
    if any(g[y] > h.from_reservoir[y] + tol for y in g):
        return False
    return all(f[x] + g[y] <= h.matrix[x][y] + tol for x in f for y in g)


def c_transform(pair: MetricPair, q: Dict[int, object], points: Sequence[int], *,
                exact: bool = False) -> Dict[int, object]:
    """``x -> min(d_A(x), min_y dbar(x, y) - q(y))``; the reservoir counts as a point with q = 0."""
    conv = _conv(exact)
    out = {}
    for x in points:
        best = conv(pair.dist_to_reservoir(x))
        for y, qy in q.items():
            v = conv(pair.dbar(x, y)) - qy
            if v < best:
                best = v
        out[x] = best
    return out


def double_conjugate(pair: MetricPair, p: Dict[int, object], q: Dict[int, object],
                     points: Sequence[int], *, exact: bool = False):
    """Replace a feasible pair ``(p, q)`` by ``(p', q')`` with ``p'`` 1-Lipschitz.

    ``p' = c_transform(q)`` and ``q' = c_transform(p')``; for feasible input
    ``q' = -p'`` and the dual objective does not decrease.
    """
    p_new = c_transform(pair, q, points, exact=exact)
    q_new = c_transform(pair, p_new, points, exact=exact)
    return p_new, q_new


def _cut_tol(exact, scale):
    return 0 if exact else 1e-12 * max(1.0, float(scale))


def _kr_lp(pair, pts, coef, d_a, conv, exact):
    """Solve the KR dual LP by constraint generation over the Lipschitz rows.

    With ``f = u - d_A`` the bounds ``|f| <= d_A`` become ``0 <= u <= 2 d_A``.
    Only violated pair constraints are added; the loop ends when ``f`` is
    feasible for all of them, hence optimal for the full LP.
    """
    if not pts:
        return {}
    k = len(pts)
    dbar = {(x, y): conv(pair.dbar(x, y)) for x in pts for y in pts if x != y}
    tol = _cut_tol(exact, max(d_a.values()))
    active = []
    while True:
        A, b = [], []
        for i, x in enumerate(pts):
            row = [0] * k
            row[i] = 1
            A.append(row)
            b.append(2 * d_a[x])
        for i, j in active:
            row = [0] * k
            row[i], row[j] = 1, -1
            A.append(row)
            b.append(dbar[pts[i], pts[j]] + d_a[pts[i]] - d_a[pts[j]])
        res = solve_lp([coef[z] for z in pts], A_ub=A, b_ub=b, exact=exact, maximize=True)
        f = {z: u - d_a[z] for z, u in zip(pts, res.x)}
        cuts = [(i, j) for i, x in enumerate(pts) for j, y in enumerate(pts)
                if i != j and f[x] - f[y] > dbar[x, y] + tol]
        if not cuts:
            return f
        active += cuts


def _mk_lp(mu, nu, src, dst, cost, ha, hb, conv, exact):
    """MK dual LP with ``f = ha - u``, ``g = hb - v`` (u, v >= 0), by constraint generation."""
    m, n = len(src), len(dst)
    if m + n == 0:
        return {}, {}
    obj = [conv(mu[x]) for x in src] + [conv(nu[y]) for y in dst]
    scale = max([abs(c) for row in cost for c in row] + ha + hb + [1])
    tol = _cut_tol(exact, scale)
    active = []
    while True:
        A, b = [], []
        for i, j in active:
            row = [0] * (m + n)
            row[i], row[m + j] = -1, -1
            A.append(row)
            b.append(cost[i][j] - ha[i] - hb[j])
        if A:
            x = solve_lp(obj, A_ub=A, b_ub=b, exact=exact).x
        else:
            x = [conv(0)] * (m + n)
        f = [ha[i] - x[i] for i in range(m)]
        g = [hb[j] - x[m + j] for j in range(n)]
        cuts = [(i, j) for i in range(m) for j in range(n) if f[i] + g[j] > cost[i][j] + tol]
        if not cuts:
            return dict(zip(src, f)), dict(zip(dst, g))
        active += cuts


def kr_dual(mu: DiscreteMeasure, nu: DiscreteMeasure, *, method: str = "lp",
            exact: Optional[bool] = None) -> DualCertificate:
    """Kantorovich-Rubinstein dual of ``W_1(mu, nu)`` with a gap certificate.

    ``method="lp"`` solves the dual LP directly.  ``method="network"`` takes
    the node potentials of the primal network simplex and regularises them by
    a c-transform into a 1-Lipschitz potential.
    """
    pair = _same_pair(mu, nu)
    if exact is None:
        exact = mu.rational and nu.rational
    conv = _conv(exact)
    primal_res = solve_w1(mu, nu, exact=exact)
    primal = primal_res.cost
    pts = sorted(set(mu.support) | set(nu.support))
    coef = {z: conv(mu[z]) - conv(nu[z]) for z in pts}
    d_a = {z: conv(pair.dist_to_reservoir(z)) for z in pts}

    if method == "network":
        f = c_transform(pair, primal_res.potential_g, pts, exact=exact)
    elif method == "lp":
        f = _kr_lp(pair, pts, coef, d_a, conv, exact)
    else:
        raise ValueError(f"unknown method {method!r}")

    value = sum((coef[z] * f[z] for z in pts), conv(0))
    if not kr_feasible(pair, f, 0 if exact else FEAS_TOL):
        raise SolverError("dual potential violates the Lipschitz constraints")
    if not _within(primal, value, exact):
        raise SolverError(f"duality gap out of tolerance: primal {primal}, dual {value}")
    return DualCertificate(value=value, potential_f=f, potential_g=None, primal=primal,
                           gap=primal - value, method=method)


def mk_dual(h: PairCost, mu: DiscreteMeasure, nu: DiscreteMeasure, *,
            exact: Optional[bool] = None) -> DualCertificate:
    """Monge-Kantorovich dual for the pair cost ``h`` with a gap certificate.

    Maximises ``mu(f) + nu(g)`` subject to ``f(x) + g(y) <= h(x, y)``,
    ``f <= h.to_reservoir`` and ``g <= h.from_reservoir``.  The primal is the
    min-cost flow with the same costs.
    """
    pair = _same_pair(mu, nu)
    h._check(pair)
    if exact is None:
        exact = mu.rational and nu.rational
    conv = _conv(exact)
    src, dst = list(mu.support), list(nu.support)
    ha = [conv(h.to_reservoir[x]) for x in src]
    hb = [conv(h.from_reservoir[y]) for y in dst]
    cost = [[conv(h.matrix[x][y]) for y in dst] for x in src]
    primal = min_cost_coupling(mu, nu, cost, ha, hb, exact=exact).cost

    f, g = _mk_lp(mu, nu, src, dst, cost, ha, hb, conv, exact)
    value = sum((conv(w) * f[x] for x, w in mu), conv(0)) + sum(
        (conv(w) * g[y] for y, w in nu), conv(0))
    if not mk_feasible(h, f, g, 0 if exact else FEAS_TOL):
        raise SolverError("dual potentials violate the cost constraints")
    if not _within(primal, value, exact):
        raise SolverError(f"duality gap out of tolerance: primal {primal}, dual {value}")
    return DualCertificate(value=value, potential_f=f, potential_g=g, primal=primal,
                           gap=primal - value, method="lp")


def op_norm(sigma: SignedMeasure, *, exact: Optional[bool] = None):
    """Operator norm of ``sigma`` on 1-Lipschitz functions vanishing on A.

    Computed from the dual LP and checked against the primal
    Kantorovich-Rubinstein norm.
    """
    pos, neg = jordan(sigma)
    cert = kr_dual(pos, neg, exact=exact)
    primal = kr_norm(sigma, exact=exact)
    if not _within(primal, cert.value, isinstance(cert.value, Fraction)):
        raise SolverError(f"operator norm {cert.value} disagrees with KR norm {primal}")
    return cert.value
