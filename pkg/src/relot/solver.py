"""Exact relative Wasserstein distances.

``W_p(mu, nu)`` is the p-th root of the cheapest coupling cost ``pi(d_p ** p)``
where mass may also be sent to, or drawn from, the reservoir at cost
``d_A ** p`` per unit.  It is computed as a min-cost flow on the bipartite
network ``supp(mu) -> supp(nu)`` augmented with one reservoir source and one
reservoir sink, solved by network simplex.

For finitely supported measures every atom sits at positive distance from the
reservoir, so truncating below the smallest such distance changes nothing:
the distance computed here is the plain infimum over all couplings, and no
family of truncated coupling sets is needed at run time.

Two independent oracles are provided for testing: a dense LP over all
transport variables (:func:`oracle_lp`) and brute-force enumeration of
partial matchings for unit masses (:func:`oracle_enumerate`).
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional

from ._lp import solve_lp
from ._network_simplex import network_simplex, transport_network
from .coupling import Coupling
from .errors import InstanceTooLargeError, MeasureError
from .measure import DiscreteMeasure, SignedMeasure, _same_pair, jordan
from .metric_pair import power

__all__ = [
    "OTResult",
    "solve_w1",
    "solve_wp",
    "min_cost_coupling",
    "kr_norm",
    "oracle_lp",
    "oracle_enumerate",
]

ORACLE_LP_LIMIT = 400
ORACLE_ENUM_LIMIT = 8


@dataclass
class OTResult:
    """Optimal transport solution.

    ``value`` is the distance, ``cost`` the optimal coupling cost
    ``value ** p``.  ``potential_f`` / ``potential_g`` are optimal dual
    potentials read off the network simplex: ``f(x) + g(y) <= d_p(x, y) ** p``,
    ``f <= d_A ** p`` and ``g <= d_A ** p``, with
    ``mu(f) + nu(g) == cost``.
    """

    value: object
    cost: object
    coupling: Coupling
    p: float
    potential_f: Dict[int, object] = field(default_factory=dict)
    potential_g: Dict[int, object] = field(default_factory=dict)
    exact: bool = False
    stats: Dict[str, object] = field(default_factory=dict)


def _check_p(p):
    if not p >= 1:
        raise ValueError(f"cost exponent p must be >= 1, got {p!r}")


def _root(cost, p, exact):
    if p == 1:
        return cost
    if cost == 0:
        return Fraction(0) if exact else 0.0
    return float(cost) ** (1.0 / p)


def min_cost_coupling(mu: DiscreteMeasure, nu: DiscreteMeasure, direct, src_res, dst_res,
                      *, exact: bool, p=1) -> OTResult:
    """Cheapest coupling for arbitrary costs.

    ``direct[i][j]`` prices moving a unit from the i-th atom of ``mu`` to the
    j-th atom of ``nu`` (atoms in increasing point order); ``src_res[i]`` and
    ``dst_res[j]`` price the reservoir legs.  ``value`` of the result is the
    p-th root of the optimal cost.
    """
    pair = _same_pair(mu, nu)
    conv = Fraction if exact else float
    start = time.perf_counter()
    src, dst = list(mu.support), list(nu.support)
    direct = [[conv(c) for c in row] for row in direct]
    src_res = [conv(c) for c in src_res]
    dst_res = [conv(c) for c in dst_res]
    n_nodes, tails, heads, costs, supplies, kinds = transport_network(
        [conv(mu[x]) for x in src], [conv(nu[y]) for y in dst], direct, src_res, dst_res)
    sol = network_simplex(n_nodes, tails, heads, costs, supplies, exact=exact)

    m = len(src)
    to_res, from_res, flows = {}, {}, {}
    for kind, x in zip(kinds, sol.flows):
        if x == 0:
            continue
        if kind[0] == "to_res":
            to_res[src[kind[1]]] = to_res.get(src[kind[1]], 0) + x
        elif kind[0] == "from_res":
            from_res[dst[kind[1]]] = from_res.get(dst[kind[1]], 0) + x
        elif kind[0] == "direct":
            i, j = kind[1], kind[2]
            # ties between a direct flow and the reservoir route go to the reservoir
            if src[i] != dst[j] and direct[i][j] >= src_res[i] + dst_res[j]:
                to_res[src[i]] = to_res.get(src[i], 0) + x
                from_res[dst[j]] = from_res.get(dst[j], 0) + x
            else:
                flows[(src[i], dst[j])] = x
    coupling = Coupling(pair, flows, to_res, from_res, rational=exact)

    pot = sol.potentials
    r_src, r_snk = m, n_nodes - 1
    f = {x: pot[i] - pot[r_snk] for i, x in enumerate(src)}
    g = {y: pot[r_src] - pot[m + 1 + j] for j, y in enumerate(dst)}
    cost = sol.cost
    return OTResult(
        value=_root(cost, p, exact), cost=cost, coupling=coupling, p=p,
        potential_f=f, potential_g=g, exact=exact,
        stats={"pivots": sol.pivots, "wall_time": time.perf_counter() - start,
               "arcs": len(costs), "nodes": n_nodes})


def solve_wp(mu: DiscreteMeasure, nu: DiscreteMeasure, p=1, *, exact: Optional[bool] = None,
             metric_direct_costs: bool = False) -> OTResult:
    """Relative p-Wasserstein distance between ``mu`` and ``nu``.

    Parameters
    ----------
    exact : bool, optional
        Run the network simplex in ``Fraction`` arithmetic.  Defaults to True
        when both measures are rational.  Float costs are converted to their
        exact binary value, so the result is the exact optimum of the problem
        as represented.
    metric_direct_costs : bool
        Price direct arcs at ``d(x, y) ** p`` instead of ``d_p(x, y) ** p``.
        The optimum is the same because the cheaper route through the
        reservoir is always available; exposed for testing that fact.
    """
    _check_p(p)
    pair = _same_pair(mu, nu)
    if exact is None:
        exact = mu.rational and nu.rational
    src, dst = mu.support, nu.support
    d_a = pair.dist_to_reservoir
    if metric_direct_costs:
        direct = [[power(pair.dist(x, y), p) for y in dst] for x in src]
    else:
        direct = [[pair.dp_cost_pow(p, x, y) for y in dst] for x in src]
    return min_cost_coupling(mu, nu, direct, [power(d_a(x), p) for x in src],
                             [power(d_a(y), p) for y in dst], exact=exact, p=p)


def solve_w1(mu: DiscreteMeasure, nu: DiscreteMeasure, *, exact: Optional[bool] = None) -> OTResult:
    """Relative 1-Wasserstein distance; see :func:`solve_wp`."""
    return solve_wp(mu, nu, 1, exact=exact)


def kr_norm(sigma: SignedMeasure, *, exact: Optional[bool] = None):
    """Kantorovich-Rubinstein norm ``W_1(sigma+, sigma-)``."""
    pos, neg = jordan(sigma)
    return solve_w1(pos, neg, exact=exact).value


def oracle_lp(mu: DiscreteMeasure, nu: DiscreteMeasure, p=1, *,
              exact: Optional[bool] = None, root: bool = True):
    """Distance from the dense transportation LP, solved by tableau simplex.

    Variables are every direct flow ``x -> y`` plus one reservoir flow per
    atom.  Returns the distance, or the optimal cost when ``root=False``.
    """
    _check_p(p)
    pair = _same_pair(mu, nu)
    if exact is None:
        exact = mu.rational and nu.rational
    src, dst = list(mu.support), list(nu.support)
    m, n = len(src), len(dst)
    if m * n > ORACLE_LP_LIMIT:
        raise InstanceTooLargeError(f"oracle_lp handles |supp mu|*|supp nu| <= "
                                    f"{ORACLE_LP_LIMIT}, got {m * n}")
    conv = Fraction if exact else float
    d_a = pair.dist_to_reservoir
    # columns: direct (i, j) row-major, then to_res i, then from_res j
    c = [conv(pair.dp_cost_pow(p, x, y)) for x in src for y in dst]
    c += [conv(power(d_a(x), p)) for x in src]
    c += [conv(power(d_a(y), p)) for y in dst]
    width = len(c)
    A, b = [], []
    for i, x in enumerate(src):
        row = [0] * width
        for j in range(n):
            row[i * n + j] = 1
        row[m * n + i] = 1
        A.append(row)
        b.append(conv(mu[x]))
    for j, y in enumerate(dst):
        row = [0] * width
        for i in range(m):
            row[i * n + j] = 1
        row[m * n + m + j] = 1
        A.append(row)
        b.append(conv(nu[y]))
    if width == 0:
        cost = conv(0)
    else:
        cost = solve_lp(c, A_eq=A, b_eq=b, exact=exact).value
    return _root(cost, p, exact) if root else cost


def oracle_enumerate(mu: DiscreteMeasure, nu: DiscreteMeasure, p=1, *, root: bool = True):
    """Brute force over all partial injective matchings of unit-mass atoms.

    Unmatched atoms pay ``d_A ** p``.  An integral optimal vertex exists for
    integral marginals, so this is exact for unit masses.
    """
    _check_p(p)
    pair = _same_pair(mu, nu)
    src, dst = list(mu.support), list(nu.support)
    if any(w != 1 for _, w in mu) or any(w != 1 for _, w in nu):
        raise MeasureError("oracle_enumerate needs all weights equal to 1")
    if len(src) > ORACLE_ENUM_LIMIT or len(dst) > ORACLE_ENUM_LIMIT:
        raise InstanceTooLargeError(f"oracle_enumerate handles at most "
                                    f"{ORACLE_ENUM_LIMIT} atoms per side")
    d_a = pair.dist_to_reservoir
    src_res = [power(d_a(x), p) for x in src]
    dst_res = [power(d_a(y), p) for y in dst]
    direct = [[pair.dp_cost_pow(p, x, y) for y in dst] for x in src]
    n = len(dst)
    best = [sum(src_res) + sum(dst_res)]
    used = [False] * n

    def search(i, acc):
        if acc >= best[0]:
            return
        if i == len(src):
            acc += sum(dst_res[j] for j in range(n) if not used[j])
            best[0] = min(best[0], acc)
            return
        search(i + 1, acc + src_res[i])
        for j in range(n):
            if not used[j]:
                used[j] = True
                search(i + 1, acc + direct[i][j])
                used[j] = False

    search(0, 0)
    cost = best[0]
    if cost == 0:
        cost = Fraction(0) if mu.rational and nu.rational else 0.0
    return _root(cost, p, mu.rational and nu.rational) if root else cost
