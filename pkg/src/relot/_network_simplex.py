"""Primal network simplex for uncapacitated min-cost flow.

Works with floats or with ``Fraction`` (exact).  Pivoting is deterministic:
the entering arc is the lowest-index arc among those with the most negative
reduced cost (Dantzig), and the leaving arc follows the strongly feasible
tree rule, which rules out cycling.  The initial basis uses big-M artificial
arcs to an extra root node.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence

import numpy as np

from .errors import SolverError

FLOAT_TOL = 1e-12


@dataclass
class FlowSolution:
    flows: list          # per real arc
    potentials: list     # per node; c_ij - pi_i + pi_j >= 0 on every arc
    cost: object
    pivots: int


def network_simplex(n_nodes: int, tails: Sequence[int], heads: Sequence[int],
                    costs: Sequence, supplies: Sequence, *, exact: bool,
                    max_pivots: int = None) -> FlowSolution:
    """Minimise ``sum c_a x_a`` subject to out-flow minus in-flow = supply, x >= 0."""
    m = len(costs)
    N = n_nodes
    root = N
    zero = Fraction(0) if exact else 0.0
    conv = Fraction if exact else float
    costs = [conv(c) for c in costs]
    supplies = [conv(b) for b in supplies]
    if sum(supplies, zero) != 0 and (exact or abs(sum(supplies)) > 1e-9 * max(
            1.0, sum(abs(b) for b in supplies))):
        raise SolverError("supplies do not balance")

    max_c = max((abs(c) for c in costs), default=zero)
    big_m = (N + 1) * (max_c + 1)
    tails = list(tails) + [0] * N
    heads = list(heads) + [0] * N
    costs = costs + [big_m] * N
    flow = [zero] * (m + N)
    parent = [-1] * (N + 1)
    parent_arc = [-1] * (N + 1)
    for i in range(N):
        a = m + i
        if supplies[i] >= 0:
            tails[a], heads[a], flow[a] = i, root, supplies[i]
        else:
            tails[a], heads[a], flow[a] = root, i, -supplies[i]
        parent[i], parent_arc[i] = root, a
    in_tree = [False] * m + [True] * N
    tree = set(range(m, m + N))

    mass = sum((abs(b) for b in supplies), zero)
    flow_tol = zero if exact else FLOAT_TOL * max(1.0, mass)
    cost_tol = zero if exact else FLOAT_TOL * max(1.0, float(max_c))

    if not exact:
        np_tails = np.asarray(tails[:m], dtype=np.intp)
        np_heads = np.asarray(heads[:m], dtype=np.intp)
        np_costs = np.asarray(costs[:m], dtype=float)

    depth = [0] * (N + 1)
    pi = [zero] * (N + 1)

    def rebuild():
        adj = [[] for _ in range(N + 1)]
        for a in tree:
            adj[tails[a]].append(a)
            adj[heads[a]].append(a)
        seen = [False] * (N + 1)
        seen[root] = True
        parent[root], parent_arc[root], depth[root], pi[root] = -1, -1, 0, zero
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for a in adj[u]:
                v = heads[a] if tails[a] == u else tails[a]
                if seen[v]:
                    continue
                seen[v] = True
                parent[v], parent_arc[v], depth[v] = u, a, depth[u] + 1
                if tails[a] == v:
                    pi[v] = costs[a] + pi[u]
                else:
                    pi[v] = pi[u] - costs[a]
                queue.append(v)
        if not all(seen):
            raise SolverError("basis is not a spanning tree")

    rebuild()
    limit = max_pivots if max_pivots is not None else max(10_000, 50 * (m + N))
    pivots = 0
    while True:
        # pricing
        if exact:
            best, enter = zero, -1
            for a in range(m):
                if in_tree[a]:
                    continue
                rc = costs[a] - pi[tails[a]] + pi[heads[a]]
                if rc < best:
                    best, enter = rc, a
        else:
            pot = np.asarray(pi, dtype=float)
            rc = np_costs - pot[np_tails] + pot[np_heads]
            enter = int(np.argmin(rc)) if m else -1
            if enter < 0 or rc[enter] >= -cost_tol:
                enter = -1
        if enter < 0:
            break
        pivots += 1
        if pivots > limit:
            raise SolverError(f"no convergence after {limit} pivots")

        k, l = tails[enter], heads[enter]
        up_k, up_l = [], []
        u, v = k, l
        while depth[u] > depth[v]:
            up_k.append(u)
            u = parent[u]
        while depth[v] > depth[u]:
            up_l.append(v)
            v = parent[v]
        while u != v:
            up_k.append(u)
            up_l.append(v)
            u, v = parent[u], parent[v]
        # cycle oriented along the entering arc, listed starting from the apex
        cycle = []
        for child in reversed(up_k):
            a = parent_arc[child]
            cycle.append((a, tails[a] != child))
        cycle.append((enter, True))
        for child in up_l:
            a = parent_arc[child]
            cycle.append((a, tails[a] == child))

        blocking = [a for a, fwd in cycle if not fwd]
        if not blocking:
            raise SolverError("unbounded problem (negative cost cycle)")
        delta = min(flow[a] for a in blocking)
        leave = -1
        for a, fwd in cycle:
            if not fwd and flow[a] <= delta + flow_tol:
                leave = a
        for a, fwd in cycle:
            if fwd:
                flow[a] += delta
            else:
                flow[a] -= delta
                if flow[a] <= flow_tol:
                    flow[a] = zero
        flow[leave] = zero
        if leave != enter:
            tree.discard(leave)
            in_tree[leave] = False
            tree.add(enter)
            in_tree[enter] = True
            rebuild()

    artificial = sum(flow[m:], zero)
    if artificial > (zero if exact else 1e-9 * max(1.0, float(mass))):
        raise SolverError("infeasible flow problem")
    real = flow[:m]
    total = sum((c * x for c, x in zip(costs[:m], real)), zero)
    return FlowSolution(flows=real, potentials=pi[:N], cost=total, pivots=pivots)


def transport_network(src_supply: List, dst_demand: List, direct_costs, src_res_costs,
                      dst_res_costs):
    """Arc lists for the reservoir-augmented bipartite network.

    Nodes: sources ``0..m-1``, reservoir source ``m``, sinks ``m+1..m+n``,
    reservoir sink ``m+n+1``.  Reservoir arcs come first so that ties between a
    direct route and a reservoir route resolve toward the reservoir.

    Returns ``(n_nodes, tails, heads, costs, supplies, kinds)`` where ``kinds``
    labels each arc as ``("to_res", i)``, ``("from_res", j)``, ``("res_res",)``
    or ``("direct", i, j)``.
    """
    m, n = len(src_supply), len(dst_demand)
    r_src, r_snk = m, m + n + 1
    tails, heads, costs, kinds = [], [], [], []

    def arc(t, h, c, kind):
        tails.append(t)
        heads.append(h)
        costs.append(c)
        kinds.append(kind)

    for i in range(m):
        arc(i, r_snk, src_res_costs[i], ("to_res", i))
    for j in range(n):
        arc(r_src, m + 1 + j, dst_res_costs[j], ("from_res", j))
    arc(r_src, r_snk, 0, ("res_res",))
    for i in range(m):
        for j in range(n):
            arc(i, m + 1 + j, direct_costs[i][j], ("direct", i, j))
    mass_src = sum(src_supply) if src_supply else 0
    mass_dst = sum(dst_demand) if dst_demand else 0
    supplies = list(src_supply) + [mass_dst] + [-w for w in dst_demand] + [-mass_src]
    return m + n + 2, tails, heads, costs, supplies, kinds
