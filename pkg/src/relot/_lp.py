"""Dense two-phase tableau simplex, exact (Fraction) or float.

Solves ``min c.x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0``.

Pricing is Dantzig's rule with lowest-index ties; after a run of degenerate
pivots it switches to Bland's rule for good, so the exact path always
terminates.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import SolverError

FLOAT_TOL = 1e-11
_DEGENERATE_RUN = 50


@dataclass
class LPResult:
    x: list
    value: object
    pivots: int


class _Tableau:
    def __init__(self, T, basis, exact):
        self.T = T
        self.basis = basis
        self.exact = exact
        self.tol = 0 if exact else FLOAT_TOL * max(1.0, float(np.max(np.abs(T))) if T.size else 1.0)
        self.pivots = 0

    def pivot(self, r, j):
        T = self.T
        T[r] = T[r] / T[r, j]
        if self.exact:
            # the tableaux here are sparse; touch only rows and columns that change
            rows = np.flatnonzero((T[:, j] != 0).astype(bool))
            rows = rows[rows != r]
            cols = np.flatnonzero((T[r] != 0).astype(bool))
            if rows.size and cols.size:
                T[np.ix_(rows, cols)] -= np.outer(T[rows, j], T[r, cols])
        else:
            col = T[:, j].copy()
            col[r] = 0
            T -= np.outer(col, T[r])
            T[np.abs(T) < 1e-15] = 0.0
        self.basis[r] = j
        self.pivots += 1

    def run(self, allowed):
        """Iterate until the objective row (last row) has no negative entry in ``allowed``."""
        T, tol = self.T, self.tol
        allowed = np.asarray(list(allowed), dtype=np.intp)
        bland, stall, last = False, 0, T[-1, -1]
        while True:
            T = self.T
            obj = T[-1, allowed]
            neg = np.flatnonzero((obj < -tol).astype(bool))
            if not neg.size:
                return
            if bland:
                j = int(allowed[neg[0]])
            else:
                # most negative reduced cost; argmin keeps the lowest index on ties
                j = int(allowed[neg[int(np.argmin(obj[neg]))]])
            column = T[:-1, j]
            rows = np.flatnonzero((column > tol).astype(bool))
            if not rows.size:
                raise SolverError("linear program is unbounded")
            ratios = T[rows, -1] / column[rows]
            best = ratios.min()
            ties = rows[(ratios == best).astype(bool)]
            r = int(min(ties, key=lambda i: self.basis[i]))
            self.pivot(r, j)
            if self.pivots > 100_000:
                raise SolverError("simplex did not converge")
            if T[-1, -1] == last:
                stall += 1
                bland = bland or stall >= _DEGENERATE_RUN
            else:
                stall, last = 0, T[-1, -1]


def solve_lp(c, A_ub=(), b_ub=(), A_eq=(), b_eq=(), *, exact: bool,
             maximize: bool = False) -> LPResult:
    conv = Fraction if exact else float
    zero = conv(0)
    c = [conv(v) for v in c]
    n = len(c)
    if maximize:
        c = [-v for v in c]
    rows, rhs, kinds = [], [], []
    for a, b in zip(A_ub, b_ub):
        rows.append([conv(v) for v in a])
        rhs.append(conv(b))
        kinds.append("ub")
    for a, b in zip(A_eq, b_eq):
        rows.append([conv(v) for v in a])
        rhs.append(conv(b))
        kinds.append("eq")
    m = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("constraint rows must match the objective length")
    n_slack = kinds.count("ub")
    needs_art = []
    for i in range(m):
        flip = rhs[i] < 0
        if kinds[i] == "eq" or flip:
            needs_art.append(i)
    n_art = len(needs_art)
    width = n + n_slack + n_art
    dtype = object if exact else float
    T = np.empty((m + 1, width + 1), dtype=dtype)
    T[...] = zero
    basis = [0] * m
    s = n
    art_of_row = {i: n + n_slack + k for k, i in enumerate(needs_art)}
    for i in range(m):
        sign = -1 if rhs[i] < 0 else 1
        T[i, :n] = [sign * v for v in rows[i]]
        T[i, -1] = sign * rhs[i]
        if kinds[i] == "ub":
            T[i, s] = conv(sign)
            if sign > 0:
                basis[i] = s
            s += 1
        if i in art_of_row:
            T[i, art_of_row[i]] = conv(1)
            basis[i] = art_of_row[i]

    tab = _Tableau(T, basis, exact)
    art_cols = set(art_of_row.values())
    if n_art:
        T[-1, :] = zero
        for i in needs_art:
            T[-1, :] -= T[i, :]
        for col in art_cols:
            T[-1, col] = zero
        tab.run(range(width))
        if -T[-1, -1] > tab.tol * max(1, m):
            raise SolverError("linear program is infeasible")
        keep = []
        for i in range(m):
            if basis[i] in art_cols:
                nz = [j for j in range(n + n_slack) if abs(T[i, j]) > tab.tol]
                if nz:
                    tab.pivot(i, nz[0])
                    keep.append(i)
            else:
                keep.append(i)
        T = T[keep + [m]][:, [j for j in range(width + 1) if j not in art_cols]]
        basis = [basis[i] for i in keep]
        tab.T, tab.basis = T, basis
    width = n + n_slack
    full_c = c + [zero] * n_slack
    T[-1, :] = zero
    T[-1, :width] = full_c
    for i, b in enumerate(basis):
        if full_c[b] != 0:
            T[-1, :] -= full_c[b] * T[i, :]
    tab.run(range(width))

    x = [zero] * width
    for i, b in enumerate(basis):
        x[b] = T[i, -1]
    value = -T[-1, -1]
    if maximize:
        value = -value
    return LPResult(x=[conv(v) for v in x[:n]], value=conv(value), pivots=tab.pivots)
