"""Acceptance suite: one PASS/FAIL line per criterion.

Run standalone with ``python3 tests/test_acceptance.py`` or through pytest.
"""
from __future__ import annotations

import math
import os
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from relot import (MetricPair, PairCost, absolute, band, dirac, inf_measure, kr_dual, kr_norm,  # noqa: E402
                   le, make_measure, make_signed, marginals, mk_dual, moment, op_norm, oracle_enumerate,
                   oracle_lp, residual, retract_coupling, scale, solve_w1, solve_wp,
                   sup_measure, truncate_lower, truncate_upper, zero, cost)
from helpers import (EXACT_GEOMETRIES, GEOMETRIES, random_coupling, random_measure,  # noqa: E402
                     random_pair)

# tolerances
KR_FLOAT_ABS = 1e-10
EMBED_ABS = 1e-9
MOMENT_REL = 1e-9
GAP_REL = 1e-7
SYMMETRY_ABS = 1e-10
TRIANGLE_SLACK = 1e-9
CONE_REL = 1e-9

SEED = 20240601
CRITERIA = []


def criterion(number, title):
    def register(fn):
        CRITERIA.append((number, title, fn))
        return fn
    return register


def _rel(a, b):
    a, b = float(a), float(b)
    return abs(a - b) / max(1.0, abs(a), abs(b))


def _root(v, p):
    return float(v) if p == 1 else float(v) ** (1.0 / p)


# ----------------------------------------------------------------------


@criterion(1, "KR norm of the worked example on the real line")
def kr_worked_example():
    pair = MetricPair.real_line([0, 2, 3, 8, 9])
    out = []
    for rational in (True, False):
        s1 = make_signed(pair, [(1, 1), (3, 1)], rational=rational)
        s2 = make_signed(pair, [(1, 1), (2, -1), (3, 1), (4, -1)], rational=rational)
        v1, v2 = kr_norm(s1), kr_norm(s2)
        if rational:
            ok = v1 == 10 and v2 == 2 and isinstance(v1, Fraction)
        else:
            ok = abs(v1 - 10) <= KR_FLOAT_ABS and abs(v2 - 2) <= KR_FLOAT_ABS
        out.append(ok)
    return all(out), f"rational exact={out[0]}, float within {KR_FLOAT_ABS}={out[1]}"


@criterion(2, "KR norm is not a lattice norm")
def lattice_counterexample():
    pair = MetricPair.real_line([0, 2, 3, 8, 9])
    s1 = make_signed(pair, [(1, 1), (3, 1)], rational=True)
    s2 = make_signed(pair, [(1, 1), (2, -1), (3, 1), (4, -1)], rational=True)
    dominated = le(absolute(s1), absolute(s2))
    n1, n2 = kr_norm(s1), kr_norm(s2)
    o1, o2 = op_norm(s1), op_norm(s2)
    ok = dominated and n1 > n2 and (o1, o2) == (n1, n2)
    return ok, f"|s1| <= |s2|: {dominated}; norms {n1} > {n2}"


@criterion(3, "Dirac embedding is isometric for d_p")
def delta_embedding():
    rng = np.random.default_rng(SEED + 3)
    worst = 0.0
    for kind in GEOMETRIES:
        pair = random_pair(rng, 40, kind)
        for _ in range(200):
            x, y = (int(v) for v in rng.integers(0, pair.n, size=2))
            for p in (1, 1.5, 2):
                w = solve_wp(dirac(pair, x), dirac(pair, y), p).value
                worst = max(worst, abs(float(w) - float(pair.dp_cost(p, x, y))))
    return worst <= EMBED_ABS, f"max error {worst:.2e} over {len(GEOMETRIES)} geometries x 200 pairs x 3 p"


@criterion(4, "W_p(mu, 0) equals the p-th moment root")
def mass_to_reservoir():
    rng = np.random.default_rng(SEED + 4)
    worst = 0.0
    for i in range(50):
        pair = random_pair(rng, 30, GEOMETRIES[i % len(GEOMETRIES)])
        mu = random_measure(rng, pair, int(rng.integers(1, 15)), rational=False)
        for p in (1, 2):
            w = solve_wp(mu, zero(pair), p).value
            worst = max(worst, _rel(w, _root(moment(mu, p), p)))
    return worst <= MOMENT_REL, f"max relative error {worst:.2e} over 50 measures x 2 p"


def _lipschitz_cost(rng, pair):
    """``a*dbar + b*d_2 + c*|d_A(x) - d_A(y)|``; its reservoir columns are ``(a+b+c)*d_A``."""
    a, b, c = rng.uniform(0.1, 2.0, size=3)
    D = pair.dbar_matrix()
    D2 = pair.dp_matrix(2)
    r = pair.reservoir_vector()
    H = a * D + b * D2 + c * np.abs(r[:, None] - r[None, :])
    col = ((a + b + c) * r).tolist()
    return PairCost(H.tolist(), col, col, pair)


@criterion(5, "Strong duality for KR and MK duals")
def strong_duality():
    rng = np.random.default_rng(SEED + 5)
    worst, checks = 0.0, 0
    for i in range(100):
        pair = random_pair(rng, 30, GEOMETRIES[i % len(GEOMETRIES)])
        mu = random_measure(rng, pair, int(rng.integers(1, 13)), rational=False)
        nu = random_measure(rng, pair, int(rng.integers(0, 13)), rational=False)
        certs = [kr_dual(mu, nu), mk_dual(PairCost.from_metric(pair), mu, nu)]
        certs += [mk_dual(_lipschitz_cost(rng, pair), mu, nu) for _ in range(5)]
        w1 = solve_w1(mu, nu).value
        worst = max(worst, _rel(certs[0].value, w1), _rel(certs[1].value, w1))
        for cert in certs:
            worst = max(worst, abs(float(cert.gap)) / max(1.0, abs(float(cert.primal))))
            checks += 1
    return worst <= GAP_REL, f"max relative gap {worst:.2e} over {checks} certificates"


@criterion(6, "W_1 and W_2 are metrics on random triples")
def metric_axioms():
    rng = np.random.default_rng(SEED + 6)
    sym = tri = 0.0
    identity_ok = True
    for i in range(200):
        pair = random_pair(rng, 20, GEOMETRIES[i % len(GEOMETRIES)])
        ms = [random_measure(rng, pair, int(rng.integers(0, 7)), rational=False) for _ in range(3)]
        for p in (1, 2):
            d = {(a, b): float(solve_wp(ms[a], ms[b], p).value) for a in range(3) for b in range(3)}
            sym = max(sym, abs(d[0, 1] - d[1, 0]), abs(d[1, 2] - d[2, 1]))
            tri = max(tri, d[0, 2] - d[0, 1] - d[1, 2], d[0, 1] - d[0, 2] - d[2, 1])
        # identity of indiscernibles, exact
        epair = random_pair(rng, 12, EXACT_GEOMETRIES[i % len(EXACT_GEOMETRIES)])
        mu = random_measure(rng, epair, 5)
        nu = mu if i % 3 == 0 else random_measure(rng, epair, 5)
        identity_ok &= (solve_w1(mu, nu).value == 0) == (mu == nu)
        identity_ok &= solve_w1(mu, mu).value == 0
    ok = sym <= SYMMETRY_ABS and tri <= TRIANGLE_SLACK and identity_ok
    return ok, f"symmetry {sym:.2e}, triangle excess {tri:.2e}, identity exact={identity_ok}"


@criterion(7, "W_1 is homogeneous and translation invariant")
def cone_norm_laws():
    rng = np.random.default_rng(SEED + 7)
    worst = 0.0
    for i in range(100):
        pair = random_pair(rng, 25, GEOMETRIES[i % len(GEOMETRIES)])
        mu, nu, lam = (random_measure(rng, pair, int(rng.integers(0, 9)), rational=False)
                       for _ in range(3))
        alpha = float(rng.uniform(0, 10))
        w = solve_w1(mu, nu).value
        worst = max(worst,
                    _rel(solve_w1(scale(alpha, mu), scale(alpha, nu)).value, alpha * w),
                    _rel(solve_w1(mu + lam, nu + lam).value, w))
    return worst <= CONE_REL, f"max relative error {worst:.2e} over 100 instances"


@criterion(8, "Network simplex agrees exactly with both oracles")
def oracle_equivalence():
    rng = np.random.default_rng(SEED + 8)
    lp_cases = en_cases = 0
    ok = True
    for i in range(40):
        kind = EXACT_GEOMETRIES[i % len(EXACT_GEOMETRIES)]
        pair = random_pair(rng, 40, kind)
        k1, k2 = (int(v) for v in rng.integers(0, 13, size=2))
        if i < 2:
            k1 = k2 = 20                       # the largest admissible product support
        mu = random_measure(rng, pair, k1)
        nu = random_measure(rng, pair, k2)
        for p in (1, 2):
            ok &= solve_wp(mu, nu, p).cost == oracle_lp(mu, nu, p, root=False)
            lp_cases += 1
        mu = random_measure(rng, pair, int(rng.integers(0, 9)), unit=True)
        nu = random_measure(rng, pair, int(rng.integers(0, 9)), unit=True)
        for p in (1, 2):
            c = solve_wp(mu, nu, p).cost
            ok &= c == oracle_enumerate(mu, nu, p, root=False) == oracle_lp(mu, nu, p, root=False)
            en_cases += 1
    return bool(ok), f"{lp_cases} LP-oracle and {en_cases} enumeration cases, exact rationals"


@criterion(9, "Riesz cone identities hold exactly")
def riesz_identities():
    rng = np.random.default_rng(SEED + 9)
    pair = random_pair(rng, 16, "line")
    failures = [0] * 7
    for _ in range(500):
        mu, nu, lam = (random_measure(rng, pair, int(rng.integers(0, 10))) for _ in range(3))
        checks = [
            sup_measure(mu, nu) + inf_measure(mu, nu) == mu + nu,
            sup_measure(mu, nu) + lam == sup_measure(mu + lam, nu + lam),
            inf_measure(mu, nu) + lam == inf_measure(mu + lam, nu + lam),
            inf_measure(mu, sup_measure(nu, lam)) == sup_measure(inf_measure(mu, nu), inf_measure(mu, lam)),
            sup_measure(mu, inf_measure(nu, lam)) == inf_measure(sup_measure(mu, nu), sup_measure(mu, lam)),
            nu + residual(mu, nu) == sup_measure(mu, nu),
            inf_measure(mu, nu) + residual(mu, nu) == mu,
        ]
        for j, c in enumerate(checks):
            failures[j] += not c
    return not any(failures), f"failures per identity {failures} over 500 triples"


@criterion(10, "Retraction cost bound and exact marginals")
def retraction_bound():
    rng = np.random.default_rng(SEED + 10)
    bound_ok = marg_ok = True
    for i in range(200):
        pair = random_pair(rng, 16, EXACT_GEOMETRIES[i % len(EXACT_GEOMETRIES)])
        pi = random_coupling(rng, pair, int(rng.integers(1, 8)))
        mu, nu = marginals(pi)
        eps = Fraction(int(rng.integers(1, 41)), 2)
        r = retract_coupling(pi, eps)
        rhs = cost(pi, 1) + moment(truncate_upper(mu, eps), 1) + moment(truncate_upper(nu, eps), 1)
        bound_ok &= cost(r, 1) <= rhs
        marg_ok &= marginals(r) == (truncate_lower(mu, eps), truncate_lower(nu, eps))
    return bound_ok and marg_ok, f"bound={bound_ok}, marginals exact={marg_ok} on 200 cases"


@criterion(11, "Truncation approximates in W_p")
def approximation():
    rng = np.random.default_rng(SEED + 11)
    ok = True
    for i in range(100):
        pair = random_pair(rng, 20, EXACT_GEOMETRIES[i % len(EXACT_GEOMETRIES)])
        mu = random_measure(rng, pair, int(rng.integers(1, 12)))
        delta = Fraction(int(rng.integers(0, 41)), 2)
        for p in (1, 2):
            # compare p-th powers exactly; equivalent to comparing the roots
            ok &= solve_wp(mu, truncate_lower(mu, delta), p).cost <= moment(truncate_upper(mu, delta), p)
    return bool(ok), "100 measures x p in {1, 2}, exact rationals"


# ----------------------------------------------------------------------


def _line(number, title, ok, detail, seconds):
    return f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title} ({detail}; {seconds:.2f}s)"


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[f"c{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(number, title, fn, capsys):
    start = time.perf_counter()
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + _line(number, title, ok, detail, time.perf_counter() - start))
    assert ok, detail


def main():
    total = time.perf_counter()
    failed = 0
    for number, title, fn in CRITERIA:
        start = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # report, keep going
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        failed += not ok
        print(_line(number, title, ok, detail, time.perf_counter() - start), flush=True)
    print(f"{len(CRITERIA) - failed}/{len(CRITERIA)} criteria passed "
          f"in {time.perf_counter() - total:.1f}s")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
