"""Transport plans between discrete relative measures.

A :class:`Coupling` stores three kinds of flow:

* ``direct[(x, y)]``: mass moved from ``x`` to ``y``,
* ``to_reservoir[x]``: mass of the first measure dumped into the reservoir,
* ``from_reservoir[y]``: mass of the second measure drawn from the reservoir.

Reservoir flows are stored per endpoint only; every point of ``A`` is at the
same relative cost ``d_A`` from ``x``, so which point of ``A`` is used does
not matter.
"""
from __future__ import annotations

from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Tuple

from .errors import MeasureError, PairMismatchError
from .measure import DiscreteMeasure, _same_pair, make_measure, to_weight
from .metric_pair import MetricPair, power

__all__ = [
    "Coupling",
    "marginals",
    "trivial_coupling",
    "diagonal_coupling",
    "trivial_extension",
    "cost",
    "retract_coupling",
    "transpose",
    "add_couplings",
]


def _clean(d):
    return MappingProxyType({k: w for k, w in sorted(d.items()) if w != 0})


def _accumulate(d, key, w):
    if w < 0:
        raise MeasureError("coupling weights must be non-negative")
    d[key] = d.get(key, 0) + w


class Coupling:
    """Immutable transport plan on a metric pair.

    An endpoint with ``d_A = 0`` is a point of the reservoir, so a direct flow
    touching one is stored as the matching reservoir flow (or dropped when
    both ends lie in A).
    """

    __slots__ = ("pair", "direct", "to_reservoir", "from_reservoir", "rational")

    def __init__(self, pair: MetricPair,
                 direct: Mapping[Tuple[int, int], object] = None,
                 to_reservoir: Mapping[int, object] = None,
                 from_reservoir: Mapping[int, object] = None,
                 rational: bool = False):
        self.pair = pair
        self.rational = rational
        on_a = lambda x: pair.dist_to_reservoir(x) == 0  # noqa: E731 (also checks the index)
        d, t, f = {}, {}, {}
        for (x, y), w in (direct or {}).items():
            w = to_weight(w, rational)
            ax, ay = on_a(x), on_a(y)
            if not ax and not ay:
                _accumulate(d, (x, y), w)
            elif not ax:
                _accumulate(t, x, w)
            elif not ay:
                _accumulate(f, y, w)
        for x, w in (to_reservoir or {}).items():
            if not on_a(x):
                _accumulate(t, x, to_weight(w, rational))
        for y, w in (from_reservoir or {}).items():
            if not on_a(y):
                _accumulate(f, y, to_weight(w, rational))
        self.direct = _clean(d)
        self.to_reservoir = _clean(t)
        self.from_reservoir = _clean(f)

    def edges(self):
        """All flows as ``(kind, from, to, weight)`` sorted by (kind, from, to).

        Reservoir endpoints are reported as ``None``.
        """
        out = [("direct", x, y, w) for (x, y), w in self.direct.items()]
        out += [("from_res", None, y, w) for y, w in self.from_reservoir.items()]
        out += [("to_res", x, None, w) for x, w in self.to_reservoir.items()]
        return sorted(out, key=lambda e: (e[0], -1 if e[1] is None else e[1],
                                          -1 if e[2] is None else e[2]))

    def __eq__(self, other):
        if not isinstance(other, Coupling):
            return NotImplemented
        return (self.pair is other.pair and dict(self.direct) == dict(other.direct)
                and dict(self.to_reservoir) == dict(other.to_reservoir)
                and dict(self.from_reservoir) == dict(other.from_reservoir))

    __hash__ = None

    def __add__(self, other):
        return add_couplings(self, other)

    def __repr__(self):
        return (f"Coupling(direct={dict(self.direct)}, to_reservoir="
                f"{dict(self.to_reservoir)}, from_reservoir={dict(self.from_reservoir)})")


def _check_same(a, b):
    if a.pair is not b.pair:
        raise PairMismatchError("objects live on different metric pairs")


def marginals(pi: Coupling) -> Tuple[DiscreteMeasure, DiscreteMeasure]:
    """The two projections of ``pi``; reservoir-side mass vanishes in the quotient."""
    first, second = [], []
    for (x, y), w in pi.direct.items():
        first.append((x, w))
        second.append((y, w))
    first += list(pi.to_reservoir.items())
    second += list(pi.from_reservoir.items())
    mu, _ = make_measure(pi.pair, first, rational=pi.rational)
    nu, _ = make_measure(pi.pair, second, rational=pi.rational)
    return mu, nu


def trivial_coupling(mu: DiscreteMeasure, nu: DiscreteMeasure) -> Coupling:
    """Send all of ``mu`` to the reservoir and draw all of ``nu`` from it."""
    pair = _same_pair(mu, nu)
    return Coupling(pair, {}, dict(mu.atoms), dict(nu.atoms),
                    rational=mu.rational and nu.rational)


def diagonal_coupling(mu: DiscreteMeasure) -> Coupling:
    """Push ``mu`` forward along the diagonal x -> (x, x)."""
    return Coupling(mu.pair, {(x, x): w for x, w in mu}, rational=mu.rational)


def add_couplings(a: Coupling, b: Coupling) -> Coupling:
    """Sum of plans; couples the sums of the respective marginals."""
    _check_same(a, b)
    direct = dict(a.direct)
    for k, w in b.direct.items():
        direct[k] = direct.get(k, 0) + w
    to_res = dict(a.to_reservoir)
    for k, w in b.to_reservoir.items():
        to_res[k] = to_res.get(k, 0) + w
    from_res = dict(a.from_reservoir)
    for k, w in b.from_reservoir.items():
        from_res[k] = from_res.get(k, 0) + w
    return Coupling(a.pair, direct, to_res, from_res, rational=a.rational and b.rational)


def trivial_extension(pi: Coupling, mu2: DiscreteMeasure, nu2: DiscreteMeasure) -> Coupling:
    """Add the trivial coupling of ``(mu2, nu2)`` to ``pi``."""
    _check_same(pi, mu2)
    return add_couplings(pi, trivial_coupling(mu2, nu2))


def transpose(pi: Coupling) -> Coupling:
    """Swap the roles of the two marginals; the cost is unchanged."""
    return Coupling(pi.pair, {(y, x): w for (x, y), w in pi.direct.items()},
                    dict(pi.from_reservoir), dict(pi.to_reservoir), rational=pi.rational)


def cost(pi: Coupling, p=1):
    """``pi(d_p ** p)``, including the reservoir legs at cost ``d_A ** p``."""
    if not p >= 1:
        raise ValueError(f"cost exponent p must be >= 1, got {p!r}")
    pair = pi.pair
    d_a = pair.dist_to_reservoir
    total = Fraction(0) if pi.rational else 0.0
    for (x, y), w in pi.direct.items():
        total += w * pair.dp_cost_pow(p, x, y)
    for x, w in pi.to_reservoir.items():
        total += w * power(d_a(x), p)
    for y, w in pi.from_reservoir.items():
        total += w * power(d_a(y), p)
    return total


def retract_coupling(pi: Coupling, eps) -> Coupling:
    """Push ``pi`` forward under the retraction collapsing ``{d_A <= eps}`` onto A.

    Direct flows keep the endpoints that stay outside the eps-neighbourhood and
    turn into reservoir flows when one endpoint collapses; flows whose
    endpoints all collapse disappear (they land on A x A).
    """
    if not eps > 0:
        raise ValueError("eps must be > 0")
    d_a = pi.pair.dist_to_reservoir
    direct, to_res, from_res = {}, {}, {}
    for (x, y), w in pi.direct.items():
        keep_x, keep_y = d_a(x) > eps, d_a(y) > eps
        if keep_x and keep_y:
            direct[(x, y)] = direct.get((x, y), 0) + w
        elif keep_x:
            to_res[x] = to_res.get(x, 0) + w
        elif keep_y:
            from_res[y] = from_res.get(y, 0) + w
    for x, w in pi.to_reservoir.items():
        if d_a(x) > eps:
            to_res[x] = to_res.get(x, 0) + w
    for y, w in pi.from_reservoir.items():
        if d_a(y) > eps:
            from_res[y] = from_res.get(y, 0) + w
    return Coupling(pi.pair, direct, to_res, from_res, rational=pi.rational)
