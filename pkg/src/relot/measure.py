"""Discrete relative measures on a metric pair.

A :class:`DiscreteMeasure` is a finite non-negative combination of Dirac
masses at points with ``d_A > 0``; mass placed on the reservoir is invisible
(it is quotiented away) and is reported as ``dropped_mass`` by
:func:`make_measure`.  These measures form a cancellative convex cone which is
a lattice under the atomwise order, so sup, inf and the residual ``mu \\ nu``
are computed atom by atom.

:class:`SignedMeasure` holds differences of such measures; :func:`jordan`
splits it into positive and negative parts.

Weights are floats by default.  With ``rational=True`` weights are stored as
``fractions.Fraction`` and every operation here is exact.
"""
from __future__ import annotations

import math
from fractions import Fraction
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, Tuple, Union

from .errors import MeasureError, PairMismatchError
from .metric_pair import MetricPair, power

__all__ = [
    "DiscreteMeasure",
    "SignedMeasure",
    "make_measure",
    "make_signed",
    "zero",
    "dirac",
    "total_mass",
    "moment",
    "integrate",
    "add",
    "scale",
    "truncate_lower",
    "truncate_upper",
    "band",
    "sup_measure",
    "inf_measure",
    "residual",
    "le",
    "jordan",
    "absolute",
    "retract_measure",
]

Weight = Union[float, Fraction]


def to_weight(w, rational: bool) -> Weight:
    """Parse a weight: number, ``"p/q"`` string, or ``(num, den)`` integer pair."""
    if isinstance(w, (tuple, list)):
        if len(w) != 2:
            raise MeasureError(f"rational weight must be (num, den), got {w!r}")
        w = Fraction(int(w[0]), int(w[1]))
    elif isinstance(w, str):
        try:
            w = Fraction(w)
        except ValueError as exc:
            raise MeasureError(f"cannot parse weight {w!r}") from exc
    elif isinstance(w, bool) or not isinstance(w, (int, float, Fraction)):
        raise MeasureError(f"weight must be a number, got {w!r}")
    if isinstance(w, float) and not math.isfinite(w):
        raise MeasureError(f"weight must be finite, got {w!r}")
    return Fraction(w) if rational else float(w)


class _Atomic:
    __slots__ = ("pair", "_atoms", "rational")

    def __init__(self, pair: MetricPair, atoms: Mapping[int, Weight],
                 rational: bool = None):
        if rational is None:
            rational = bool(atoms) and all(isinstance(w, Fraction) for w in atoms.values())
        self.pair = pair
        self.rational = rational
        self._atoms = MappingProxyType(dict(sorted(atoms.items())))

    @property
    def atoms(self) -> Mapping[int, Weight]:
        """Read-only map point -> weight, sorted by point."""
        return self._atoms

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(self._atoms)

    def __len__(self):
        return len(self._atoms)

    def __iter__(self):
        return iter(self._atoms.items())

    def __getitem__(self, x: int) -> Weight:
        return self._atoms.get(x, 0)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.pair is other.pair and dict(self._atoms) == dict(other._atoms)

    __hash__ = None

    def __repr__(self):
        body = " + ".join(f"{w}*δ{x}" for x, w in self._atoms.items()) or "0"
        return f"{type(self).__name__}({body})"


class DiscreteMeasure(_Atomic):
    """Finite non-negative relative measure; immutable.

    Build instances with :func:`make_measure`, :func:`dirac` or :func:`zero`.
    """

    __slots__ = ()

    def __add__(self, other):
        if not isinstance(other, DiscreteMeasure):
            return NotImplemented
        return add(self, other)

    def __rmul__(self, alpha):
        return scale(alpha, self)

    def __or__(self, other):
        return sup_measure(self, other)

    def __and__(self, other):
        return inf_measure(self, other)

    def __le__(self, other):
        return le(self, other)

    def __sub__(self, other):
        if not isinstance(other, DiscreteMeasure):
            return NotImplemented
        _same_pair(self, other)
        out = dict(self._atoms)
        for x, w in other._atoms.items():
            out[x] = out.get(x, 0) - w
        return SignedMeasure(self.pair, {x: w for x, w in out.items() if w != 0},
                             self.rational and other.rational)


class SignedMeasure(_Atomic):
    """Finite signed relative measure (a difference of two DiscreteMeasures)."""

    __slots__ = ()

    def __neg__(self):
        return SignedMeasure(self.pair, {x: -w for x, w in self._atoms.items()},
                             self.rational)


def _same_pair(*measures) -> MetricPair:
    pair = measures[0].pair
    for m in measures[1:]:
        if m.pair is not pair:
            raise PairMismatchError("measures live on different metric pairs")
    return pair


def _collect(pair: MetricPair, raw, rational: bool, signed: bool):
    merged = {}
    for item in raw:
        try:
            x, w = item
        except (TypeError, ValueError) as exc:
            raise MeasureError(f"expected (point, weight), got {item!r}") from exc
        if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < pair.n:
            raise MeasureError(f"unknown point {x!r}")
        w = to_weight(w, rational)
        if not signed and w < 0:
            raise MeasureError(f"negative weight {w} at point {x}")
        merged[x] = merged.get(x, 0) + w
    kept, dropped = {}, (Fraction(0) if rational else 0.0)
    for x, w in merged.items():
        if pair.dist_to_reservoir(x) == 0:
            dropped += w
        elif w != 0:
            kept[x] = w
    return kept, dropped


def _rat(*measures) -> bool:
    return all(m.rational for m in measures)


def make_measure(pair: MetricPair, raw: Iterable[Tuple[int, object]] = (), *,
                 rational: bool = False):
    """Build a measure from ``(point, weight)`` pairs.

    Duplicate points are merged by summing.  Atoms on the reservoir
    (``d_A = 0``) are discarded.

    Returns
    -------
    (DiscreteMeasure, dropped_mass)
        ``dropped_mass`` is the total weight that landed on the reservoir.
    """
    kept, dropped = _collect(pair, raw, rational, signed=False)
    return DiscreteMeasure(pair, kept, rational), dropped


def make_signed(pair: MetricPair, raw: Iterable[Tuple[int, object]] = (), *,
                rational: bool = False) -> SignedMeasure:
    """Signed counterpart of :func:`make_measure`; duplicates merge before zeros are removed."""
    kept, _ = _collect(pair, raw, rational, signed=True)
    return SignedMeasure(pair, kept, rational)


def zero(pair: MetricPair, *, rational: bool = False) -> DiscreteMeasure:
    return DiscreteMeasure(pair, {}, rational)


def dirac(pair: MetricPair, x: int, weight=1, *, rational: bool = False) -> DiscreteMeasure:
    return make_measure(pair, [(x, weight)], rational=rational)[0]


def total_mass(mu: _Atomic) -> Weight:
    return sum(mu.atoms.values(), _zero_like(mu))


def moment(mu: DiscreteMeasure, p=1) -> Weight:
    """``mu(d_A ** p)``, the p-th moment of ``mu`` about the reservoir."""
    if p < 0:
        raise ValueError("moment order must be >= 0")
    if p == 0:
        return total_mass(mu)
    d_a = mu.pair.dist_to_reservoir
    return sum((w * power(d_a(x), p) for x, w in mu), _zero_like(mu))


def integrate(mu: _Atomic, f: Union[Mapping[int, float], Callable[[int], float]]):
    """``sum_x w_x f(x)``; ``f`` is a mapping or a callable on point indices."""
    get = f if callable(f) else f.__getitem__
    total = _zero_like(mu)
    for x, w in mu:
        try:
            total += w * get(x)
        except KeyError as exc:
            raise MeasureError(f"function undefined at support point {x}") from exc
    return total


def add(mu: DiscreteMeasure, nu: DiscreteMeasure) -> DiscreteMeasure:
    pair = _same_pair(mu, nu)
    out = dict(mu.atoms)
    for x, w in nu:
        out[x] = out.get(x, 0) + w
    return DiscreteMeasure(pair, out, _rat(mu, nu))


def scale(alpha, mu: DiscreteMeasure) -> DiscreteMeasure:
    if alpha < 0:
        raise ValueError("scale factor must be >= 0")
    if mu.rational:
        alpha = Fraction(alpha)
    if alpha == 0:
        return zero(mu.pair, rational=mu.rational)
    return DiscreteMeasure(mu.pair, {x: alpha * w for x, w in mu}, mu.rational)


def _restrict(mu, keep):
    d_a = mu.pair.dist_to_reservoir
    return type(mu)(mu.pair, {x: w for x, w in mu if keep(d_a(x))}, mu.rational)


def truncate_lower(mu: DiscreteMeasure, eps) -> DiscreteMeasure:
    """``mu_eps``: the atoms strictly farther than ``eps`` from the reservoir."""
    if eps < 0:
        raise ValueError("eps must be >= 0")
    return _restrict(mu, lambda r: r > eps)


def truncate_upper(mu: DiscreteMeasure, eps) -> DiscreteMeasure:
    """``mu^eps``: the atoms within ``eps`` of the reservoir."""
    if eps < 0:
        raise ValueError("eps must be >= 0")
    return _restrict(mu, lambda r: r <= eps)


def band(mu: DiscreteMeasure, eps, delta=math.inf) -> DiscreteMeasure:
    """Atoms with ``eps < d_A <= delta``."""
    if eps < 0 or eps > delta:
        raise ValueError("band needs 0 <= eps <= delta")
    return _restrict(mu, lambda r: eps < r <= delta)


def retract_measure(mu: DiscreteMeasure, eps) -> DiscreteMeasure:
    """Push the eps-neighbourhood of the reservoir onto it; equals ``truncate_lower``."""
    if not eps > 0:
        raise ValueError("eps must be > 0")
    return truncate_lower(mu, eps)


def _combine(mu, nu, op):
    pair = _same_pair(mu, nu)
    out = {}
    for x in set(mu.atoms) | set(nu.atoms):
        w = op(mu[x], nu[x])
        if w != 0:
            out[x] = w
    return DiscreteMeasure(pair, out, _rat(mu, nu))


def sup_measure(mu: DiscreteMeasure, nu: DiscreteMeasure) -> DiscreteMeasure:
    """Least upper bound: atomwise maximum."""
    return _combine(mu, nu, max)


def inf_measure(mu: DiscreteMeasure, nu: DiscreteMeasure) -> DiscreteMeasure:
    """Greatest lower bound: atomwise minimum."""
    return _combine(mu, nu, min)


def residual(mu: DiscreteMeasure, nu: DiscreteMeasure) -> DiscreteMeasure:
    """``mu \\ nu``: the unique measure with ``nu + residual = mu | nu``."""
    return _combine(mu, nu, lambda a, b: max(a - b, 0))


def le(mu: _Atomic, nu: _Atomic) -> bool:
    _same_pair(mu, nu)
    return all(w <= nu[x] for x, w in mu) and all(0 <= w for x, w in nu
                                                   if x not in mu.atoms)


def jordan(sigma: SignedMeasure) -> Tuple[DiscreteMeasure, DiscreteMeasure]:
    """Split ``sigma`` into ``(positive, negative)`` parts with disjoint supports."""
    pos = {x: w for x, w in sigma if w > 0}
    neg = {x: -w for x, w in sigma if w < 0}
    return (DiscreteMeasure(sigma.pair, pos, sigma.rational),
            DiscreteMeasure(sigma.pair, neg, sigma.rational))


def absolute(sigma: SignedMeasure) -> DiscreteMeasure:
    """``|sigma| = sigma+ + sigma-``."""
    return DiscreteMeasure(sigma.pair, {x: abs(w) for x, w in sigma}, sigma.rational)


def _zero_like(mu):
    return Fraction(0) if mu.rational else 0.0
