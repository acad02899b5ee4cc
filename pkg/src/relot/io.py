"""Instance files and result serialization.

Instance JSON::

    {
      "geometry": {"kind": "euclidean", "coords": [[1], [4]],
                   "reservoir": {"points": [[0]]}}
                | {"kind": "euclidean", "coords": [[1, 2]],
                   "reservoir": {"hyperplane": {"normal": [0, 1], "offset": 0}}}
                | {"kind": "halfplane", "points": [[1, 5]], "norm": "linf"}
                | {"kind": "explicit", "matrix": [[0, 3], [3, 0]], "reservoir": [1, 2]},
      "measures": {"mu": [[0, 1], [1, "1/2"]], "nu": [{"point": 1, "weight": [3, 4]}]},
      "cost": {"matrix": [[...]], "to_reservoir": [...], "from_reservoir": [...]}
    }

Weights are numbers, ``"p/q"`` strings or ``[num, den]`` integer pairs.
Measures may carry negative weights only where a signed measure is expected.

Output is written by :func:`dumps`: floats with 17 significant digits (a
lossless round trip for doubles), fractions as integers or ``"p/q"`` strings.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

import jsonschema

from .coupling import Coupling
from .duality import PairCost
from .errors import MeasureError
from .measure import DiscreteMeasure, SignedMeasure, make_measure, make_signed, to_weight
from .metric_pair import MetricPair

__all__ = [
    "INSTANCE_SCHEMA",
    "Instance",
    "load_instance",
    "parse_instance",
    "pair_from_dict",
    "measure_to_json",
    "measure_from_json",
    "coupling_to_json",
    "coupling_from_json",
    "read_diagram_csv",
    "diagram_instance",
    "dumps",
    "coupling_to_dot",
]

_NUM = {"type": "number"}
_COORD = {"oneOf": [_NUM, {"type": "array", "items": _NUM, "minItems": 1}]}
_WEIGHT = {"oneOf": [
    _NUM,
    {"type": "string"},
    {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
]}
_ATOM = {"oneOf": [
    {"type": "array", "prefixItems": [{"type": "integer", "minimum": 0}, _WEIGHT],
     "items": False, "minItems": 2},
    {"type": "object", "properties": {"point": {"type": "integer", "minimum": 0},
                                      "weight": _WEIGHT},
     "required": ["point", "weight"], "additionalProperties": False},
]}

INSTANCE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["geometry"],
    "properties": {
        "geometry": {"oneOf": [
            {"type": "object", "required": ["kind", "coords", "reservoir"],
             "properties": {
                 "kind": {"const": "euclidean"},
                 "coords": {"type": "array", "items": _COORD},
                 "reservoir": {"oneOf": [
                     {"type": "object", "required": ["points"],
                      "properties": {"points": {"type": "array", "items": _COORD,
                                                "minItems": 1}},
                      "additionalProperties": False},
                     {"type": "object", "required": ["hyperplane"],
                      "properties": {"hyperplane": {
                          "type": "object", "required": ["normal", "offset"],
                          "properties": {"normal": {"type": "array", "items": _NUM},
                                         "offset": _NUM}}},
                      "additionalProperties": False},
                 ]}},
             "additionalProperties": False},
            {"type": "object", "required": ["kind", "points"],
             "properties": {
                 "kind": {"const": "halfplane"},
                 "points": {"type": "array",
                            "items": {"type": "array", "items": _NUM,
                                      "minItems": 2, "maxItems": 2}},
                 "norm": {"enum": ["linf", "l2"]}},
             "additionalProperties": False},
            {"type": "object", "required": ["kind", "matrix", "reservoir"],
             "properties": {
                 "kind": {"const": "explicit"},
                 "matrix": {"type": "array", "items": {"type": "array", "items": _NUM}},
                 "reservoir": {"type": "array", "items": _NUM}},
             "additionalProperties": False},
        ]},
        "measures": {"type": "object", "additionalProperties": {"type": "array", "items": _ATOM}},
        "cost": {"type": "object", "required": ["matrix", "to_reservoir", "from_reservoir"],
                 "properties": {
                     "matrix": {"type": "array", "items": {"type": "array", "items": _NUM}},
                     "to_reservoir": {"type": "array", "items": _NUM},
                     "from_reservoir": {"type": "array", "items": _NUM}},
                 "additionalProperties": False},
    },
}


def _exact_number(v, rational):
    # JSON floats are parsed as Python floats; keep them exact in rational mode
    if rational and isinstance(v, float):
        return Fraction(repr(v))
    return v


def pair_from_dict(desc: dict, *, rational: bool = False, seed=None) -> MetricPair:
    """Build a :class:`MetricPair` from a geometry descriptor."""
    kind = desc["kind"]

    def num(v):
        if isinstance(v, list):
            return [num(x) for x in v]
        return _exact_number(v, rational)

    if kind == "euclidean":
        res = desc["reservoir"]
        if "points" in res:
            return MetricPair.euclidean(num(desc["coords"]), num(res["points"]), seed=seed)
        hp = res["hyperplane"]
        return MetricPair.euclidean(num(desc["coords"]), hyperplane=(hp["normal"], hp["offset"]),
                                    seed=seed)
    if kind == "halfplane":
        return MetricPair.halfplane(num(desc["points"]), desc.get("norm", "linf"), seed=seed)
    if kind == "explicit":
        return MetricPair.explicit(num(desc["matrix"]), num(desc["reservoir"]), seed=seed)
    raise ValueError(f"unknown geometry kind {kind!r}")


def _atoms(raw):
    out = []
    for item in raw:
        if isinstance(item, dict):
            out.append((item["point"], item["weight"]))
        else:
            out.append((item[0], item[1]))
    return out


def _weight_in(w, rational):
    if isinstance(w, float) and rational:
        return Fraction(repr(w))
    return w


@dataclass
class Instance:
    pair: MetricPair
    measures: Dict[str, list] = field(default_factory=dict)
    cost: Optional[PairCost] = None
    rational: bool = False

    def _raw(self, name):
        try:
            raw = self.measures[name]
        except KeyError:
            raise MeasureError(f"no measure named {name!r} in instance") from None
        return [(x, _weight_in(w, self.rational)) for x, w in raw]

    def measure(self, name: str):
        """``(DiscreteMeasure, dropped_mass)`` for a named measure."""
        return make_measure(self.pair, self._raw(name), rational=self.rational)

    def signed(self, name: str) -> SignedMeasure:
        return make_signed(self.pair, self._raw(name), rational=self.rational)


def parse_instance(data: dict, *, rational: bool = False, seed=None) -> Instance:
    """Validate an instance document against :data:`INSTANCE_SCHEMA` and build it."""
    jsonschema.validate(data, INSTANCE_SCHEMA)
    pair = pair_from_dict(data["geometry"], rational=rational, seed=seed)
    measures = {k: _atoms(v) for k, v in data.get("measures", {}).items()}
    for name, atoms in measures.items():
        for x, _ in atoms:
            if x >= pair.n:
                raise MeasureError(f"measure {name!r} references unknown point {x}")
    cost = None
    if "cost" in data:
        c = data["cost"]
        conv = (lambda v: _exact_number(v, rational))
        cost = PairCost([[conv(v) for v in r] for r in c["matrix"]],
                        [conv(v) for v in c["to_reservoir"]],
                        [conv(v) for v in c["from_reservoir"]], pair)
    return Instance(pair, measures, cost, rational)


def load_instance(path, *, rational: bool = False, seed=None) -> Instance:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return parse_instance(data, rational=rational, seed=seed)


# ----------------------------------------------------------------------
# measures and couplings


def _num_out(w):
    if isinstance(w, Fraction) and w.denominator != 1:
        return f"{w.numerator}/{w.denominator}"
    if isinstance(w, Fraction):
        return w.numerator
    return w


def measure_to_json(mu) -> dict:
    return {"atoms": [[x, _num_out(w)] for x, w in mu.atoms.items()]}


def measure_from_json(pair: MetricPair, obj: dict, *, rational: bool = False,
                      signed: bool = False):
    raw = [(x, _weight_in(w, rational)) for x, w in _atoms(obj["atoms"])]
    if signed:
        return make_signed(pair, raw, rational=rational)
    return make_measure(pair, raw, rational=rational)[0]


def coupling_to_json(pi: Coupling) -> dict:
    return {"edges": [{"kind": kind, "from": a, "to": b, "w": _num_out(w)}
                      for kind, a, b, w in pi.edges()]}


def coupling_from_json(pair: MetricPair, obj: dict, *, rational: bool = False) -> Coupling:
    direct, to_res, from_res = {}, {}, {}
    for e in obj["edges"]:
        w = to_weight(_weight_in(e["w"], rational), rational)
        if e["kind"] == "direct":
            direct[(e["from"], e["to"])] = w
        elif e["kind"] == "to_res":
            to_res[e["from"]] = w
        elif e["kind"] == "from_res":
            from_res[e["to"]] = w
        else:
            raise ValueError(f"unknown edge kind {e['kind']!r}")
    return Coupling(pair, direct, to_res, from_res, rational=rational)


def coupling_to_dot(pi: Coupling) -> str:
    """Graphviz rendering of a coupling; the reservoir is the node ``A``."""
    lines = ["digraph coupling {", "  rankdir=LR;", '  A [shape=box, label="A"];']
    for kind, a, b, w in pi.edges():
        src = f"s{a}" if a is not None else "A"
        dst = f"t{b}" if b is not None else "A"
        lines.append(f'  {src} -> {dst} [label="{_fmt(_num_out(w))}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# persistence diagrams


def read_diagram_csv(path, *, rational: bool = False) -> List[tuple]:
    """Read ``birth,death[,weight]`` rows (header optional; weight defaults to 1)."""
    conv = Fraction if rational else float
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for i, rec in enumerate(csv.reader(fh)):
            rec = [c.strip() for c in rec]
            if not rec or not any(rec) or rec[0].startswith("#"):
                continue
            if i == 0 and rec[0].lower() == "birth":
                continue
            if len(rec) not in (2, 3):
                raise MeasureError(f"{path}: row {i + 1}: expected birth,death[,weight]")
            try:
                b, d = conv(rec[0]), conv(rec[1])
                w = conv(rec[2]) if len(rec) == 3 and rec[2] else conv(1)
            except (ValueError, ZeroDivisionError) as exc:
                raise MeasureError(f"{path}: row {i + 1}: {exc}") from exc
            if not all(math.isfinite(float(v)) for v in (b, d, w)):
                raise MeasureError(f"{path}: row {i + 1}: non-finite value")
            rows.append((b, d, w))
    return rows


def diagram_instance(diagrams, norm: str = "linf", *, rational: bool = False, seed=None):
    """Metric pair on the union of diagram points plus one measure per diagram.

    Returns ``(pair, [(measure, dropped_mass), ...])``.
    """
    index, points = {}, []
    for dgm in diagrams:
        for b, d, _ in dgm:
            if (b, d) not in index:
                index[(b, d)] = len(points)
                points.append((b, d))
    pair = MetricPair.halfplane(points, norm, seed=seed)
    out = [make_measure(pair, [(index[(b, d)], w) for b, d, w in dgm], rational=rational)
           for dgm in diagrams]
    return pair, out


# ----------------------------------------------------------------------
# JSON output


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if not math.isfinite(v):
            raise ValueError(f"cannot serialize non-finite number {v!r}")
        return format(v, ".17g")
    if isinstance(v, Fraction):
        return json.dumps(_num_out(v))
    return json.dumps(v)


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with floats at 17 significant digits and exact fractions."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_fmt(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if obj is None:
        return "null"
    return _fmt(obj)
