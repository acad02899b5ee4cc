import json
from fractions import Fraction

import jsonschema
import numpy as np
import pytest
from hypothesis import given

from relot import MeasureError, MetricPair, make_measure, solve_w1
from relot import io
from helpers import GEOMETRIES, random_coupling, random_measure, random_pair, seeds


def test_parse_all_geometry_kinds():
    docs = [
        {"kind": "euclidean", "coords": [1, 4], "reservoir": {"points": [[0]]}},
        {"kind": "euclidean", "coords": [[1, 2], [3, 5]],
         "reservoir": {"hyperplane": {"normal": [0, 1], "offset": 0}}},
        {"kind": "halfplane", "points": [[1, 5], [2, 3]], "norm": "l2"},
        {"kind": "explicit", "matrix": [[0, 3], [3, 0]], "reservoir": [1, 2]},
    ]
    for geo in docs:
        inst = io.parse_instance({"geometry": geo, "measures": {"a": [[0, 1]]}})
        assert inst.pair.n == 2
        mu, dropped = inst.measure("a")
        assert dropped == 0 and mu.support == (0,)


def test_weights_and_dropped_mass():
    doc = {"geometry": {"kind": "euclidean", "coords": [0, 2, 3],
                        "reservoir": {"points": [[0]]}},
           "measures": {"a": [[0, 5], [1, "1/3"], {"point": 2, "weight": [3, 4]}],
                        "s": [[1, -1], [2, 0.5]]}}
    inst = io.parse_instance(doc, rational=True)
    mu, dropped = inst.measure("a")
    assert dropped == 5
    assert mu.atoms == {1: Fraction(1, 3), 2: Fraction(3, 4)}
    assert inst.signed("s").atoms == {1: -1, 2: Fraction(1, 2)}
    with pytest.raises(MeasureError):
        inst.measure("s")
    with pytest.raises(MeasureError):
        inst.measure("missing")


@pytest.mark.parametrize("doc", [
    {},
    {"geometry": {"kind": "sphere"}},
    {"geometry": {"kind": "explicit", "matrix": [[0]], "reservoir": [0]},
     "measures": {"a": [[-1, 1]]}},
    {"geometry": {"kind": "explicit", "matrix": [[0]], "reservoir": [0]},
     "measures": {"a": [[0, True, 3]]}},
])
def test_schema_rejects(doc):
    with pytest.raises(jsonschema.ValidationError):
        io.parse_instance(doc)


def test_unknown_point_rejected():
    doc = {"geometry": {"kind": "explicit", "matrix": [[0]], "reservoir": [1]},
           "measures": {"a": [[3, 1]]}}
    with pytest.raises(MeasureError):
        io.parse_instance(doc)


def test_cost_block():
    doc = {"geometry": {"kind": "explicit", "matrix": [[0, 3], [3, 0]], "reservoir": [1, 2]},
           "cost": {"matrix": [[0, 1], [1, 0]], "to_reservoir": [1, 1],
                    "from_reservoir": [0.5, 0.5]}}
    inst = io.parse_instance(doc, rational=True)
    assert inst.cost.from_reservoir == [Fraction(1, 2)] * 2


def test_dumps_precision_and_fractions():
    text = io.dumps({"a": 0.1, "b": Fraction(1, 3), "c": Fraction(4), "d": [1, None, True]})
    data = json.loads(text)
    assert data["a"] == 0.1 and data["b"] == "1/3" and data["c"] == 4
    assert "0.10000000000000001" in text
    with pytest.raises(ValueError):
        io.dumps({"x": float("inf")})


@given(seed=seeds)
def test_measure_round_trip(seed):
    rng = np.random.default_rng(seed)
    pair = random_pair(rng, 12, GEOMETRIES[seed % len(GEOMETRIES)])
    for rational in (True, False):
        mu = random_measure(rng, pair, 6, rational=rational)
        back = io.measure_from_json(pair, json.loads(io.dumps(io.measure_to_json(mu))),
                                    rational=rational)
        assert back == mu


@given(seed=seeds)
def test_coupling_round_trip(seed):
    rng = np.random.default_rng(seed)
    pair = random_pair(rng, 12, "line")
    for rational in (True, False):
        pi = random_coupling(rng, pair, 5, rational=rational)
        obj = json.loads(io.dumps(io.coupling_to_json(pi)))
        keys = [(e["kind"], e["from"] if e["from"] is not None else -1,
                 e["to"] if e["to"] is not None else -1) for e in obj["edges"]]
        assert keys == sorted(keys)
        assert io.coupling_from_json(pair, obj, rational=rational) == pi


def test_diagram_csv(tmp_path):
    a = tmp_path / "a.csv"
    a.write_text("birth,death,weight\n1,5,2\n2,2\n0,3,\n")
    b = tmp_path / "b.csv"
    b.write_text("# no header\n1,4\n")
    rows = io.read_diagram_csv(a, rational=True)
    assert rows == [(1, 5, 2), (2, 2, 1), (0, 3, 1)]
    pair, [(mu, da), (nu, db)] = io.diagram_instance(
        [rows, io.read_diagram_csv(b, rational=True)], rational=True)
    assert da == 1 and db == 0            # (2, 2) lies on the diagonal
    assert pair.exact
    # one unit (1,5) -> (1,4) at cost 1; the rest goes to the diagonal: 2 + 3/2
    assert solve_w1(mu, nu).value == Fraction(9, 2)
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2,3,4\n")
    with pytest.raises(MeasureError):
        io.read_diagram_csv(bad)
    bad.write_text("1,inf\n")
    with pytest.raises(MeasureError):
        io.read_diagram_csv(bad)


def test_dot_output():
    pair = MetricPair.real_line([0, 1, 2])
    mu, _ = make_measure(pair, [(1, 1)], rational=True)
    nu, _ = make_measure(pair, [(2, 1)], rational=True)
    dot = io.coupling_to_dot(solve_w1(mu, nu).coupling)
    assert dot.startswith("digraph") and "s1 -> t2" in dot
