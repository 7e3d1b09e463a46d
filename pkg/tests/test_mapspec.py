import json

import numpy as np
import pytest

from lightcone import mapspec
from lightcone.analyzer import TableMap
from lightcone.cli import squaring_table
from lightcone.degenerate import DegenerateSpec, build_default
from lightcone.errors import SchemaError
from lightcone.transforms import AffineMap, PoincareSimilarity, random_similarity


def test_round_trip_is_bit_exact():
    ps = random_similarity(3)
    back = mapspec.loads(mapspec.dumps(ps))
    assert back.k == ps.k
    np.testing.assert_array_equal(back.Q, ps.Q)
    np.testing.assert_array_equal(back.a, ps.a)

    spec = build_default(4, 0.2, vertex=[0.1, 0.2, 0.3, 0.4], rng_seed=5)
    back = mapspec.loads(mapspec.dumps(spec))
    assert isinstance(back, DegenerateSpec)
    assert back.to_dict() == spec.to_dict()

    am = AffineMap(np.arange(16.0).reshape(4, 4) / 7, np.ones(4) / 3)
    back = mapspec.loads(mapspec.dumps(am))
    np.testing.assert_array_equal(back.L, am.L)

    t = squaring_table(50, seed=1)
    back = mapspec.loads(mapspec.dumps(t))
    assert isinstance(back, TableMap)
    np.testing.assert_array_equal(back.inputs, t.inputs)
    np.testing.assert_array_equal(back.outputs, t.outputs)


def test_extra_fields_and_dimension():
    doc = mapspec.dump(PoincareSimilarity.identity(), seed=9)
    assert doc["kind"] == "similarity" and doc["dimension"] == 4 and doc["seed"] == 9
    del doc["dimension"]
    assert isinstance(mapspec.parse(doc), PoincareSimilarity)


@pytest.mark.parametrize("doc", [
    [],
    {"kind": "banana"},
    {"kind": "similarity", "dimension": 7},
    {"kind": "similarity", "k": 1, "Q": np.eye(4).tolist(), "a": [0, 0, 0]},
    {"kind": "similarity", "k": 1, "Q": np.diag([1, 1, 1, 2.0]).tolist(), "a": [0, 0, 0, 0]},
    {"kind": "similarity", "k": "one", "Q": np.eye(4).tolist(), "a": [0, 0, 0, 0]},
    {"kind": "affine", "L": [[1, 2], [3, 4]], "b": [0, 0, 0, 0]},
    {"kind": "degenerate", "vertex": [0, 0, 0, 0], "patches": [1]},
    {"kind": "table", "rows": []},
    {"kind": "table", "rows": [[[0, 0, 0, 0], [0, 0, 0]]]},
])
def test_schema_errors(doc):
    with pytest.raises(SchemaError):
        mapspec.parse(doc)


def test_malformed_json_and_non_finite():
    with pytest.raises(SchemaError):
        mapspec.loads("{not json")
    doc = mapspec.dump(PoincareSimilarity.identity())
    text = json.dumps(doc).replace("[0.0, 0.0, 0.0, 0.0]", "[NaN, 0.0, 0.0, 0.0]")
    with pytest.raises(SchemaError):
        mapspec.loads(text)
