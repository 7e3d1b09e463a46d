"""JSON map-spec documents.

A document is an object with a ``"kind"`` field and an optional
``"dimension"`` (default 4)::

    {"kind": "similarity", "k": 1.5, "Q": [[...], ...], "a": [...]}
    {"kind": "affine", "L": [[...], ...], "b": [...]}
    {"kind": "degenerate", "vertex": [...],
     "patches": [{"center": [...], "radius": 0.2, "direction": [...], "amplitude": 1.0}]}
    {"kind": "table", "rows": [[[input...], [output...]], ...]}

Matrices are row-major lists of rows.  Python's float repr is the shortest
string that round-trips, so dumped documents reload bit-for-bit.
"""

from __future__ import annotations

import json

import numpy as np

from .analyzer import TableMap
from .degenerate import DegenerateSpec, Patch
from .errors import SchemaError
from .transforms import AffineMap, PoincareSimilarity

KINDS = ("affine", "similarity", "degenerate", "table")


def _vector(doc, key, n):
    v = doc.get(key)
    try:
        arr = np.asarray(v, dtype=float)
    except (TypeError, ValueError):
        raise SchemaError(f"{key!r} must be a list of numbers") from None
    if arr.shape != (n,):
        raise SchemaError(f"{key!r} must have {n} entries")
    if not np.all(np.isfinite(arr)):
        raise SchemaError(f"{key!r} has non-finite entries")
    return arr


def _matrix(doc, key, n):
    try:
        arr = np.asarray(doc.get(key), dtype=float)
    except (TypeError, ValueError):
        raise SchemaError(f"{key!r} must be a list of rows") from None
    if arr.shape != (n, n):
        raise SchemaError(f"{key!r} must be {n}x{n}")
    if not np.all(np.isfinite(arr)):
        raise SchemaError(f"{key!r} has non-finite entries")
    return arr


def _number(doc, key):
    v = doc.get(key)
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not np.isfinite(v):
        raise SchemaError(f"{key!r} must be a finite number")
    return float(v)


def parse(doc):
    """Build the map object described by ``doc``.

    Returns a ``PoincareSimilarity``, ``AffineMap``, ``DegenerateSpec`` or
    ``TableMap``.  Degenerate specs are not validated here.
    """
    if not isinstance(doc, dict):
        raise SchemaError("a map spec must be a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise SchemaError(f"'kind' must be one of {KINDS}, got {kind!r}")
    n = doc.get("dimension", 4)
    if isinstance(n, bool) or not isinstance(n, int) or not 3 <= n <= 6:
        raise SchemaError("'dimension' must be an integer in 3..6")

    if kind == "similarity":
        k, Q, a = _number(doc, "k"), _matrix(doc, "Q", n), _vector(doc, "a", n)
        try:
            return PoincareSimilarity(k, Q, a)
        except ValueError as exc:
            raise SchemaError(str(exc)) from None
    if kind == "affine":
        return AffineMap(_matrix(doc, "L", n), _vector(doc, "b", n))
    if kind == "degenerate":
        patches = doc.get("patches", [])
        if not isinstance(patches, list):
            raise SchemaError("'patches' must be a list")
        out = []
        for i, p in enumerate(patches):
            if not isinstance(p, dict):
                raise SchemaError(f"patch {i} must be an object")
            out.append(Patch(_vector(p, "center", n), _number(p, "radius"),
                             _vector(p, "direction", n), _number(p, "amplitude")))
        return DegenerateSpec(_vector(doc, "vertex", n), tuple(out))

    rows = doc.get("rows")
    if not isinstance(rows, list) or not rows:
        raise SchemaError("'rows' must be a non-empty list of [input, output] pairs")
    try:
        arr = np.asarray(rows, dtype=float)
    except (TypeError, ValueError):
        raise SchemaError("'rows' must hold [input, output] pairs of numbers") from None
    if arr.ndim != 3 or arr.shape[1:] != (2, n):
        raise SchemaError(f"each row must be [input, output] with {n} numbers each")
    if not np.all(np.isfinite(arr)):
        raise SchemaError("'rows' has non-finite entries")
    return TableMap(arr[:, 0], arr[:, 1])


def dump(obj, **extra) -> dict:
    """Map-spec document for a map object."""
    if isinstance(obj, PoincareSimilarity):
        doc = {"kind": "similarity", "dimension": obj.dimension, **obj.to_dict()}
    elif isinstance(obj, AffineMap):
        doc = {"kind": "affine", "dimension": obj.dimension, **obj.to_dict()}
    elif isinstance(obj, DegenerateSpec):
        doc = {"kind": "degenerate", "dimension": obj.dimension, **obj.to_dict()}
    elif isinstance(obj, TableMap):
        rows = np.stack([obj.inputs, obj.outputs], axis=1)
        doc = {"kind": "table", "dimension": obj.dimension, "rows": rows.tolist()}
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")
    doc.update(extra)
    return doc


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc}") from None
    return parse(doc)


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dumps(obj, **extra) -> str:
    return json.dumps(dump(obj, **extra), indent=1)
