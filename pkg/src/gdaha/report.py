"""JSON reports: serialization, the published schema, and golden comparison.

Exact matrices are written as lists of rows of scalar strings (parseable by
:meth:`gdaha.scalars.ScalarField.parse`); complex matrices as rows of
``[re, im]`` pairs.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

import jsonschema
import numpy as np

SCHEMA_VERSION = "gdaha-report/1"

VOLATILE_KEYS = frozenset({"timings", "elapsed"})

_exact_matrix = {"type": "array", "items": {"type": "array", "items": {"type": "string"}}}
_complex = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_complex_matrix = {"type": "array", "items": {"type": "array", "items": _complex}}
_verdict = {"enum": ["pass", "fail", "vacuous", "match", "mismatch"]}

_spec = {
    "type": "object",
    "required": ["N", "n", "m", "mu", "lambda", "c"],
    "properties": {
        "N": {"type": "integer", "minimum": 2},
        "n": {"type": "integer", "minimum": 1},
        "m": {"type": "integer", "minimum": 1},
        "mu": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        "lambda": {"type": "array", "items": {"type": "string"}},
        "c": {"type": "string"},
    },
}

_relations = {
    "type": "object",
    "required": ["verdict", "relations"],
    "properties": {
        "verdict": _verdict,
        "relations": {"type": "array", "items": {
            "type": "object", "required": ["relation", "name", "status"],
            "properties": {"relation": {"type": "integer"}, "name": {"type": "string"},
                           "status": {"enum": ["pass", "fail", "vacuous"]}}}},
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "gdaha verification report",
    "type": "object",
    "required": ["schema", "kind", "verdict"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "kind": {"enum": ["build", "check", "monodromy"]},
        "verdict": _verdict,
    },
    "allOf": [
        {"if": {"properties": {"kind": {"const": "build"}}},
         "then": {"required": ["spec", "root_order", "ambient_dim", "dim_E", "parameters", "matrices"],
                  "properties": {"spec": _spec,
                                 "root_order": {"type": "integer"},
                                 "ambient_dim": {"type": "integer"},
                                 "dim_E": {"type": "integer", "minimum": 0},
                                 "matrices": {"type": "object", "additionalProperties": _exact_matrix}}}},
        {"if": {"properties": {"kind": {"const": "check"}}},
         "then": {"required": ["cases"],
                  "properties": {"cases": {"type": "array", "items": {
                      "type": "object", "required": ["spec", "dim_E", "relations"],
                      "properties": {"spec": _spec, "relations": _relations}}}}}},
        {"if": {"properties": {"kind": {"const": "monodromy"}}},
         "then": {"required": ["spec", "nu", "q", "tol", "dim", "rgdaha", "monodromy",
                               "charpoly", "word_traces"],
                  "properties": {
                      "spec": _spec,
                      "nu": {"type": "number"},
                      "q": _complex,
                      "tol": {"type": "number", "exclusiveMinimum": 0},
                      "rgdaha": _relations,
                      "monodromy": {"type": "object", "additionalProperties": _complex_matrix},
                      "quantum": {"type": "object", "additionalProperties": _complex_matrix},
                      "charpoly": {"type": "object", "additionalProperties": {
                          "type": "object", "required": ["monodromy", "quantum", "delta"],
                          "properties": {"monodromy": {"type": "array", "items": _complex},
                                         "quantum": {"type": "array", "items": _complex},
                                         "delta": {"type": "number"}}}},
                      "word_traces": {"type": "object",
                                      "required": ["checked", "max_delta"],
                                      "properties": {"checked": {"type": "integer"},
                                                     "max_delta": {"type": "number"}}},
                      "loops": {"type": "array"},
                      "convergence": {"type": "array"},
                  }}},
    ],
}


def exact_matrix(mat):
    return [[str(x) for x in row] for row in mat]


def complex_pair(z):
    z = complex(z)
    return [float(z.real), float(z.imag)]


def complex_matrix(a):
    a = np.asarray(a, dtype=complex)
    return [[complex_pair(x) for x in row] for row in a]


def complex_vector(a):
    return [complex_pair(x) for x in np.ravel(a)]


def to_jsonable(obj):
    """Recursively convert Fractions, numpy scalars and tuples."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_pair(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def validate(report):
    jsonschema.validate(report, REPORT_SCHEMA)
    return report


def dumps(report):
    return json.dumps(validate(to_jsonable(report)), indent=2, sort_keys=True)


def load(path):
    with open(path) as fh:
        return validate(json.load(fh))


def golden_diff(actual, expected, atol=1e-6, path="$"):
    """Differences between two reports, ignoring timing keys.

    Floats compare within ``atol``; everything else compares exactly.
    """
    out = []
    if isinstance(expected, dict) and isinstance(actual, dict):
        keys = (set(actual) | set(expected)) - VOLATILE_KEYS
        for k in sorted(keys):
            if k not in actual or k not in expected:
                out.append(f"{path}.{k}: present in only one report")
            else:
                out.extend(golden_diff(actual[k], expected[k], atol, f"{path}.{k}"))
    elif isinstance(expected, list) and isinstance(actual, list):
        if len(expected) != len(actual):
            out.append(f"{path}: length {len(actual)} != {len(expected)}")
        else:
            for i, (a, b) in enumerate(zip(actual, expected)):
                out.extend(golden_diff(a, b, atol, f"{path}[{i}]"))
    elif isinstance(expected, float) or isinstance(actual, float):
        if not (isinstance(actual, (int, float)) and isinstance(expected, (int, float))) \
                or abs(actual - expected) > atol:
            out.append(f"{path}: {actual!r} != {expected!r}")
    elif actual != expected:
        out.append(f"{path}: {actual!r} != {expected!r}")
    return out
