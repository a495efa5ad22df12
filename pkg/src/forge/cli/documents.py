"""JSON documents read and written by the command line tools.

Every document is an object with ``kind`` and ``format_version``. Integers may
be JSON numbers or decimal strings; rationals may also be ``"p/q"`` strings.
"""
from __future__ import annotations

import json
from fractions import Fraction

import jsonschema

FORMAT_VERSION = 1

_INT = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?[0-9]+$"}]}
_RAT = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?[0-9]+(/[0-9]*[1-9][0-9]*)?$"}]}
_VEC2 = {"type": "array", "items": _INT, "minItems": 2, "maxItems": 2}
_POINT2 = {"type": "array", "items": _RAT, "minItems": 2, "maxItems": 2}


def _envelope(kind: str, props: dict, required: list) -> dict:
    return {
        "type": "object",
        "properties": {"kind": {"const": kind}, "format_version": {"const": FORMAT_VERSION}, **props},
        "required": ["kind", "format_version", *required],
        "additionalProperties": False,
    }


_FACTOR = {
    "oneOf": [
        {"type": "object", "properties": {"sphere": {"type": "integer", "minimum": 1}},
         "required": ["sphere"], "additionalProperties": False},
        {"type": "object",
         "properties": {
             "m": {"type": "integer", "minimum": 1},
             "b2": {"type": "integer", "minimum": 0},
             "index": {"type": "integer", "minimum": 1},
             "order": {"type": "integer", "minimum": 1},
             "einstein": {"type": "boolean"},
             "positive": {"type": "boolean"},
             "spin": {"type": ["boolean", "null"]},
             "name": {"type": "string"},
         },
         "required": ["m", "b2", "index"], "additionalProperties": False},
    ]
}

SCHEMAS = {
    "weight_matrix": _envelope("weight_matrix", {
        "rows": {"type": "array", "items": {"type": "array", "items": _INT}},
        "n": {"type": "integer", "minimum": 0},
    }, ["rows"]),
    "augmented_fan": _envelope("augmented_fan", {
        "dim": {"const": 2},
        "rays": {"type": "array", "items": _VEC2, "minItems": 1},
        "support": {"oneOf": [
            {"type": "object", "properties": {"anticanonical": {"const": True}},
             "required": ["anticanonical"], "additionalProperties": False},
            {"type": "object", "properties": {"values": {"type": "array", "items": _RAT}},
             "required": ["values"], "additionalProperties": False},
        ]},
    }, ["rays"]),
    "isotropy_data": _envelope("isotropy_data", {
        "vectors": {"type": "array", "items": _VEC2, "minItems": 1},
    }, ["vectors"]),
    "join_spec": _envelope("join_spec", {
        "factors": {"type": "array", "items": _FACTOR, "minItems": 2, "maxItems": 2},
        "k": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 2, "maxItems": 2},
    }, ["factors"]),
    # not in the original list of kinds; needed so render accepts bare polygons
    "polytope": _envelope("polytope", {
        "vertices": {"type": "array", "items": _POINT2},
        "labels": {"type": "array", "items": {"type": "string"}},
    }, ["vertices"]),
    "report": _envelope("report", {
        "command": {"type": "string"},
        "values": {"type": "object"},
    }, ["command", "values"]),
}


class DocumentError(ValueError):
    """Raised for unreadable or schema-invalid documents (exit code 1)."""


def loads(text: str, expect=None) -> dict:
    """Parse and validate a document. ``expect`` restricts the allowed kinds."""
    if not text.strip():
        raise DocumentError("empty document")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict) or "kind" not in doc:
        raise DocumentError("document must be an object with a 'kind' field")
    kind = doc["kind"]
    if kind not in SCHEMAS:
        raise DocumentError(f"unknown kind {kind!r}")
    if expect is not None and kind not in expect:
        raise DocumentError(f"expected kind {' or '.join(expect)}, got {kind!r}")
    try:
        jsonschema.validate(doc, SCHEMAS[kind])
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise DocumentError(f"{kind} at {where}: {e.message}") from None
    return doc


def load(path: str, expect=None) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise DocumentError(str(e)) from None
    except UnicodeDecodeError as e:
        raise DocumentError(f"not UTF-8: {e}") from None
    return loads(text, expect)


def to_int(x) -> int:
    return int(x)


def to_rational(x) -> Fraction:
    return Fraction(x) if isinstance(x, str) else Fraction(int(x))


def int_rows(rows) -> tuple:
    return tuple(tuple(to_int(v) for v in r) for r in rows)


def rational_str(q: Fraction) -> str:
    return str(Fraction(q))


def fan_document(rays, support=None) -> dict:
    """An ``augmented_fan`` document; ``support`` is None (anticanonical) or a list of rationals."""
    doc = {"kind": "augmented_fan", "format_version": FORMAT_VERSION, "dim": 2,
           "rays": [[int(c) for c in r] for r in rays]}
    doc["support"] = {"anticanonical": True} if support is None else \
        {"values": [v if isinstance(v, int) else rational_str(v) for v in support]}
    return doc


def polytope_document(vertices, labels=None) -> dict:
    doc = {"kind": "polytope", "format_version": FORMAT_VERSION,
           "vertices": [[_rat_out(c) for c in v] for v in vertices]}
    if labels is not None:
        doc["labels"] = list(labels)
    return doc


def report_document(command: str, values: dict) -> dict:
    return {"kind": "report", "format_version": FORMAT_VERSION, "command": command, "values": values}


def _rat_out(q):
    q = Fraction(q)
    return int(q) if q.denominator == 1 else rational_str(q)


def dumps(doc: dict) -> str:
    """Canonical serialisation: sorted keys, fixed separators, trailing newline."""
    return json.dumps(doc, sort_keys=True, ensure_ascii=False, separators=(",", ": "), indent=1) + "\n"
