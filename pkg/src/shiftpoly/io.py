"""JSON documents for polynomials, multisets, combinations and sum-free families.

Every ``load_*`` validates structure with :mod:`jsonschema` first and then
semantics through the constructors.  Every ``dump_*`` emits the canonical
form (sorted keys, canonical residues, graded-lex term order), so
``dump(load(dump(x))) == dump(x)`` and ``load(dump(x)) == x``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import jsonschema

from .errors import InvalidInput
from .poly import Poly, grlex_key
from .shiftop import PointMultiset, ShiftCombo
from .apps.capset import SumFreeFamily

_INT = {"type": "integer"}
_VEC = {"type": "array", "items": _INT}
_HEAD = {"p": {"type": "integer", "minimum": 2}, "n": {"type": "integer", "minimum": 0}}

POLY_SCHEMA = {
    "type": "object",
    "required": ["p", "n", "terms"],
    "properties": {
        **_HEAD,
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["exps", "coeff"],
                "properties": {"exps": _VEC, "coeff": _INT},
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

_POINT = {
    "type": "object",
    "required": ["coords"],
    "properties": {"coords": _VEC, "mult": {"type": "integer", "minimum": 1}},
    "additionalProperties": False,
}

MULTISET_SCHEMA = {
    "type": "object",
    "required": ["p", "n", "points"],
    "properties": {**_HEAD, "points": {"type": "array", "items": _POINT}},
    "additionalProperties": False,
}

COMBO_SCHEMA = {
    "type": "object",
    "required": ["p", "n", "terms"],
    "properties": {
        **_HEAD,
        "points": {"type": "array", "items": _POINT},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["coords", "coeff"],
                "properties": {"coords": _VEC, "beta": _VEC, "coeff": _INT},
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

FAMILY_SCHEMA = {
    "type": "object",
    "required": ["p", "n", "k", "tuples"],
    "properties": {
        **_HEAD,
        "k": {"type": "integer", "minimum": 2},
        "tuples": {"type": "array", "items": {"type": "array", "items": _VEC}},
    },
    "additionalProperties": False,
}


def _validate(doc: Any, schema: dict, what: str):
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as e:
        raise InvalidInput(f"{what}: {e.message}") from None


def read_json(path: str | Path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidInput(f"{path}: {e}") from None


def canonical_dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


# polynomials


def load_poly(doc: dict) -> Poly:
    _validate(doc, POLY_SCHEMA, "polynomial")
    return Poly(doc["p"], doc["n"], [(t["exps"], t["coeff"]) for t in doc["terms"]])


def dump_poly(f: Poly) -> dict:
    return {"p": f.p, "n": f.n, "terms": [{"exps": list(e), "coeff": c} for e, c in f.sorted_terms()]}


# multisets


def load_multiset(doc: dict) -> PointMultiset:
    _validate(doc, MULTISET_SCHEMA, "multiset")
    p, n = doc["p"], doc["n"]
    mult: dict = {}
    for pt in doc["points"]:
        key = tuple(c % p for c in pt["coords"])
        if key in mult:
            raise InvalidInput(f"multiset: point {key} listed twice")
        mult[key] = pt.get("mult", 1)
    return PointMultiset(p, n, mult)


def dump_multiset(A: PointMultiset) -> dict:
    return {
        "p": A.p,
        "n": A.n,
        "points": [{"coords": list(a), "mult": A.mult[a]} for a in A.points],
    }


# combinations


def load_combo(doc: dict) -> ShiftCombo:
    _validate(doc, COMBO_SCHEMA, "combination")
    p, n = doc["p"], doc["n"]
    terms = []
    for t in doc["terms"]:
        beta = tuple(t.get("beta", [0] * n))
        terms.append(((tuple(c % p for c in t["coords"]), beta), t["coeff"]))
    if "points" in doc:
        base = load_multiset({"p": p, "n": n, "points": doc["points"]})
    else:
        mult: dict = {}
        for (a, beta), _ in terms:
            if any(b < 0 for b in beta):
                raise InvalidInput(f"negative beta {beta}")
            mult[a] = max(mult.get(a, 1), sum(beta) + 1)
        base = PointMultiset(p, n, mult)
    return ShiftCombo(base, terms)


def dump_combo(l: ShiftCombo) -> dict:
    doc = dump_multiset(l.base)
    doc["terms"] = [{"coords": list(a), "beta": list(b), "coeff": c} for (a, b), c in l.sorted_items()]
    return doc


# sum-free families


def load_family(doc: dict) -> SumFreeFamily:
    _validate(doc, FAMILY_SCHEMA, "family")
    tuples = tuple(tuple(tuple(x) for x in t) for t in doc["tuples"])
    return SumFreeFamily(doc["p"], doc["n"], doc["k"], tuples)


def dump_family(fam: SumFreeFamily) -> dict:
    return {"p": fam.p, "n": fam.n, "k": fam.k, "tuples": [[list(x) for x in t] for t in fam.tuples]}


def dump_expansion_terms(coeffs: dict) -> list[dict]:
    return [{"alpha": list(a), "coeff": c} for a, c in sorted(coeffs.items(), key=lambda kv: grlex_key(kv[0]))]
