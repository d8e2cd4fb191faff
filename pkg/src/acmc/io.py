"""JSON documents for structures, tensors and conformal parameters.

Structure: {"n": int, "phi": [[...]], "xi": [...], "eta": [...], "g": [[...]]}
Bilinear:  {"entries": [[...]]}
F-tensor:  {"entries": [[[...]]]}
Params:    {"u": x, "v": x, "du": [...], "dv": [...]} plus an optional
           "L_dvphi": [[...]] used by the subgroup command.

Floats are written with ``repr`` precision, so serialize(parse(x)) == x.
"""
from __future__ import annotations

import json
import math

import numpy as np

from .errors import AcmError, SchemaError
from .lee import ConformalParams
from .structure import AcmStructure, make_structure


def _number(x, path):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise SchemaError(f"expected a number, got {type(x).__name__}", path)
    if not math.isfinite(x):
        raise SchemaError("number must be finite", path)
    return float(x)


def _array(x, shape, path):
    """Check nested lists against ``shape`` (None entries match any length)."""
    if not shape:
        return _number(x, path)
    if not isinstance(x, list):
        raise SchemaError(f"expected an array, got {type(x).__name__}", path)
    want = shape[0]
    if want is not None and len(x) != want:
        raise SchemaError(f"expected {want} entries, got {len(x)}", path)
    return [_array(v, shape[1:], f"{path}/{k}") for k, v in enumerate(x)]


def _get(doc, key, path=""):
    if not isinstance(doc, dict):
        raise SchemaError("expected an object", path)
    if key not in doc:
        raise SchemaError(f"missing field '{key}'", path)
    return doc[key]


def parse_structure(doc) -> AcmStructure:
    n = _get(doc, "n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise SchemaError("n must be a positive integer", "/n")
    d = 2 * n + 1
    phi = _array(_get(doc, "phi"), (d, d), "/phi")
    xi = _array(_get(doc, "xi"), (d,), "/xi")
    eta = _array(_get(doc, "eta"), (d,), "/eta")
    g = _array(_get(doc, "g"), (d, d), "/g")
    try:
        return make_structure(n, phi, xi, eta, g)
    except AcmError as exc:
        raise SchemaError(str(exc), "/g") from exc


def serialize_structure(S: AcmStructure) -> dict:
    return {"n": S.n, "phi": S.phi.tolist(), "xi": S.xi.tolist(),
            "eta": S.eta.tolist(), "g": S.g.tolist()}


def parse_bilinear(doc, dim: int | None = None) -> np.ndarray:
    entries = _get(doc, "entries")
    rows = _array(entries, (dim, None), "/entries")
    d = len(rows)
    _array(entries, (d, d), "/entries")
    return np.array(rows, dtype=float).reshape(d, d)


def serialize_bilinear(L) -> dict:
    return {"entries": np.asarray(L, dtype=float).tolist()}


def parse_ftensor(doc, dim: int | None = None) -> np.ndarray:
    entries = _get(doc, "entries")
    first = _array(entries, (dim, None, None), "/entries")
    d = len(first)
    _array(entries, (d, d, d), "/entries")
    return np.array(first, dtype=float).reshape(d, d, d)


def serialize_ftensor(F) -> dict:
    return {"entries": np.asarray(F, dtype=float).tolist()}


def parse_params(doc, dim: int) -> tuple[ConformalParams, np.ndarray | None]:
    u = _number(_get(doc, "u"), "/u")
    v = _number(_get(doc, "v"), "/v")
    du = _array(doc.get("du", [0.0] * dim), (dim,), "/du")
    dv = _array(doc.get("dv", [0.0] * dim), (dim,), "/dv")
    L = None
    if "L_dvphi" in doc:
        L = np.array(_array(doc["L_dvphi"], (dim, dim), "/L_dvphi"), dtype=float)
    return ConformalParams(u, v, np.array(du), np.array(dv)), L


def serialize_params(p: ConformalParams) -> dict:
    return {"u": p.u_val, "v": p.v_val, "du": p.du.tolist(), "dv": p.dv.tolist()}


def load_json(path):
    """Read a JSON file; decoding errors become SchemaError with line/column."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"
