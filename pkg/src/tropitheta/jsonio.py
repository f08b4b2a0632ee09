"""Exact JSON serialization for all pipeline objects.

Rationals travel as strings ("3", "-5/7"), matrices as row-major entry
lists with explicit shape, valued scalars as [exponent, coefficient]
string pairs sorted by exponent, and Fourier coefficients keyed by
comma-joined integer vectors.  Everything re-parses to equal values and
serializes with sorted keys, so identical inputs produce byte-identical
files.
"""

import json
import os
import tempfile
from fractions import Fraction

from .errors import SchemaError
from .exactlinalg import Matrix
from .nalift import FourierData, LiftWindow, ValuedScalar, build_na_datum
from .torus import build_torus, validate_datum


def rational_to_str(q):
    return str(Fraction(q))


def rational_from_str(s):
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError("not a rational: %r" % (s,)) from exc


def vector_to_json(v):
    return [rational_to_str(c) for c in v]


def vector_from_json(obj):
    if not isinstance(obj, list):
        raise SchemaError("vector must be a list, got %r" % (obj,))
    return tuple(rational_from_str(c) for c in obj)


def matrix_to_json(m):
    return {"rows": m.rows, "cols": m.cols,
            "entries": [rational_to_str(m[i, j])
                        for i in range(m.rows) for j in range(m.cols)]}


def matrix_from_json(obj):
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        entries = [rational_from_str(e) for e in obj["entries"]]
    except (TypeError, KeyError) as exc:
        raise SchemaError("matrix needs rows/cols/entries") from exc
    if rows < 1 or cols < 1 or len(entries) != rows * cols:
        raise SchemaError("matrix shape %dx%d does not fit %d entries"
                          % (rows, cols, len(entries)))
    return Matrix.from_rows([entries[i * cols:(i + 1) * cols]
                             for i in range(rows)])


def datum_to_json(datum):
    return {"Pmat": matrix_to_json(datum.torus.Pmat),
            "L": matrix_to_json(datum.L),
            "ell": vector_to_json(datum.ellVec)}


def datum_from_json(obj):
    if not isinstance(obj, dict):
        raise SchemaError("datum must be an object")
    for key in ("Pmat", "L", "ell"):
        if key not in obj:
            raise SchemaError("datum needs %r" % key)
    torus = build_torus(matrix_from_json(obj["Pmat"]))
    return validate_datum(torus, matrix_from_json(obj["L"]),
                          vector_from_json(obj["ell"]))


def scalar_to_json(s):
    return [[rational_to_str(g), rational_to_str(a)] for g, a in s.terms]


def scalar_from_json(obj):
    if not isinstance(obj, list):
        raise SchemaError("valued scalar must be a list of pairs")
    terms = []
    for pair in obj:
        if not isinstance(pair, list) or len(pair) != 2:
            raise SchemaError("scalar term must be [exponent, coefficient]")
        terms.append((rational_from_str(pair[0]), rational_from_str(pair[1])))
    return ValuedScalar(terms)


def na_datum_to_json(datum):
    return {"Pmat": matrix_to_json(datum.torus.Pmat),
            "L": matrix_to_json(datum.L),
            "Tmat": [[scalar_to_json(x) for x in row] for row in datum.Tmat],
            "cBasis": [scalar_to_json(c) for c in datum.cBasis]}


def na_datum_from_json(obj):
    if not isinstance(obj, dict):
        raise SchemaError("descent datum must be an object")
    for key in ("Pmat", "L", "Tmat", "cBasis"):
        if key not in obj:
            raise SchemaError("descent datum needs %r" % key)
    torus = build_torus(matrix_from_json(obj["Pmat"]))
    Tmat = [[scalar_from_json(x) for x in row] for row in obj["Tmat"]]
    cBasis = [scalar_from_json(c) for c in obj["cBasis"]]
    return build_na_datum(torus, matrix_from_json(obj["L"]), Tmat, cBasis)


def _ukey(u):
    return ",".join(str(int(c)) for c in u)


def _ukey_parse(key):
    try:
        return tuple(int(c) for c in str(key).split(","))
    except ValueError as exc:
        raise SchemaError("bad coefficient key %r" % (key,)) from exc


def fourier_to_json(fd):
    return {"coefficients": {_ukey(u): scalar_to_json(g)
                             for u, g in fd.coeffs.items()},
            "window": {"parts": [{"b": [int(c) for c in b],
                                  "multiplier": scalar_to_json(mult),
                                  "radius": int(radius)}
                                 for b, mult, radius in fd.window.parts]}}


def fourier_from_json(obj, datum):
    """Rebuild Fourier data over an already parsed descent datum."""
    if not isinstance(obj, dict) or "coefficients" not in obj \
            or "window" not in obj:
        raise SchemaError("fourier data needs coefficients and window")
    coeffs = {_ukey_parse(k): scalar_from_json(v)
              for k, v in obj["coefficients"].items()}
    try:
        parts = tuple((tuple(int(c) for c in p["b"]),
                       scalar_from_json(p["multiplier"]), int(p["radius"]))
                      for p in obj["window"]["parts"])
    except (TypeError, KeyError, ValueError) as exc:
        raise SchemaError("bad window description") from exc
    return FourierData(coeffs, LiftWindow(datum, parts))


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def dump(obj, path):
    """Serialize deterministically and write atomically."""
    text = dumps(obj)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def load(path):
    try:
        with open(path) as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError("cannot read %s: %s" % (path, exc)) from exc
