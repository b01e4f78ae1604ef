"""Text tensor files: JSON with explicit [re, im] entry pairs.

The format is deliberately diff-friendly; floats round-trip bit-exactly
because Python prints shortest-round-trip decimal representations.
"""
from __future__ import annotations

import hashlib
import json
import math
import os

import numpy as np

from .core import DenseTensor, GroupedShape
from .errors import NonFiniteEntry, ParseError, ShapeMismatch

FORMAT_VERSION = 1


def save_tensor(t: DenseTensor, path: str | os.PathLike, comment: str | None = None) -> None:
    doc = {
        "format_version": FORMAT_VERSION,
        "row_dims": list(t.shape.row_dims),
        "col_dims": list(t.shape.col_dims),
        "entries": [[float(z.real), float(z.imag)] for z in t.entries],
    }
    if comment:
        doc["comment"] = comment
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def _reject_constant(token: str):
    raise NonFiniteEntry(f"non-finite constant {token!r} in tensor file")


def load_tensor(path: str | os.PathLike) -> DenseTensor:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh, parse_constant=_reject_constant)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be an object")

    def require(fieldname):
        if fieldname not in doc:
            raise ParseError(f"{path}: missing field {fieldname!r}")
        return doc[fieldname]

    version = require("format_version")
    if version != FORMAT_VERSION:
        raise ParseError(f"{path}: unsupported format_version {version!r}")

    dims = {}
    for fieldname in ("row_dims", "col_dims"):
        raw = require(fieldname)
        if (not isinstance(raw, list) or not raw
                or any(not isinstance(d, int) or isinstance(d, bool) or d < 1 for d in raw)):
            raise ParseError(f"{path}: field {fieldname!r} must be a list of positive integers")
        dims[fieldname] = tuple(raw)
    shape = GroupedShape(dims["row_dims"], dims["col_dims"])

    raw_entries = require("entries")
    if not isinstance(raw_entries, list):
        raise ParseError(f"{path}: field 'entries' must be a list of [re, im] pairs")
    expected = shape.row_count * shape.col_count
    if len(raw_entries) != expected:
        raise ShapeMismatch(
            f"{path}: shape {shape} needs {expected} entries, file has {len(raw_entries)}"
        )
    values = np.empty(expected, dtype=np.complex128)
    for i, pair in enumerate(raw_entries):
        if (not isinstance(pair, list) or len(pair) != 2
                or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in pair)):
            raise ParseError(f"{path}: entry {i} is not a [re, im] number pair")
        re, im = float(pair[0]), float(pair[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise NonFiniteEntry(f"{path}: entry {i} is not finite")
        values[i] = complex(re, im)
    return DenseTensor(shape, values)


def file_digest(path: str | os.PathLike) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()
