"""Certificate and loop files.

A certificate is one JSON document.  Every real is written with 17
significant digits, so reading a file back gives the same floats bit for bit
and writing them again gives the same bytes.  Points are stored as the
real coordinate vectors the library computes with: (Re z, Im z) on S1,
(Re alpha, Im alpha, t) on S2 and RP2, and the embedding
(Re u, Im u, Re v, Im v) of the two circles on the wedge.
Files whose name ends in ``.gz`` are compressed transparently.
"""

from __future__ import annotations

import gzip
import json
import math
from pathlib import Path

import numpy as np

from .homspace import HomArray
from .spaces import SPACES, DiskGrid, SampledLoop, get_space
from .tolerances import DEFAULT

FORMAT_VERSION = 1


class SchemaError(ValueError):
    """A file does not have the expected structure."""


def _num(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("cannot serialise a non-finite value")
    s = format(x, ".17g")
    # keep floats recognisable as floats to any JSON reader
    return s if any(c in s for c in ".en") else s + ".0"


def _dump_array(a: np.ndarray, indent: int) -> str:
    a = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(a)):
        raise ValueError("cannot serialise a non-finite value")
    if a.ndim == 0:
        return _num(a)
    flat = [_num(v) for v in a.ravel().tolist()]
    width = a.shape[-1]
    text = ["[" + ", ".join(flat[i:i + width]) + "]" for i in range(0, len(flat), width)]
    # wrap the innermost rows level by level
    for depth in range(a.ndim - 2, -1, -1):
        k = a.shape[depth]
        pad = " " * (indent + 2 * depth)
        text = ["[\n" + ",\n".join(pad + "  " + t for t in text[i:i + k]) + "\n" + pad + "]"
                for i in range(0, len(text), k)]
    return text[0]


def _dump(obj, indent: int = 0) -> str:
    pad = " " * indent
    if isinstance(obj, np.ndarray):
        return _dump_array(obj, indent)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {json.dumps(str(k))}: {_dump(v, indent + 2)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(v, (list, tuple, dict, np.ndarray)) for v in obj):
            return "[" + ", ".join(_dump(v) for v in obj) + "]"
        items = [pad + "  " + _dump(v, indent + 2) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    return json.dumps(str(obj))


def dumps(obj) -> str:
    return _dump(obj) + "\n"


def _open(path, mode: str):
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, mode + "t", encoding="utf-8")
    return open(path, mode, encoding="utf-8")


def write_json(obj, path) -> None:
    with _open(path, "w") as fh:
        fh.write(dumps(obj))


def read_json(path):
    try:
        with _open(path, "r") as fh:
            return json.load(fh)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError, EOFError) as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc


# ----------------------------------------------------------------------------


def _array(raw, shape_tail: tuple, what: str) -> np.ndarray:
    try:
        arr = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{what}: not a rectangular array of numbers") from exc
    if arr.shape[arr.ndim - len(shape_tail):] != shape_tail or arr.ndim <= len(shape_tail):
        raise SchemaError(f"{what}: shape {arr.shape} does not end in {shape_tail}")
    if not np.all(np.isfinite(arr)):
        raise SchemaError(f"{what}: non-finite entries")
    return arr


def _space_tag(doc: dict) -> str:
    space = doc.get("space")
    if space not in SPACES:
        raise SchemaError(f"unknown space {space!r}")
    return space


def loop_to_dict(loop: SampledLoop) -> dict:
    return {"space": loop.space, "closed": loop.closed, "points": loop.samples}


def loop_from_dict(doc) -> SampledLoop:
    if not isinstance(doc, dict) or "points" not in doc:
        raise SchemaError("a loop needs 'space' and 'points'")
    space = _space_tag(doc)
    pts = _array(doc["points"], (get_space(space).dim,), "points")
    if pts.ndim != 2:
        raise SchemaError("points must be a list of coordinate vectors")
    try:
        return SampledLoop(space, pts, bool(doc.get("closed", True)))
    except ValueError as exc:
        raise SchemaError(f"invalid loop: {exc}") from exc


def read_loop(path) -> SampledLoop:
    return loop_from_dict(read_json(path))


def certificate_to_dict(cert) -> dict:
    v = cert.grid.values
    R, N = v.shape
    return {
        "version": FORMAT_VERSION,
        "space": cert.space,
        "n": 2,
        "mesh_bound": float(cert.grid.mesh_bound),
        "rings": cert.grid.R,
        "samples": N,
        "grid": {"x": np.broadcast_to(v.x, (R, N, 3)),
                 "t1": v.t1, "t2": v.t2},
        "boundary_loop": loop_to_dict(cert.boundary_loop),
        "tolerances": dict(cert.tolerances),
        "construction_log": list(cert.construction_log),
    }


def certificate_from_dict(doc):
    from .constructor import Certificate

    if not isinstance(doc, dict):
        raise SchemaError("certificate must be a JSON object")
    missing = [k for k in ("version", "space", "grid", "boundary_loop", "mesh_bound")
               if k not in doc]
    if missing:
        raise SchemaError(f"certificate lacks {missing}")
    if doc["version"] != FORMAT_VERSION:
        raise SchemaError(f"unsupported version {doc['version']!r}")
    if doc.get("n", 2) != 2:
        raise SchemaError("only 2x2 certificates are supported")
    space = _space_tag(doc)
    dim = get_space(space).dim
    grid = doc["grid"]
    if not isinstance(grid, dict) or not {"x", "t1", "t2"} <= set(grid):
        raise SchemaError("grid needs 'x', 't1' and 't2'")
    x = _array(grid["x"], (3,), "grid.x")
    t1 = _array(grid["t1"], (dim,), "grid.t1")
    t2 = _array(grid["t2"], (dim,), "grid.t2")
    if not (x.ndim == t1.ndim == t2.ndim == 3) or not (x.shape[:2] == t1.shape[:2] == t2.shape[:2]):
        raise SchemaError("grid arrays must share the shape (rings + 1, samples)")
    mesh = doc["mesh_bound"]
    if not isinstance(mesh, (int, float)) or not math.isfinite(mesh):
        raise SchemaError("mesh_bound must be a finite number")
    loop = loop_from_dict(doc["boundary_loop"])
    if loop.space != space:
        raise SchemaError("boundary loop lives on a different space")
    values = HomArray(space, x, t1, t2)
    tolerances = doc.get("tolerances") or DEFAULT.as_dict()
    return Certificate(space, DiskGrid("hom", space, values, float(mesh)), loop,
                       list(doc.get("construction_log", [])), dict(tolerances))


def write_certificate(cert, path) -> None:
    write_json(certificate_to_dict(cert), path)


def read_certificate(path):
    return certificate_from_dict(read_json(path))
