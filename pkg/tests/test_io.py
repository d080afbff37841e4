import gzip
import json

import numpy as np
import pytest

from qnull import io
from qnull.constructor import constant_certificate
from qnull.spaces import S1, WEDGE, constant_loop, rp2_generator
from qnull.verifier import verify


def test_number_format_roundtrips(rng):
    for x in np.concatenate([rng.normal(size=200) * 10.0 ** rng.integers(-300, 300, 200),
                             [0.0, -0.0, 1.0, 1e-320, np.pi]]):
        text = io._num(x)
        assert float(text) == x
        assert isinstance(json.loads(text), float)
    with pytest.raises(ValueError):
        io._num(float("nan"))


def test_dumps_nested_structures():
    obj = {"a": [1, 2.5, True, None, "s"], "b": np.arange(6.0).reshape(1, 2, 3), "c": {}}
    back = json.loads(io.dumps(obj))
    assert back == {"a": [1, 2.5, True, None, "s"], "b": [[[0, 1, 2], [3, 4, 5]]], "c": {}}


def test_certificate_roundtrip_is_exact(rp2_cert, tmp_path):
    path = tmp_path / "c.json"
    io.write_certificate(rp2_cert, path)
    back = io.read_certificate(path)
    v, w = rp2_cert.grid.values, back.grid.values
    assert np.array_equal(v.x, w.x) and np.array_equal(v.t1, w.t1) and np.array_equal(v.t2, w.t2)
    assert np.array_equal(back.boundary_loop.samples, rp2_cert.boundary_loop.samples)
    assert verify(back).as_dict() == verify(rp2_cert).as_dict()
    path2 = tmp_path / "d.json"
    io.write_certificate(back, path2)
    assert path.read_bytes() == path2.read_bytes()


def test_gzip_files(tmp_path):
    cert = constant_certificate(constant_loop(WEDGE, N=32), rings=8)
    path = tmp_path / "c.json.gz"
    io.write_certificate(cert, path)
    with gzip.open(path, "rt") as fh:
        assert json.load(fh)["space"] == WEDGE
    assert verify(io.read_certificate(path)).accepted


def test_loop_files(tmp_path):
    loop = rp2_generator(64)
    path = tmp_path / "loop.json"
    io.write_json(io.loop_to_dict(loop), path)
    assert np.array_equal(io.read_loop(path).samples, loop.samples)


@pytest.mark.parametrize("doc", [
    {"space": "RP2"},
    {"space": "Torus", "points": [[1, 0, 0]] * 16},
    {"space": "RP2", "points": [[1, 0]] * 16},
    {"space": "RP2", "points": [[1, 0, 0]] * 4},
    {"space": "RP2", "points": [[2, 0, 0]] * 16},
    {"space": "S1", "points": [[1, 0], [1]] * 8},
    [1, 2, 3],
])
def test_bad_loops(doc):
    with pytest.raises(io.SchemaError):
        io.loop_from_dict(doc)


def test_bad_certificates(tmp_path):
    good = io.certificate_to_dict(constant_certificate(constant_loop(S1, N=16), rings=4))
    good = json.loads(io.dumps(good))
    for key in ("version", "grid", "mesh_bound", "boundary_loop"):
        doc = dict(good)
        del doc[key]
        with pytest.raises(io.SchemaError):
            io.certificate_from_dict(doc)
    for patch in ({"version": 7}, {"n": 3}, {"space": "RP2"}, {"mesh_bound": "x"},
                  {"grid": {"x": [], "t1": [], "t2": []}},
                  {"grid": {"x": good["grid"]["x"], "t1": good["grid"]["t1"]}}):
        doc = dict(good, **patch)
        with pytest.raises(io.SchemaError):
            io.certificate_from_dict(doc)
    (tmp_path / "junk.json").write_text("{not json")
    with pytest.raises(io.SchemaError):
        io.read_certificate(tmp_path / "junk.json")
    with pytest.raises(io.SchemaError):
        io.read_certificate(tmp_path / "missing.json")
