"""Property-based checks of the algebraic and topological invariants."""

import numpy as np
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from qnull import cxmat, io, words
from qnull.homspace import HomArray, evaluate
from qnull.obstruction import winding_number
from qnull.spaces import (RP2, S1, S2, WEDGE, PathReparam, SampledLoop, canonical_rp2,
                          get_space, rp2_lift, wedge_coords)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
vec3 = st.tuples(finite, finite, finite).filter(lambda v: np.linalg.norm(v) > 1e-3)


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def point_of(space, v):
    v = np.asarray(v, dtype=float)
    if space == S1:
        return unit(v[:2]) if np.linalg.norm(v[:2]) > 1e-3 else np.array([1.0, 0.0])
    if space in (S2, RP2):
        u = unit(v)
        return canonical_rp2(u) if space == RP2 else u
    branch = "A" if v[0] >= 0 else "B"
    return wedge_coords(branch, float(v[1]) % (2 * np.pi))


@given(vec3)
def test_h_identities(v):
    x = unit(v)
    h = cxmat.h_matrix((complex(x[0], x[1]), x[2]))
    assert np.max(np.abs(h @ h - np.eye(2))) <= 1e-12
    assert np.array_equal(cxmat.adjoint(h), h)
    assert abs(cxmat.det(h) + 1) <= 1e-12
    assert np.array_equal(cxmat.h_matrix((complex(-x[0], -x[1]), -x[2])), -h)


@given(st.sampled_from([S1, S2, RP2, WEDGE]), vec3, vec3, vec3)
def test_orbit_invariance_bitwise(space, xv, a, b):
    x, t1, t2 = unit(xv), point_of(space, a), point_of(space, b)
    p = HomArray(space, x, t1, t2)
    q = HomArray(space, -x, t2, t1)
    assert np.array_equal(evaluate(p), evaluate(q))


@given(st.sampled_from([S1, S2, RP2, WEDGE]), vec3, vec3, vec3)
def test_diagonal_collapse_bitwise(space, xv, yv, a):
    t = point_of(space, a)
    assert np.array_equal(evaluate(HomArray(space, unit(xv), t, t)),
                          evaluate(HomArray(space, unit(yv), t, t)))


@given(st.sampled_from([S1, S2, RP2, WEDGE]), vec3, vec3, vec3)
def test_metric_symmetric_and_triangle(space, a, b, c):
    m = get_space(space).metric
    p, q, r = point_of(space, a), point_of(space, b), point_of(space, c)
    assert abs(m(p, q) - m(q, p)) <= 1e-12
    assert m(p, r) <= m(p, q) + m(q, r) + 1e-12


@given(vec3)
def test_canonical_rp2_is_a_section(v):
    u = unit(v)
    c = canonical_rp2(u)
    assert np.array_equal(canonical_rp2(-u), c)
    assert np.array_equal(canonical_rp2(c), c)
    assert np.array_equal(c, u) or np.array_equal(c, -u)


fourier = st.lists(st.tuples(st.integers(1, 3), finite, finite), min_size=0, max_size=3)


def phase_loop(turns, terms, N=512):
    s = np.arange(N) / N
    phase = 2 * np.pi * turns * s
    for k, a, b in terms:
        phase += (np.tanh(a / 100) * np.cos(2 * np.pi * k * s)
                  + np.tanh(b / 100) * np.sin(2 * np.pi * k * s)) * 0.5
    return np.exp(1j * phase)


@given(st.integers(-8, 8), fourier, st.integers(0, 511))
def test_winding_rotation_and_reversal(turns, terms, shift):
    v = phase_loop(turns, terms)
    w = winding_number(v)
    assert w == turns
    assert winding_number(np.roll(v, shift)) == w
    assert winding_number(v[::-1]) == -w


@given(st.integers(-6, 6), fourier, st.integers(-6, 6), fourier)
def test_winding_additive(t1, f1, t2, f2):
    a, b = phase_loop(t1, f1), phase_loop(t2, f2)
    assert winding_number(a * b) == winding_number(a) + winding_number(b)


@settings(max_examples=40)
@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), finite, finite),
                min_size=1, max_size=4), st.integers(-3, 3))
def test_ring_winding_constancy(terms, k):
    """A continuous map disk -> U(2) has the same determinant winding on every ring."""
    R, N = 48, 256
    r = np.linspace(0, 1, R + 1)[:, None]
    th = 2 * np.pi * np.arange(N)[None, :] / N
    xx, yy = r * np.cos(th), r * np.sin(th)
    phase1 = np.zeros_like(xx)
    for i, j, a, b in terms:
        phase1 += np.tanh(a / 100) * xx ** i * yy ** j + np.tanh(b / 100) * xx ** j * yy ** i
    # an extra factor (x + iy)^k / |.|^k would be discontinuous; use a
    # polynomial in z instead, which has winding only where it vanishes
    z = xx + 1j * yy
    poly = (z - 2.0) ** abs(k)  # no zeros in the disk
    d1 = np.exp(1j * phase1) * poly / np.abs(poly)
    c, s = np.cos(xx), np.sin(xx)
    rot = np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)
    diag = np.zeros(xx.shape + (2, 2), dtype=complex)
    diag[..., 0, 0], diag[..., 1, 1] = d1, np.exp(1j * yy)
    u = rot @ diag @ np.swapaxes(rot, -1, -2)
    dets = cxmat.det(u)
    windings = {winding_number(dets[i]) for i in range(R + 1)}
    assert windings == {0}


@given(vec3, st.integers(16, 200))
def test_rp2_lift_projects_back(v, N):
    # a great circle through a random point, traversed once in RP2
    c = unit(v)
    e1 = unit(np.cross(c, [0.3, 0.5, 0.7]))
    ang = np.pi * np.arange(max(N, 32)) / max(N, 32)
    pts = np.cos(ang)[:, None] * c + np.sin(ang)[:, None] * e1
    loop = SampledLoop(RP2, canonical_rp2(pts))
    lift = rp2_lift(loop)
    assert np.array_equal(canonical_rp2(lift.samples[:-1]), loop.samples)
    assert np.max(np.abs(lift.end + lift.start)) < 1e-9


@given(st.lists(st.tuples(st.floats(0.01, 1), st.floats(0, 1)), min_size=1, max_size=6))
def test_path_reparam_monotone(steps):
    dx, dy = np.array(steps).T
    dy[-1] += 0.01  # keep the total rise positive
    xs = np.concatenate([[0.0], np.cumsum(dx)]) / np.sum(dx)
    ys = np.concatenate([[0.0], np.cumsum(dy)]) / np.sum(dy)
    xs[-1] = ys[-1] = 1.0
    psi = PathReparam(tuple(xs), tuple(ys))
    vals = psi(np.linspace(0, 1, 101))
    assert vals[0] == 0 and vals[-1] == 1 and np.all(np.diff(vals) >= 0)


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_number_roundtrip(x):
    assert float(io._num(x)) == x


@given(st.text(alphabet="abAB", max_size=30))
def test_word_reduction(w):
    r = words.reduce_word(w)
    assert words.reduce_word(r) == r
    assert words.reduce_word(w + words.inverse(w)) == ""
    assert all(words.inverse_letter(a) != b for a, b in zip(r, r[1:]))


@given(arrays(np.complex128, (3, 3), elements=st.complex_numbers(max_magnitude=10,
                                                                 allow_nan=False,
                                                                 allow_infinity=False)))
def test_op_norm_bounds(m):
    n = cxmat.op_norm(m)
    fro = np.sqrt(np.sum(np.abs(m) ** 2))
    assert n <= fro * (1 + 1e-9) + 1e-12
    assert n >= fro / np.sqrt(3) * (1 - 1e-9) - 1e-12
