import numpy as np
import pytest

from qnull import homspace as hs
from qnull.cxmat import h_matrix
from qnull.homspace import HomParam, TestFunction, eval_metric, iota, q2_eval
from qnull.spaces import (MAPS, RP2, S1, S2, WEDGE, SpacePoint, SpaceMismatchError,
                          get_space, random_points, rp2_generator)

SPACES = [S1, S2, RP2, WEDGE]


def rand_point(space, rng):
    return SpacePoint.from_coords(space, random_points(space, 1, rng)[0])


def rand_param(space, rng):
    return HomParam(rand_point(S2, rng), rand_point(space, rng), rand_point(space, rng))


def naive_q2(p, a):
    """The defining formula a(t1)(I + h)/2 + a(t2)(I - h)/2, written out."""
    h = h_matrix(p.x)
    eye = np.eye(2)
    return a(p.t1) * (eye + h) / 2 + a(p.t2) * (eye - h) / 2


@pytest.mark.parametrize("space", SPACES)
def test_families_bounded_by_one(space, rng):
    pts = random_points(space, 2000, rng)
    for a in hs.separating_family(space):
        assert np.max(np.abs(a(pts))) <= 1 + 1e-12


def test_family_sizes():
    assert len(hs.separating_family(S1)) == 1
    assert len(hs.separating_family(S2)) == 3
    assert len(hs.separating_family(RP2)) == 6
    assert len(hs.separating_family(WEDGE)) == 2


def test_rp2_family_is_antipodally_even(rng):
    pts = random_points(S2, 100, rng)
    for a in hs.separating_family(RP2):
        assert np.array_equal(a(pts), a(-pts))


@pytest.mark.parametrize("space", SPACES)
def test_q2_eval_matches_formula(space, rng):
    for _ in range(50):
        p = rand_param(space, rng)
        for a in hs.separating_family(space):
            assert np.max(np.abs(q2_eval(p, a) - naive_q2(p, a))) < 1e-15


def test_q2_eval_diagonal_x(rng):
    north = SpacePoint.s2(0, 1)
    z = hs.separating_family(S1)[0]
    for _ in range(20):
        t1, t2 = rand_point(S1, rng), rand_point(S1, rng)
        m = q2_eval(HomParam(north, t1, t2), z)
        assert np.max(np.abs(m - np.diag([t1.z, t2.z]))) < 1e-15


def test_q2_eval_diagonal_param_is_scalar(rng):
    x0 = SpacePoint.s2(1, 0)
    for space in SPACES:
        t = rand_point(space, rng)
        for a in hs.product_closed_family(space):
            assert np.array_equal(q2_eval(HomParam(x0, t, t), a), a(t) * np.eye(2))


@pytest.mark.parametrize("space", SPACES)
def test_orbit_invariance_exact(space, rng):
    for _ in range(100):
        p = rand_param(space, rng)
        q = HomParam(-p.x, p.t2, p.t1)
        for a in hs.separating_family(space):
            assert np.array_equal(q2_eval(p, a), q2_eval(q, a))
        assert eval_metric(p, q) == 0.0
        assert p == q


@pytest.mark.parametrize("space", SPACES)
def test_diagonal_collapse(space, rng):
    for _ in range(50):
        t = rand_point(space, rng)
        p = HomParam(rand_point(S2, rng), t, t)
        q = HomParam(rand_point(S2, rng), t, t)
        assert eval_metric(p, q) == 0.0


def test_q2_eval_space_mismatch(rng):
    p = rand_param(S1, rng)
    with pytest.raises(SpaceMismatchError):
        q2_eval(p, hs.separating_family(S2)[0])


def test_iota_examples():
    for space in SPACES:
        t0 = SpacePoint.basepoint(space)
        p = iota(t0)
        assert p.x == SpacePoint.s2(1, 0) and p.t1 == t0 and p.t2 == t0
        for a in hs.separating_family(space):
            assert np.array_equal(q2_eval(p, a), a(t0) * np.eye(2))
    loop = rp2_generator(64)
    arr = hs.iota_loop(loop)
    assert np.array_equal(arr.t1, arr.t2)


@pytest.mark.parametrize("space", SPACES)
def test_iota_separates(space, rng):
    m = get_space(space).metric
    for _ in range(100):
        s, t = rand_point(space, rng), rand_point(space, rng)
        if m(s.array, t.array) >= 1e-3:
            assert eval_metric(iota(s), iota(t)) > 0


def test_eval_metric_examples():
    one, minus = SpacePoint.s1(1), SpacePoint.s1(-1)
    assert eval_metric(iota(one), iota(one)) == 0
    assert eval_metric(iota(one), iota(minus)) == pytest.approx(2, abs=1e-12)
    a, b = SpacePoint.wedge("A", np.pi), SpacePoint.wedge("B", np.pi)
    assert eval_metric(iota(a), iota(b)) == pytest.approx(2, abs=1e-12)


def test_eval_metric_needs_family(rng):
    p = rand_param(S1, rng)
    with pytest.raises(ValueError):
        eval_metric(p, p, [])


def test_eval_z_examples(rng):
    for _ in range(20):
        s = rand_point(S1, rng)
        assert np.max(np.abs(hs.eval_z(iota(s)) - s.z * np.eye(2))) < 1e-15
        p = HomParam(SpacePoint.s2(0, 1), s, SpacePoint.s1(np.conj(s.z)))
        u = hs.eval_z(p)
        assert np.max(np.abs(u - np.diag([s.z, np.conj(s.z)]))) < 1e-15
        assert abs(np.linalg.det(u) - 1) < 1e-15
    for _ in range(100):
        u = hs.eval_z(rand_param(S1, rng))
        assert np.max(np.abs(u.conj().T @ u - np.eye(2))) < 1e-12


def test_eval_z_space_mismatch(rng):
    with pytest.raises(SpaceMismatchError):
        hs.eval_z(rand_param(S2, rng))


@pytest.mark.parametrize("space", SPACES)
def test_hom_laws(space, rng):
    fam = hs.product_closed_family(space)
    for _ in range(200):
        p = rand_param(space, rng)
        a, b = fam[rng.integers(len(fam))], fam[rng.integers(len(fam))]
        ra, rb = q2_eval(p, a), q2_eval(p, b)
        assert np.max(np.abs(q2_eval(p, a * b) - ra @ rb)) <= 1e-12
        assert np.max(np.abs(q2_eval(p, a.conj()) - ra.conj().T)) <= 1e-12
        assert np.array_equal(q2_eval(p, hs.one(space)), np.eye(2))


def test_pushforward_examples():
    for theta in np.linspace(0, 2 * np.pi, 9):
        a = hs.pushforward(iota(SpacePoint.wedge("A", theta)), "collapseB")
        assert eval_metric(a, iota(SpacePoint.s1(np.exp(1j * theta)))) < 1e-15
        b = hs.pushforward(iota(SpacePoint.wedge("B", theta)), "collapseB")
        assert eval_metric(b, iota(SpacePoint.s1(1))) == 0


def test_pushforward_identity(rng):
    p = rand_param(RP2, rng)
    q = hs.pushforward(p, "identity")
    assert q.t1.coords == p.t1.coords and q.t2.coords == p.t2.coords


def test_pushforward_unsupported(rng):
    with pytest.raises(ValueError):
        hs.pushforward(rand_param(S1, rng), "collapseB")


@pytest.mark.parametrize("g", ["collapseA", "collapseB", "project"])
def test_naturality_exact(g, rng):
    src, dst, fn = MAPS[g]
    for _ in range(100):
        p = rand_param(src, rng)
        img = hs.pushforward(p, g)
        for a in hs.separating_family(dst):
            pulled = TestFunction(src, f"{a.name}o{g}", lambda c, a=a: a(fn(c)))
            assert np.array_equal(q2_eval(img, a), q2_eval(p, pulled))


def test_homparam_unhashable(rng):
    with pytest.raises(TypeError):
        hash(rand_param(S1, rng))


def test_homarray_roundtrip(rng):
    params = [rand_param(WEDGE, rng) for _ in range(5)]
    arr = hs.HomArray.concatenate([p.to_array()[None] for p in params])
    for i, p in enumerate(params):
        assert arr.param(i) == p
    rho = hs.evaluate(arr)
    for i, p in enumerate(params):
        for j, a in enumerate(hs.separating_family(WEDGE)):
            assert np.array_equal(rho[i, j], q2_eval(p, a))
