"""Model spaces S1, S2, RP2 and the wedge S1 v S1.

Points are stored as real coordinate vectors so that whole grids can be
handled as ``numpy`` arrays with a trailing coordinate axis:

=======  ====  ==========================================
space    dim   coordinates
=======  ====  ==========================================
S1       2     (Re z, Im z)
S2       3     (Re alpha, Im alpha, t)
RP2      3     any S2 representative of the class
Wedge    4     (Re u, Im u, Re v, Im v); branch A has v = 1,
               branch B has u = 1, the wedge point is (1, 1)
=======  ====  ==========================================

:class:`SpacePoint` is the scalar face of these conventions, while
:class:`SampledLoop`, :class:`DiskGrid` and the contraction routines work on
coordinate arrays directly.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .tolerances import DEFAULT

S1, S2, RP2, WEDGE = "S1", "S2", "RP2", "Wedge"
TAGS = (S1, S2, RP2, WEDGE)


class SpaceMismatchError(ValueError):
    pass


class EndpointMismatchError(ValueError):
    pass


class LiftError(ValueError):
    pass


class ContractionError(RuntimeError):
    pass


def _arc(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Angle between vectors along the last axis, accurate near 0 and pi."""
    dot = np.sum(a * b, axis=-1)
    if a.shape[-1] == 2:
        cross = np.abs(a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0])
    else:
        cross = np.linalg.norm(np.cross(a, b), axis=-1)
    return np.arctan2(cross, dot)


def _slerp(p: np.ndarray, q: np.ndarray, f: np.ndarray) -> np.ndarray:
    f = np.asarray(f, dtype=float)[..., None]
    omega = _arc(p, q)[..., None]
    small = omega < 1e-9
    so = np.where(small, 1.0, np.sin(omega))
    a = np.where(small, 1.0 - f, np.sin((1.0 - f) * omega) / so)
    b = np.where(small, f, np.sin(f * omega) / so)
    out = a * p + b * q
    return out / np.linalg.norm(out, axis=-1, keepdims=True)


def _rotate2(p: np.ndarray, angle: np.ndarray) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.stack([c * p[..., 0] - s * p[..., 1], s * p[..., 0] + c * p[..., 1]], axis=-1)


def _signed_angle2(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Angle of q relative to p for unit 2-vectors, in (-pi, pi]."""
    return np.arctan2(p[..., 0] * q[..., 1] - p[..., 1] * q[..., 0],
                      p[..., 0] * q[..., 0] + p[..., 1] * q[..., 1])


class Space:
    tag: str
    dim: int
    basepoint: np.ndarray

    def metric(self, p, q) -> np.ndarray:
        raise NotImplementedError

    def interpolate(self, p, q, f) -> np.ndarray:
        raise NotImplementedError

    def residual(self, p) -> np.ndarray:
        """Distance-from-space defect, zero for valid points."""
        raise NotImplementedError

    def canonical(self, p) -> np.ndarray:
        return np.asarray(p, dtype=float)

    def far_point(self, p) -> np.ndarray:
        """A point at maximal distance from ``p``; used for fault injection."""
        raise NotImplementedError


class _Circle(Space):
    tag, dim = S1, 2
    basepoint = np.array([1.0, 0.0])

    def metric(self, p, q):
        return _arc(np.asarray(p, float), np.asarray(q, float))

    def interpolate(self, p, q, f):
        return _rotate2(p, np.asarray(f) * _signed_angle2(p, q))

    def residual(self, p):
        return np.abs(np.sum(np.asarray(p, float) ** 2, axis=-1) - 1.0)

    def far_point(self, p):
        return -np.asarray(p, float)


class _Sphere(Space):
    tag, dim = S2, 3
    basepoint = np.array([1.0, 0.0, 0.0])

    def metric(self, p, q):
        return _arc(np.asarray(p, float), np.asarray(q, float))

    def interpolate(self, p, q, f):
        return _slerp(np.asarray(p, float), np.asarray(q, float), f)

    def residual(self, p):
        return np.abs(np.sum(np.asarray(p, float) ** 2, axis=-1) - 1.0)

    def far_point(self, p):
        return -np.asarray(p, float)


class _Projective(_Sphere):
    tag = RP2

    def metric(self, p, q):
        p, q = np.asarray(p, float), np.asarray(q, float)
        flip = np.sum(p * q, axis=-1) < 0
        return _arc(p, np.where(flip[..., None], -q, q))

    def interpolate(self, p, q, f):
        p, q = np.asarray(p, float), np.asarray(q, float)
        flip = np.sum(p * q, axis=-1) < 0
        return _slerp(p, np.where(flip[..., None], -q, q), f)

    def canonical(self, p):
        return canonical_rp2(p)

    def far_point(self, p):
        # a point orthogonal to p is at the maximal distance pi/2
        p = np.asarray(p, float)
        helper = np.where(np.abs(p[..., 2:3]) < 0.9, [0.0, 0.0, 1.0], [1.0, 0.0, 0.0])
        v = np.cross(p, helper)
        return v / np.linalg.norm(v, axis=-1, keepdims=True)


class _Wedge(Space):
    tag, dim = WEDGE, 4
    basepoint = np.array([1.0, 0.0, 1.0, 0.0])

    @staticmethod
    def _branches(p):
        on_a = np.abs(p[..., 2] - 1.0) + np.abs(p[..., 3]) <= 1e-12
        on_b = np.abs(p[..., 0] - 1.0) + np.abs(p[..., 1]) <= 1e-12
        return on_a, on_b

    def metric(self, p, q):
        p, q = np.asarray(p, float), np.asarray(q, float)
        return _arc(p[..., :2], q[..., :2]) + _arc(p[..., 2:], q[..., 2:])

    def interpolate(self, p, q, f):
        p, q = np.asarray(p, float), np.asarray(q, float)
        f = np.asarray(f, float)
        one = np.broadcast_to(np.array([1.0, 0.0]), p[..., :2].shape)
        # same branch (or one endpoint at the wedge point): rotate both factors
        same = np.concatenate([_rotate2(p[..., :2], f * _signed_angle2(p[..., :2], q[..., :2])),
                               _rotate2(p[..., 2:], f * _signed_angle2(p[..., 2:], q[..., 2:]))],
                              axis=-1)
        # different branches: run back to the wedge point, then out along q's branch
        pa, pb = self._branches(p)
        qa, qb = self._branches(q)
        p_branch = np.where(pa, 0, 1)
        p_arm = np.where(p_branch[..., None] == 0, p[..., :2], p[..., 2:])
        q_arm = np.where(p_branch[..., None] == 0, q[..., 2:], q[..., :2])
        d_out = _arc(p_arm, one)
        d_in = _arc(q_arm, one)
        pos = f * (d_out + d_in)
        first = pos <= d_out
        back = _rotate2(p_arm, np.sign(_signed_angle2(p_arm, one)) * np.minimum(pos, d_out))
        fwd = _rotate2(one, np.sign(_signed_angle2(one, q_arm)) * np.maximum(pos - d_out, 0.0))
        arm_p = np.where(first[..., None], back, one)
        arm_q = np.where(first[..., None], one, fwd)
        cross = np.where(p_branch[..., None] == 0,
                         np.concatenate([arm_p, arm_q], axis=-1),
                         np.concatenate([arm_q, arm_p], axis=-1))
        different = ~((pa & qa) | (pb & qb))
        return np.where(different[..., None], cross, same)

    def residual(self, p):
        p = np.asarray(p, float)
        on_a, on_b = self._branches(p)
        r = (np.abs(np.sum(p[..., :2] ** 2, -1) - 1.0) + np.abs(np.sum(p[..., 2:] ** 2, -1) - 1.0))
        # a point off both branches is off the wedge
        off = ~(on_a | on_b)
        dist_a = np.abs(p[..., 2] - 1.0) + np.abs(p[..., 3])
        dist_b = np.abs(p[..., 0] - 1.0) + np.abs(p[..., 1])
        return r + np.where(off, np.minimum(dist_a, dist_b), 0.0)

    def far_point(self, p):
        p = np.asarray(p, float)
        on_a, _ = self._branches(p)
        out = p.copy()
        out[..., :2] = np.where(on_a[..., None], -p[..., :2], p[..., :2])
        out[..., 2:] = np.where(on_a[..., None], p[..., 2:], -p[..., 2:])
        return out


SPACES: dict[str, Space] = {s.tag: s for s in (_Circle(), _Sphere(), _Projective(), _Wedge())}


def get_space(tag: str) -> Space:
    try:
        return SPACES[tag]
    except KeyError:
        raise ValueError(f"unknown space {tag!r}; expected one of {TAGS}") from None


def canonical_rp2(p) -> np.ndarray:
    """Representative with t > 0, or t = 0 and (Re a > 0, or Re a = 0 and Im a > 0)."""
    p = np.asarray(p, dtype=float)
    x, y, t = p[..., 0], p[..., 1], p[..., 2]
    keep = (t > 0) | ((t == 0) & ((x > 0) | ((x == 0) & (y > 0))))
    return np.where(keep[..., None], p, -p) + 0.0  # + 0.0 clears negative zeros


# ----------------------------------------------------------------------------
# scalar points


@dataclass(frozen=True)
class SpacePoint:
    space: str
    coords: tuple

    def __post_init__(self):
        sp = get_space(self.space)
        c = np.asarray(self.coords, dtype=float)
        if c.shape != (sp.dim,):
            raise ValueError(f"{self.space} point needs {sp.dim} coordinates, got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("non-finite coordinates")
        if float(sp.residual(c)) > DEFAULT.point:
            raise ValueError(f"point {tuple(c)} is not on {self.space}")
        c = sp.canonical(c)
        object.__setattr__(self, "coords", tuple(float(v) for v in c))

    @classmethod
    def from_coords(cls, space: str, coords) -> "SpacePoint":
        return cls(space, tuple(np.asarray(coords, dtype=float).tolist()))

    @classmethod
    def s1(cls, z: complex) -> "SpacePoint":
        z = complex(z)
        return cls(S1, (z.real, z.imag))

    @classmethod
    def s2(cls, alpha: complex, t: float) -> "SpacePoint":
        alpha = complex(alpha)
        return cls(S2, (alpha.real, alpha.imag, float(t)))

    @classmethod
    def rp2(cls, alpha: complex, t: float) -> "SpacePoint":
        alpha = complex(alpha)
        return cls(RP2, (alpha.real, alpha.imag, float(t)))

    @classmethod
    def wedge(cls, branch: str, angle: float) -> "SpacePoint":
        return cls(WEDGE, tuple(wedge_coords(branch, angle).tolist()))

    @classmethod
    def basepoint(cls, space: str) -> "SpacePoint":
        return cls.from_coords(space, get_space(space).basepoint)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coords)

    @property
    def z(self) -> complex:
        self._need(S1)
        return complex(self.coords[0], self.coords[1])

    @property
    def alpha(self) -> complex:
        self._need(S2, RP2)
        return complex(self.coords[0], self.coords[1])

    @property
    def t(self) -> float:
        self._need(S2, RP2)
        return self.coords[2]

    @property
    def branch(self) -> str:
        self._need(WEDGE)
        return wedge_branch_angle(self.array)[0]

    @property
    def angle(self) -> float:
        self._need(WEDGE)
        return wedge_branch_angle(self.array)[1]

    def __eq__(self, other) -> bool:
        # equality is up to tol_point in the space's metric, so the wedge
        # point is one point whichever branch names it
        if not isinstance(other, SpacePoint):
            return NotImplemented
        return self.space == other.space and metric(self, other) <= DEFAULT.point

    def _need(self, *tags):
        if self.space not in tags:
            raise AttributeError(f"not defined on {self.space} points")

    def __neg__(self) -> "SpacePoint":
        self._need(S2, RP2)
        return SpacePoint.from_coords(self.space, -self.array)


SpacePoint.__hash__ = None  # equality is tolerance based


def wedge_coords(branch: str, angle) -> np.ndarray:
    angle = np.asarray(angle, dtype=float)
    arm = np.stack([np.cos(angle), np.sin(angle)], axis=-1)
    one = np.broadcast_to(np.array([1.0, 0.0]), arm.shape)
    if branch == "A":
        return np.concatenate([arm, one], axis=-1)
    if branch == "B":
        return np.concatenate([one, arm], axis=-1)
    raise ValueError(f"wedge branch must be 'A' or 'B', not {branch!r}")


def wedge_branch_angle(p: np.ndarray) -> tuple[str, float]:
    """(branch, angle in [0, 2 pi)); the wedge point is reported as ('A', 0)."""
    a = math.atan2(p[1], p[0]) % (2 * math.pi)
    b = math.atan2(p[3], p[2]) % (2 * math.pi)
    if abs(p[2] - 1.0) + abs(p[3]) <= 1e-12:
        return "A", a
    return "B", b


def metric(p: SpacePoint, q: SpacePoint) -> float:
    if p.space != q.space:
        raise SpaceMismatchError(f"cannot compare {p.space} with {q.space}")
    return float(get_space(p.space).metric(p.array, q.array))


# ----------------------------------------------------------------------------
# sampled loops and paths


@dataclass
class SampledLoop:
    """Samples of a loop (``closed``) or path at parameters ``k / N``.

    A closed loop stores ``N`` samples and its value at ``s = 1`` is
    ``samples[0]``; a path stores ``N + 1`` samples including ``s = 1``.
    Values between samples are filled in along geodesics of the space.
    """

    space: str
    samples: np.ndarray
    closed: bool = True
    mesh_bound: float = field(init=False)

    def __post_init__(self):
        sp = get_space(self.space)
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 2 or self.samples.shape[1] != sp.dim:
            raise ValueError(f"samples must have shape (N, {sp.dim})")
        if self.N < 16:
            raise ValueError(f"need at least 16 samples, got {self.N}")
        if np.max(sp.residual(self.samples)) > DEFAULT.point:
            raise ValueError(f"samples are not on {self.space}")
        ext = self.extended
        self.mesh_bound = float(np.max(sp.metric(ext[:-1], ext[1:])))

    @property
    def N(self) -> int:
        return len(self.samples) if self.closed else len(self.samples) - 1

    @property
    def extended(self) -> np.ndarray:
        """Samples at k/N for k = 0..N inclusive."""
        if self.closed:
            return np.concatenate([self.samples, self.samples[:1]])
        return self.samples

    @property
    def start(self) -> np.ndarray:
        return self.samples[0]

    @property
    def end(self) -> np.ndarray:
        return self.extended[-1]

    @property
    def loop_samples(self) -> np.ndarray:
        """The N samples at k/N, k < N."""
        return self.samples[: self.N]

    def at(self, s) -> np.ndarray:
        """Evaluate at parameters ``s`` (any shape) in [0, 1]."""
        s = np.clip(np.asarray(s, dtype=float), 0.0, 1.0)
        pos = s * self.N
        near = np.rint(pos)
        pos = np.where(np.abs(pos - near) < 1e-9, near, pos)
        idx = np.minimum(np.floor(pos).astype(int), self.N - 1)
        frac = pos - idx
        ext = self.extended
        out = get_space(self.space).interpolate(ext[idx], ext[idx + 1], frac)
        exact = frac == 0.0
        return np.where(exact[..., None], ext[idx], out)

    def resample(self, n: int, closed: bool | None = None) -> "SampledLoop":
        closed = self.closed if closed is None else closed
        k = np.arange(n if closed else n + 1) / n
        return SampledLoop(self.space, self.at(k), closed)

    def point(self, k: int) -> SpacePoint:
        return SpacePoint.from_coords(self.space, self.samples[k])


def constant_loop(space: str, point=None, N: int = 256, closed: bool = True) -> SampledLoop:
    sp = get_space(space)
    p = sp.basepoint if point is None else _coords(point)
    count = N if closed else N + 1
    return SampledLoop(space, np.tile(p, (count, 1)), closed)


def _coords(p) -> np.ndarray:
    if isinstance(p, SpacePoint):
        return p.array
    return np.asarray(p, dtype=float)


def concat(p: SampledLoop, q: SampledLoop, N: int | None = None,
           tol: float = DEFAULT.point) -> SampledLoop:
    """Traverse ``p`` on [0, 1/2] and ``q`` on [1/2, 1], resampled to ``N``."""
    if p.space != q.space:
        raise SpaceMismatchError(f"{p.space} vs {q.space}")
    sp = get_space(p.space)
    gap = float(sp.metric(p.end, q.start))
    if gap > tol:
        raise EndpointMismatchError(f"paths do not meet (gap {gap:.3g})")
    N = N or p.N
    closed = p.closed and q.closed
    s = np.arange(N if closed else N + 1) / N
    first = s <= 0.5
    vals = np.where(first[:, None], p.at(np.minimum(2 * s, 1.0)), q.at(np.maximum(2 * s - 1, 0.0)))
    return SampledLoop(p.space, vals, closed)


def reverse(p: SampledLoop) -> SampledLoop:
    ext = p.extended[::-1]
    return SampledLoop(p.space, ext[:-1] if p.closed else ext, p.closed)


def sigma_path(N: int = 256) -> SampledLoop:
    """The half great circle tau -> (exp(pi i tau), 0) from (1, 0) to (-1, 0)."""
    if N < 16:
        raise ValueError("N must be at least 16")
    tau = np.arange(N + 1) / N
    return SampledLoop(S2, sigma_coords(tau), closed=False)


def sigma_coords(tau) -> np.ndarray:
    tau = np.asarray(tau, dtype=float)
    # sines of reflected angles, so sigma(0), sigma(1/2), sigma(1) are exact
    c = np.where(tau <= 0.5, np.sin(np.pi * (0.5 - tau)), -np.sin(np.pi * (tau - 0.5)))
    s = np.sin(np.pi * np.where(tau <= 0.5, tau, 1.0 - tau))
    return np.stack([c, s, np.zeros_like(tau)], axis=-1)


def circle_loop(N: int = 256, turns: int = 1) -> SampledLoop:
    """s -> exp(2 pi i turns s) on S1."""
    ang = 2 * np.pi * turns * np.arange(N) / N
    return SampledLoop(S1, np.stack([np.cos(ang), np.sin(ang)], axis=-1))


def rp2_generator(N: int = 256, times: int = 1) -> SampledLoop:
    """The projected half great circle from (1, 0), traversed ``times`` times."""
    ang = np.pi * times * np.arange(N) / N
    pts = np.stack([np.cos(ang), np.sin(ang), np.zeros_like(ang)], axis=-1)
    return SampledLoop(RP2, canonical_rp2(pts))


def wedge_branch_loop(branch: str, turns: int, N: int = 256) -> SampledLoop:
    ang = 2 * np.pi * turns * np.arange(N) / N
    return SampledLoop(WEDGE, wedge_coords(branch, ang))


def wedge_commutator_loop(a_turns: int, b_turns: int, N: int = 256) -> SampledLoop:
    """alpha . beta . alpha^-1 . beta^-1, one quarter of the parameter each."""
    if N % 4:
        raise ValueError("N must be divisible by 4")
    q = N // 4
    tau = np.arange(q) / q
    legs = [("A", a_turns), ("B", b_turns), ("A", -a_turns), ("B", -b_turns)]
    pts = [wedge_coords(br, 2 * np.pi * k * tau) for br, k in legs]
    return SampledLoop(WEDGE, np.concatenate(pts))


def small_circle(center, radius: float, N: int = 256) -> SampledLoop:
    """Circle of geodesic ``radius`` about ``center`` on S2, based on itself."""
    c = _coords(center)
    c = c / np.linalg.norm(c)
    helper = np.array([0.0, 0.0, 1.0]) if abs(c[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    e1 = np.cross(c, helper)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(c, e1)
    ang = 2 * np.pi * np.arange(N) / N
    pts = (np.cos(radius) * c[None, :]
           + np.sin(radius) * (np.cos(ang)[:, None] * e1 + np.sin(ang)[:, None] * e2))
    return SampledLoop(S2, pts)


# ----------------------------------------------------------------------------
# disk grids


@dataclass
class DiskGrid:
    """Polar grid on the unit disk.

    ``values[i, k]`` sits at radius ``i / R`` and angle ``2 pi k / N``; ring 0
    repeats the centre value and ring R is the boundary.  ``value_type`` is
    ``"point"`` (coordinate array ``(R+1, N, dim)``), ``"hom"`` (a
    :class:`qnull.homspace.HomArray` of shape ``(R+1, N)``) or ``"matrix"``
    (complex array ``(R+1, N, n, n)``).
    """

    value_type: str
    space: str | None
    values: Any
    mesh_bound: float | None = None

    @property
    def R(self) -> int:
        return self.shape[0] - 1

    @property
    def N(self) -> int:
        return self.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return tuple(self.values.shape[:2])

    def ring(self, i: int):
        return self.values[i]

    @property
    def boundary(self):
        return self.values[self.R]

    @property
    def center(self):
        return self.values[0, 0]


def point_grid_modulus(space: str, values: np.ndarray) -> float:
    """Largest same-ring or ring-to-ring neighbour distance of a point grid."""
    sp = get_space(space)
    same = sp.metric(values, np.roll(values, -1, axis=1))
    radial = sp.metric(values[1:], values[:-1])
    return float(max(np.max(same), np.max(radial) if radial.size else 0.0))


# ----------------------------------------------------------------------------
# reparameterisations


@dataclass(frozen=True)
class PathReparam:
    """Piecewise-linear nondecreasing map of [0, 1] fixing both ends."""

    xs: tuple
    ys: tuple

    def __post_init__(self):
        xs, ys = np.asarray(self.xs, float), np.asarray(self.ys, float)
        if xs.shape != ys.shape or xs.ndim != 1 or len(xs) < 2:
            raise ValueError("breakpoints must be matching 1-d sequences")
        if xs[0] != 0 or xs[-1] != 1 or ys[0] != 0 or ys[-1] != 1:
            raise ValueError("reparameterisation must fix 0 and 1")
        if np.any(np.diff(xs) <= 0) or np.any(np.diff(ys) < 0):
            raise ValueError("reparameterisation must be monotone")

    @classmethod
    def identity(cls) -> "PathReparam":
        return cls((0.0, 1.0), (0.0, 1.0))

    def __call__(self, s):
        return np.interp(s, self.xs, self.ys)


def apply_reparam(path: SampledLoop, psi: PathReparam) -> SampledLoop:
    k = np.arange(len(path.samples)) / path.N
    return SampledLoop(path.space, path.at(psi(k)), path.closed)


def reparam_homotopy(path: SampledLoop, psi: PathReparam, rows: int = 17) -> np.ndarray:
    """Strip H(s, u) = path((1 - u) s + u psi(s)) as an array (rows, samples, dim).

    Row 0 is ``path`` itself, the last row is ``path`` composed with ``psi``.
    """
    if rows < 2:
        raise ValueError("need at least two rows")
    s = np.arange(len(path.samples)) / path.N
    u = np.linspace(0.0, 1.0, rows)[:, None]
    return path.at((1 - u) * s[None, :] + u * psi(s)[None, :])


# ----------------------------------------------------------------------------
# covering and contraction


def rp2_lift(loop: SampledLoop, start=None) -> SampledLoop:
    """Lift an RP2 loop to a path on S2 through nearest representatives.

    The returned path has ``N + 1`` samples; its last sample lifts the
    loop's value at ``s = 1`` and equals ``start`` exactly when the loop's
    class is trivial.
    """
    if loop.space != RP2:
        raise SpaceMismatchError("rp2_lift needs an RP2 loop")
    ext = loop.extended
    p0 = ext[0] if start is None else _coords(start)
    if float(get_space(RP2).metric(p0, ext[0])) > DEFAULT.point:
        raise LiftError("start does not project to the loop's first sample")
    out = np.empty_like(ext)
    out[0] = p0
    limit = np.pi / 4
    for k in range(1, len(ext)):
        q = ext[k]
        d_plus = float(_arc(out[k - 1], q))
        d_minus = np.pi - d_plus
        if min(d_plus, d_minus) >= limit:
            raise LiftError(f"mesh too coarse to lift at sample {k} "
                            f"(step {min(d_plus, d_minus):.3g} >= pi/4)")
        out[k] = q if d_plus <= d_minus else -q
    return SampledLoop(S2, out, closed=False)


def _stereo_frame(pole: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    helper = np.array([0.0, 0.0, 1.0]) if abs(pole[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    e1 = np.cross(helper, pole)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(pole, e1)
    return e1, e2


def _to_plane(v, pole, e1, e2) -> np.ndarray:
    denom = 1.0 - v @ pole
    return (v @ e1 + 1j * (v @ e2)) / denom


def _from_plane(w, pole, e1, e2) -> np.ndarray:
    r2 = np.abs(w) ** 2
    v = (2 * w.real[..., None] * e1 + 2 * w.imag[..., None] * e2
         + (r2 - 1.0)[..., None] * pole) / (r2 + 1.0)[..., None]
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _latlong_grid(n_lat: int = 32, n_long: int = 64) -> np.ndarray:
    lat = (np.arange(n_lat) + 0.5) / n_lat * np.pi - np.pi / 2
    lon = np.arange(n_long) / n_long * 2 * np.pi
    la, lo = np.meshgrid(lat, lon, indexing="ij")
    return np.stack([np.cos(la) * np.cos(lo), np.cos(la) * np.sin(lo), np.sin(la)],
                    axis=-1).reshape(-1, 3)


def _avoided_point(samples: np.ndarray) -> tuple[np.ndarray, float]:
    cand = _latlong_grid()
    # also try the exact poles and the antipode of the centroid
    extra = [np.array([0.0, 0.0, 1.0]), np.array([0.0, 0.0, -1.0])]
    c = samples.mean(axis=0)
    if np.linalg.norm(c) > 1e-9:
        extra.append(-c / np.linalg.norm(c))
    cand = np.concatenate([cand, np.array(extra)])
    dmin = np.min(_arc(cand[:, None, :], samples[None, :, :]), axis=1)
    best = int(np.argmax(dmin))
    return cand[best], float(dmin[best])


def contract_sphere_loop(loop: SampledLoop, basepoint=None, rings: int | None = None,
                         max_rings: int = 4096) -> DiskGrid:
    """Null-homotopy of a based loop on S2 as a polar point grid.

    Projects stereographically from a point the loop avoids, contracts the
    planar image along straight lines onto the basepoint and maps back.
    With ``rings=None`` the ring count doubles until radial steps are no
    larger than the loop's own mesh.
    """
    if loop.space != S2:
        raise SpaceMismatchError("contract_sphere_loop needs an S2 loop")
    if not loop.closed:
        ext = loop.extended
        if float(_arc(ext[0], ext[-1])) > 10 * DEFAULT.point:
            raise ContractionError("loop is not closed")
        loop = SampledLoop(S2, ext[:-1], closed=True)
    base = loop.samples[0] if basepoint is None else _coords(basepoint)
    if float(_arc(base, loop.samples[0])) > DEFAULT.point:
        raise ContractionError("loop is not based at the given basepoint")
    samples = loop.samples
    N = loop.N
    pole, dist = _avoided_point(samples)
    inner = samples
    if dist < np.pi / (4 * N):
        inner = _jitter_away(samples, pole, loop.mesh_bound / 10)
        pole, dist = _avoided_point(inner)
        if dist < np.pi / (4 * N):
            raise ContractionError("no avoided point found even after jitter")
    e1, e2 = _stereo_frame(pole)
    w = _to_plane(inner, pole, e1, e2)
    wb = _to_plane(base, pole, e1, e2)

    def build(R: int) -> np.ndarray:
        r = (np.arange(R + 1) / R)[:, None]
        vals = _from_plane(r * w[None, :] + (1 - r) * wb, pole, e1, e2)
        vals[0] = base
        vals[:, 0] = base
        vals[R] = samples
        return vals

    if rings is not None:
        vals = build(rings)
    else:
        target = max(loop.mesh_bound, 1e-6)
        R = 8
        while True:
            vals = build(R)
            radial = _arc(vals[1:], vals[:-1])
            if np.max(radial) <= target or R >= max_rings:
                break
            R *= 2
    return DiskGrid("point", S2, vals, point_grid_modulus(S2, vals))


def _jitter_away(samples: np.ndarray, pole: np.ndarray, size: float) -> np.ndarray:
    seed = int.from_bytes(hashlib.sha256(samples.tobytes()).digest()[:8], "little")
    rng = np.random.default_rng(seed)
    amount = rng.uniform(0.0, size, len(samples))
    toward = pole[None, :] - (samples @ pole)[:, None] * samples
    norm = np.linalg.norm(toward, axis=1, keepdims=True)
    direction = -toward / np.where(norm == 0, 1.0, norm)
    out = np.cos(amount)[:, None] * samples + np.sin(amount)[:, None] * direction
    out[0] = samples[0]
    return out / np.linalg.norm(out, axis=1, keepdims=True)


# ----------------------------------------------------------------------------
# maps between spaces


def _collapse_a(p: np.ndarray) -> np.ndarray:
    return np.asarray(p, float)[..., 2:]


def _collapse_b(p: np.ndarray) -> np.ndarray:
    return np.asarray(p, float)[..., :2]


def _identity(p: np.ndarray) -> np.ndarray:
    return np.asarray(p, float)


#: name -> (source space, target space, coordinate map)
MAPS: dict[str, tuple[str | None, str | None, Any]] = {
    "collapseA": (WEDGE, S1, _collapse_a),
    "collapseB": (WEDGE, S1, _collapse_b),
    "project": (S2, RP2, _identity),
    "identity": (None, None, _identity),
}


def map_points(name: str, space: str, coords) -> tuple[str, np.ndarray]:
    try:
        src, dst, fn = MAPS[name]
    except KeyError:
        raise ValueError(f"unsupported map {name!r}; choose from {sorted(MAPS)}") from None
    if src is not None and src != space:
        raise SpaceMismatchError(f"map {name} expects {src} points, got {space}")
    return (dst or space), fn(coords)


def map_loop(name: str, loop: SampledLoop) -> SampledLoop:
    dst, vals = map_points(name, loop.space, loop.samples)
    return SampledLoop(dst, vals, loop.closed)


def random_points(space: str, n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform-ish random coordinates on a model space, for tests and demos."""
    if space == S1:
        ang = rng.uniform(0, 2 * np.pi, n)
        return np.stack([np.cos(ang), np.sin(ang)], axis=-1)
    if space in (S2, RP2):
        v = rng.normal(size=(n, 3))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        return canonical_rp2(v) if space == RP2 else v
    if space == WEDGE:
        ang = rng.uniform(0, 2 * np.pi, n)
        pts = wedge_coords("A", ang)
        on_b = rng.random(n) < 0.5
        pts[on_b] = wedge_coords("B", ang[on_b])
        return pts
    raise ValueError(space)


def points(space: str, coords: Sequence) -> list[SpacePoint]:
    return [SpacePoint.from_coords(space, c) for c in np.asarray(coords, float)]
