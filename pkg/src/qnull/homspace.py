"""Unital *-homomorphisms C(T) -> M_2(C) through (x, t1, t2) parameters.

A parameter triple names the homomorphism

    a  |->  a(t1) (I + h(x))/2  +  a(t2) (I - h(x))/2,

which is evaluated here in the algebraically equal form
``((a(t1) + a(t2)) I + (a(t1) - a(t2)) h(x)) / 2``.  In that form the two
identifications of the parameter space hold bit for bit in floating point:
``(x, t1, t2)`` and ``(-x, t2, t1)`` give identical matrices, and so do
``(x, t, t)`` and ``(x', t, t)``.  All comparisons between parameters go
through these matrices, never through raw coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import cxmat
from .spaces import (RP2, S1, S2, WEDGE, SampledLoop, SpacePoint, SpaceMismatchError,
                     get_space, map_points)
from .tolerances import DEFAULT

X0 = np.array([1.0, 0.0, 0.0])  # the sphere point (1, 0)


class UnitarityError(ValueError):
    pass


@dataclass(frozen=True)
class TestFunction:
    """Closed-form function on a model space, vectorised over coordinates."""

    __test__ = False  # not a pytest class

    space: str
    name: str
    fn: Callable[[np.ndarray], np.ndarray]

    def __call__(self, p) -> np.ndarray | complex:
        if isinstance(p, SpacePoint):
            if p.space != self.space:
                raise SpaceMismatchError(f"{self.name} lives on {self.space}, not {p.space}")
            return complex(self.fn(p.array))
        return np.asarray(self.fn(np.asarray(p, dtype=float)), dtype=complex)

    def conj(self) -> "TestFunction":
        return TestFunction(self.space, f"conj({self.name})", lambda c, f=self.fn: np.conj(f(c)))

    def __mul__(self, other: "TestFunction") -> "TestFunction":
        if other.space != self.space:
            raise SpaceMismatchError("product of functions on different spaces")
        return TestFunction(self.space, f"{self.name}*{other.name}",
                            lambda c, f=self.fn, g=other.fn: f(c) * g(c))


def one(space: str) -> TestFunction:
    return TestFunction(space, "1", lambda c: np.ones(c.shape[:-1], dtype=complex))


def _coord_fn(i: int) -> Callable:
    return lambda c: c[..., i].astype(complex)


def _veronese(i: int, j: int) -> Callable:
    scale = 1.0 if i == j else 2.0
    return lambda c: (scale * c[..., i] * c[..., j]).astype(complex)


def separating_family(space: str) -> list[TestFunction]:
    """Finite family of functions that tells points of ``space`` apart.

    Every member has sup-norm 1 on its space.
    """
    if space == S1:
        return [TestFunction(S1, "z", lambda c: c[..., 0] + 1j * c[..., 1])]
    if space == S2:
        return [TestFunction(S2, name, _coord_fn(i))
                for i, name in enumerate(("re_alpha", "im_alpha", "t"))]
    if space == RP2:
        names = ("x", "y", "t")
        return [TestFunction(RP2, f"{names[i]}{names[j]}", _veronese(i, j))
                for i in range(3) for j in range(i, 3)]
    if space == WEDGE:
        return [TestFunction(WEDGE, "u", lambda c: c[..., 0] + 1j * c[..., 1]),
                TestFunction(WEDGE, "v", lambda c: c[..., 2] + 1j * c[..., 3])]
    raise ValueError(f"unknown space {space!r}")


def product_closed_family(space: str) -> list[TestFunction]:
    """Separating family together with its conjugates and the constant 1."""
    fam = separating_family(space)
    return [one(space)] + fam + [a.conj() for a in fam]


# ----------------------------------------------------------------------------
# scalar parameters


@dataclass(frozen=True, eq=False)
class HomParam:
    x: SpacePoint
    t1: SpacePoint
    t2: SpacePoint

    def __post_init__(self):
        if self.x.space != S2:
            raise SpaceMismatchError("x must be a point of S2")
        if self.t1.space != self.t2.space:
            raise SpaceMismatchError("t1 and t2 must lie in the same space")

    @property
    def space(self) -> str:
        return self.t1.space

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomParam):
            return NotImplemented
        return self.space == other.space and eval_metric(self, other) == 0.0

    __hash__ = None

    def to_array(self) -> "HomArray":
        return HomArray(self.space, self.x.array, self.t1.array, self.t2.array)


def _sphere_x(x) -> np.ndarray:
    return x.array if isinstance(x, SpacePoint) else np.asarray(x, dtype=float)


def q2_eval(p: HomParam, a: TestFunction) -> np.ndarray:
    """The 2x2 matrix the homomorphism named by ``p`` assigns to ``a``."""
    if a.space != p.space:
        raise SpaceMismatchError(f"test function on {a.space}, parameter over {p.space}")
    cxmat.h_matrix(p.x)  # validates the sphere point
    return _rho(p.x.array, a(p.t1.array), a(p.t2.array))


def _rho(x: np.ndarray, a1, a2) -> np.ndarray:
    a1 = np.asarray(a1, dtype=complex)
    a2 = np.asarray(a2, dtype=complex)
    h = cxmat.h_batch(x)
    s = (a1 + a2)[..., None, None]
    d = (a1 - a2)[..., None, None]
    eye = np.eye(2, dtype=complex)
    return (s * eye + d * h) / 2


def iota(t: SpacePoint) -> HomParam:
    """The point evaluation a -> a(t) I_2, parameterised as ((1, 0), t, t)."""
    return HomParam(SpacePoint.from_coords(S2, X0), t, t)


def eval_metric(p: HomParam, q: HomParam, family: Sequence[TestFunction] | None = None) -> float:
    if p.space != q.space:
        raise SpaceMismatchError(f"{p.space} vs {q.space}")
    family = separating_family(p.space) if family is None else list(family)
    if not family:
        raise ValueError("empty test family")
    return max(cxmat.op_norm(q2_eval(p, a) - q2_eval(q, a)) for a in family)


def eval_z(p: HomParam, tol: float = DEFAULT.unitary) -> np.ndarray:
    """Image of the inclusion z: S1 -> C; a unitary matrix."""
    if p.space != S1:
        raise SpaceMismatchError("eval_z is defined for homomorphisms out of C(S1)")
    u = q2_eval(p, separating_family(S1)[0])
    defect = cxmat.op_norm(cxmat.adjoint(u) @ u - np.eye(2))
    if defect > tol:
        raise UnitarityError(f"eval_z is not unitary (defect {defect:.3g})")
    return u


def pushforward(p: HomParam, g: str) -> HomParam:
    """Compose the homomorphism with the pullback along the named map ``g``."""
    dst, c1 = map_points(g, p.space, p.t1.array)
    _, c2 = map_points(g, p.space, p.t2.array)
    return HomParam(p.x, SpacePoint.from_coords(dst, c1), SpacePoint.from_coords(dst, c2))


# ----------------------------------------------------------------------------
# arrays of parameters


@dataclass
class HomArray:
    """Parameters over ``space`` with coordinate arrays sharing a leading shape."""

    space: str
    x: np.ndarray
    t1: np.ndarray
    t2: np.ndarray

    def __post_init__(self):
        dim = get_space(self.space).dim
        self.x = np.asarray(self.x, dtype=float)
        self.t1 = np.asarray(self.t1, dtype=float)
        self.t2 = np.asarray(self.t2, dtype=float)
        if self.x.shape[-1] != 3 or self.t1.shape[-1] != dim or self.t2.shape[-1] != dim:
            raise ValueError("bad coordinate dimensions for HomArray")
        shape = np.broadcast_shapes(self.x.shape[:-1], self.t1.shape[:-1], self.t2.shape[:-1])
        self.x = np.broadcast_to(self.x, shape + (3,)).copy()
        self.t1 = np.broadcast_to(self.t1, shape + (dim,)).copy()
        self.t2 = np.broadcast_to(self.t2, shape + (dim,)).copy()

    @property
    def shape(self) -> tuple:
        return self.x.shape[:-1]

    def __getitem__(self, idx) -> "HomArray":
        return HomArray(self.space, self.x[idx], self.t1[idx], self.t2[idx])

    def param(self, *idx) -> HomParam:
        return HomParam(SpacePoint.from_coords(S2, self.x[idx]),
                        SpacePoint.from_coords(self.space, self.t1[idx]),
                        SpacePoint.from_coords(self.space, self.t2[idx]))

    def copy(self) -> "HomArray":
        return HomArray(self.space, self.x.copy(), self.t1.copy(), self.t2.copy())

    @classmethod
    def concatenate(cls, parts: Sequence["HomArray"], axis: int = 0) -> "HomArray":
        space = parts[0].space
        if any(p.space != space for p in parts):
            raise SpaceMismatchError("cannot concatenate arrays over different spaces")
        return cls(space, np.concatenate([p.x for p in parts], axis=axis),
                   np.concatenate([p.t1 for p in parts], axis=axis),
                   np.concatenate([p.t2 for p in parts], axis=axis))

    @classmethod
    def iota(cls, space: str, coords) -> "HomArray":
        coords = np.asarray(coords, dtype=float)
        return cls(space, np.broadcast_to(X0, coords.shape[:-1] + (3,)), coords, coords)


def iota_loop(loop: SampledLoop) -> HomArray:
    return HomArray.iota(loop.space, loop.loop_samples)


def evaluate(hp: HomArray, family: Sequence[TestFunction] | None = None) -> np.ndarray:
    """Matrices of every parameter on every family member: shape (..., F, 2, 2)."""
    family = separating_family(hp.space) if family is None else family
    x = hp.x[..., None, :]
    a1 = np.stack([a(hp.t1) for a in family], axis=-1)
    a2 = np.stack([a(hp.t2) for a in family], axis=-1)
    return _rho(x, a1, a2)


def rho_distance(r1: np.ndarray, r2: np.ndarray) -> np.ndarray:
    """eval_metric between evaluated stacks (..., F, 2, 2); max over the family."""
    return np.max(cxmat.op_norm_2x2(r1 - r2), axis=-1)


def hom_distance(p: HomArray, q: HomArray, family=None) -> np.ndarray:
    if p.space != q.space:
        raise SpaceMismatchError(f"{p.space} vs {q.space}")
    return rho_distance(evaluate(p, family), evaluate(q, family))


def pushforward_array(hp: HomArray, g: str) -> HomArray:
    dst, c1 = map_points(g, hp.space, hp.t1)
    _, c2 = map_points(g, hp.space, hp.t2)
    return HomArray(dst, hp.x, c1, c2)


def eval_z_array(hp: HomArray) -> np.ndarray:
    if hp.space != S1:
        raise SpaceMismatchError("eval_z is defined for homomorphisms out of C(S1)")
    return evaluate(hp, separating_family(S1))[..., 0, :, :]
