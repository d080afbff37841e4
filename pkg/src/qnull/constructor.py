"""Explicit disk extensions of embedded loops in Hom(C(T), M_2(C)).

Every certificate is assembled from homotopy strips.  A strip is a map
``K(s, u)`` into parameter triples, sampled on a grid of ``rows x N``
points; ``s`` runs around the loop and ``u`` across the strip.  Strips are
stacked radially from the boundary circle to the centre of the disk.

Building blocks
---------------
``diag_split``     ((1,0), p(s), p(s)) -> p in slot 1, then p in slot 2
``sigma_swap``     moves a based path between the two slots by rotating x
                   along the half great circle sigma; valid because
                   (x, t1, t2) and (-x, t2, t1) name the same homomorphism
                   and every (x, t0, t0) is the same point
``interchange``    slides a slot-1 block past a slot-2 block
``cancel``         retracts p . p^-1 along itself
``contract``       for RP2: lift to S2, contract there, project back
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .homspace import (X0, HomArray, evaluate, hom_distance, pushforward_array,
                       rho_distance)
from .spaces import (RP2, S2, WEDGE, DiskGrid, SampledLoop, SpaceMismatchError,
                     contract_sphere_loop, get_space, map_loop, rp2_lift, sigma_coords,
                     wedge_commutator_loop)
from .tolerances import DEFAULT, MESH_CEILING

StripFn = Callable[[np.ndarray, np.ndarray], HomArray]
PathFn = Callable[[np.ndarray], np.ndarray]

MAX_ROWS = 4097
MAX_SAMPLES = 8192


class ConstructionError(RuntimeError):
    pass


class EdgeMismatchError(ConstructionError):
    def __init__(self, upper: str, lower: str, gap: float):
        super().__init__(f"layer {upper!r} ends {gap:.3g} away from where layer "
                         f"{lower!r} starts")
        self.upper, self.lower, self.gap = upper, lower, gap


class RowsTooCoarse(ConstructionError):
    """A single row already exceeds the mesh target; more samples are needed."""


@dataclass
class HomotopyStrip:
    name: str
    rows: HomArray  # shape (M, N)

    @property
    def M(self) -> int:
        return self.rows.shape[0]

    @property
    def N(self) -> int:
        return self.rows.shape[1]

    @property
    def top(self) -> HomArray:
        return self.rows[0]

    @property
    def bottom(self) -> HomArray:
        return self.rows[self.M - 1]

    def modulus(self) -> float:
        return _modulus(evaluate(self.rows))[0]


@dataclass
class Certificate:
    space: str
    grid: DiskGrid
    boundary_loop: SampledLoop
    construction_log: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)

    @property
    def mesh_bound(self) -> float:
        return float(self.grid.mesh_bound)


# ----------------------------------------------------------------------------
# sampling


def _modulus(rho: np.ndarray) -> tuple[float, float]:
    """(overall, same-row) neighbour modulus of evaluated rows (M, N, F, 2, 2)."""
    same = float(np.max(rho_distance(rho, np.roll(rho, -1, axis=1))))
    across = float(np.max(rho_distance(rho[1:], rho[:-1]))) if len(rho) > 1 else 0.0
    return max(same, across), same


def sample_strip(fn: StripFn, N: int, name: str, target: float = DEFAULT.mesh,
                 rows: int | None = None) -> HomotopyStrip:
    """Sample ``fn`` on N loop points; with ``rows=None`` refine until the mesh fits."""
    s = (np.arange(N) / N)[None, :]
    M = rows or 3
    while True:
        u = np.linspace(0.0, 1.0, M)[:, None]
        hp = fn(s, u)
        if hp.shape != (M, N):
            hp = HomArray(hp.space, np.broadcast_to(hp.x, (M, N, 3)),
                          np.broadcast_to(hp.t1, (M, N) + hp.t1.shape[-1:]),
                          np.broadcast_to(hp.t2, (M, N) + hp.t2.shape[-1:]))
        if rows is not None:
            return HomotopyStrip(name, hp)
        total, same = _modulus(evaluate(hp))
        if same > target:
            raise RowsTooCoarse(f"{name}: neighbouring samples {same:.3g} apart "
                                f"(> {target}) at N={N}")
        if total <= target:
            return HomotopyStrip(name, hp)
        if M >= MAX_ROWS:
            raise ConstructionError(f"{name}: mesh {total:.3g} still above {target} "
                                    f"at {M} rows")
        M = 2 * (M - 1) + 1


def _hom(space: str, x, t1, t2) -> HomArray:
    return HomArray(space, x, t1, t2)


def _const(space: str, point: np.ndarray, shape) -> np.ndarray:
    return np.broadcast_to(point, tuple(shape) + point.shape)


# ----------------------------------------------------------------------------
# strip formulas (functions of s, u)


def _diag_split_fn(space: str, p1: PathFn, p2: PathFn, mirrored: bool = False) -> StripFn:
    """u=0: ((1,0), p1(s), p2(s)); u=1: p1 in slot 1 then p2 in slot 2.

    ``mirrored`` puts slot 2's material first at u=1 instead.
    """
    def fn(s, u):
        s, u = np.broadcast_arrays(s, u)
        early = np.minimum((1 + u) * s, 1.0)
        late = np.maximum((1 + u) * s - u, 0.0)
        a, b = (late, early) if mirrored else (early, late)
        return _hom(space, X0, p1(a), p2(b))
    return fn


def _sigma_fn(space: str, t0: np.ndarray, p: PathFn) -> StripFn:
    """K(s, u) = (sigma(1 - u), t0, p(s))."""
    def fn(s, u):
        s, u = np.broadcast_arrays(s, u)
        return _hom(space, sigma_coords(1.0 - u), _const(space, t0, s.shape), p(s))
    return fn


def _interchange_fn(space: str, p1: PathFn, p2: PathFn) -> StripFn:
    """(p1, t0).(t0, p2) at u=0, (p1, p2) at u=1/2, (t0, p2).(p1, t0) at u=1."""
    forward = _diag_split_fn(space, p1, p2)
    mirror = _diag_split_fn(space, p1, p2, mirrored=True)

    def fn(s, u):
        s, u = np.broadcast_arrays(s, u)
        first = forward(s, np.clip(1.0 - 2.0 * u, 0.0, 1.0))
        second = mirror(s, np.clip(2.0 * u - 1.0, 0.0, 1.0))
        return _select(u < 0.5, first, second)
    return fn


def _cancel_fn(space: str, t0: np.ndarray, p: PathFn, slot: int) -> StripFn:
    """p . p^-1 in the given slot, retracted: p(min(2s, 2 - 2s, 1 - u))."""
    def fn(s, u):
        s, u = np.broadcast_arrays(s, u)
        moving = p(np.minimum(np.minimum(2 * s, 2 - 2 * s), 1 - u))
        still = _const(space, t0, s.shape)
        return _hom(space, X0, moving, still) if slot == 1 else _hom(space, X0, still, moving)
    return fn


def _static_fn(space: str, t0: np.ndarray, p: PathFn, slot: int) -> StripFn:
    def fn(s, u):
        s, u = np.broadcast_arrays(s, u)
        moving, still = p(s), _const(space, t0, s.shape)
        return _hom(space, X0, moving, still) if slot == 1 else _hom(space, X0, still, moving)
    return fn


def _reverse_fn(fn: StripFn) -> StripFn:
    return lambda s, u: fn(s, 1.0 - np.asarray(u))


def _select(mask: np.ndarray, a: HomArray, b: HomArray) -> HomArray:
    m = mask[..., None]
    return HomArray(a.space, np.where(m, a.x, b.x), np.where(m, a.t1, b.t1),
                    np.where(m, a.t2, b.t2))


def _hconcat(fns: Sequence[StripFn], widths: Sequence[float]) -> StripFn:
    """Place strips side by side along s; block j covers its share of [0, 1]."""
    edges = np.concatenate([[0.0], np.cumsum(widths)])
    if abs(edges[-1] - 1.0) > 1e-12:
        raise ValueError("block widths must sum to 1")

    def fn(s, u):
        s, u = np.broadcast_arrays(s, u)
        block = np.clip(np.searchsorted(edges, s, side="right") - 1, 0, len(fns) - 1)
        x = t1 = t2 = space = None
        for j, f in enumerate(fns):
            mask = block == j
            if not np.any(mask):
                continue
            tau = np.clip((s[mask] - edges[j]) / widths[j], 0.0, 1.0)
            val = f(tau, u[mask])
            if x is None:
                space = val.space
                x = np.empty(s.shape + (3,))
                t1 = np.empty(s.shape + val.t1.shape[-1:])
                t2 = np.empty_like(t1)
            x[mask], t1[mask], t2[mask] = val.x, val.t1, val.t2
        return HomArray(space, x, t1, t2)
    return fn


def _concat_paths(p: PathFn, q: PathFn) -> PathFn:
    def fn(tau):
        tau = np.asarray(tau, dtype=float)
        first = (tau < 0.5)[..., None]
        return np.where(first, p(np.minimum(2 * tau, 1.0)), q(np.maximum(2 * tau - 1, 0.0)))
    return fn


def _leg(loop: SampledLoop, start: float, width: float) -> PathFn:
    return lambda tau: loop.at(start + width * np.asarray(tau, dtype=float))


def _check_based(loop: SampledLoop, tol: float = DEFAULT.point) -> np.ndarray:
    sp = get_space(loop.space)
    if float(sp.metric(loop.start, loop.end)) > tol:
        raise ConstructionError("input path is not based: it does not return to its start")
    return loop.start


# ----------------------------------------------------------------------------
# public strips


def sigma_swap_strip(phi: SampledLoop, rows: int | None = None,
                     target: float = DEFAULT.mesh) -> HomotopyStrip:
    """Strip (sigma(1 - u), t0, phi(s)): from (phi, t0) (up to the orbit
    identification) at u=0 to ((1,0), t0, phi) at u=1."""
    t0 = _check_based(phi)
    return sample_strip(_sigma_fn(phi.space, t0, phi.at), phi.N, "sigma_swap", target, rows)


def diag_split_strip(phi: SampledLoop, rows: int | None = None,
                     target: float = DEFAULT.mesh) -> HomotopyStrip:
    _check_based(phi)
    return sample_strip(_diag_split_fn(phi.space, phi.at, phi.at), phi.N, "diag_split",
                        target, rows)


def interchange_strip(phi1: SampledLoop, phi2: SampledLoop, rows: int | None = None,
                      target: float = DEFAULT.mesh) -> HomotopyStrip:
    """From (phi1, t0).(t0, phi2) to (t0, phi2).(phi1, t0) via (phi1, phi2)."""
    if phi1.space != phi2.space:
        raise SpaceMismatchError("interchange needs loops in the same space")
    t0 = _check_based(phi1)
    t0b = _check_based(phi2)
    if float(get_space(phi1.space).metric(t0, t0b)) > DEFAULT.point:
        raise ConstructionError("loops have different basepoints")
    if rows is not None and rows % 2 == 0:
        rows += 1  # keep the middle row on the grid
    return sample_strip(_interchange_fn(phi1.space, phi1.at, phi2.at), phi1.N,
                        "interchange", target, rows)


def stack_strips(strips: Sequence[HomotopyStrip], center: HomArray,
                 tol: float = DEFAULT.verify, mesh: float = MESH_CEILING) -> DiskGrid:
    """Glue strips radially: the first strip's top row becomes the boundary ring."""
    if not strips:
        raise ValueError("nothing to stack")
    N = strips[0].N
    for a, b in zip(strips[:-1], strips[1:]):
        if b.N != N:
            raise ConstructionError(f"layer {b.name!r} has {b.N} samples, expected {N}")
        gap = float(np.max(hom_distance(a.bottom, b.top)))
        if gap > tol:
            raise EdgeMismatchError(a.name, b.name, gap)
    rows = [strips[0].rows] + [s.rows[1:] for s in strips[1:]]
    stacked = HomArray.concatenate(rows, axis=0)
    centre_row = HomArray(center.space, np.broadcast_to(center.x, (1, N, 3)),
                          np.broadcast_to(center.t1, (1, N) + center.t1.shape[-1:]),
                          np.broadcast_to(center.t2, (1, N) + center.t2.shape[-1:]))
    last = stacked[stacked.shape[0] - 1]
    gap = float(np.max(hom_distance(last, centre_row[0])))
    if gap <= tol:
        stacked = HomArray.concatenate([stacked[: stacked.shape[0] - 1], centre_row])
    elif gap <= mesh:
        stacked = HomArray.concatenate([stacked, centre_row])
    else:
        raise EdgeMismatchError(strips[-1].name, "center", gap)
    values = stacked[::-1]
    modulus = _modulus(evaluate(values))[0]
    return DiskGrid("hom", center.space, values, modulus)


# ----------------------------------------------------------------------------
# certificates


def _layers_to_certificate(space: str, layers: list[tuple[str, StripFn]], N: int,
                           t0: np.ndarray, boundary: SampledLoop, target: float,
                           min_rings: int, tol: float) -> Certificate:
    strips = [sample_strip(fn, N, name, target) for name, fn in layers]
    total = sum(s.M - 1 for s in strips)
    if total < min_rings:
        scale = min_rings / total
        strips = [sample_strip(fn, N, name, target, rows=int(np.ceil((s.M - 1) * scale)) + 1)
                  for s, (name, fn) in zip(strips, layers)]
    center = HomArray.iota(space, t0)
    grid = stack_strips(strips, center, tol=tol, mesh=target)
    grid.mesh_bound = target
    log = [{"layer": s.name, "rows": s.M, "modulus": s.modulus()} for s in strips]
    cert = Certificate(space, grid, boundary, log,
                       {"verify": tol, "mesh": target, "point": DEFAULT.point})
    _self_check(cert)
    return cert


def _self_check(cert: Certificate) -> None:
    from .verifier import verify

    report = verify(cert, cert.boundary_loop, cert.tolerances["verify"])
    if not report.accepted:
        raise ConstructionError("constructed certificate failed verification: "
                                + "; ".join(report.failures))


def _with_refinement(build, N: int, max_samples: int = MAX_SAMPLES):
    while True:
        try:
            return build(N)
        except RowsTooCoarse:
            if 2 * N > max_samples:
                raise
            N *= 2


def build_rp2_certificate(phi: SampledLoop, target: float = DEFAULT.mesh,
                          min_rings: int = 64, tol: float = DEFAULT.verify) -> Certificate:
    """Disk extension of the embedded loop of any based loop in RP2.

    Layers from the boundary inward: split the diagonal loop into its two
    slots, swap the second slot's copy into slot 1 along sigma, then contract
    the doubled slot-1 loop through a lift to S2.
    """
    if phi.space != RP2:
        raise SpaceMismatchError("build_rp2_certificate needs an RP2 loop")
    # a loop too fast for its sampling is resampled along geodesics
    return _with_refinement(lambda n: _build_rp2(phi if n == phi.N else phi.resample(n),
                                                 target, min_rings, tol), phi.N)


def _build_rp2(phi: SampledLoop, target: float, min_rings: int, tol: float) -> Certificate:
    t0 = phi.start
    N = phi.N
    first = lambda tau: phi.at(tau)  # noqa: E731
    split = _diag_split_fn(RP2, phi.at, phi.at)
    swap = _hconcat([_static_fn(RP2, t0, first, 1),
                     _reverse_fn(_sigma_fn(RP2, t0, phi.at))], [0.5, 0.5])

    # the swapped row carries phi . phi in slot 1; read it off and lift it
    s = np.arange(N) / N
    end_row = swap(s[None, :], np.ones((1, 1)))[0]
    doubled = np.where((s < 0.5)[:, None], end_row.t1, end_row.t2)
    lifted = rp2_lift(SampledLoop(RP2, doubled))
    gap = float(get_space(S2).metric(lifted.start, lifted.end))
    if gap > 10 * DEFAULT.point:
        raise ConstructionError(f"lift of the doubled loop is not closed (gap {gap:.3g})")
    sphere_loop = SampledLoop(S2, lifted.samples[:-1])

    def contract_fn(rings: int) -> HomotopyStrip:
        disk = contract_sphere_loop(sphere_loop, lifted.start, rings=rings)
        pts = disk.values[::-1]  # boundary first
        return HomotopyStrip("contract", _hom(RP2, X0, pts, _const(RP2, t0, pts.shape[:2])))

    strips = [sample_strip(split, N, "diag_split", target),
              sample_strip(swap, N, "sigma_swap", target)]
    rings = 8
    while True:
        contract = contract_fn(rings)
        if contract.modulus() <= target:
            break
        if rings >= MAX_ROWS:
            raise ConstructionError("contraction did not reach the mesh target")
        rings *= 2
    strips.append(contract)
    total = sum(st.M - 1 for st in strips)
    if total < min_rings:
        scale = min_rings / total
        strips = [sample_strip(split, N, "diag_split", target,
                               rows=int(np.ceil((strips[0].M - 1) * scale)) + 1),
                  sample_strip(swap, N, "sigma_swap", target,
                               rows=int(np.ceil((strips[1].M - 1) * scale)) + 1),
                  contract_fn(int(np.ceil(rings * scale)))]
    center = HomArray.iota(RP2, t0)
    grid = stack_strips(strips, center, tol=tol, mesh=target)
    grid.mesh_bound = target
    log = [{"layer": st.name, "rows": st.M, "modulus": st.modulus()} for st in strips]
    cert = Certificate(RP2, grid, phi, log,
                       {"verify": tol, "mesh": target, "point": DEFAULT.point})
    _self_check(cert)
    return cert


def wedge_commutator_layers(f: SampledLoop) -> tuple[np.ndarray, list[tuple[str, StripFn]]]:
    """Layers contracting the embedded loop of alpha.beta.alpha^-1.beta^-1.

    ``f`` must consist of four legs of equal parameter length.  The alpha
    legs end up with both halves in slot 1, the beta legs in slot 2; the
    middle two blocks are then interchanged and each slot cancels.
    """
    t0 = f.start
    legs = [_leg(f, j / 4, 1 / 4) for j in range(4)]

    split = _hconcat([_diag_split_fn(WEDGE, p, p) for p in legs], [0.25] * 4)

    blocks = []
    for j, p in enumerate(legs):
        sigma = _sigma_fn(WEDGE, t0, p)
        if j % 2 == 0:   # alpha legs: slot-2 half moves to slot 1
            blocks += [_static_fn(WEDGE, t0, p, 1), _reverse_fn(sigma)]
        else:            # beta legs: slot-1 half moves to slot 2
            blocks += [sigma, _static_fn(WEDGE, t0, p, 2)]
    swap = _hconcat(blocks, [0.125] * 8)

    doubled = [_concat_paths(p, p) for p in legs]
    # block 1 holds beta.beta in slot 2 and block 2 holds alpha^-1.alpha^-1 in
    # slot 1; the interchange runs from (t0, B).(A', t0) to (A', t0).(t0, B)
    inter = _hconcat([_static_fn(WEDGE, t0, doubled[0], 1),
                      _reverse_fn(_interchange_fn(WEDGE, doubled[2], doubled[1])),
                      _static_fn(WEDGE, t0, doubled[3], 2)], [0.25, 0.5, 0.25])

    cancel = _hconcat([_cancel_fn(WEDGE, t0, doubled[0], 1),
                       _cancel_fn(WEDGE, t0, doubled[1], 2)], [0.5, 0.5])
    return t0, [("diag_split", split), ("sigma_swap", swap),
                ("interchange", inter), ("cancel", cancel)]


def build_wedge_commutator_certificate(a_turns: int, b_turns: int, N: int | None = None,
                                       target: float = DEFAULT.mesh, min_rings: int = 64,
                                       tol: float = DEFAULT.verify) -> Certificate:
    """Certificate for the commutator of the two branch loops of S1 v S1."""
    if max(abs(a_turns), abs(b_turns)) > 4:
        raise ValueError("turn counts are limited to |turns| <= 4")

    def build(n: int) -> Certificate:
        f = wedge_commutator_loop(a_turns, b_turns, n)
        t0, layers = wedge_commutator_layers(f)
        return _layers_to_certificate(WEDGE, layers, n, t0, f, target, min_rings, tol)

    if N is None:
        # each leg runs |turns| circles in a quarter of the loop and the split
        # doubles its speed, so a step is about 16 pi |turns| / N
        speed = 16 * np.pi * max(abs(a_turns), abs(b_turns), 1)
        N = max(256, 1 << int(np.ceil(np.log2(speed / target))))
    return _with_refinement(build, N)


def pushforward_certificate(cert: Certificate, g: str) -> Certificate:
    """Image of a certificate under a map of spaces (cell by cell)."""
    values = pushforward_array(cert.grid.values, g)
    loop = map_loop(g, cert.boundary_loop)
    grid = DiskGrid("hom", values.space, values, cert.grid.mesh_bound)
    log = list(cert.construction_log) + [{"layer": f"pushforward:{g}",
                                          "rows": 0, "modulus": None}]
    return Certificate(values.space, grid, loop, log, dict(cert.tolerances))


def constant_certificate(loop: SampledLoop, rings: int = 64,
                         target: float = DEFAULT.mesh) -> Certificate:
    """The all-centre certificate of a constant loop."""
    sp = get_space(loop.space)
    if float(np.max(sp.metric(loop.samples, loop.start))) > DEFAULT.point:
        raise ConstructionError("loop is not constant")
    vals = HomArray.iota(loop.space, np.broadcast_to(loop.start, (rings + 1, loop.N, sp.dim)))
    grid = DiskGrid("hom", loop.space, vals, target)
    return Certificate(loop.space, grid, loop, [{"layer": "constant", "rows": rings + 1,
                                                 "modulus": 0.0}],
                       {"verify": DEFAULT.verify, "mesh": target, "point": DEFAULT.point})


def pairing_nullhomotopy_demo(N: int = 64, R: int = 64) -> DiskGrid:
    """Unitary disk with boundary s -> diag(s, conj s) and centre I.

    W(s, r) = D(s) Rot(r pi/2) D(s)^-1 Rot(r pi/2)^-1 with D(s) = diag(s, 1);
    at r = 1 the rotation swaps the diagonal entries, giving diag(s, conj s).
    """
    if N < 64:
        raise ValueError("use at least 64 samples")
    s = np.exp(2j * np.pi * np.arange(N) / N)
    theta = (np.arange(R + 1) / R) * np.pi / 2
    c, sn = np.cos(theta), np.sin(theta)
    rot = np.zeros((R + 1, 1, 2, 2), dtype=complex)
    rot[:, 0, 0, 0], rot[:, 0, 0, 1], rot[:, 0, 1, 0], rot[:, 0, 1, 1] = c, -sn, sn, c
    rot_inv = np.conj(np.swapaxes(rot, -1, -2))
    d = np.zeros((1, N, 2, 2), dtype=complex)
    d[0, :, 0, 0], d[0, :, 1, 1] = s, 1.0
    d_inv = np.conj(d)
    w = d @ rot @ d_inv @ rot_inv
    w[0] = np.eye(2)
    return DiskGrid("matrix", None, w)
