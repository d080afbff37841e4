"""Independent checks of claimed certificates.

Nothing here trusts how a certificate was made.  Every comparison goes
through the matrices the parameters name on the separating test family, so
the identifications of the parameter space never need special cases.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict

import numpy as np

from . import cxmat
from .homspace import (HomArray, _rho, evaluate, iota_loop, product_closed_family,
                       pushforward_array)
from .obstruction import ring_windings
from .spaces import S1, S2, WEDGE, RP2, DiskGrid, SampledLoop, get_space
from .tolerances import DEFAULT, MESH_CEILING, default_verify_tol

ACCEPT, REJECT = "ACCEPT", "REJECT"


class MalformedCertificateError(ValueError):
    pass


@dataclass
class VerificationReport:
    space: str
    verdict: str
    tol: float
    boundary_error: float
    continuity_modulus: float
    mesh_bound: float
    basepoint_drift: float
    off_space: float
    rings: int
    samples: int
    ring_windings: list | None = None
    failures: list = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return self.verdict == ACCEPT

    def as_dict(self) -> dict:
        return asdict(self)

    def text(self) -> str:
        lines = [f"verdict            {self.verdict}",
                 f"space              {self.space}  (R={self.rings}, N={self.samples})",
                 f"boundary error     {self.boundary_error:.3e}  (tol {self.tol:.1e})",
                 f"continuity modulus {self.continuity_modulus:.4f}  "
                 f"(bound {self.mesh_bound:.4f})",
                 f"basepoint drift    {self.basepoint_drift:.3e}",
                 f"off-space defect   {self.off_space:.3e}"]
        if self.ring_windings is not None:
            distinct = sorted({w for w in self.ring_windings if w is not None})
            refused = sum(w is None for w in self.ring_windings)
            lines.append(f"ring windings      boundary={self.ring_windings[-1]} "
                         f"center={self.ring_windings[0]} distinct={distinct} "
                         f"refused={refused}")
        for f in self.failures:
            lines.append(f"FAILED: {f}")
        return "\n".join(lines)


def _check_structure(grid: DiskGrid) -> HomArray:
    values = grid.values
    if grid.value_type != "hom" or not isinstance(values, HomArray):
        raise MalformedCertificateError("certificate grid must hold homomorphism parameters")
    if len(values.shape) != 2 or values.shape[0] < 2 or values.shape[1] < 2:
        raise MalformedCertificateError(f"grid has shape {values.shape}; expected (R+1, N)")
    for name in ("x", "t1", "t2"):
        if not np.all(np.isfinite(getattr(values, name))):
            raise MalformedCertificateError(f"non-finite {name} coordinates")
    return values


def verify(cert, loop: SampledLoop | None = None, tol: float | None = None) -> VerificationReport:
    """Check that ``cert.grid`` extends the embedded loop over the disk.

    ACCEPT requires: boundary ring within ``tol`` of the embedded loop,
    every neighbour pair within the declared mesh bound (itself capped at
    0.2), the s = 0 column pinned to the embedded basepoint, all cells on
    their spaces, and over S1 a zero determinant winding on every ring.
    """
    tol = default_verify_tol() if tol is None else float(tol)
    values = _check_structure(cert.grid)
    space = values.space
    loop = cert.boundary_loop if loop is None else loop
    if loop.space != space:
        raise MalformedCertificateError(f"loop lives on {loop.space}, certificate on {space}")
    R, N = values.shape[0] - 1, values.shape[1]
    if loop.N != N:
        loop = loop.resample(N)
    failures: list[str] = []

    sp = get_space(space)
    off = float(max(np.max(get_space(S2).residual(values.x)),
                    np.max(sp.residual(values.t1)), np.max(sp.residual(values.t2))))
    if off > DEFAULT.point:
        failures.append(f"off_space: a cell is {off:.3g} off its space")

    rho = evaluate(values)
    target = evaluate(iota_loop(loop))
    dist = lambda a, b: np.max(cxmat.op_norm_2x2(a - b), axis=-1)  # noqa: E731
    boundary_error = float(np.max(dist(rho[R], target)))
    if not boundary_error <= tol:
        failures.append(f"boundary: ring R is {boundary_error:.3g} from the embedded loop")

    same = dist(rho, np.roll(rho, -1, axis=1))
    radial = dist(rho[1:], rho[:-1])
    modulus = float(max(np.max(same), np.max(radial)))
    declared = cert.grid.mesh_bound
    bound = MESH_CEILING if declared is None else min(float(declared), MESH_CEILING)
    if not modulus <= bound:
        i, k = np.unravel_index(int(np.argmax(np.maximum(same[1:], radial))), radial.shape)
        failures.append(f"continuity: modulus {modulus:.3g} exceeds {bound:.3g} "
                        f"(near ring {i + 1}, sample {k})")

    drift = float(np.max(dist(rho[:, 0], target[0][None])))
    if not drift <= tol:
        failures.append(f"basepoint: s=0 column drifts {drift:.3g} from the basepoint")

    windings = None
    if space == S1:
        windings = ring_windings(cert.grid)
        refused = [i for i, w in enumerate(windings) if w is None]
        if refused:
            failures.append(f"winding: refused on {len(refused)} ring(s), first ring "
                            f"{refused[0]} (phase step > pi/2)")
        known = [w for w in windings if w is not None]
        if windings[R] is not None and windings[R] != 0:
            failures.append(f"winding: boundary winding {windings[R]} != 0")
        if len(set(known)) > 1:
            failures.append(f"winding: rings disagree {sorted(set(known))}")

    return VerificationReport(space, REJECT if failures else ACCEPT, tol, boundary_error,
                              modulus, bound, drift, off, R, N, windings, failures)


def _law_violation(x, a1, a2, b1, b2) -> float:
    ra, rb = _rho(x, a1, a2), _rho(x, b1, b2)
    worst = float(np.max(cxmat.op_norm_2x2(_rho(x, a1 * b1, a2 * b2) - ra @ rb)))
    rbar = _rho(x, np.conj(a1), np.conj(a2))
    worst = max(worst, float(np.max(cxmat.op_norm_2x2(rbar - np.conj(np.swapaxes(ra, -1, -2))))))
    r1 = _rho(x, np.ones(a1.shape), np.ones(a1.shape))
    return max(worst, float(np.max(cxmat.op_norm_2x2(r1 - np.eye(2)))))


def check_hom_laws(cert, trials: int | None = 1000, seed: int = 0, chunk: int = 2048) -> float:
    """Largest violation of multiplicativity, *-preservation and unitality.

    ``trials`` random (cell, a, b) draws from the product-closed test family;
    ``trials=None`` checks every cell against every pair.
    """
    values = _check_structure(cert.grid)
    fam = product_closed_family(values.space)
    x = values.x.reshape(-1, 3)
    t1 = values.t1.reshape(len(x), -1)
    t2 = values.t2.reshape(len(x), -1)
    if trials is not None:
        rng = np.random.default_rng(seed)
        cells = rng.integers(0, len(x), trials)
        ia = rng.integers(0, len(fam), trials)
        ib = rng.integers(0, len(fam), trials)
        v1 = np.stack([f(t1[cells]) for f in fam])  # (F, trials)
        v2 = np.stack([f(t2[cells]) for f in fam])
        idx = np.arange(trials)
        return _law_violation(x[cells], v1[ia, idx], v2[ia, idx], v1[ib, idx], v2[ib, idx])
    worst = 0.0
    for lo in range(0, len(x), chunk):
        sl = slice(lo, lo + chunk)
        v1 = np.stack([f(t1[sl]) for f in fam], axis=-1)  # (C, F)
        v2 = np.stack([f(t2[sl]) for f in fam], axis=-1)
        xs = x[sl][:, None, None, :]
        worst = max(worst, _law_violation(xs, v1[:, :, None], v2[:, :, None],
                                          v1[:, None, :], v2[:, None, :]))
    return worst


# ----------------------------------------------------------------------------
# negative controls


def _replace_grid(cert, values: HomArray, mesh=None):
    from .constructor import Certificate

    grid = DiskGrid("hom", values.space, values,
                    cert.grid.mesh_bound if mesh is None else mesh)
    return Certificate(values.space, grid, cert.boundary_loop, list(cert.construction_log),
                       dict(cert.tolerances))


def torn_ring(cert, ring: int | None = None, sample: int | None = None):
    v = cert.grid.values.copy()
    R, N = v.shape
    i = R // 2 if ring is None else ring
    k = N // 3 if sample is None else sample
    far = get_space(v.space).far_point(v.t1[i, k])
    v.x[i, k] = np.array([1.0, 0.0, 0.0])
    v.t1[i, k] = far
    v.t2[i, k] = far
    return _replace_grid(cert, v)


def shifted_boundary(cert, shift: int = 1):
    v = cert.grid.values.copy()
    R = v.shape[0] - 1
    v.x[R] = np.roll(v.x[R], shift, axis=0)
    v.t1[R] = np.roll(v.t1[R], shift, axis=0)
    v.t2[R] = np.roll(v.t2[R], shift, axis=0)
    return _replace_grid(cert, v)


def off_sphere_cell(cert, eps: float = 1e-3):
    """Push x of the cell where the two slots differ most off the sphere."""
    v = cert.grid.values.copy()
    gap = get_space(v.space).metric(v.t1, v.t2)
    i, k = np.unravel_index(int(np.argmax(gap)), gap.shape)
    v.x[i, k] = v.x[i, k] * (1.0 + eps)
    return _replace_grid(cert, v)


def fabricated_certificates(loop: SampledLoop, rings: int = 64,
                            mesh: float = DEFAULT.mesh) -> dict:
    """Three disks that try to fill in the embedded loop by brute force.

    Each has the correct boundary ring; none is continuous.
    """
    from .constructor import Certificate

    sp = get_space(loop.space)
    N = loop.N
    base = iota_loop(loop)
    t0 = loop.start
    r = np.arange(rings + 1) / rings

    def cert(values: HomArray) -> "Certificate":
        grid = DiskGrid("hom", values.space, values, mesh)
        return Certificate(loop.space, grid, loop, [{"layer": "fabricated"}],
                           {"verify": DEFAULT.verify, "mesh": mesh, "point": DEFAULT.point})

    out = {}
    # 1: every ring is the loop itself, the centre is the basepoint
    coords = np.broadcast_to(loop.loop_samples, (rings + 1, N, sp.dim)).copy()
    coords[0] = t0
    out["collapsed_center"] = cert(HomArray.iota(loop.space, coords))

    # 2: ring r runs along the loop only up to parameter r
    s = np.arange(N) / N
    coords = loop.at(r[:, None] * s[None, :])
    out["radial_unwind"] = cert(HomArray.iota(loop.space, coords))

    # 3: move the loop into slot 1 twice over and squeeze it with the
    # same parameter truncation, a winding-carrying insert
    outer = rings // 2
    rows = [base.copy() for _ in range(outer)]
    doubled = loop.at((2 * s) % 1.0)
    for j in range(rings + 1 - outer):
        frac = 1.0 - j / (rings - outer)
        inner = loop.at(((2 * s) % 1.0) * frac)
        rows.append(HomArray(loop.space, np.array([1.0, 0.0, 0.0]), inner,
                             np.broadcast_to(t0, inner.shape)))
    rows[outer] = HomArray(loop.space, np.array([1.0, 0.0, 0.0]), doubled,
                           np.broadcast_to(t0, doubled.shape))
    stacked = HomArray.concatenate([row[None] if len(row.shape) == 1 else row
                                    for row in rows])[::-1]
    out["slot_insert"] = cert(stacked)
    return out


def adversarial_suite(space: str, N: int = 256) -> dict:
    """Corrupted and fabricated certificates that verify must reject.

    Returns ``{name: verdict}``; the sanity entry ``valid`` must ACCEPT and
    every other entry must REJECT.
    """
    from .constructor import (build_rp2_certificate, build_wedge_commutator_certificate,
                              pushforward_certificate)
    from .spaces import circle_loop, rp2_generator, wedge_branch_loop

    if space == RP2:
        valid = build_rp2_certificate(rp2_generator(N))
        fake_loop = None
    elif space == WEDGE:
        valid = build_wedge_commutator_certificate(1, 1)
        fake_loop = wedge_branch_loop("A", 1, N)
    elif space == S1:
        valid = pushforward_certificate(build_wedge_commutator_certificate(1, 1), "collapseB")
        fake_loop = circle_loop(N)
    else:
        raise ValueError(f"no adversarial suite for {space!r}")

    results = {"valid": verify(valid).verdict,
               "torn_ring": verify(torn_ring(valid)).verdict,
               "shifted_boundary": verify(shifted_boundary(valid), tol=DEFAULT.verify).verdict,
               "off_sphere_cell": verify(off_sphere_cell(valid)).verdict}
    if fake_loop is not None:
        for name, fake in fabricated_certificates(fake_loop).items():
            results[f"fabricated:{name}"] = verify(fake).verdict
            if space == WEDGE:
                image = pushforward_certificate(fake, "collapseB")
                results[f"fabricated:{name}:collapseB"] = verify(image).verdict
    return results


def suite_passed(results: dict) -> bool:
    return all((v == ACCEPT) if k == "valid" else (v == REJECT) for k, v in results.items())


def pushforward_values(values: HomArray, g: str) -> HomArray:
    return pushforward_array(values, g)
