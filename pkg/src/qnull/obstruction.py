"""Determinant winding of unitary loops.

For a loop of homomorphisms out of C(S1), evaluating at z gives a loop of
unitaries and the determinant a loop in S1.  Its degree is a homotopy
invariant, so a disk grid that is fine enough everywhere must carry the
same degree on every ring, and zero at the centre.  The identity loop of S1
embedded at matrix size n has degree n, which is never zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import cxmat
from .homspace import HomArray, eval_z_array
from .spaces import S1, DiskGrid
from .tolerances import DEFAULT

#: Largest phase step winding_number will integrate across.
MAX_PHASE_STEP = np.pi / 2
MAX_ROUNDING_RESIDUE = 0.01


class WindingError(ValueError):
    """The sampled loop is too coarse to have a well-defined winding."""


@dataclass
class UnitaryLoop:
    samples: np.ndarray  # (N, n, n), closed: sample N is sample 0
    mesh_bound: float = float("nan")

    def __post_init__(self):
        self.samples = cxmat.as_matrix(self.samples)
        if self.samples.ndim != 3:
            raise ValueError("expected an array of shape (N, n, n)")
        nxt = np.roll(self.samples, -1, axis=0)
        self.mesh_bound = float(np.max(cxmat.op_norm_batch(nxt - self.samples)))
        if self.mesh_bound >= np.sqrt(2):
            raise WindingError(f"adjacent unitaries differ by {self.mesh_bound:.3g} >= sqrt(2)")

    @property
    def n(self) -> int:
        return self.samples.shape[-1]

    @property
    def N(self) -> int:
        return self.samples.shape[0]


def unitarity_defect(samples: np.ndarray) -> np.ndarray:
    m = np.asarray(samples, dtype=complex)
    g = np.conj(np.swapaxes(m, -1, -2)) @ m - np.eye(m.shape[-1])
    return np.max(np.abs(g), axis=(-1, -2)) * m.shape[-1]


def det_loop(u: UnitaryLoop | np.ndarray, tol: float = DEFAULT.unitary) -> np.ndarray:
    samples = u.samples if isinstance(u, UnitaryLoop) else cxmat.as_matrix(u)
    n = samples.shape[-1]
    bad = unitarity_defect(samples) > tol
    if np.any(bad):
        raise ValueError(f"sample {int(np.argmax(bad))} is not unitary")
    d = np.atleast_1d(cxmat.det(samples))
    if np.max(np.abs(np.abs(d) - 1.0)) > n * tol:
        raise ValueError("determinant left the unit circle")
    return d


def phase_steps(values) -> np.ndarray:
    v = np.asarray(values, dtype=complex)
    return np.angle(np.roll(v, -1) / v)


def winding_number(values) -> int:
    """Degree of a closed sampled loop of unit complex numbers.

    Refuses (raises :class:`WindingError`) when any step between
    consecutive samples, including the closing step, exceeds a quarter turn.
    """
    v = np.asarray(values, dtype=complex)
    if v.ndim != 1 or len(v) < 2:
        raise ValueError("need a 1-d array of at least two samples")
    steps = phase_steps(v)
    worst = float(np.max(np.abs(steps)))
    if worst > MAX_PHASE_STEP:
        k = int(np.argmax(np.abs(steps)))
        raise WindingError(f"phase step too large: {worst:.4f} rad at sample {k} "
                           f"exceeds pi/2; refine the sampling")
    total = float(np.sum(steps)) / (2 * np.pi)
    w = int(round(total))
    if abs(total - w) >= MAX_ROUNDING_RESIDUE:
        raise WindingError(f"rounding residue {abs(total - w):.3g} too large")
    return w


def scalar_loop(n: int, N: int) -> np.ndarray:
    """Samples of s -> s I_n for s = exp(2 pi i k / N)."""
    if not 1 <= n <= cxmat.MAX_DIM:
        raise ValueError(f"n must be in 1..{cxmat.MAX_DIM}")
    s = np.exp(2j * np.pi * np.arange(N) / N)
    return s[:, None, None] * np.eye(n)[None, :, :]


def determinant_trace(n: int, N: int) -> np.ndarray:
    """Determinants along the embedded identity loop at matrix size n."""
    return det_loop(scalar_loop(n, N))


def canonical_obstruction(n: int, N: int) -> int:
    """Winding of det along the identity loop of S1 embedded in M_n; equals n."""
    if not 1 <= n <= cxmat.MAX_DIM:
        raise ValueError(f"n must be in 1..{cxmat.MAX_DIM}")
    if N < 64:
        raise ValueError("use at least 64 samples")
    return winding_number(det_loop(UnitaryLoop(scalar_loop(n, N))))


def obstruction_trace(n: int, N: int) -> tuple[int, np.ndarray]:
    """Winding and determinant samples along the embedded identity loop.

    Unlike :func:`canonical_obstruction` this accepts any ``N >= 2`` and
    lets :class:`WindingError` report sampling that is too coarse.
    """
    if not 1 <= n <= cxmat.MAX_DIM:
        raise ValueError(f"n must be in 1..{cxmat.MAX_DIM}")
    if N < 2:
        raise ValueError("need at least two samples")
    dets = det_loop(UnitaryLoop(scalar_loop(n, N)))
    return winding_number(dets), dets


def ring_determinants(values: HomArray) -> np.ndarray:
    """det(eval_z) for each cell of a grid of S1 parameters.

    For a 2x2 parameter this is a(t1) a(t2), computed from the matrices.
    """
    if values.space != S1:
        raise ValueError("ring windings are defined over S1")
    return np.asarray(cxmat.det(eval_z_array(values)))


def ring_windings(grid: DiskGrid) -> list[int | None]:
    """Winding of det(eval_z) on every ring; ``None`` where a ring is too coarse."""
    dets = ring_determinants(grid.values)
    out: list[int | None] = []
    for i in range(grid.R + 1):
        try:
            out.append(winding_number(dets[i]))
        except WindingError:
            out.append(None)
    return out


def boundary_winding_of_certificate(cert) -> int:
    """Winding of det(eval_z) on the boundary ring of an S1 certificate.

    Raises :class:`WindingError` if any ring is too coarse for the winding
    to be read off.
    """
    grid = cert.grid if hasattr(cert, "grid") else cert
    dets = ring_determinants(grid.values)
    for i in range(grid.R + 1):
        winding_number(dets[i])
    return winding_number(dets[grid.R])
