"""Small dense complex matrices (n <= 8).

Matrices are plain ``numpy`` complex arrays of shape ``(n, n)``; most
functions here also accept a stack ``(..., n, n)``.  The determinant and the
operator norm are computed here rather than delegated to LAPACK so that the
small cases used by the obstruction are exact and deterministic.
"""

from __future__ import annotations

import numpy as np

from .tolerances import DEFAULT

MAX_DIM = 8


class DimensionError(ValueError):
    pass


class OffSphereError(ValueError):
    pass


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise DimensionError(f"expected square matrix, got shape {m.shape}")
    n = m.shape[-1]
    if not 1 <= n <= MAX_DIM:
        raise DimensionError(f"dimension {n} outside 1..{MAX_DIM}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def identity(n: int) -> np.ndarray:
    if not 1 <= n <= MAX_DIM:
        raise DimensionError(f"dimension {n} outside 1..{MAX_DIM}")
    return np.eye(n, dtype=complex)


def mat_mul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[-1] != b.shape[-1]:
        raise DimensionError(f"dimension mismatch {a.shape[-1]} vs {b.shape[-1]}")
    return a @ b


def adjoint(a) -> np.ndarray:
    return np.conj(np.swapaxes(as_matrix(a), -1, -2))


def det(a) -> np.ndarray | complex:
    """Determinant; cofactor expansion for n <= 3, partial-pivot LU above.

    Works on stacks and returns an array of shape ``a.shape[:-2]``
    (a plain complex for a single matrix).
    """
    m = as_matrix(a)
    n = m.shape[-1]
    if n == 1:
        d = m[..., 0, 0]
    elif n == 2:
        d = m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]
    elif n == 3:
        d = (m[..., 0, 0] * (m[..., 1, 1] * m[..., 2, 2] - m[..., 1, 2] * m[..., 2, 1])
             - m[..., 0, 1] * (m[..., 1, 0] * m[..., 2, 2] - m[..., 1, 2] * m[..., 2, 0])
             + m[..., 0, 2] * (m[..., 1, 0] * m[..., 2, 1] - m[..., 1, 1] * m[..., 2, 0]))
    else:
        d = _lu_det(m)
    if np.ndim(d) == 0:
        return complex(d)
    return d


def _lu_det(m: np.ndarray) -> np.ndarray:
    batch = m.shape[:-2]
    n = m.shape[-1]
    u = m.reshape((-1, n, n)).copy()
    rows = np.arange(u.shape[0])
    sign = np.ones(u.shape[0], dtype=complex)
    for col in range(n - 1):
        piv = col + np.argmax(np.abs(u[:, col:, col]), axis=1)
        swap = piv != col
        if np.any(swap):
            tmp = u[rows, col].copy()
            u[rows, col] = u[rows, piv]
            u[rows, piv] = tmp
            sign[swap] *= -1
        pivot = u[:, col, col]
        safe = np.where(pivot == 0, 1, pivot)
        factors = u[:, col + 1:, col] / safe[:, None]
        factors[pivot == 0] = 0
        u[:, col + 1:, col:] -= factors[:, :, None] * u[:, None, col, col:]
    d = sign * np.prod(np.diagonal(u, axis1=1, axis2=2), axis=1)
    return d.reshape(batch)


def op_norm(a, rtol: float = 1e-10, max_iter: int = 10_000) -> float:
    """Largest singular value by power iteration on ``a* a``.

    The start vector is the normalised all-ones vector, so results are
    reproducible.  Iteration stops once successive Rayleigh quotients agree
    to ``rtol`` relative.
    """
    m = as_matrix(a)
    if m.ndim != 2:
        raise DimensionError("op_norm takes a single matrix")
    g = adjoint(m) @ m
    n = m.shape[0]
    v = np.ones(n, dtype=complex) / np.sqrt(n)
    lam = 0.0
    for _ in range(max_iter):
        w = g @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            # v lies in the kernel; restart from a basis vector the kernel misses
            col = np.argmax(np.linalg.norm(g, axis=0))
            if np.linalg.norm(g[:, col]) == 0.0:
                return 0.0
            v = np.zeros(n, dtype=complex)
            v[col] = 1.0
            continue
        v_new = w / nw
        lam_new = float(np.real(np.vdot(v_new, g @ v_new)))
        if abs(lam_new - lam) <= rtol * max(abs(lam_new), 1e-300):
            lam = lam_new
            break
        v, lam = v_new, lam_new
    return float(np.sqrt(max(lam, 0.0)))


def op_norm_batch(a, rtol: float = 1e-10, max_iter: int = 10_000) -> np.ndarray:
    """Vectorised :func:`op_norm` over a stack of matrices."""
    m = as_matrix(a)
    batch = m.shape[:-2]
    n = m.shape[-1]
    m = m.reshape((-1, n, n))
    g = np.conj(np.swapaxes(m, -1, -2)) @ m
    v = np.full((len(m), n), 1 / np.sqrt(n), dtype=complex)
    # start vectors annihilated by g restart on g's largest column
    w = np.einsum("bij,bj->bi", g, v)
    dead = np.linalg.norm(w, axis=1) == 0
    if np.any(dead):
        cols = np.argmax(np.linalg.norm(g[dead], axis=1), axis=1)
        v[dead] = 0
        v[np.flatnonzero(dead), cols] = 1
    lam = np.zeros(len(m))
    active = np.ones(len(m), dtype=bool)
    for _ in range(max_iter):
        w = np.einsum("bij,bj->bi", g[active], v[active])
        nw = np.linalg.norm(w, axis=1)
        zero = nw == 0
        v_new = w / np.where(zero, 1.0, nw)[:, None]
        lam_new = np.real(np.einsum("bi,bi->b", np.conj(v_new),
                                    np.einsum("bij,bj->bi", g[active], v_new)))
        lam_new[zero] = 0.0
        done = zero | (np.abs(lam_new - lam[active]) <= rtol * np.maximum(np.abs(lam_new), 1e-300))
        idx = np.flatnonzero(active)
        lam[idx] = lam_new
        v[idx] = v_new
        active[idx[done]] = False
        if not np.any(active):
            break
    return np.sqrt(np.maximum(lam, 0.0)).reshape(batch)


def op_norm_2x2(m: np.ndarray) -> np.ndarray:
    """Closed-form largest singular value for a stack of 2x2 matrices."""
    fro = np.sum(np.abs(m) ** 2, axis=(-1, -2))
    d = np.abs(m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0])
    disc = np.maximum(fro * fro - 4.0 * d * d, 0.0)
    return np.sqrt(np.maximum(0.5 * (fro + np.sqrt(disc)), 0.0))


def _sphere_coords(x) -> tuple[complex, float]:
    if hasattr(x, "alpha") and hasattr(x, "t"):
        return complex(x.alpha), float(x.t)
    alpha, t = x
    return complex(alpha), float(t)


def h_matrix(x, tol: float = DEFAULT.point) -> np.ndarray:
    """The reflection matrix [[t, conj(alpha)], [alpha, -t]] of a sphere point."""
    alpha, t = _sphere_coords(x)
    r = abs(alpha) ** 2 + t * t
    if abs(r - 1.0) > tol:
        raise OffSphereError(f"|alpha|^2 + t^2 = {r!r} is not 1")
    return np.array([[t, np.conj(alpha)], [alpha, -t]], dtype=complex)


def h_batch(xyz: np.ndarray) -> np.ndarray:
    """Vectorised ``h`` on real coordinates (Re alpha, Im alpha, t); no checks."""
    xyz = np.asarray(xyz, dtype=float)
    alpha = xyz[..., 0] + 1j * xyz[..., 1]
    t = xyz[..., 2].astype(complex)
    out = np.empty(xyz.shape[:-1] + (2, 2), dtype=complex)
    out[..., 0, 0] = t
    out[..., 0, 1] = np.conj(alpha)
    out[..., 1, 0] = alpha
    out[..., 1, 1] = -t
    return out


def spectral_projections(x, tol: float = DEFAULT.point) -> tuple[np.ndarray, np.ndarray]:
    """Return ``((I + h(x))/2, (I - h(x))/2)``.

    The second projection is formed as ``I - P`` so the pair sums to the
    identity bit for bit.
    """
    h = h_matrix(x, tol)
    eye = np.eye(2, dtype=complex)
    p = (eye + h) / 2
    return p, eye - p


def is_unitary(a, tol: float = DEFAULT.unitary) -> bool:
    m = as_matrix(a)
    return op_norm(adjoint(m) @ m - np.eye(m.shape[-1])) <= tol


def is_projection(a, tol: float = DEFAULT.proj) -> bool:
    m = as_matrix(a)
    return op_norm(m @ m - m) <= tol and op_norm(adjoint(m) - m) <= tol
