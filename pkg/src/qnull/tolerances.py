"""Default numerical tolerances shared by every module."""

from __future__ import annotations

import os
from dataclasses import dataclass, asdict

#: Largest eval_metric step any certificate may declare between neighbours.
MESH_CEILING = 0.2


@dataclass(frozen=True)
class Tolerances:
    point: float = 1e-9
    proj: float = 1e-10
    unitary: float = 1e-10
    verify: float = 1e-9
    mesh: float = 0.15

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT = Tolerances()


def default_verify_tol() -> float:
    """Verification tolerance, overridable through ``QNULL_DEFAULT_TOL``."""
    raw = os.environ.get("QNULL_DEFAULT_TOL")
    if raw is None:
        return DEFAULT.verify
    return float(raw)
