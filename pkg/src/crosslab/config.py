"""Numerical tolerances shared by every module."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

ENV_TOL = "CROSSLAB_TOL"


@dataclass(frozen=True)
class Tolerances:
    """Relative tolerances.

    ``pd`` multiplies ``||h||`` for the positive-definiteness cutoff, ``rank``
    multiplies the largest singular value when counting kernel dimensions,
    and ``identity`` is the per-dimension residual budget for identity checks.
    """

    pd: float = 1e-12
    rank: float = 1e-9
    identity: float = 1e-9
    hermitian: float = 1e-10

    def identity_tol(self, dim: int = 1) -> float:
        return self.identity * max(1, dim)

    def with_identity(self, value: float) -> "Tolerances":
        return replace(self, identity=float(value))


def default_tolerances() -> Tolerances:
    tol = Tolerances()
    raw = os.environ.get(ENV_TOL)
    if raw:
        tol = tol.with_identity(float(raw))
    return tol
