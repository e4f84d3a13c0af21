"""Structured pass/fail records for numerical identity checks."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Check:
    """One residual compared against a tolerance; passes iff residual <= tolerance."""

    name: str
    residual: float
    tolerance: float
    params: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)

    def to_json(self) -> dict:
        return {
            "check": self.name,
            "passed": self.passed,
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "params": _plain(self.params),
        }


@dataclass
class VerificationReport:
    suite: str
    checks: list[Check] = field(default_factory=list)
    wall_time: float = 0.0
    info: dict = field(default_factory=dict)

    def add(self, name: str, residual: float, tolerance: float, **params: Any) -> Check:
        c = Check(name, float(residual), float(tolerance), params)
        self.checks.append(c)
        return c

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.residual, c.tolerance, c.params))
        self.info.update(other.info)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def names(self) -> list[str]:
        return [c.name for c in self.checks]

    def to_json(self, include_time: bool = True) -> dict:
        out = {
            "suite": self.suite,
            "passed": self.passed,
            "checks": [c.to_json() for c in sorted(self.checks, key=lambda c: c.name)],
        }
        if self.info:
            out["info"] = _plain(self.info)
        if include_time:
            out["wall_time"] = self.wall_time
        return out

    def dumps(self, include_time: bool = True) -> str:
        return json.dumps(self.to_json(include_time), indent=2, sort_keys=True)

    def summary(self) -> str:
        lines = []
        for c in sorted(self.checks, key=lambda c: c.name):
            flag = "PASS" if c.passed else "FAIL"
            lines.append(f"[{flag}] {self.suite}/{c.name}: residual={c.residual:.3e} tol={c.tolerance:.1e}")
        return "\n".join(lines)


class timed:
    """Context manager that stores elapsed seconds on a report."""

    def __init__(self, report: VerificationReport):
        self.report = report

    def __enter__(self) -> VerificationReport:
        self._t0 = time.perf_counter()
        return self.report

    def __exit__(self, *exc) -> None:
        self.report.wall_time = time.perf_counter() - self._t0


def _plain(obj: Any) -> Any:
    """Convert numpy scalars/arrays inside params to JSON-friendly values."""
    import numpy as np

    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj
