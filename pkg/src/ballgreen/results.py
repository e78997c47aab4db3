"""Verification records shared by the check registry, the Riesz bound and the CLI."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any


@dataclass
class CheckResult:
    name: str
    dimension: int
    computed: Any
    expected: Any
    provenance: str
    abs_error: float
    rel_error: float
    tolerance: float
    passed: bool
    metric: str = "abs"
    runtime_ms: int = 0
    spec_echo: dict = field(default_factory=dict)
    detail: dict = field(default_factory=dict)

    @classmethod
    def compare(cls, name, dimension, computed, expected, tolerance, provenance,
                metric="rel", **extra):
        computed = float(computed)
        expected = float(expected)
        abs_error = abs(computed - expected)
        rel_error = abs_error / abs(expected) if expected != 0 else abs_error
        err = rel_error if metric == "rel" else abs_error
        return cls(name, dimension, computed, expected, provenance, abs_error, rel_error,
                   tolerance, bool(err <= tolerance), metric, **extra)

    @classmethod
    def predicate(cls, name, dimension, ok, provenance, worst=0.0, tolerance=0.0, **extra):
        """A yes/no check whose 'error' is the worst observed violation (0 when satisfied)."""
        return cls(name, dimension, bool(ok), True, provenance, float(worst), float(worst),
                   tolerance, bool(ok), "violation", **extra)

    def to_dict(self) -> dict:
        d = asdict(self)
        for k in ("abs_error", "rel_error"):
            if isinstance(d[k], float) and not math.isfinite(d[k]):
                d[k] = None
        return d
