"""Uniform result object for the verification routines."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .errors import CheckFailed


@dataclass
class CheckReport:
    name: str
    passed: bool
    details: dict[str, Any] = field(default_factory=dict)
    status: str = ""

    def __post_init__(self) -> None:
        if not self.status:
            self.status = "pass" if self.passed else "fail"

    def require(self) -> CheckReport:
        if not self.passed:
            raise CheckFailed(f"{self.name} check failed: {self.details}")
        return self

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "status": self.status,
                "details": _jsonable(self.details)}


def _jsonable(x):
    """Recursively convert to JSON-friendly values; big integers become strings."""
    if isinstance(x, bool) or x is None or isinstance(x, (float, str)):
        return x
    if isinstance(x, int):
        return x if abs(x) < 2 ** 53 else str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "serialize"):
        return x.serialize()
    if hasattr(x, "item"):
        return _jsonable(x.item())
    return str(x)
