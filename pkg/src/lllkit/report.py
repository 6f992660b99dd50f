"""Machine-readable CLI reports.

Schema (JSON object, keys in this order)::

    command      str
    inputs       object   parsed parameters
    verdicts     array    {"name": str, "value": ...[, "approx": float]}
    certificate  array|null   witness injection, 1-based
    stats        object   search counters ("elapsed" only with --timing)

Rationals are strings ``"num/den"`` in lowest terms; three-valued verdicts are
``"holds"``, ``"fails"`` or ``"indeterminate"``.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


def render_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _plain(value: Any) -> Any:
    if isinstance(value, Fraction):
        return render_rational(value)
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if hasattr(value, "item") and callable(value.item):  # numpy scalars
        return value.item()
    return value


@dataclass
class Report:
    command: str
    inputs: dict[str, Any] = field(default_factory=dict)
    verdicts: list[dict[str, Any]] = field(default_factory=list)
    certificate: list[int] | None = None
    stats: dict[str, Any] = field(default_factory=dict)
    with_float: bool = False

    def add(self, name: str, value: Any) -> None:
        entry = {"name": name, "value": _plain(value)}
        if self.with_float and isinstance(value, Fraction):
            entry["approx"] = float(value)
        self.verdicts.append(entry)

    def get(self, name: str) -> Any:
        for entry in self.verdicts:
            if entry["name"] == name:
                return entry["value"]
        raise KeyError(name)

    def to_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "inputs": _plain(self.inputs),
            "verdicts": self.verdicts,
            "certificate": None if self.certificate is None else [int(v) for v in self.certificate],
            "stats": _plain(self.stats),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"
