"""Runtime limits. Mutate ``limits`` or pass explicit caps per call."""

from __future__ import annotations

import os
from dataclasses import dataclass


@dataclass
class Limits:
    enumeration_cap: int = 10**7
    independence_events: int = 20
    ndg_events: int = 15
    max_restarts: int = 100
    max_steps: int = 10**5
    find_weights_iter: int = 10**4


limits = Limits(
    enumeration_cap=int(os.environ.get("LLLKIT_ENUMERATION_CAP", 10**7)),
)
