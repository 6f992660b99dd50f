"""Search for an injection avoiding a family of canonical events.

Two strategies share one result type. :func:`solve_exhaustive` scans the
enumerated space in lexicographic order and is exact. :func:`solve_randomized`
starts from a seeded uniform injection and repeatedly resamples the points of
the first violated forbidden matching, restarting after ``max_steps``
resamples. It never claims non-existence.

Randomness comes from SplitMix64 (see :class:`SplitMix64`) so a seed gives the
same certificate on every platform and on both kernel backends.
"""

from __future__ import annotations

import enum
import time
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from lllkit import kernels
from lllkit.config import limits
from lllkit.errors import DomainError
from lllkit.finite_prob import enumerate_injections
from lllkit.injection import Matching


class Mode(str, enum.Enum):
    EXHAUSTIVE = "exhaustive"
    RANDOMIZED = "randomized"


class SplitMix64:
    """SplitMix64: ``state += 0x9E3779B97F4A7C15`` then two xor-shift-multiply rounds.

    ``below(k)`` returns ``next() % k``.
    """

    def __init__(self, seed: int) -> None:
        self.state = seed & kernels.MASK64

    def next(self) -> int:
        self.state, z = kernels._splitmix_py(self.state)
        return z

    def below(self, k: int) -> int:
        return self.next() % k


@dataclass(frozen=True)
class AvoidanceProblem:
    m: int
    n: int
    forbidden: tuple[Matching, ...]
    mode: Mode = Mode.RANDOMIZED

    def __post_init__(self) -> None:
        if not 1 <= self.m <= self.n:
            raise DomainError(f"need 1 <= m <= n, got m={self.m}, n={self.n}")
        object.__setattr__(self, "forbidden", tuple(self.forbidden))
        for mt in self.forbidden:
            if mt.ambient is not None and mt.ambient != (self.m, self.n):
                raise DomainError(f"forbidden matching over {mt.ambient} in a problem over {(self.m, self.n)}")
            for u, v in mt.pairs:
                if not (1 <= u <= self.m and 1 <= v <= self.n):
                    raise DomainError(f"pair {u}->{v} outside [{self.m}] x [{self.n}]")

    def packed(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """CSR arrays ``(offsets, dom, img)``; ``dom`` is 0-based."""
        lengths = [len(mt) for mt in self.forbidden]
        offsets = np.zeros(len(lengths) + 1, dtype=np.int64)
        np.cumsum(lengths, out=offsets[1:])
        dom = np.array([u - 1 for mt in self.forbidden for u, _ in mt.pairs], dtype=np.int64)
        img = np.array([v for mt in self.forbidden for _, v in mt.pairs], dtype=np.int64)
        return offsets, dom, img


@dataclass(frozen=True)
class SearchStats:
    mode: str
    restarts: int = 0
    steps: int = 0
    final_restart_steps: int = 0
    outcomes_scanned: int = 0
    elapsed: float = field(default=0.0, compare=False)


@dataclass(frozen=True)
class Certificate:
    witness: tuple[int, ...]
    checked: bool
    stats: SearchStats


@dataclass(frozen=True)
class SearchResult:
    certificate: Certificate | None
    stats: SearchStats

    @property
    def found(self) -> bool:
        return self.certificate is not None

    def __bool__(self) -> bool:
        return self.found


def avoids_all(witness: Sequence[int], forbidden: Sequence[Matching], n: int | None = None) -> bool:
    """Independent check that ``witness`` is injective and extends no forbidden matching."""
    w = [int(v) for v in witness]
    if len(set(w)) != len(w):
        return False
    if n is not None and any(not 1 <= v <= n for v in w):
        return False
    for mt in forbidden:
        if all(u <= len(w) and w[u - 1] == v for u, v in mt.pairs):
            return False
    return True


def _certify(problem: AvoidanceProblem, witness: Sequence[int], stats: SearchStats) -> Certificate:
    witness = tuple(int(v) for v in witness)
    if not avoids_all(witness, problem.forbidden, problem.n):
        raise AssertionError(f"search returned {witness}, which violates a forbidden matching")
    return Certificate(witness, True, stats)


def solve_exhaustive(problem: AvoidanceProblem, cap: int | None = None) -> SearchResult:
    """Lexicographically first avoiding injection, or no certificate if none exists."""
    start = time.perf_counter()
    space = enumerate_injections(problem.m, problem.n, cap)
    hit = np.zeros(space.size, dtype=bool)
    for mt in problem.forbidden:
        dom = np.array([u - 1 for u, _ in mt.pairs], dtype=np.int64)
        img = np.array([v for _, v in mt.pairs], dtype=np.int64)
        hit |= kernels.extension_mask(space.outcomes, dom, img)
    free = np.flatnonzero(~hit)
    scanned = int(free[0]) + 1 if free.size else space.size
    stats = SearchStats(Mode.EXHAUSTIVE.value, outcomes_scanned=scanned, elapsed=time.perf_counter() - start)
    if not free.size:
        return SearchResult(None, stats)
    return SearchResult(_certify(problem, space.outcome(int(free[0])), stats), stats)


def solve_randomized(
    problem: AvoidanceProblem,
    seed: int = 0,
    max_restarts: int | None = None,
    max_steps: int | None = None,
    random_select: bool = False,
) -> SearchResult:
    """Seeded restart-and-resample search.

    Each step picks the first violated forbidden matching (or a uniformly
    random one with ``random_select``) and redraws the image of each of its
    domain points: a swap with another position for permutations, a swap
    with an unused codomain value for proper injections.
    """
    max_restarts = limits.max_restarts if max_restarts is None else max_restarts
    max_steps = limits.max_steps if max_steps is None else max_steps
    if max_restarts < 0 or max_steps < 0:
        raise DomainError("budgets must be non-negative")
    start = time.perf_counter()
    offsets, dom, img = problem.packed()
    found, witness, restart, total, last = kernels.search(
        problem.m, problem.n, offsets, dom, img, int(seed), int(max_restarts), int(max_steps), bool(random_select)
    )
    stats = SearchStats(
        Mode.RANDOMIZED.value,
        restarts=restart,
        steps=total,
        final_restart_steps=last,
        elapsed=time.perf_counter() - start,
    )
    if not found:
        return SearchResult(None, stats)
    return SearchResult(_certify(problem, witness, stats), stats)


def solve(problem: AvoidanceProblem, seed: int = 0, **budgets) -> SearchResult:
    if problem.mode is Mode.EXHAUSTIVE:
        return solve_exhaustive(problem, budgets.get("cap"))
    return solve_randomized(problem, seed, **budgets)
