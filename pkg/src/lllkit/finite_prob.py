"""Exact uniform probability on enumerated spaces of injections.

A :class:`SampleSpace` lists every injection ``[m] -> [n]`` in lexicographic
order; an :class:`Event` is a boolean mask over that list. All probabilities
are :class:`fractions.Fraction`.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Sequence
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, perm

import numpy as np

from lllkit import kernels
from lllkit.config import limits
from lllkit.errors import DomainError, NullConditioningError, SizeLimitError

Rational = Fraction


def injection_count(m: int, n: int) -> int:
    """``C(n, m) * m!``, the number of injections from an m-set to an n-set."""
    if m > n:
        return 0
    return comb(n, m) * factorial(m)


class SampleSpace:
    """All injections ``[m] -> [n]`` with the uniform measure.

    ``outcomes[w, i - 1]`` is the image of domain point ``i`` under outcome
    ``w``; images are 1-based.
    """

    __slots__ = ("m", "n", "outcomes", "_index")

    def __init__(self, m: int, n: int, outcomes: np.ndarray) -> None:
        outcomes.setflags(write=False)
        self.m = m
        self.n = n
        self.outcomes = outcomes
        self._index: dict[tuple[int, ...], int] | None = None

    def __len__(self) -> int:
        return self.outcomes.shape[0]

    @property
    def size(self) -> int:
        return self.outcomes.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SampleSpace):
            return NotImplemented
        return (self.m, self.n) == (other.m, other.n)

    def __hash__(self) -> int:
        return hash((SampleSpace, self.m, self.n))

    def __repr__(self) -> str:
        return f"SampleSpace(m={self.m}, n={self.n}, size={self.size})"

    def outcome(self, index: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.outcomes[index])

    def index_of(self, injection: Sequence[int]) -> int:
        if self._index is None:
            self._index = {tuple(int(v) for v in row): w for w, row in enumerate(self.outcomes)}
        try:
            return self._index[tuple(int(v) for v in injection)]
        except KeyError:
            raise DomainError(f"{tuple(injection)} is not an injection [{self.m}] -> [{self.n}]") from None

    # event constructors

    def event(self, mask: np.ndarray | Iterable[bool]) -> Event:
        return Event(self, np.asarray(mask, dtype=bool))

    def full(self) -> Event:
        return Event(self, np.ones(self.size, dtype=bool))

    def empty(self) -> Event:
        return Event(self, np.zeros(self.size, dtype=bool))

    def from_indices(self, indices: Iterable[int]) -> Event:
        mask = np.zeros(self.size, dtype=bool)
        idx = np.fromiter(indices, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= self.size):
            raise DomainError("outcome index out of range")
        mask[idx] = True
        return Event(self, mask)

    def where(self, predicate: Callable[[tuple[int, ...]], bool]) -> Event:
        """Brute-force event: outcomes (as 1-based tuples) satisfying ``predicate``."""
        return Event(self, np.fromiter((bool(predicate(self.outcome(w))) for w in range(self.size)), dtype=bool, count=self.size))


class Event:
    """Subset of a sample space, stored as a read-only boolean mask."""

    __slots__ = ("space", "mask")

    def __init__(self, space: SampleSpace, mask: np.ndarray) -> None:
        if mask.shape != (space.size,):
            raise DomainError(f"mask of shape {mask.shape} does not fit a space of {space.size} outcomes")
        mask = np.array(mask, dtype=bool, copy=True)
        mask.setflags(write=False)
        self.space = space
        self.mask = mask

    def _same(self, other: Event) -> None:
        if self.space != other.space:
            raise DomainError("events belong to different sample spaces")

    def __and__(self, other: Event) -> Event:
        self._same(other)
        return Event(self.space, self.mask & other.mask)

    def __or__(self, other: Event) -> Event:
        self._same(other)
        return Event(self.space, self.mask | other.mask)

    def __sub__(self, other: Event) -> Event:
        self._same(other)
        return Event(self.space, self.mask & ~other.mask)

    def __invert__(self) -> Event:
        return Event(self.space, ~self.mask)

    complement = __invert__

    def __len__(self) -> int:
        return int(np.count_nonzero(self.mask))

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.mask))

    def members(self) -> list[int]:
        return np.flatnonzero(self.mask).tolist()

    def __contains__(self, index: int) -> bool:
        return bool(self.mask[index])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Event):
            return NotImplemented
        return self.space == other.space and bool(np.array_equal(self.mask, other.mask))

    def __hash__(self) -> int:
        return hash((self.space, np.packbits(self.mask).tobytes()))

    def __repr__(self) -> str:
        return f"Event({self.count}/{self.space.size} of {self.space!r})"


@lru_cache(maxsize=32)
def _build_space(m: int, n: int) -> SampleSpace:
    return SampleSpace(m, n, kernels.enumerate_injections(m, n))


def enumerate_injections(m: int, n: int, cap: int | None = None) -> SampleSpace:
    """Return the uniform space of all injections ``[m] -> [n]``.

    Raises :class:`SizeLimitError` when ``C(n,m)*m!`` exceeds ``cap``
    (default ``limits.enumeration_cap``).
    """
    if m < 1 or n < 1:
        raise DomainError(f"need 1 <= m <= n, got m={m}, n={n}")
    if m > n:
        raise DomainError(f"no injection from a {m}-set into a {n}-set")
    cap = limits.enumeration_cap if cap is None else cap
    required = perm(n, m)
    if required > cap:
        raise SizeLimitError(f"enumerating I([{m}],[{n}])", required, cap)
    return _build_space(m, n)


def _check(space: SampleSpace, *events: Event) -> None:
    for ev in events:
        if ev.space != space:
            raise DomainError(f"{ev!r} does not belong to {space!r}")


def probability(space: SampleSpace, event: Event) -> Fraction:
    _check(space, event)
    return Fraction(event.count, space.size)


def conditional(space: SampleSpace, a: Event, b: Event) -> Fraction:
    """``P(a | b)``; raises :class:`NullConditioningError` if ``P(b) = 0``."""
    _check(space, a, b)
    nb = b.count
    if nb == 0:
        raise NullConditioningError("conditioning event has probability zero")
    return Fraction(int(np.count_nonzero(a.mask & b.mask)), nb)


def intersection_counts(events: Sequence[Event]) -> np.ndarray:
    """``out[S] = |intersection of events in S|`` for every bitmask ``S``.

    Bit ``j`` of ``S`` stands for ``events[j]``; ``out[0]`` is the space size.
    """
    k = len(events)
    masks = np.stack([ev.mask for ev in events]) if k else np.zeros((0, 0), dtype=bool)
    codes = kernels.event_codes(masks)
    full = (1 << k) - 1
    # counts of outcomes by their exact membership code, reflected so that a
    # subset sum over complements becomes a superset sum
    hist = np.bincount(full ^ codes, minlength=1 << k)
    g = kernels.subset_sums(hist)
    return g[full ^ np.arange(1 << k)]


def is_mutually_independent(space: SampleSpace, events: Sequence[Event], cap: int | None = None) -> bool:
    """True iff every sub-family factorises: ``P(∩_S A) = Π_S P(A)``."""
    k = len(events)
    cap = limits.independence_events if cap is None else cap
    if k < 2:
        raise DomainError("mutual independence needs at least two events")
    if k > cap:
        raise SizeLimitError("independence test", k, cap)
    _check(space, *events)
    size = space.size
    inter = intersection_counts(events)
    singles = [int(inter[1 << j]) for j in range(k)]
    # prod[S] = Π_{j in S} |A_j|, compared against |∩_S A_j| * size^(|S|-1)
    prod = [1] * (1 << k)
    scale = [0] * (1 << k)
    for s in range(1, 1 << k):
        low = s & -s
        j = low.bit_length() - 1
        rest = s ^ low
        prod[s] = prod[rest] * singles[j]
        scale[s] = 1 if rest == 0 else scale[rest] * size
        if int(inter[s]) * scale[s] != prod[s]:
            return False
    return True
