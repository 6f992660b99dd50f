"""Matchings, canonical events and their conflict graph.

A matching ``(S, T, f)`` is a bijection between a set of domain points
``S ⊆ [m]`` and codomain points ``T ⊆ [n]``; its canonical event is the set
of injections extending ``f``. Two canonical events conflict exactly when
they are disjoint, and the conflict graph is a negative dependency graph
for any family of them.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from lllkit import kernels
from lllkit.errors import (
    DomainError,
    ImageMismatchError,
    NotInjectiveError,
    NotTotalError,
    SizeMismatchError,
)
from lllkit.finite_prob import Event, SampleSpace, injection_count
from lllkit.lll import Graph


@dataclass(frozen=True)
class Matching:
    """Partial bijection stored as ``(domain, image)`` pairs sorted by domain.

    ``ambient`` optionally pins the ``(m, n)`` the matching lives over.
    """

    pairs: tuple[tuple[int, int], ...]
    ambient: tuple[int, int] | None = None

    @property
    def S(self) -> frozenset[int]:
        return frozenset(u for u, _ in self.pairs)

    @property
    def T(self) -> frozenset[int]:
        return frozenset(v for _, v in self.pairs)

    @property
    def f(self) -> dict[int, int]:
        return dict(self.pairs)

    @property
    def inverse(self) -> dict[int, int]:
        return {v: u for u, v in self.pairs}

    def __len__(self) -> int:
        return len(self.pairs)

    def __str__(self) -> str:
        body = ", ".join(f"{u}->{v}" for u, v in self.pairs)
        return f"{{{body}}}"


def make_matching(S: Iterable[int], T: Iterable[int], f: Mapping[int, int], ambient: tuple[int, int] | None = None) -> Matching:
    """Validate ``(S, T, f)`` and return the corresponding :class:`Matching`."""
    S = set(S)
    T = set(T)
    f = {int(k): int(v) for k, v in dict(f).items()}
    if len(S) != len(T):
        raise SizeMismatchError(f"|S| = {len(S)} but |T| = {len(T)}")
    if set(f) != S:
        raise NotTotalError(f"f is defined on {sorted(f)} instead of S = {sorted(S)}")
    if len(set(f.values())) != len(f):
        raise NotInjectiveError(f"f is not injective: {f}")
    if set(f.values()) != T:
        raise ImageMismatchError(f"f has image {sorted(f.values())} instead of T = {sorted(T)}")
    if ambient is not None:
        m, n = ambient
        if any(not 1 <= u <= m for u in S) or any(not 1 <= v <= n for v in T):
            raise DomainError(f"matching {f} leaves [{m}] x [{n}]")
    return Matching(tuple(sorted(f.items())), None if ambient is None else (int(ambient[0]), int(ambient[1])))


def matching_from_pairs(pairs: Iterable[tuple[int, int]], ambient: tuple[int, int] | None = None) -> Matching:
    pairs = [(int(u), int(v)) for u, v in pairs]
    f = dict(pairs)
    if len(f) != len(pairs):
        raise NotInjectiveError(f"domain point repeated in {pairs}")
    return make_matching(f.keys(), (v for _, v in pairs), f, ambient)


@dataclass(frozen=True, eq=False)
class CanonicalEvent:
    matching: Matching
    space: SampleSpace
    realized: Event

    @property
    def probability(self) -> Fraction:
        return Fraction(self.realized.count, self.space.size)


def _arrays(matching: Matching) -> tuple[np.ndarray, np.ndarray]:
    dom = np.array([u - 1 for u, _ in matching.pairs], dtype=np.int64)
    img = np.array([v for _, v in matching.pairs], dtype=np.int64)
    return dom, img


def canonical_event(space: SampleSpace, matching: Matching) -> CanonicalEvent:
    """Materialise ``A_{S,T,f} = {σ : σ(i) = f(i) for i in S}`` on ``space``."""
    if matching.ambient is not None and matching.ambient != (space.m, space.n):
        raise DomainError(f"matching over {matching.ambient} used on I([{space.m}],[{space.n}])")
    for u, v in matching.pairs:
        if not (1 <= u <= space.m and 1 <= v <= space.n):
            raise DomainError(f"pair {u}->{v} outside [{space.m}] x [{space.n}]")
    dom, img = _arrays(matching)
    mask = kernels.extension_mask(space.outcomes, dom, img)
    event = Event(space, mask)
    r = len(matching)
    expected = injection_count(space.m - r, space.n - r)
    if event.count != expected:
        raise AssertionError(f"realised {event.count} outcomes, closed form gives {expected}")
    return CanonicalEvent(matching, space, event)


def _ambient_of(a: Matching, b: Matching) -> None:
    if a.ambient is not None and b.ambient is not None and a.ambient != b.ambient:
        raise DomainError(f"matchings over different ambient sets {a.ambient} and {b.ambient}")


def conflicts(m1: Matching, m2: Matching) -> bool:
    """True iff the matchings disagree on a shared domain or codomain point."""
    _ambient_of(m1, m2)
    if _clash(m1.pairs, m2.pairs):
        return True
    inv1 = sorted((v, u) for u, v in m1.pairs)
    inv2 = sorted((v, u) for u, v in m2.pairs)
    return _clash(inv1, inv2)


def _clash(a: Sequence[tuple[int, int]], b: Sequence[tuple[int, int]]) -> bool:
    # sorted merge on the key column
    i = j = 0
    while i < len(a) and j < len(b):
        ka, kb = a[i][0], b[j][0]
        if ka == kb:
            if a[i][1] != b[j][1]:
                return True
            i += 1
            j += 1
        elif ka < kb:
            i += 1
        else:
            j += 1
    return False


def _dense_tables(matchings: Sequence[Matching]) -> tuple[np.ndarray, np.ndarray]:
    m = max((u for mt in matchings for u, _ in mt.pairs), default=0)
    n = max((v for mt in matchings for _, v in mt.pairs), default=0)
    fwd = np.zeros((len(matchings), max(m, 1)), dtype=np.int64)
    inv = np.zeros((len(matchings), max(n, 1)), dtype=np.int64)
    for a, mt in enumerate(matchings):
        for u, v in mt.pairs:
            fwd[a, u - 1] = v
            inv[a, v - 1] = u
    return fwd, inv


def conflict_matrix(matchings: Sequence[Matching]) -> np.ndarray:
    """Boolean adjacency matrix of the conflict relation."""
    ambients = {mt.ambient for mt in matchings if mt.ambient is not None}
    if len(ambients) > 1:
        raise DomainError(f"matchings over different ambient sets {sorted(ambients)}")
    if not matchings:
        return np.zeros((0, 0), dtype=bool)
    fwd, inv = _dense_tables(matchings)
    return kernels.conflict_matrix(fwd, inv)


def conflict_graph(matchings: Sequence[Matching]) -> Graph:
    """Graph on ``1..len(matchings)`` joining every conflicting pair."""
    return Graph.from_adjacency(conflict_matrix(matchings)) if matchings else Graph(0)


def conflict_degrees(matchings: Sequence[Matching]) -> np.ndarray:
    if not matchings:
        return np.zeros(0, dtype=np.int64)
    return conflict_matrix(matchings).sum(axis=1)


def apply_permutation(rho: Sequence[int], matching: Matching) -> Matching:
    """``π_ρ``: compose the matching with a codomain permutation.

    ``rho[k - 1]`` is the image of codomain point ``k``.
    """
    rho = [int(v) for v in rho]
    n = len(rho)
    if sorted(rho) != list(range(1, n + 1)):
        raise DomainError(f"{rho} is not a permutation of [{n}]")
    if matching.ambient is not None and matching.ambient[1] != n:
        raise DomainError(f"permutation of [{n}] applied to a matching over {matching.ambient}")
    if any(v > n for _, v in matching.pairs):
        raise DomainError("matching image leaves the permuted set")
    return Matching(tuple((u, rho[v - 1]) for u, v in matching.pairs), matching.ambient)


def canonical_event_probability(m: int, n: int, r: int) -> Fraction:
    """Probability of a canonical event fixing ``r`` points in ``I([m],[n])``.

    Equals ``1 / (n (n-1) ... (n-r+1)) = 1 / (r! C(n, r))``.
    """
    if not 0 <= r <= m <= n:
        raise DomainError(f"need 0 <= r <= m <= n, got r={r}, m={m}, n={n}")
    return Fraction(injection_count(m - r, n - r), injection_count(m, n))


@dataclass(frozen=True)
class EventSpec:
    m: int
    n: int
    matchings: tuple[Matching, ...]
    edges: tuple[tuple[int, int], ...] | None


def parse_event_spec(text: str, source: str = "<events>") -> EventSpec:
    """Parse ``m n``, one ``r i1 j1 ... ir jr`` per matching, then an optional ``GRAPH`` section."""
    from lllkit.errors import MatchingError, ParseError
    from lllkit.textio import tokens, to_int

    lines = list(tokens(text))
    if not lines:
        raise ParseError("empty input; expected a header line 'm n'", 1, 1, source)
    lineno, head = lines[0]
    if len(head) != 2:
        raise ParseError("header must be 'm n'", lineno, head[0][0], source)
    m, n = (to_int(t, lineno, source) for t in head)
    if not 1 <= m <= n:
        raise ParseError(f"need 1 <= m <= n, got m={m}, n={n}", lineno, 1, source)
    matchings: list[Matching] = []
    edges: list[tuple[int, int]] | None = None
    for lineno, toks in lines[1:]:
        if toks[0][1].upper() == "GRAPH":
            if edges is not None:
                raise ParseError("second GRAPH section", lineno, toks[0][0], source)
            if len(toks) != 1:
                raise ParseError("GRAPH takes no arguments", lineno, toks[1][0], source)
            edges = []
            continue
        values = [to_int(t, lineno, source) for t in toks]
        if edges is not None:
            if len(values) != 2:
                raise ParseError("graph edges are pairs 'a b'", lineno, toks[0][0], source)
            edges.append((values[0], values[1]))
            continue
        r = values[0]
        if r < 0 or len(values) != 1 + 2 * r:
            raise ParseError(f"matching line must be 'r' followed by {max(r, 0)} pairs", lineno, toks[0][0], source)
        pairs = list(zip(values[1::2], values[2::2]))
        try:
            matchings.append(matching_from_pairs(pairs, (m, n)))
        except MatchingError as exc:
            raise ParseError(str(exc), lineno, toks[0][0], source) from None
    if edges is not None:
        for a, b in edges:
            if not (1 <= a <= len(matchings) and 1 <= b <= len(matchings)) or a == b:
                raise ParseError(f"graph edge ({a}, {b}) is not a pair of distinct events 1..{len(matchings)}", lines[-1][0], 1, source)
    return EventSpec(m, n, tuple(matchings), None if edges is None else tuple(edges))
