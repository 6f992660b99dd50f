"""Uniform hypergraphs, packing instances and perfect-packing reductions."""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from lllkit.errors import DomainError, ParseError, SizeLimitError
from lllkit.injection import Matching, canonical_event_probability
from lllkit.lll import E, EInterval, Verdict, compare_with_e
from lllkit.textio import tokens, to_int


@dataclass(frozen=True)
class Hypergraph:
    """``r``-uniform hypergraph on vertices ``1..vertex_count``."""

    vertex_count: int
    r: int
    edges: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        if self.r < 1:
            raise DomainError("edge size r must be positive")
        if self.vertex_count < 0:
            raise DomainError("vertex count must be non-negative")
        norm = []
        for e in self.edges:
            e = tuple(sorted(int(v) for v in e))
            if len(e) != self.r or len(set(e)) != self.r:
                raise DomainError(f"edge {e} does not have {self.r} distinct vertices")
            if e[0] < 1 or e[-1] > self.vertex_count:
                raise DomainError(f"edge {e} leaves [1, {self.vertex_count}]")
            norm.append(e)
        if len(set(norm)) != len(norm):
            raise DomainError("duplicate edge")
        object.__setattr__(self, "edges", tuple(norm))

    @classmethod
    def complete(cls, n: int, r: int) -> Hypergraph:
        return cls(n, r, tuple(itertools.combinations(range(1, n + 1), r)))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def degrees(self) -> list[int]:
        deg = [0] * (self.vertex_count + 1)
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return deg[1:]

    @property
    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    def edge_intersection_degree(self, edge: Sequence[int]) -> int:
        """Number of other edges meeting ``edge``."""
        f = set(edge)
        key = tuple(sorted(edge))
        return sum(1 for e in self.edges if e != key and f.intersection(e))

    @property
    def intersection_degree(self) -> int:
        """Max over edges of :meth:`edge_intersection_degree` (0 if edgeless)."""
        return max((self.edge_intersection_degree(e) for e in self.edges), default=0)

    def complement(self) -> Hypergraph:
        present = set(self.edges)
        missing = (e for e in itertools.combinations(range(1, self.vertex_count + 1), self.r) if e not in present)
        return Hypergraph(self.vertex_count, self.r, tuple(missing))

    def to_text(self) -> str:
        lines = [f"{self.vertex_count} {self.r}"]
        lines += [" ".join(map(str, e)) for e in self.edges]
        return "\n".join(lines) + "\n"


def parse_hypergraph(text: str, source: str = "<hypergraph>") -> Hypergraph:
    """Parse ``n r`` followed by one edge of ``r`` 1-based vertices per line."""
    lines = list(tokens(text))
    if not lines:
        raise ParseError("empty input; expected a header line 'n r'", 1, 1, source)
    lineno, head = lines[0]
    if len(head) != 2:
        raise ParseError("header must be 'n r'", lineno, head[0][0], source)
    n, r = (to_int(t, lineno, source) for t in head)
    if n < 0 or r < 1:
        raise ParseError("need n >= 0 and r >= 1", lineno, 1, source)
    edges: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    for lineno, toks in lines[1:]:
        if len(toks) != r:
            raise ParseError(f"edge has {len(toks)} vertices, expected {r}", lineno, toks[0][0], source)
        verts = []
        for tok in toks:
            v = to_int(tok, lineno, source)
            if not 1 <= v <= n:
                raise ParseError(f"vertex {v} outside 1..{n}", lineno, tok[0], source)
            verts.append(v)
        e = tuple(sorted(verts))
        if len(set(e)) != r:
            raise ParseError("repeated vertex in edge", lineno, toks[0][0], source)
        if e in seen:
            raise ParseError(f"duplicate edge {e}", lineno, toks[0][0], source)
        seen.add(e)
        edges.append(e)
    return Hypergraph(n, r, tuple(edges))


def _same_r(a: Hypergraph, b: Hypergraph) -> None:
    if a.r != b.r:
        raise DomainError(f"uniformity differs: r={a.r} vs r={b.r}")


def packing_lhs(H1: Hypergraph, H2: Hypergraph) -> int:
    """``(d1 + 1) m2 + (d2 + 1) m1``."""
    return (H1.intersection_degree + 1) * H2.edge_count + (H2.intersection_degree + 1) * H1.edge_count


def theorem41_condition(H1: Hypergraph, H2: Hypergraph, n: int, e: EInterval = E) -> Verdict:
    """Three-valued test of ``(d1+1) m2 + (d2+1) m1 < C(n, r) / e``."""
    _same_r(H1, H2)
    if H2.vertex_count > n or H1.vertex_count > n:
        raise DomainError(f"hypergraphs on {H1.vertex_count} and {H2.vertex_count} vertices do not fit in K_{n}")
    return compare_with_e(Fraction(packing_lhs(H1, H2)), Fraction(comb(n, H1.r)), e, strict=True)


@dataclass(frozen=True)
class PackingInstance:
    H1: Hypergraph
    H2: Hypergraph
    n: int
    event_matchings: tuple[Matching, ...] = field(repr=False)
    m1: int
    m2: int
    d1: int
    d2: int

    @property
    def r(self) -> int:
        return self.H1.r

    @property
    def ambient(self) -> tuple[int, int]:
        return (self.H1.vertex_count, self.n)

    @property
    def event_probability(self) -> Fraction:
        """``1 / (r! C(n, r))``, the probability of every event in the family."""
        return canonical_event_probability(self.H1.vertex_count, self.n, self.r)

    @property
    def degree_bound(self) -> int:
        """``r! [(d1+1) m2 + (d2+1) m1] - 1``."""
        return factorial(self.r) * ((self.d1 + 1) * self.m2 + (self.d2 + 1) * self.m1) - 1


def packing_events(H1: Hypergraph, H2: Hypergraph, n: int) -> Iterable[Matching]:
    """Every ``(F1, F2, φ)`` with ``φ: F1 -> F2`` a bijection, in lexicographic order."""
    ambient = (H1.vertex_count, n)
    for f1 in H1.edges:
        for f2 in H2.edges:
            for image in itertools.permutations(f2):
                yield Matching(tuple(zip(f1, image)), ambient)


def build_packing_instance(H1: Hypergraph, H2: Hypergraph, n: int, max_events: int | None = None) -> PackingInstance:
    _same_r(H1, H2)
    if H2.vertex_count > n or H1.vertex_count > n:
        raise DomainError(f"hypergraphs on {H1.vertex_count} and {H2.vertex_count} vertices do not fit in K_{n}")
    count = H1.edge_count * H2.edge_count * factorial(H1.r)
    if max_events is not None and count > max_events:
        raise SizeLimitError("packing event family", count, max_events)
    return PackingInstance(
        H1,
        H2,
        n,
        tuple(packing_events(H1, H2, n)),
        H1.edge_count,
        H2.edge_count,
        H1.intersection_degree,
        H2.intersection_degree,
    )


def verify_packing(H1: Hypergraph, H2: Hypergraph, sigma: Sequence[int], n: int | None = None) -> bool:
    """True iff no image ``σ(F1)`` of an edge of ``H1`` is an edge of ``H2``."""
    n = H2.vertex_count if n is None else n
    sigma = [int(v) for v in sigma]
    if len(sigma) != H1.vertex_count:
        raise DomainError(f"σ has {len(sigma)} entries, H1 has {H1.vertex_count} vertices")
    if len(set(sigma)) != len(sigma):
        raise DomainError("σ is not injective")
    if any(not 1 <= v <= n for v in sigma):
        raise DomainError(f"σ leaves [1, {n}]")
    host = set(H2.edges)
    return not any(tuple(sorted(sigma[v - 1] for v in e)) in host for e in H1.edges)


def perfect_packing_reduction(G: Hypergraph, H: Hypergraph) -> tuple[Hypergraph, Hypergraph, int]:
    """``H1`` = ``n/s`` disjoint copies of ``G``; ``H2`` = complement of ``H``."""
    _same_r(G, H)
    s, n = G.vertex_count, H.vertex_count
    if s == 0 or n % s:
        raise DomainError(f"|V(G)| = {s} does not divide |V(H)| = {n}")
    copies = tuple(tuple(c * s + v for v in e) for c in range(n // s) for e in G.edges)
    return Hypergraph(n, G.r, copies), H.complement(), n


@dataclass(frozen=True)
class Theorem42Result:
    verdict: Verdict
    x: Fraction
    density: Fraction  # d + 1 + r^2 m / s

    def threshold(self, e: EInterval = E) -> tuple[Fraction, Fraction]:
        """Rational enclosure of ``1 / (e (d + 1 + r^2 m / s))``."""
        return 1 / (e.upper * self.density), 1 / (e.lower * self.density)


def minimal_x(H: Hypergraph) -> Fraction:
    """Smallest ``x`` with every degree of ``H`` at least ``(1 - x) C(n-1, r-1)``."""
    full = comb(H.vertex_count - 1, H.r - 1)
    if full == 0:
        return Fraction(0)
    return max(Fraction(0), 1 - Fraction(H.min_degree, full))


def theorem42_condition(G: Hypergraph, H: Hypergraph, x=None, e: EInterval = E) -> Theorem42Result:
    """Three-valued test of ``x < 1 / (e (d + 1 + r^2 m / s))``."""
    _same_r(G, H)
    s, n = G.vertex_count, H.vertex_count
    if s == 0 or n % s:
        raise DomainError(f"|V(G)| = {s} does not divide |V(H)| = {n}")
    least = minimal_x(H)
    if x is None:
        x = least
    else:
        x = Fraction(x)
        if x < least:
            raise DomainError(f"x = {x} is below the degree-implied minimum {least}")
    density = G.intersection_degree + 1 + Fraction(G.r**2 * G.edge_count, s)
    return Theorem42Result(compare_with_e(x * density, Fraction(1), e, strict=True), x, density)


@dataclass(frozen=True)
class CorollaryVerdicts:
    """``None`` marks a corollary that does not apply to the hypergraph."""

    perfect_matching_hypergraph: Verdict | None
    perfect_matching_graph: Verdict | None


def corollary_conditions(H: Hypergraph, e: EInterval = E) -> CorollaryVerdicts:
    """Minimum-degree thresholds for a perfect matching.

    Hypergraph form (needs ``r | n``): degree >= ``(1 - 1/(e(1+r))) C(n-1, r-1)``.
    Graph form (needs ``r = 2`` and even ``n``): degree >= ``(3e-1)(n-1)/(3e)``.
    """
    n, r = H.vertex_count, H.r
    full = comb(n - 1, r - 1) if n else 0
    deficit = full - H.min_degree
    general = None
    if n and n % r == 0:
        # deg >= C - C/(e(1+r))  <=>  e (1+r)(C - deg) <= C
        general = compare_with_e(Fraction((1 + r) * deficit), Fraction(full), e)
    graph = None
    if r == 2 and n and n % 2 == 0:
        # deg >= (3e-1)(n-1)/(3e)  <=>  e * 3 (n-1-deg) <= n-1
        graph = compare_with_e(Fraction(3 * deficit), Fraction(n - 1), e)
    return CorollaryVerdicts(general, graph)


def degree_threshold_graph(n: int, e: EInterval = E) -> tuple[Fraction, Fraction]:
    """Enclosure of ``(3e-1)(n-1)/(3e)``; increasing in ``e``."""
    f = lambda ev: (3 * ev - 1) * (n - 1) / (3 * ev)  # noqa: E731
    return f(e.lower), f(e.upper)


def find_copy(G: Hypergraph, H: Hypergraph, piece: Sequence[int], cap: int = 8) -> dict[int, int] | None:
    """Brute-force a bijection ``V(G) -> piece`` sending every edge of ``G`` onto an edge of ``H``."""
    if len(piece) != G.vertex_count:
        return None
    if G.vertex_count > cap:
        raise SizeLimitError("isomorphism search", G.vertex_count, cap)
    host = set(H.edges)
    for image in itertools.permutations(piece):
        if all(tuple(sorted(image[v - 1] for v in e)) in host for e in G.edges):
            return {v + 1: image[v] for v in range(G.vertex_count)}
    return None


def partition_from_packing(G: Hypergraph, H: Hypergraph, sigma: Sequence[int]) -> list[tuple[int, ...]]:
    """Vertex classes of ``H`` occupied by the disjoint copies of ``G`` under ``σ``."""
    s = G.vertex_count
    copies = H.vertex_count // s
    return [tuple(sorted(int(sigma[c * s + v]) for v in range(s))) for c in range(copies)]


def is_perfect_packing(G: Hypergraph, H: Hypergraph, pieces: Sequence[Sequence[int]]) -> bool:
    """Check that ``pieces`` partition ``V(H)`` and each carries a copy of ``G``."""
    flat = sorted(v for p in pieces for v in p)
    if flat != list(range(1, H.vertex_count + 1)):
        return False
    return all(find_copy(G, H, list(p)) is not None for p in pieces)
