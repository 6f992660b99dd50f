"""Local lemma hypotheses, conclusions and dependency-graph checks."""

from __future__ import annotations

import enum
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from lllkit import kernels
from lllkit.config import limits
from lllkit.errors import DomainError, HypothesisError, SizeLimitError
from lllkit.finite_prob import Event, SampleSpace


class Verdict(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INDETERMINATE = "indeterminate"

    def __str__(self) -> str:
        return self.value


def _e_series_bounds(terms: int = 30) -> tuple[Fraction, Fraction]:
    # sum_{k<terms} 1/k! < e < that sum + 2/terms!
    s = sum(Fraction(1, math.factorial(k)) for k in range(terms))
    return s, s + Fraction(2, math.factorial(terms))


@dataclass(frozen=True)
class EInterval:
    """Rational enclosure ``lower < e < upper`` of Euler's number."""

    lower: Fraction = Fraction(2718281828459045, 10**15)
    upper: Fraction = Fraction(2718281828459046, 10**15)

    def __post_init__(self) -> None:
        object.__setattr__(self, "lower", Fraction(self.lower))
        object.__setattr__(self, "upper", Fraction(self.upper))
        lo, hi = _e_series_bounds()
        if not (self.lower < lo and hi < self.upper):
            raise DomainError(f"[{self.lower}, {self.upper}] does not enclose e")
        if self.upper - self.lower > Fraction(1, 10**12):
            raise DomainError("e enclosure wider than 1e-12")


E = EInterval()


def compare_with_e(scale: Fraction, bound: Fraction, e: EInterval = E, strict: bool = False) -> Verdict:
    """Decide ``e * scale <= bound`` (``<`` if ``strict``) for ``scale >= 0``."""
    hi = e.upper * scale
    lo = e.lower * scale
    if (hi < bound) if strict else (hi <= bound):
        return Verdict.HOLDS
    if (lo >= bound) if strict else (lo > bound):
        return Verdict.FAILS
    return Verdict.INDETERMINATE


class Graph:
    """Simple undirected graph on vertices ``1..n``."""

    __slots__ = ("n", "_adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()) -> None:
        if n < 0:
            raise DomainError("vertex count must be non-negative")
        adj: list[set[int]] = [set() for _ in range(n + 1)]
        for a, b in edges:
            a, b = int(a), int(b)
            if a == b:
                raise DomainError(f"self-loop at {a}")
            if not (1 <= a <= n and 1 <= b <= n):
                raise DomainError(f"edge ({a}, {b}) outside [1, {n}]")
            adj[a].add(b)
            adj[b].add(a)
        self.n = n
        self._adj = tuple(frozenset(s) for s in adj)

    @classmethod
    def from_adjacency(cls, matrix: np.ndarray) -> Graph:
        a = np.asarray(matrix, dtype=bool)
        rows, cols = np.nonzero(np.triu(a, 1))
        return cls(a.shape[0], zip((rows + 1).tolist(), (cols + 1).tolist()))

    @classmethod
    def complete(cls, n: int) -> Graph:
        return cls(n, ((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)))

    def neighbors(self, i: int) -> frozenset[int]:
        return self._adj[i]

    def degree(self, i: int) -> int:
        return len(self._adj[i])

    @property
    def max_degree(self) -> int:
        return max((len(s) for s in self._adj[1:]), default=0)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return sorted((a, b) for a in range(1, self.n + 1) for b in self._adj[a] if a < b)

    def without_edges(self, drop: Iterable[tuple[int, int]]) -> Graph:
        gone = {tuple(sorted(e)) for e in drop}
        return Graph(self.n, (e for e in self.edges if e not in gone))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self.n, self._adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges})"


@dataclass(frozen=True)
class GraphVerdict:
    """Outcome of a graph-definition check.

    On failure, ``i`` and ``S`` (1-based, sorted) locate the first violation
    and ``lhs``/``rhs`` are the two sides of the failed inequality or
    equation.
    """

    holds: bool
    i: int | None = None
    S: tuple[int, ...] | None = None
    lhs: Fraction | None = None
    rhs: Fraction | None = None

    def __bool__(self) -> bool:
        return self.holds


def _masks(events: Sequence[Event], space: SampleSpace) -> np.ndarray:
    for ev in events:
        if ev.space != space:
            raise DomainError(f"{ev!r} does not belong to {space!r}")
    return np.stack([ev.mask for ev in events])


def _bits_to_tuple(bits: int, labels: Sequence[int]) -> tuple[int, ...]:
    return tuple(labels[b] for b in range(len(labels)) if bits >> b & 1)


def _restricted(codes: np.ndarray, members: Sequence[int]) -> np.ndarray:
    # re-pack the membership code onto the bits of ``members`` (0-based ids)
    out = np.zeros_like(codes)
    for b, j in enumerate(members):
        out |= ((codes >> j) & 1) << b
    return out


def _first_witness(bad: np.ndarray, labels: Sequence[int]) -> int:
    hits = np.flatnonzero(bad)
    return min(hits.tolist(), key=lambda s: _bits_to_tuple(s, labels))


def verify_negative_dependency_graph(
    space: SampleSpace, events: Sequence[Event], g: Graph, cap: int | None = None
) -> GraphVerdict:
    """Check ``P(A_i | ∩_{j in S} A_j^c) <= P(A_i)`` for all non-neighbour sets ``S``.

    ``S`` ranges over subsets of ``[n] \\ (J_i ∪ {i})`` with a conditioning
    event of positive probability. Exhaustive; cost is ``O(2^k k)`` per
    vertex where ``k`` is the number of non-neighbours.
    """
    n = len(events)
    cap = limits.ndg_events if cap is None else cap
    if n != g.n:
        raise DomainError(f"{n} events but the graph has {g.n} vertices")
    if n > cap:
        raise SizeLimitError("negative dependency graph check", n, cap)
    if n == 0:
        return GraphVerdict(True)
    codes = kernels.event_codes(_masks(events, space))
    size = space.size
    for i in range(1, n + 1):
        others = [j for j in range(1, n + 1) if j != i and j not in g.neighbors(i)]
        k = len(others)
        full = (1 << k) - 1
        rc = _restricted(codes, [j - 1 for j in others])
        in_a = (codes >> (i - 1)) & 1 == 1
        a_count = int(np.count_nonzero(in_a))
        # |∩_{S} A_j^c| = #outcomes whose restricted code avoids S
        zall = kernels.subset_sums(np.bincount(rc, minlength=1 << k))
        zin = kernels.subset_sums(np.bincount(rc[in_a], minlength=1 << k))
        subsets = np.arange(1 << k)
        cond = zall[full ^ subsets]
        joint = zin[full ^ subsets]
        bad = (cond > 0) & (joint * size > a_count * cond)
        if bad.any():
            s = _first_witness(bad, others)
            return GraphVerdict(
                False,
                i,
                _bits_to_tuple(s, others),
                Fraction(int(joint[s]), int(cond[s])),
                Fraction(a_count, size),
            )
    return GraphVerdict(True)


def verify_dependency_graph(
    space: SampleSpace, events: Sequence[Event], g: Graph, cap: int | None = None
) -> GraphVerdict:
    """Check that each ``A_i`` is independent of every Boolean combination of its non-neighbours.

    Intersections of non-neighbours form a pi-system generating their
    algebra, so it suffices that ``P(A_i ∩ B_S) = P(A_i) P(B_S)`` with
    ``B_S = ∩_{j in S} A_j`` for every non-neighbour set ``S``.
    """
    n = len(events)
    cap = limits.ndg_events if cap is None else cap
    if n != g.n:
        raise DomainError(f"{n} events but the graph has {g.n} vertices")
    if n > cap:
        raise SizeLimitError("dependency graph check", n, cap)
    if n == 0:
        return GraphVerdict(True)
    codes = kernels.event_codes(_masks(events, space))
    size = space.size
    for i in range(1, n + 1):
        others = [j for j in range(1, n + 1) if j != i and j not in g.neighbors(i)]
        k = len(others)
        full = (1 << k) - 1
        rc = _restricted(codes, [j - 1 for j in others])
        in_a = (codes >> (i - 1)) & 1 == 1
        a_count = int(np.count_nonzero(in_a))
        # superset sums via reflected codes: sup[S] = #{w : code(w) ⊇ S}
        sup_all = kernels.subset_sums(np.bincount(full ^ rc, minlength=1 << k))
        sup_in = kernels.subset_sums(np.bincount(full ^ rc[in_a], minlength=1 << k))
        subsets = np.arange(1 << k)
        b_count = sup_all[full ^ subsets]
        joint = sup_in[full ^ subsets]
        bad = joint * size != a_count * b_count
        if bad.any():
            s = _first_witness(bad, others)
            b = int(b_count[s])
            return GraphVerdict(
                False,
                i,
                _bits_to_tuple(s, others),
                Fraction(int(joint[s]), size),
                Fraction(a_count, size) * Fraction(b, size),
            )
    return GraphVerdict(True)


@dataclass(frozen=True)
class LLLCheck:
    """Result of :func:`check_lll_condition`.

    ``bound`` is ``Π (1 - x_i)`` when every inequality holds; otherwise
    ``violation`` is the first failing (1-based) index.
    """

    bound: Fraction | None
    violation: int | None = None
    slack: tuple[Fraction, ...] = field(default=(), repr=False)

    @property
    def ok(self) -> bool:
        return self.violation is None

    def __bool__(self) -> bool:
        return self.ok


def _as_fractions(values: Iterable, name: str) -> list[Fraction]:
    out = []
    for v in values:
        try:
            out.append(Fraction(v))
        except (TypeError, ValueError) as exc:
            raise DomainError(f"{name}: cannot read {v!r} as a rational") from exc
    return out


def check_lll_condition(p: Sequence, g: Graph, x: Sequence) -> LLLCheck:
    """Exact test of ``p_i <= x_i Π_{j in J_i} (1 - x_j)`` for every ``i``."""
    p = _as_fractions(p, "p")
    x = _as_fractions(x, "x")
    if not (len(p) == len(x) == g.n):
        raise DomainError(f"lengths differ: |p|={len(p)}, |x|={len(x)}, graph has {g.n} vertices")
    for i, (pi, xi) in enumerate(zip(p, x), start=1):
        if not 0 <= pi <= 1:
            raise DomainError(f"p_{i} = {pi} is not a probability")
        if not 0 <= xi < 1:
            raise DomainError(f"x_{i} = {xi} is outside [0, 1)")
    slack = []
    for i in range(1, g.n + 1):
        rhs = x[i - 1]
        for j in g.neighbors(i):
            rhs *= 1 - x[j - 1]
        slack.append(rhs - p[i - 1])
        if p[i - 1] > rhs:
            return LLLCheck(None, i, tuple(slack))
    bound = Fraction(1)
    for xi in x:
        bound *= 1 - xi
    return LLLCheck(bound, None, tuple(slack))


def check_symmetric_condition(p, d: int, e: EInterval = E) -> Verdict:
    """Three-valued test of ``e p (d + 1) <= 1``."""
    p = Fraction(p)
    if not 0 <= p < 1:
        raise DomainError(f"p = {p} is outside [0, 1)")
    if d < 0:
        raise DomainError("degree must be non-negative")
    return compare_with_e(p * (d + 1), Fraction(1), e)


def uniform_weights(g: Graph, d: int | None = None, p=None) -> list[Fraction]:
    """Weights ``1/(d+1)`` for a degree bound ``d``.

    ``d = 0`` would give weight 1, outside ``[0, 1)``; then ``p`` (which must
    be given) is used instead, valid because every neighbourhood is empty.
    """
    d = g.max_degree if d is None else d
    if d == 0:
        if p is None:
            raise DomainError("degree bound 0 needs the probability bound p")
        return [Fraction(p)] * g.n
    return [Fraction(1, d + 1)] * g.n


_INFLATE = (1e-9, 1e-6, 1e-3)


def _fixed_point(p: np.ndarray, nbrs: list[np.ndarray], max_iter: int, tol: float) -> np.ndarray | None:
    x = p.copy()
    for _ in range(max_iter):
        log_keep = np.log1p(-x)
        nxt = np.array([pi / math.exp(log_keep[nb].sum()) for pi, nb in zip(p, nbrs)])
        if (nxt >= 1).any() or not np.isfinite(nxt).all():
            return None
        if np.max(np.abs(nxt - x), initial=0.0) < tol:
            return nxt
        x = nxt
    return None


def find_weights(p: Sequence, g: Graph, max_iter: int | None = None, tol: float = 1e-9) -> list[Fraction] | None:
    """Search for weights satisfying :func:`check_lll_condition`.

    Runs ``x <- p / Π_{J_i}(1 - x_j)`` from ``x = p`` on slightly inflated
    targets so the fixed point has room to spare, rounds to rationals and
    returns the first candidate that verifies exactly. ``None`` means no
    verified weights were found, not that none exist.
    """
    pf = _as_fractions(p, "p")
    if len(pf) != g.n:
        raise DomainError(f"{len(pf)} probabilities for {g.n} vertices")
    if any(not 0 <= v < 1 for v in pf):
        raise DomainError("find_weights needs every p_i in [0, 1)")
    max_iter = limits.find_weights_iter if max_iter is None else max_iter
    if all(v == 0 for v in pf):
        return [Fraction(0)] * g.n
    base = np.array([float(v) for v in pf])
    nbrs = [np.array(sorted(j - 1 for j in g.neighbors(i)), dtype=np.int64) for i in range(1, g.n + 1)]
    for eps in _INFLATE:
        target = np.where(base > 0, base * (1 + eps), 0.0)
        if (target >= 1).any():
            continue
        x = _fixed_point(target, nbrs, max_iter, tol)
        if x is None:
            continue
        cand = [Fraction(0) if pi == 0 else Fraction(float(v)).limit_denominator(10**15) for pi, v in zip(pf, x)]
        if any(c >= 1 for c in cand):
            continue
        if check_lll_condition(pf, g, cand).ok:
            return cand
    return None


@dataclass(frozen=True)
class ConclusionCheck:
    avoid_probability: Fraction
    bound: Fraction

    @property
    def holds(self) -> bool:
        return self.avoid_probability >= self.bound

    def __bool__(self) -> bool:
        return self.holds


def verify_lll_conclusion(space: SampleSpace, events: Sequence[Event], g: Graph, x: Sequence) -> ConclusionCheck:
    """Enforce both hypotheses, then compare ``P(∩ A_i^c)`` with ``Π (1 - x_i)``.

    Raises :class:`HypothesisError` naming the failed hypothesis.
    """
    ndg = verify_negative_dependency_graph(space, events, g)
    if not ndg:
        raise HypothesisError("negative-dependency-graph", f"violated at i={ndg.i}, S={ndg.S}: {ndg.lhs} > {ndg.rhs}")
    p = [Fraction(ev.count, space.size) for ev in events]
    check = check_lll_condition(p, g, x)
    if not check:
        raise HypothesisError("lll-condition", f"P(A_{check.violation}) exceeds x_i * prod(1 - x_j)")
    avoid = np.ones(space.size, dtype=bool)
    for ev in events:
        avoid &= ~ev.mask
    return ConclusionCheck(Fraction(int(np.count_nonzero(avoid)), space.size), check.bound)


@dataclass(frozen=True)
class LLLInput:
    p: tuple[Fraction, ...]
    edges: tuple[tuple[int, int], ...]
    x: tuple[Fraction, ...] | None

    @property
    def graph(self) -> Graph:
        return Graph(len(self.p), self.edges)


def parse_lll_input(text: str, source: str = "<lll>") -> LLLInput:
    """Parse keyword lines ``p v1 v2 ...``, ``edge a b`` and optional ``x v1 v2 ...``."""
    from lllkit.errors import ParseError
    from lllkit.textio import to_fraction, to_int, tokens

    p = x = None
    edges = []
    for lineno, toks in tokens(text):
        key = toks[0][1].lower()
        rest = toks[1:]
        if key in ("p", "x"):
            if (p if key == "p" else x) is not None:
                raise ParseError(f"'{key}' given twice", lineno, toks[0][0], source)
            vals = tuple(to_fraction(t, lineno, source) for t in rest)
            if key == "p":
                p = vals
            else:
                x = vals
        elif key == "edge":
            if len(rest) != 2:
                raise ParseError("edge lines are 'edge a b'", lineno, toks[0][0], source)
            edges.append((to_int(rest[0], lineno, source), to_int(rest[1], lineno, source)))
        else:
            raise ParseError(f"unknown keyword {toks[0][1]!r}; expected p, x or edge", lineno, toks[0][0], source)
    if p is None:
        raise ParseError("missing 'p' line", 1, 1, source)
    if x is not None and len(x) != len(p):
        raise ParseError(f"'x' has {len(x)} values but 'p' has {len(p)}", 1, 1, source)
    for a, b in edges:
        if a == b or not (1 <= a <= len(p) and 1 <= b <= len(p)):
            raise ParseError(f"edge ({a}, {b}) is not a pair of distinct vertices 1..{len(p)}", 1, 1, source)
    return LLLInput(p, tuple(edges), x)
