"""Latin transversals of integer matrices."""

from __future__ import annotations

from collections import Counter, defaultdict
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from lllkit.errors import DomainError, ParseError
from lllkit.injection import Matching
from lllkit.lll import E, EInterval, Verdict, compare_with_e
from lllkit.textio import tokens, to_int


@dataclass(frozen=True, eq=False)
class IntMatrix:
    """Square matrix of integer symbols; ``entries[i-1, j-1]`` is ``a_{i,j}``."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        a = np.array(self.entries, dtype=np.int64, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DomainError(f"matrix of shape {a.shape} is not square")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return int(self.entries[i - 1, j - 1])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IntMatrix) and np.array_equal(self.entries, other.entries)

    def to_text(self) -> str:
        rows = [" ".join(map(str, row)) for row in self.entries.tolist()]
        return "\n".join([str(self.n), *rows]) + "\n"


def parse_matrix(text: str, source: str = "<matrix>") -> IntMatrix:
    """Parse ``n`` followed by ``n`` rows of ``n`` integers."""
    lines = list(tokens(text))
    if not lines:
        raise ParseError("empty input; expected the dimension n", 1, 1, source)
    lineno, head = lines[0]
    if len(head) != 1:
        raise ParseError("first line must hold only n", lineno, head[-1][0], source)
    n = to_int(head[0], lineno, source)
    if n < 1:
        raise ParseError("n must be positive", lineno, head[0][0], source)
    body = lines[1:]
    if len(body) != n:
        where = body[n][0] if len(body) > n else (lines[-1][0] + 1)
        raise ParseError(f"expected {n} rows, found {len(body)}", where, 1, source)
    rows = []
    for lineno, toks in body:
        if len(toks) != n:
            col = toks[n][0] if len(toks) > n else toks[-1][0] + len(toks[-1][1])
            raise ParseError(f"row has {len(toks)} entries, expected {n}", lineno, col, source)
        rows.append([to_int(t, lineno, source) for t in toks])
    return IntMatrix(np.array(rows, dtype=np.int64))


def max_multiplicity(A: IntMatrix) -> int:
    """Largest number of cells sharing one symbol."""
    return max(Counter(A.entries.ravel().tolist()).values())


def theorem51_condition(n: int, k: int, e: EInterval = E) -> Verdict:
    """Three-valued test of ``k <= (n - 1) / (4e)``."""
    if n < 1 or k < 0:
        raise DomainError(f"need n >= 1 and k >= 0, got n={n}, k={k}")
    return compare_with_e(Fraction(4 * k), Fraction(n - 1), e)


@dataclass(frozen=True)
class LatinEventFamily:
    """Pairs ``((i, i'), (j, j'))`` with ``i < i'``, ``j != j'`` and ``a_{i,j} = a_{i',j'}``.

    ``matchings[t]`` sends ``i -> j`` and ``i' -> j'`` for ``pairs[t]``.
    """

    matrix: IntMatrix
    pairs: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    matchings: tuple[Matching, ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def event_probability(self) -> Fraction:
        n = self.matrix.n
        return Fraction(1, n * (n - 1))


def build_latin_events(A: IntMatrix) -> LatinEventFamily:
    cells: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for (i, j), s in np.ndenumerate(A.entries):
        cells[int(s)].append((i + 1, j + 1))
    pairs = []
    for group in cells.values():
        for a in range(len(group)):
            for b in range(len(group)):
                (i, j), (i2, j2) = group[a], group[b]
                if i < i2 and j != j2:
                    pairs.append(((i, i2), (j, j2)))
    pairs.sort()
    ambient = (A.n, A.n)
    matchings = tuple(Matching(((i, j), (i2, j2)), ambient) for (i, i2), (j, j2) in pairs)
    return LatinEventFamily(A, tuple(pairs), matchings)


def _check_permutation(pi: Sequence[int], n: int) -> list[int]:
    pi = [int(v) for v in pi]
    if sorted(pi) != list(range(1, n + 1)):
        raise DomainError(f"{pi} is not a permutation of [{n}]")
    return pi


def is_latin_transversal(A: IntMatrix, pi: Sequence[int]) -> bool:
    """True iff ``a_{i, π(i)}`` are pairwise distinct."""
    pi = _check_permutation(pi, A.n)
    picked = [A[i, pi[i - 1]] for i in range(1, A.n + 1)]
    return len(set(picked)) == A.n
