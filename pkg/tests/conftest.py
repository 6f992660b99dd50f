import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from lllkit.injection import Matching

ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, ok: bool, detail: str) -> None:
    line = f"[criterion {criterion:>2}] {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.fixture
def acceptance_record():
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def all_matchings(m: int, n: int) -> list[Matching]:
    """Every partial bijection [m] -> [n], including the empty one."""
    out = []
    for r in range(0, m + 1):
        for dom in itertools.combinations(range(1, m + 1), r):
            for img in itertools.permutations(range(1, n + 1), r):
                out.append(Matching(tuple(zip(dom, img)), (m, n)))
    return out


def random_matching(rng: random.Random, m: int, n: int, r: int) -> Matching:
    dom = sorted(rng.sample(range(1, m + 1), r))
    img = rng.sample(range(1, n + 1), r)
    return Matching(tuple(zip(dom, img)), (m, n))


def ndg_oracle(space, events, g):
    """Direct loop over every non-neighbour subset, in lexicographic order."""
    size = space.size
    for i in range(1, len(events) + 1):
        a = events[i - 1].mask
        p = Fraction(int(a.sum()), size)
        others = [j for j in range(1, len(events) + 1) if j != i and j not in g.neighbors(i)]
        subsets = sorted(
            (s for r in range(len(others) + 1) for s in itertools.combinations(others, r)),
        )
        for s in subsets:
            cond = np.ones(size, dtype=bool)
            for j in s:
                cond &= ~events[j - 1].mask
            if cond.sum() == 0:
                continue
            lhs = Fraction(int((a & cond).sum()), int(cond.sum()))
            if lhs > p:
                return (i, s, lhs, p)
    return None
