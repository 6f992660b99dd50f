import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ndg_oracle, random_matching
from lllkit.errors import DomainError, HypothesisError, SizeLimitError
from lllkit.finite_prob import enumerate_injections
from lllkit.injection import canonical_event, conflict_graph
from lllkit.lll import (
    E,
    EInterval,
    Graph,
    Verdict,
    check_lll_condition,
    check_symmetric_condition,
    find_weights,
    uniform_weights,
    verify_dependency_graph,
    verify_lll_conclusion,
    verify_negative_dependency_graph,
)


def independent_of_algebra(a, others):
    """A independent of every union of atoms generated by ``others``."""
    size = a.size
    codes = np.zeros(size, dtype=np.int64)
    for b, o in enumerate(others):
        codes |= o.astype(np.int64) << b
    atoms = [codes == c for c in range(1 << len(others))]
    for pick in itertools.product([False, True], repeat=len(atoms)):
        c = np.zeros(size, dtype=bool)
        for on, atom in zip(pick, atoms):
            if on:
                c |= atom
        if Fraction(int((a & c).sum()), size) != Fraction(int(a.sum()), size) * Fraction(int(c.sum()), size):
            return False
    return True


# --------------------------------------------------------------------- graph


def test_graph_basics():
    g = Graph(4, [(1, 2), (2, 3)])
    assert g.neighbors(2) == {1, 3}
    assert g.degree(4) == 0
    assert g.max_degree == 2
    assert g.edges == [(1, 2), (2, 3)]
    with pytest.raises(DomainError):
        Graph(3, [(1, 1)])
    with pytest.raises(DomainError):
        Graph(3, [(1, 4)])


def test_e_interval_defaults():
    assert E.lower == Fraction(2718281828459045, 10**15)
    assert E.upper == Fraction(2718281828459046, 10**15)
    with pytest.raises(DomainError):
        EInterval(Fraction(27, 10), Fraction(28, 10))
    with pytest.raises(DomainError):
        EInterval(Fraction(2718281828459046, 10**15), Fraction(2718281828459047, 10**15))


# ------------------------------------------------------ negative dependency


def test_ndg_single_event_and_zero_probability():
    space = enumerate_injections(2, 3)
    assert verify_negative_dependency_graph(space, [space.where(lambda s: s[0] == 1)], Graph(1))
    zeros = [space.empty()] * 3
    assert verify_negative_dependency_graph(space, zeros, Graph(3))


def test_ndg_conflict_graph_in_i34():
    space = enumerate_injections(3, 4)
    rng = random.Random(3)
    for _ in range(30):
        family = [random_matching(rng, 3, 4, rng.randint(1, 2)) for _ in range(rng.randint(2, 7))]
        events = [canonical_event(space, mt).realized for mt in family]
        assert verify_negative_dependency_graph(space, events, conflict_graph(family))


def test_ndg_empty_graph_violation():
    space = enumerate_injections(1, 2)
    a1 = space.where(lambda s: s[0] == 1)
    a2 = space.where(lambda s: s[0] == 2)
    v = verify_negative_dependency_graph(space, [a1, a2], Graph(2))
    assert not v
    assert (v.i, v.S, v.lhs, v.rhs) == (1, (2,), Fraction(1), Fraction(1, 2))


def test_ndg_agrees_with_oracle_on_random_systems():
    space = enumerate_injections(2, 4)
    rng = random.Random(11)
    violations = 0
    for _ in range(80):
        k = rng.randint(2, 6)
        events = [space.event(np.array([rng.random() < 0.4 for _ in range(space.size)])) for _ in range(k)]
        edges = [(a, b) for a in range(1, k + 1) for b in range(a + 1, k + 1) if rng.random() < 0.3]
        g = Graph(k, edges)
        got = verify_negative_dependency_graph(space, events, g)
        want = ndg_oracle(space, events, g)
        if want is None:
            assert got.holds
        else:
            violations += 1
            assert (got.i, got.S, got.lhs, got.rhs) == want
    assert violations > 10


def test_ndg_cap_and_length_mismatch():
    space = enumerate_injections(1, 2)
    with pytest.raises(SizeLimitError):
        verify_negative_dependency_graph(space, [space.full()] * 4, Graph(4), cap=3)
    with pytest.raises(DomainError):
        verify_negative_dependency_graph(space, [space.full()] * 2, Graph(3))


# ---------------------------------------------------------- dependency graph


def _coordinate_events():
    # uniform point of [8] read as three independent bits x, y, z
    space = enumerate_injections(1, 8)
    bit = lambda s, b: ((s[0] - 1) >> b) & 1  # noqa: E731
    events = [
        space.where(lambda s: bit(s, 0) == 0),
        space.where(lambda s: bit(s, 0) == 0 and bit(s, 1) == 1),
        space.where(lambda s: bit(s, 2) == 1),
        space.where(lambda s: bit(s, 1) == 0 or bit(s, 2) == 0),
    ]
    # edges join events sharing a coordinate
    return space, events, Graph(4, [(1, 2), (2, 4), (3, 4)])


def test_dependency_graph_complete_is_vacuous():
    space = enumerate_injections(2, 3)
    events = [space.where(lambda s, v=v: s[0] == v) for v in (1, 2, 3)]
    assert verify_dependency_graph(space, events, Graph.complete(3))


def test_dependency_graph_product_coordinates():
    space, events, g = _coordinate_events()
    for i in range(1, 5):
        others = [events[j - 1].mask for j in range(1, 5) if j != i and j not in g.neighbors(i)]
        assert independent_of_algebra(events[i - 1].mask, others)
    assert verify_dependency_graph(space, events, g)
    assert verify_negative_dependency_graph(space, events, g)


def test_dependency_graph_detects_dependence():
    space, events, g = _coordinate_events()
    sparse = g.without_edges([(1, 2)])
    assert not independent_of_algebra(events[0].mask, [events[1].mask, events[2].mask])
    v = verify_dependency_graph(space, events, sparse)
    assert not v and v.i == 1 and v.S == (2,)
    assert v.lhs != v.rhs


def test_dependency_graph_is_not_full_mutual_independence():
    # A_1 is independent of the algebra of A_2, A_3, which are themselves dependent
    space = enumerate_injections(1, 4)
    bit = lambda s, b: ((s[0] - 1) >> b) & 1  # noqa: E731
    a1 = space.where(lambda s: bit(s, 0) == 1)
    a2 = space.where(lambda s: bit(s, 1) == 1)
    a3 = space.where(lambda s: bit(s, 1) == 0)
    assert independent_of_algebra(a1.mask, [a2.mask, a3.mask])
    assert verify_dependency_graph(space, [a1, a2, a3], Graph(3, [(2, 3)]))


def test_dependency_graph_implies_ndg_random():
    space = enumerate_injections(1, 8)
    rng = random.Random(2)
    checked = 0
    for _ in range(300):
        k = rng.randint(2, 5)
        events = [space.event(np.array([rng.random() < 0.5 for _ in range(8)])) for _ in range(k)]
        g = Graph(k, [(a, b) for a in range(1, k + 1) for b in range(a + 1, k + 1) if rng.random() < 0.5])
        if verify_dependency_graph(space, events, g):
            checked += 1
            assert verify_negative_dependency_graph(space, events, g)
    assert checked > 20


# -------------------------------------------------------------- conditions


def test_lll_condition_examples():
    r = check_lll_condition([Fraction(1, 4)], Graph(1), [Fraction(1, 4)])
    assert r.ok and r.bound == Fraction(3, 4)
    r = check_lll_condition([Fraction(1, 8)] * 2, Graph(2, [(1, 2)]), [Fraction(1, 4)] * 2)
    assert r.ok and r.bound == Fraction(9, 16)
    r = check_lll_condition([Fraction(1, 8), Fraction(1, 2)], Graph(2), [Fraction(1, 4), Fraction(1, 4)])
    assert not r.ok and r.violation == 2


def test_lll_condition_domain_errors():
    with pytest.raises(DomainError):
        check_lll_condition([0, 0], Graph(2), [0])
    with pytest.raises(DomainError):
        check_lll_condition([0], Graph(1), [1])


def test_symmetric_condition_examples():
    assert check_symmetric_condition(0, 7) is Verdict.HOLDS
    assert check_symmetric_condition(Fraction(1, 12), 3) is Verdict.HOLDS
    assert check_symmetric_condition(Fraction(1, 2), 1) is Verdict.FAILS
    # a p placing e*p*(d+1) inside the enclosure gap is undecidable
    p = 1 / ((E.lower + E.upper) / 2)
    assert check_symmetric_condition(p, 0) is Verdict.INDETERMINATE


def test_find_weights_examples():
    g = Graph(3, [(1, 2)])
    assert find_weights([0, 0, 0], g) == [0, 0, 0]
    x = find_weights([Fraction(1, 8)] * 2, Graph(2, [(1, 2)]))
    assert x is not None and check_lll_condition([Fraction(1, 8)] * 2, Graph(2, [(1, 2)]), x).ok
    x = find_weights([Fraction(99, 100)], Graph(1))
    assert x is not None and check_lll_condition([Fraction(99, 100)], Graph(1), x).ok


def test_find_weights_gives_up_on_infeasible():
    # two adjacent events each of probability 1/2 admit no weights
    assert find_weights([Fraction(1, 2)] * 2, Graph(2, [(1, 2)])) is None


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_deleting_edges_keeps_condition(data):
    n = data.draw(st.integers(1, 6))
    pairs = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)]
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    x = [Fraction(data.draw(st.integers(0, 9)), 10) for _ in range(n)]
    p = [Fraction(data.draw(st.integers(0, 20)), 100) for _ in range(n)]
    g = Graph(n, edges)
    if check_lll_condition(p, g, x).ok and edges:
        drop = data.draw(st.lists(st.sampled_from(edges), unique=True))
        assert check_lll_condition(p, g.without_edges(drop), x).ok


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_symmetric_condition_implies_uniform_weights(data):
    n = data.draw(st.integers(1, 8))
    pairs = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)]
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    g = Graph(n, edges)
    d = g.max_degree + data.draw(st.integers(0, 2))
    p = Fraction(1, data.draw(st.integers(2, 60)))
    if check_symmetric_condition(p, d) is Verdict.HOLDS:
        assert check_lll_condition([p] * n, g, uniform_weights(g, d, p)).ok


# -------------------------------------------------------------- conclusion


def test_conclusion_trivial_cases():
    space = enumerate_injections(2, 3)
    c = verify_lll_conclusion(space, [space.empty()] * 2, Graph(2), [Fraction(1, 3), Fraction(1, 5)])
    assert c.avoid_probability == 1 and c.holds

    four = enumerate_injections(1, 4)
    a = four.where(lambda s: s[0] == 1)
    c = verify_lll_conclusion(four, [a], Graph(1), [Fraction(1, 4)])
    assert c.avoid_probability == c.bound == Fraction(3, 4)


def test_conclusion_enforces_hypotheses():
    space = enumerate_injections(1, 2)
    a1 = space.where(lambda s: s[0] == 1)
    a2 = space.where(lambda s: s[0] == 2)
    with pytest.raises(HypothesisError) as info:
        verify_lll_conclusion(space, [a1, a2], Graph(2), [Fraction(1, 2)] * 2)
    assert info.value.hypothesis == "negative-dependency-graph"
    with pytest.raises(HypothesisError) as info:
        verify_lll_conclusion(space, [a1], Graph(1), [Fraction(1, 4)])
    assert info.value.hypothesis == "lll-condition"


def test_conclusion_on_permutation_families():
    space = enumerate_injections(4, 4)
    rng = random.Random(8)
    trials = 0
    while trials < 40:
        family = [random_matching(rng, 4, 4, 2) for _ in range(rng.randint(1, 3))]
        g = conflict_graph(family)
        events = [canonical_event(space, mt).realized for mt in family]
        x = find_weights([Fraction(ev.count, space.size) for ev in events], g)
        if x is None:
            continue
        trials += 1
        c = verify_lll_conclusion(space, events, g, x)
        assert c.holds and c.avoid_probability > 0
