import itertools
import random
from fractions import Fraction
from math import comb, factorial

import pytest

from lllkit.errors import DomainError, ParseError
from lllkit.finite_prob import enumerate_injections, probability
from lllkit.hypergraph import (
    Hypergraph,
    build_packing_instance,
    corollary_conditions,
    find_copy,
    is_perfect_packing,
    minimal_x,
    packing_events,
    parse_hypergraph,
    partition_from_packing,
    perfect_packing_reduction,
    theorem41_condition,
    theorem42_condition,
    verify_packing,
)
from lllkit.injection import canonical_event, conflict_degrees
from lllkit.lll import Verdict, check_symmetric_condition
from lllkit.solver import AvoidanceProblem, solve_exhaustive


def edge(*v):
    return tuple(v)


def random_hypergraph(rng, n, r, density):
    edges = [e for e in itertools.combinations(range(1, n + 1), r) if rng.random() < density]
    return Hypergraph(n, r, tuple(edges))


def test_hypergraph_validation_and_degrees():
    H = Hypergraph(4, 2, ((2, 1), (2, 3)))
    assert H.edges == ((1, 2), (2, 3))
    assert H.degrees() == [1, 2, 1, 0]
    assert H.edge_intersection_degree((1, 2)) == 1
    assert H.intersection_degree == 1
    with pytest.raises(DomainError):
        Hypergraph(3, 2, ((1, 2, 3),))
    with pytest.raises(DomainError):
        Hypergraph(3, 2, ((1, 2), (2, 1)))
    with pytest.raises(DomainError):
        Hypergraph(3, 2, ((1, 4),))


def test_parse_roundtrip_and_errors():
    H = parse_hypergraph("# triangle\n3 2\n1 2\n2 3  # inline\n1 3\n")
    assert H.edges == ((1, 2), (2, 3), (1, 3))
    assert parse_hypergraph(H.to_text()) == H
    with pytest.raises(ParseError) as info:
        parse_hypergraph("3 2\n1 2\n1 x\n")
    assert (info.value.line, info.value.column) == (3, 3)
    with pytest.raises(ParseError) as info:
        parse_hypergraph("3 2\n1 2 3\n")
    assert info.value.line == 2
    with pytest.raises(ParseError):
        parse_hypergraph("3 2\n1 2\n2 1\n")


def test_complement_count():
    rng = random.Random(1)
    for _ in range(10):
        H = random_hypergraph(rng, 6, 3, 0.4)
        assert H.complement().edge_count == comb(6, 3) - H.edge_count


def test_packing_condition_examples():
    empty = Hypergraph(2, 2)
    for n in (2, 3, 10):
        assert theorem41_condition(empty, empty, n) is Verdict.HOLDS
    single = Hypergraph(2, 2, (edge(1, 2),))
    assert theorem41_condition(single, single, 8) is Verdict.HOLDS
    assert theorem41_condition(single, single, 3) is Verdict.FAILS
    with pytest.raises(DomainError):
        theorem41_condition(single, Hypergraph(3, 3, (edge(1, 2, 3),)), 8)


def test_build_packing_instance_sizes():
    single = Hypergraph(2, 2, (edge(1, 2),))
    inst = build_packing_instance(single, single, 5)
    assert len(inst.event_matchings) == 2
    assert {mt.pairs for mt in inst.event_matchings} == {((1, 1), (2, 2)), ((1, 2), (2, 1))}

    H1 = Hypergraph(4, 2, (edge(1, 2), edge(3, 4)))
    H2 = Hypergraph(5, 2, (edge(1, 2), edge(2, 3), edge(4, 5)))
    inst = build_packing_instance(H1, H2, 6)
    assert len(inst.event_matchings) == 12
    assert (inst.m1, inst.m2, inst.d1, inst.d2) == (2, 3, 0, 1)


def test_packing_instance_probability_and_degree_bound():
    rng = random.Random(7)
    for _ in range(15):
        r = rng.choice([2, 3])
        n = rng.randint(r + 1, 7)
        H1 = random_hypergraph(rng, rng.randint(r, n), r, 0.3)
        H2 = random_hypergraph(rng, n, r, 0.3)
        inst = build_packing_instance(H1, H2, n)
        assert inst.event_probability == Fraction(1, factorial(r) * comb(n, r))
        if inst.event_matchings:
            space = enumerate_injections(H1.vertex_count, n)
            for mt in inst.event_matchings[:5]:
                assert probability(space, canonical_event(space, mt).realized) == inst.event_probability
            assert conflict_degrees(inst.event_matchings).max() <= inst.degree_bound


def test_packing_condition_implies_symmetric_condition():
    rng = random.Random(3)
    hits = 0
    for _ in range(200):
        n = rng.randint(6, 12)
        H1 = random_hypergraph(rng, rng.randint(2, 5), 2, 0.3)
        H2 = random_hypergraph(rng, n, 2, 0.05)
        if theorem41_condition(H1, H2, n) is not Verdict.HOLDS or not H1.edges or not H2.edges:
            continue
        hits += 1
        inst = build_packing_instance(H1, H2, n)
        d = int(conflict_degrees(inst.event_matchings).max())
        assert check_symmetric_condition(inst.event_probability, d) is Verdict.HOLDS
    assert hits >= 10


def test_perfect_packing_reduction_examples():
    e2 = Hypergraph(2, 2, (edge(1, 2),))
    H1, H2, n = perfect_packing_reduction(e2, Hypergraph.complete(6, 2))
    assert n == 6 and H2.edge_count == 0
    assert H1.edges == ((1, 2), (3, 4), (5, 6))

    k4_minus = Hypergraph(4, 2, tuple(e for e in itertools.combinations(range(1, 5), 2) if e != (1, 2)))
    H1, H2, n = perfect_packing_reduction(e2, k4_minus)
    assert H2.edges == ((1, 2),)
    assert H1.edges == ((1, 2), (3, 4))
    assert H1.edge_count == (n // 2) * e2.edge_count

    with pytest.raises(DomainError):
        perfect_packing_reduction(Hypergraph(3, 2, (edge(1, 2),)), Hypergraph.complete(4, 2))


def _k_minus_perfect_matching(n):
    drop = {(2 * i + 1, 2 * i + 2) for i in range(n // 2)}
    return Hypergraph(n, 2, tuple(e for e in itertools.combinations(range(1, n + 1), 2) if e not in drop))


def test_perfect_packing_condition_examples():
    e2 = Hypergraph(2, 2, (edge(1, 2),))
    path = Hypergraph(3, 2, (edge(1, 2), edge(2, 3)))
    for G in (e2, path):
        res = theorem42_condition(G, Hypergraph.complete(6, 2))
        assert res.x == 0 and res.verdict is Verdict.HOLDS
    isolated = Hypergraph(4, 2, (edge(1, 2), edge(1, 3), edge(2, 3)))
    res = theorem42_condition(e2, isolated)
    assert res.x == 1 and res.verdict is Verdict.FAILS

    # min degree n-2 gives x = 1/(n-1); holds iff n - 1 > 3e
    for n, want in [(8, Verdict.FAILS), (10, Verdict.HOLDS), (12, Verdict.HOLDS)]:
        H = _k_minus_perfect_matching(n)
        res = theorem42_condition(e2, H)
        assert res.x == Fraction(1, n - 1)
        assert res.density == 3
        assert res.verdict is want


def test_perfect_packing_condition_supplied_x():
    e2 = Hypergraph(2, 2, (edge(1, 2),))
    H = _k_minus_perfect_matching(10)
    assert theorem42_condition(e2, H, Fraction(1, 5)).verdict is Verdict.FAILS
    with pytest.raises(DomainError):
        theorem42_condition(e2, H, Fraction(1, 20))


def test_perfect_packing_inequality_chain():
    rng = random.Random(9)
    checked = 0
    for _ in range(60):
        r = rng.choice([2, 3])
        s = rng.choice([r, r + 1])
        n = s * rng.randint(1, 3)
        if n < r + 1:
            continue
        G = random_hypergraph(rng, s, r, 0.7)
        H = random_hypergraph(rng, n, r, 0.8)
        if not G.edges:
            continue
        H1, H2, _ = perfect_packing_reduction(G, H)
        if not H2.edges:  # the degree estimate for H2 needs an edge
            continue
        x = minimal_x(H)
        full = comb(n - 1, r - 1)
        lhs = (H1.intersection_degree + 1) * H2.edge_count + (H2.intersection_degree + 1) * H1.edge_count
        assert H2.edge_count <= x * comb(n, r)
        assert H2.intersection_degree <= r * x * full - 1
        assert lhs <= comb(n, r) * (G.intersection_degree + 1 + Fraction(r * r * G.edge_count, s)) * x
        checked += 1
    assert checked > 20


def test_min_degree_matching_thresholds():
    k6 = Hypergraph.complete(6, 2)
    c = corollary_conditions(k6)
    assert c.perfect_matching_graph is Verdict.HOLDS
    assert c.perfect_matching_hypergraph is Verdict.HOLDS
    c6 = Hypergraph(6, 2, tuple((i, i % 6 + 1) for i in range(1, 7)))
    assert corollary_conditions(c6).perfect_matching_graph is Verdict.FAILS
    k63 = Hypergraph.complete(6, 3)
    c = corollary_conditions(k63)
    assert c.perfect_matching_hypergraph is Verdict.HOLDS and c.perfect_matching_graph is None
    assert corollary_conditions(Hypergraph.complete(5, 2)) == type(c)(None, None)


def test_verify_packing_examples():
    single = Hypergraph(2, 2, (edge(1, 2),))
    assert verify_packing(single, Hypergraph(5, 2), [4, 2])
    assert not verify_packing(single, Hypergraph(5, 2, (edge(2, 4),)), [4, 2])
    with pytest.raises(DomainError):
        verify_packing(single, Hypergraph(5, 2), [3, 3])


def _has_perfect_packing(G, H):
    s = G.vertex_count
    for order in itertools.permutations(range(1, H.vertex_count + 1)):
        pieces = [order[i : i + s] for i in range(0, H.vertex_count, s)]
        if all(find_copy(G, H, list(p)) is not None for p in pieces):
            return True
    return False


def test_reduction_round_trip_against_bruteforce():
    rng = random.Random(12)
    path = Hypergraph(3, 2, (edge(1, 2), edge(2, 3)))
    e2 = Hypergraph(2, 2, (edge(1, 2),))
    for _ in range(25):
        G = rng.choice([path, e2])
        H = random_hypergraph(rng, 6, 2, 0.45)
        H1, H2, n = perfect_packing_reduction(G, H)
        result = solve_exhaustive(AvoidanceProblem(n, n, tuple(packing_events(H1, H2, n))))
        assert result.found == _has_perfect_packing(G, H)
        if result.found:
            sigma = result.certificate.witness
            assert verify_packing(H1, H2, sigma, n)
            assert is_perfect_packing(G, H, partition_from_packing(G, H, sigma))
