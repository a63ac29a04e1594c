import itertools
import random

import numpy as np
import pytest

from drcec.hypergraph import Clustering, LabeledHypergraph, parse_hypergraph, random_hypergraph
from drcec.metrics import drcec_objective, edge_violations, naive_objective
from drcec.vote import (
    EnumerationBudgetExceeded,
    SeededRandom,
    deviation_threshold,
    enumerate_assignments,
    exact_ilp,
    is_majority_clustering,
    is_minority_clustering,
    majority_vote,
    minority_sets,
    minority_vote,
    naive_optimum,
    x0_set,
)


def all_clusterings(h):
    return [Clustering(a) for a in itertools.product(range(h.k), repeat=h.num_nodes)]


def brute_force_min(h, beta):
    """Plain-Python oracle: lexicographically smallest minimizer."""
    best = None
    for c in all_clusterings(h):
        total = drcec_objective(h, c, beta).total
        if best is None or total < best[0] - 1e-12:
            best = (total, c)
    return best


def test_votes_on_example(example):
    assert majority_vote(example) == Clustering((0, 0, 1))
    assert minority_vote(example) == Clustering((1, 0, 0))


def test_votes_on_degenerate_degrees():
    flat = parse_hypergraph("nodes 3\ncolors red blue\n")
    assert majority_vote(flat) == minority_vote(flat) == Clustering((0, 0, 0))
    skewed = parse_hypergraph("nodes 1\ncolors red blue\n" + "blue 0\n" * 5)
    assert majority_vote(skewed) == Clustering((1,))


def test_random_tie_break_stays_in_minority_sets():
    rng = np.random.default_rng(3)
    for seed in range(30):
        h = random_hypergraph(rng)
        sets = minority_sets(h)
        c = minority_vote(h, SeededRandom(seed))
        assert all(col in s for col, s in zip(c.assignment, sets))


def test_vote_invariant_under_edge_order():
    rng = np.random.default_rng(11)
    shuffler = random.Random(5)
    for _ in range(30):
        h = random_hypergraph(rng)
        edges = list(h.edges)
        shuffler.shuffle(edges)
        g = LabeledHypergraph(h.num_nodes, h.colors, tuple(edges))
        assert majority_vote(g) == majority_vote(h)
        assert minority_vote(g) == minority_vote(h)


def test_naive_phase_transition_brute_force():
    rng = np.random.default_rng(21)
    for _ in range(40):
        h = random_hypergraph(rng, num_nodes=(2, 6))
        for beta in (0.5, 1, 2):
            best = max(naive_objective(h, c, beta) for c in all_clusterings(h))
            assert naive_objective(h, naive_optimum(h, beta), beta) == best


def test_naive_at_one_is_constant(example):
    assert naive_objective(example, majority_vote(example), 1) == 4
    assert naive_objective(example, minority_vote(example), 1) == 4
    assert naive_objective(example, majority_vote(example), 0) == 3
    assert naive_optimum(example, 0.5) == majority_vote(example)
    assert naive_optimum(example, 2) == minority_vote(example)
    # per-node score is beta*d(v) + (1-beta)*d_v^c, so the lower-degree color wins above 1
    assert naive_objective(example, minority_vote(example), 2) == 7
    assert naive_objective(example, majority_vote(example), 2) == 5


def test_enumeration_order():
    blocks = np.vstack([b for _, b in enumerate_assignments(3, 2, chunk=3)])
    assert [tuple(r) for r in blocks] == list(itertools.product(range(2), repeat=3))


def test_exact_on_example(example):
    c, br = exact_ilp(example, 0.0)
    # eight assignments, the two edges overlap at node 1 so cost 1 is optimal;
    # [red, red, red] is the smallest vector reaching it
    assert c == Clustering((0, 0, 0))
    assert br.edge_cost == 1
    c3, _ = exact_ilp(example, 3.0)
    assert is_minority_clustering(example, c3)


def test_exact_single_node():
    h = parse_hypergraph("nodes 1\ncolors a b\n")
    c, br = exact_ilp(h, 1.0)
    assert c == Clustering((0,)) and br.total == 0


def test_exact_matches_brute_force():
    rng = np.random.default_rng(8)
    for _ in range(40):
        h = random_hypergraph(rng, num_nodes=(2, 6))
        for beta in (0.0, 0.3, 1.0, h.d_max + 1.0):
            c, br = exact_ilp(h, beta)
            total, oracle = brute_force_min(h, beta)
            assert br.total == pytest.approx(total, abs=1e-9)
            assert c == oracle


def test_exact_minority_above_dmax():
    rng = np.random.default_rng(9)
    for _ in range(40):
        h = random_hypergraph(rng)
        c, _ = exact_ilp(h, h.d_max + 0.5)
        assert is_minority_clustering(h, c)


def test_exact_budget():
    h = parse_hypergraph("nodes 13\nred 0 1\nblue 2\n")
    with pytest.raises(EnumerationBudgetExceeded, match="node cap"):
        exact_ilp(h, 0.0)
    with pytest.raises(EnumerationBudgetExceeded, match="budget"):
        exact_ilp(parse_hypergraph("nodes 3\nred 0\nblue 1\n"), 0.0, budget=4)


def test_x0_set(example):
    expected = {c for c in all_clusterings(example) if sum(edge_violations(example, c)) == 1}
    assert x0_set(example) == expected
    disjoint = parse_hypergraph("red 0 1\nblue 2 3\n")
    assert Clustering((0, 0, 1, 1)) in x0_set(disjoint)
    bare = parse_hypergraph("nodes 2\ncolors a b c\n")
    assert len(x0_set(bare)) == 9


def test_deviation_threshold():
    h = parse_hypergraph("nodes 1\ncolors red blue\nred 0\nred 0\nred 0\nblue 0\n")
    assert h.color_degree.tolist() == [[3, 1]]
    assert deviation_threshold(h, 0, Clustering((0,))) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        deviation_threshold(h, 0, Clustering((1,)))


def test_deviation_threshold_none():
    even = parse_hypergraph("nodes 2\nred 0 1\nblue 0 1\n")
    assert deviation_threshold(even, 0, Clustering((0, 0))) is None
    isolated = parse_hypergraph("nodes 2\nred 0\n")
    assert deviation_threshold(isolated, 1, Clustering((0, 0))) is None


def test_majority_helper_consistency():
    rng = np.random.default_rng(4)
    for _ in range(20):
        h = random_hypergraph(rng)
        assert is_majority_clustering(h, majority_vote(h, SeededRandom(1)))
