import itertools
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from dichroma.digraph import Digraph, MultiDigraph, circumference, cycle_length_set, strongly_connected_components
from dichroma.errors import RejectionFailed
from dichroma.exact import max_acyclic_set
from dichroma.generators import (
    ConfigPairing,
    FIXTURES,
    block_sizes,
    classify,
    count_eulerian_orientations,
    cycle_blowup,
    derive_seed,
    eulerian_identity_table,
    eulerian_orientation_weight,
    expected_eulerian_orientations,
    heads_oriented,
    layered_blocks,
    layered_tournament,
    make_rng,
    modular_blowup,
    orientedness_probability,
    paley_tournament,
    random_tournament,
    sample_binomial_oriented,
    sample_directed_configuration,
    sample_pairing,
    sample_regular,
)
from oracles import permutation_cycle_types


def test_derive_seed_is_stable_and_distinct():
    assert derive_seed(1, 2, 3) == derive_seed(1, 2, 3)
    seeds = {derive_seed(1, i) for i in range(1000)}
    assert len(seeds) == 1000
    assert derive_seed(1, 2) != derive_seed(2, 1)
    assert 0 <= derive_seed(7, 7) < 2**63


def test_config_model_examples():
    pairing, g = sample_directed_configuration(1, 1, 0)
    assert g.arcs == [(0, 0)]
    counts = Counter()
    for i in range(60000):
        p = sample_pairing(3, 1, make_rng(derive_seed(5, i)))
        counts[tuple(p.pairing.tolist())] += 1
    assert len(counts) == 6
    assert all(abs(c / 60000 - 1 / 6) < 0.01 for c in counts.values())


@pytest.mark.parametrize("n,r", [(1, 3), (5, 1), (10, 2), (30, 4), (7, 0)])
def test_config_model_is_regular(n, r):
    for seed in range(5):
        pairing, g = sample_directed_configuration(n, r, seed)
        assert sorted(pairing.pairing.tolist()) == list(range(n * r))
        assert all(len(row) == r for row in g.out_adj)
        assert g.indegrees() == [r] * n


def test_classify_examples():
    rep = classify(MultiDigraph.from_arcs(1, [(0, 0)]))
    assert (rep.loops, rep.parallel_arcs, rep.digons) == (1, 0, 0)
    rep = classify(MultiDigraph.from_arcs(2, [(0, 1), (1, 0)]))
    assert (rep.loops, rep.parallel_arcs, rep.digons) == (0, 0, 1)
    rep = classify(MultiDigraph.from_arcs(2, [(0, 1), (0, 1)]))
    assert (rep.loops, rep.parallel_arcs, rep.digons) == (0, 1, 0)
    assert rep.simple is False and rep.oriented is False


def test_heads_oriented_matches_classify():
    rng = make_rng(3)
    for r in (1, 2, 3):
        batch = []
        reports = []
        for _ in range(300):
            p = sample_pairing(6, r, rng)
            batch.append(p.heads())
            reports.append(classify(p.multidigraph()).oriented)
        assert heads_oriented(np.stack(batch)).tolist() == reports


def test_oriented_r1_acceptance_matches_s5_count():
    # oriented means no fixed points and no 2-cycles: only the 24 five-cycles survive
    good = sum(1 for _, lengths in permutation_cycle_types(5) if min(lengths) >= 3)
    assert good == 24
    hits = 0
    for i in range(20000):
        p = sample_pairing(5, 1, make_rng(derive_seed(9, i)))
        hits += bool(heads_oriented(p.heads()[None])[0])
    assert abs(hits / 20000 - Fraction(good, 120)) < 0.01


def test_simple_r1_acceptance_matches_s3_count():
    good = sum(1 for _, lengths in permutation_cycle_types(3) if min(lengths) >= 2)
    assert good == 2
    hits = sum(classify(sample_directed_configuration(3, 1, s)[1]).simple for s in range(12000))
    assert abs(hits / 12000 - good / 6) < 0.02


def test_sample_regular_modes():
    g = sample_regular(5, 1, "oriented", seed=1)
    assert isinstance(g, Digraph) and g.is_oriented()
    assert all(len(row) == 1 for row in g.out_adj)
    g = sample_regular(3, 1, "simple", seed=2)
    assert classify(MultiDigraph.from_arcs(3, g.arcs())).simple
    g = sample_regular(3, 2, "multi", seed=3)
    assert isinstance(g, MultiDigraph)
    with pytest.raises(ValueError):
        sample_regular(4, 2, "oriented")
    with pytest.raises(RejectionFailed) as info:
        sample_regular(9, 4, "oriented", seed=0, max_tries=20)
    assert info.value.tries == 20


def test_orientedness_probability_examples():
    assert orientedness_probability(1) == pytest.approx(math.exp(-1.5))
    assert orientedness_probability(1) == pytest.approx(0.22313, abs=1e-5)
    assert orientedness_probability(2) == pytest.approx(0.011109, abs=1e-6)
    assert orientedness_probability(3) == pytest.approx(math.exp(-9.5))


def test_binomial_examples():
    assert sample_binomial_oriented(10, 0, 1).m == 0
    t = sample_binomial_oriented(8, 0.5, 1)
    assert t.m == 28 and t.is_oriented()
    means = [sample_binomial_oriented(200, 0.1, s).m / 200 for s in range(100)]
    assert abs(np.mean(means) - 19.9) < 0.3
    with pytest.raises(ValueError):
        sample_binomial_oriented(5, 0.6, 1)


def test_random_tournament_is_tournament():
    t = random_tournament(9, 4)
    assert t.m == 36 and t.is_oriented()


def test_block_sizes():
    assert block_sizes(6, 3) == [3, 3]
    assert block_sizes(10, 4) == [4, 3, 3]
    assert all(sum(block_sizes(n, s)) == n and max(block_sizes(n, s)) <= s for n in range(1, 40) for s in range(1, n + 1))


def test_layered_structure():
    d = layered_tournament(6, 3, seed=2)
    assert d.m == 15
    blocks = layered_blocks(6, 3)
    where = {v: i for i, b in enumerate(blocks) for v in b}
    for u, v in d.arcs():
        assert where[u] <= where[v]
    for comp in strongly_connected_components(d):
        assert len({where[v] for v in comp}) == 1


def test_layered_single_block_verified():
    d = layered_tournament(8, 8, seed=3, verify_blocks=True)
    assert len(max_acyclic_set(d)) <= 7 < 2 * math.log2(8) + 2


def test_layered_guards():
    with pytest.raises(ValueError):
        layered_tournament(5, 6)
    with pytest.raises(ValueError):
        layered_tournament(60, 30, verify_blocks=True)


def test_modular_blowup_examples():
    d, lists = modular_blowup(3, 1)
    assert d == Digraph.from_arcs(3, [(0, 1), (1, 2), (2, 0)])
    assert lists == [frozenset({1})] * 3
    d, lists = modular_blowup(4, 1)
    assert cycle_length_set(d) == {4} and lists == [frozenset({1})] * 4
    d, lists = modular_blowup(3, 2)
    assert d.n == 18
    for b in range(3):
        block = lists[6 * b:6 * b + 6]
        assert sorted(block, key=sorted) == [frozenset(s) for s in itertools.combinations(range(1, 5), 2)]


def test_modular_blowup_lengths_divisible():
    for k, t in ((3, 1), (3, 2), (4, 1), (5, 1)):
        d, _ = modular_blowup(k, t)
        assert all(x % k == 0 for x in cycle_length_set(d))


def test_cycle_blowup_density():
    d = cycle_blowup([3, 3, 3])
    assert d.m == 27
    sparse = cycle_blowup([3, 3, 3], density=0.5, seed=1)
    assert sparse.m < 27 and sparse == cycle_blowup([3, 3, 3], density=0.5, seed=1)


def test_fixtures():
    assert set(FIXTURES) >= {"paley7", "c3", "tt4", "k4"}
    p = paley_tournament(7)
    assert p.m == 21 and all(len(row) == 3 for row in p.out_adj)
    assert circumference(FIXTURES["c5"]()) == 5


def test_eulerian_examples():
    loop = MultiDigraph.from_arcs(1, [(0, 0)])
    assert count_eulerian_orientations(loop) == 2
    tri = MultiDigraph.from_arcs(3, [(0, 1), (1, 2), (2, 0)])
    assert count_eulerian_orientations(tri) == 2
    two_loops = MultiDigraph.from_arcs(1, [(0, 0), (0, 0)])
    assert count_eulerian_orientations(two_loops) == 4
    assert expected_eulerian_orientations(1, 1) == 2


def test_eulerian_count_matches_weighted_formula():
    rng = make_rng(71)
    for _ in range(60):
        n = int(rng.integers(1, 5))
        r = int(rng.integers(1, 3))
        p = sample_pairing(n, 2 * r, rng)
        heads = p.heads()
        # pair each vertex's 2r points into r undirected edges via the directed arcs
        g = MultiDigraph.from_arcs(n, [(v, int(h)) for v in range(n) for h in heads[v][:r]])
        assert count_eulerian_orientations(g) == eulerian_orientation_weight(g)


@pytest.mark.parametrize("n,r", [(1, 1), (2, 1), (3, 1), (2, 2)])
def test_eulerian_identity(n, r):
    rows = eulerian_identity_table(n, r)
    assert sum(row["P"] for row in rows) == 1
    assert sum(row["Q"] for row in rows) == 1
    for row in rows:
        assert row["lhs"] == row["rhs"]
        assert row["enumerated_mean"] == row["formula_mean"]


def test_config_pairing_heads_shape():
    p = ConfigPairing(2, 2, np.array([3, 0, 1, 2]))
    assert p.heads().tolist() == [[1, 0], [0, 1]]
    assert p.multidigraph().arcs == [(0, 0), (0, 1), (1, 0), (1, 1)]
