import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dichroma.digraph import Digraph, MultiDigraph, is_acyclic
from dichroma.errors import ForbiddenSubgraph
from dichroma.exact import max_acyclic_set
from dichroma.generators import (
    cycle_blowup,
    directed_cycle,
    make_rng,
    sample_regular,
    transitive_tournament,
)
from dichroma.heuristics import (
    c3free_acyclic,
    find_directed_triangle,
    find_transitive_triangle,
    forward_graph,
    greedy_acyclic,
    greedy_truncated,
    has_triangle,
    tt3free_acyclic,
)
from oracles import brute_alpha, random_arcs


@st.composite
def digraph_and_order(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    arcs = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    order = draw(st.permutations(range(n)))
    return Digraph.from_arcs(n, arcs), order


def test_greedy_examples():
    tt3 = transitive_tournament(3)
    assert sorted(greedy_acyclic(tt3, [2, 1, 0]).accepted) == [0, 1, 2]
    assert greedy_acyclic(tt3, [0, 1, 2]).accepted == [0]
    for order in ([0, 1, 2], [2, 0, 1], [1, 2, 0], [2, 1, 0]):
        assert greedy_acyclic(directed_cycle(3), order).size == 2


def test_greedy_rejects_non_permutation():
    with pytest.raises(ValueError):
        greedy_acyclic(directed_cycle(3), [0, 0, 1])


@settings(max_examples=1000, deadline=None)
@given(digraph_and_order())
def test_greedy_output_acyclic_and_backward(case):
    d, order = case
    trace = greedy_acyclic(d, order)
    assert is_acyclic(d, trace.accepted)
    rank = {v: i for i, v in enumerate(trace.accepted)}
    for u, v in d.arcs():
        if u in rank and v in rank:
            assert rank[u] > rank[v]
    assert set(trace.accepted).isdisjoint(trace.unused)
    assert set(trace.accepted) | trace.unused == set(range(d.n))
    assert sum(trace.costs) == d.n
    assert trace.size <= brute_alpha(d.n, d.arcs())


def test_greedy_cost_bounds_on_regular_input():
    for r in (1, 2, 3):
        g = sample_regular(40, r, "multi", seed=r)
        trace = greedy_acyclic(g, make_rng(r).permutation(40))
        assert all(1 <= y <= r + 1 for y in trace.costs)
        # loops are ignored, so the output is acyclic in the loop-free part
        simple = g.simplify()
        assert is_acyclic(simple, trace.accepted)


def test_greedy_on_multidigraph_ignores_loops():
    g = MultiDigraph.from_arcs(2, [(0, 0), (1, 1)])
    assert greedy_acyclic(g, [0, 1]).accepted == [0, 1]


def test_truncated_examples():
    tt10 = transitive_tournament(10)
    assert greedy_truncated(tt10, range(9, -1, -1), 0.2).size == 3
    assert greedy_truncated(directed_cycle(3), [0, 1, 2], 1 / 3).size == 2
    rng = random.Random(59)
    for _ in range(100):
        n = rng.randint(1, 10)
        d = Digraph.from_arcs(n, random_arcs(n, 0.3, rng))
        order = rng.sample(range(n), n)
        full = greedy_acyclic(d, order)
        if full.size < 0.999 * n:
            assert greedy_truncated(d, order, 0.999).accepted == full.accepted
    with pytest.raises(ValueError):
        greedy_truncated(tt10, range(10), 1.0)


def test_c3free_examples():
    assert c3free_acyclic(Digraph.empty(1)) == [0]
    tt8 = transitive_tournament(8)
    assert is_acyclic(tt8, c3free_acyclic(tt8))
    d = cycle_blowup([5, 5, 5, 5])
    alpha = len(max_acyclic_set(d))
    assert alpha == 15
    out = c3free_acyclic(d)
    assert is_acyclic(d, out) and len(out) <= alpha


def test_c3free_rejects_triangle_and_bad_delta():
    with pytest.raises(ForbiddenSubgraph) as info:
        c3free_acyclic(directed_cycle(3))
    assert sorted(info.value.vertices) == [0, 1, 2]
    with pytest.raises(ValueError):
        c3free_acyclic(directed_cycle(4), delta=2.0)


def test_c3free_accepts_digons():
    d = Digraph.from_arcs(4, [(0, 1), (1, 0), (1, 2), (2, 3), (3, 0)])
    assert find_directed_triangle(d) is None
    out = c3free_acyclic(d)
    assert is_acyclic(d, out) and len(out) <= brute_alpha(4, d.arcs())


def test_c3free_random_blowups():
    rng = random.Random(61)
    for i in range(40):
        k = rng.randint(4, 6)
        sizes = [rng.randint(1, 4) for _ in range(k)]
        d = cycle_blowup(sizes, density=rng.choice([0.5, 1.0]), seed=i)
        out = c3free_acyclic(d, delta=rng.uniform(0.1, 1.1))
        assert is_acyclic(d, out)
        assert len(out) <= len(max_acyclic_set(d))


def test_tt3free_examples():
    c3 = directed_cycle(3)
    graph = forward_graph(c3, (0, 1, 2))
    assert graph == [{1}, {0, 2}, {1}]
    assert tt3free_acyclic(c3, (0, 1, 2)) == [0, 2]
    for n in range(3, 12):
        out = tt3free_acyclic(directed_cycle(n))
        assert len(out) >= n // 2 and is_acyclic(directed_cycle(n), out)
    d = cycle_blowup([4, 4, 4])
    assert find_transitive_triangle(d) is None
    out = tt3free_acyclic(d)
    alpha = len(max_acyclic_set(d))
    assert alpha == 8
    assert is_acyclic(d, out) and math.isqrt(12) <= len(out) <= alpha


def test_tt3free_rejects_transitive_triangle():
    with pytest.raises(ForbiddenSubgraph) as info:
        tt3free_acyclic(transitive_tournament(3))
    assert info.value.vertices == (0, 1, 2)


def test_tt3free_forward_graph_triangle_free_random():
    rng = random.Random(67)
    for i in range(40):
        sizes = [rng.randint(1, 5) for _ in range(rng.randint(3, 5))]
        d = cycle_blowup(sizes, density=0.7, seed=i)
        order = rng.sample(range(d.n), d.n)
        assert not has_triangle(forward_graph(d, order))
        out = tt3free_acyclic(d, order)
        assert is_acyclic(d, out) and len(out) >= math.isqrt(d.n)
