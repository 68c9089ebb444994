"""Polynomial-time acyclic set extraction.

* :func:`greedy_acyclic` - scan vertices in a total order, accept the first
  unused one and discard its out-neighbours; every arc inside the output
  points back to an earlier accepted vertex.
* :func:`c3free_acyclic` - recursion for digraphs with no directed triangle.
* :func:`tt3free_acyclic` - independent sets of the forward graph for
  digraphs with no transitive triangle.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

from .degeneracy import color_from_degeneracy, degeneracy_order
from .digraph import Digraph, MultiDigraph
from .errors import ForbiddenSubgraph


@dataclass
class GreedyTrace:
    order: list[int]
    accepted: list[int]
    unused: set[int]
    costs: list[int]

    @property
    def size(self) -> int:
        return len(self.accepted)


def _check_order(order: Sequence[int], n: int) -> list[int]:
    order = list(order)
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of the vertices")
    return order


def _greedy(d, order, cap: int | None) -> GreedyTrace:
    n = d.n
    order = _check_order(order, n)
    out_adj = d.out_adj
    in_w = [True] * n
    accepted: list[int] = []
    unused: set[int] = set()
    costs: list[int] = []
    for w in order:
        if cap is not None and len(accepted) > cap:
            break
        if not in_w[w]:
            continue
        in_w[w] = False
        accepted.append(w)
        cost = 1
        for u in out_adj[w]:
            # a loop at w finds w already gone, so loops are ignored
            if in_w[u]:
                in_w[u] = False
                unused.add(u)
                cost += 1
        costs.append(cost)
    return GreedyTrace(order, accepted, unused, costs)


def greedy_acyclic(d: Digraph | MultiDigraph, order: Sequence[int]) -> GreedyTrace:
    """Greedy acyclic set with respect to ``order`` (first entry = smallest)."""
    return _greedy(d, order, None)


def greedy_truncated(d: Digraph | MultiDigraph, order: Sequence[int], alpha_cap: float) -> GreedyTrace:
    """Greedy run that stops as soon as more than ``floor(alpha_cap * n)`` vertices are accepted."""
    if not 0 < alpha_cap < 1:
        raise ValueError("alpha_cap must lie in (0, 1)")
    return _greedy(d, order, math.floor(alpha_cap * d.n))


# ------------------------------------------------------------ directed-triangle-free

def find_directed_triangle(d: Digraph) -> tuple[int, int, int] | None:
    out = d.out_mask
    for a in range(d.n):
        for b in d.out_adj[a]:
            common = out[b] & d.in_mask[a]
            if common:
                c = (common & -common).bit_length() - 1
                return a, b, c
    return None


def _f(delta: float, n: int) -> float:
    return math.exp(delta * math.sqrt(math.log(n))) if n > 1 else 1.0


def _c3free(d: Digraph, delta: float) -> list[int]:
    n = d.n
    if n == 0:
        return []
    f = _f(delta, n)
    mins = [min(d.indeg(v), d.outdeg(v)) for v in range(n)]
    top = max(mins)
    if top < 2 * n / f:
        # every subdigraph has a vertex with min(indeg, outdeg) <= top
        order = degeneracy_order(d, top)
        colors = color_from_degeneracy(d, order, [range(1, top + 2)] * n)
        counts: dict[int, int] = {}
        for c in colors:
            counts[c] = counts.get(c, 0) + 1
        best = min(counts, key=lambda c: (-counts[c], c))
        return [v for v in range(n) if colors[v] == best]
    v = mins.index(top)
    outs, ins = set(d.out_adj[v]), set(d.in_adj[v])
    both = outs & ins
    if len(both) >= f:
        # an arc x -> y inside would close v -> x -> y -> v
        return sorted(both)
    chosen: list[int] = []
    for side in (outs - ins, ins - outs):
        sub, labels = d.induced(side)
        chosen.extend(labels[u] for u in _c3free(sub, delta))
    # no arc runs from N+(v) to N-(v), so the two halves cannot share a cycle
    return sorted(chosen)


def c3free_acyclic(d: Digraph, delta: float = 1.0) -> list[int]:
    """Acyclic set of a digraph without directed triangles (digons allowed).

    With ``f = exp(delta * sqrt(ln n))``: if every vertex has
    ``min(indeg, outdeg) < 2n/f`` return a largest class of a degeneracy
    colouring; otherwise take a vertex ``v`` maximising that minimum and
    return ``N+(v) & N-(v)`` if it has at least ``f`` vertices, else recurse
    into ``N+(v) - N-(v)`` and ``N-(v) - N+(v)`` and return the union.
    """
    if not 0 < delta < math.sqrt(math.log(4)):
        raise ValueError("delta must lie in (0, sqrt(ln 4))")
    tri = find_directed_triangle(d)
    if tri is not None:
        raise ForbiddenSubgraph("directed triangle", tri)
    return _c3free(d, delta)


# ------------------------------------------------------------ transitive-triangle-free

def find_transitive_triangle(d: Digraph) -> tuple[int, int, int] | None:
    """Vertices ``(a, b, c)`` with arcs a->b, b->c and a->c, if present."""
    out = d.out_mask
    for a in range(d.n):
        for c in d.out_adj[a]:
            mids = out[a] & d.in_mask[c] & ~(1 << a) & ~(1 << c)
            if mids:
                b = (mids & -mids).bit_length() - 1
                return a, b, c
    return None


def forward_graph(d: Digraph, order: Sequence[int]) -> list[set[int]]:
    """Undirected graph of the arcs that go forward in ``order``, as neighbour sets."""
    order = _check_order(order, d.n)
    pos = {v: i for i, v in enumerate(order)}
    nbrs: list[set[int]] = [set() for _ in range(d.n)]
    for u, v in d.arcs():
        if pos[u] < pos[v]:
            nbrs[u].add(v)
            nbrs[v].add(u)
    return nbrs


def has_triangle(graph: list[set[int]]) -> bool:
    return any(graph[u] & graph[v] for u in range(len(graph)) for v in graph[u] if u < v)


def _min_degree_independent(graph: list[set[int]]) -> list[int]:
    alive = set(range(len(graph)))
    chosen = []
    while alive:
        v = min(alive, key=lambda x: (len(graph[x] & alive), x))
        chosen.append(v)
        alive -= graph[v] | {v}
    return sorted(chosen)


def tt3free_acyclic(d: Digraph, order: Sequence[int] | None = None, check: bool = True) -> list[int]:
    """Acyclic set of a digraph with no transitive triangle, of size at least ``floor(sqrt(n))``.

    The forward graph of ``order`` is triangle-free and its independent sets
    are acyclic in ``d``. A vertex of degree at least ``floor(sqrt(n))`` has an
    independent neighbourhood; otherwise min-degree greedy finds at least
    ``n / floor(sqrt(n))`` vertices. The larger candidate is returned.
    """
    if order is None:
        order = range(d.n)
    if check:
        tri = find_transitive_triangle(d)
        if tri is not None:
            raise ForbiddenSubgraph("transitive triangle", tri)
    graph = forward_graph(d, order)
    greedy = _min_degree_independent(graph)
    if d.n == 0:
        return greedy
    hub = max(range(d.n), key=lambda v: (len(graph[v]), -v))
    if len(graph[hub]) > len(greedy):
        return sorted(graph[hub])
    return greedy
