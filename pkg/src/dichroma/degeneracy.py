"""Degeneracy orders and list colouring along them.

A digraph is k-degenerate when every subdigraph has a vertex of indegree or
outdegree at most k. A digraph whose cycle lengths take only k distinct
values is k-degenerate, so lists of size k+1 always admit an acyclic
colouring, read off greedily from a degeneracy order.
"""

from __future__ import annotations

import heapq
from collections.abc import Callable, Sequence
from dataclasses import dataclass

from .digraph import Digraph, strongly_connected_components
from .errors import ListTooSmall, NotDegenerate

IN, OUT = "in", "out"


@dataclass(frozen=True)
class DegeneracyOrder:
    """``order[j]`` has indegree (``side[j] == "in"``) or outdegree at most ``k``
    inside the subdigraph induced on ``order[:j+1]``."""

    order: tuple[int, ...]
    k: int
    side: tuple[str, ...]

    def is_valid_for(self, d: Digraph) -> bool:
        if sorted(self.order) != list(range(d.n)):
            return False
        pos = {v: j for j, v in enumerate(self.order)}
        for j, v in enumerate(self.order):
            back_in = sum(1 for u in d.in_adj[v] if pos[u] < j)
            back_out = sum(1 for u in d.out_adj[v] if pos[u] < j)
            if min(back_in, back_out) > self.k:
                return False
        return True


def _peel(d: Digraph, k: int) -> tuple[list[int], list[str], set[int]]:
    """Remove, lowest id first, any vertex with min(indeg, outdeg) <= k.

    Returns removal order, side flags and the stalled remainder. Peeling is a
    complete test: removals only lower degrees, so a vertex that becomes
    removable stays removable, and the order of removals cannot matter. If it
    stalls, the remainder itself is a subdigraph with no removable vertex.
    """
    indeg = [d.indeg(v) for v in range(d.n)]
    outdeg = [d.outdeg(v) for v in range(d.n)]
    alive = [True] * d.n
    queued = [False] * d.n
    heap = []
    for v in range(d.n):
        if min(indeg[v], outdeg[v]) <= k:
            heap.append(v)
            queued[v] = True
    heapq.heapify(heap)
    removed: list[int] = []
    sides: list[str] = []
    while heap:
        v = heapq.heappop(heap)
        alive[v] = False
        removed.append(v)
        sides.append(IN if indeg[v] <= k else OUT)
        for u in d.out_adj[v]:
            if alive[u]:
                indeg[u] -= 1
                if not queued[u] and indeg[u] <= k:
                    queued[u] = True
                    heapq.heappush(heap, u)
        for u in d.in_adj[v]:
            if alive[u]:
                outdeg[u] -= 1
                if not queued[u] and outdeg[u] <= k:
                    queued[u] = True
                    heapq.heappush(heap, u)
    stalled = {v for v in range(d.n) if alive[v]}
    return removed, sides, stalled


def verify_degenerate(d: Digraph, k: int) -> bool:
    if k < 0:
        raise ValueError("k must be non-negative")
    return not _peel(d, k)[2]


def degeneracy_order(d: Digraph, k: int) -> DegeneracyOrder:
    """k-degeneracy order by peeling; each peeled vertex goes to the front of the list.

    Raises :class:`NotDegenerate` naming the stalled vertex set.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    removed, sides, stalled = _peel(d, k)
    if stalled:
        raise NotDegenerate(k, stalled)
    return DegeneracyOrder(tuple(reversed(removed)), k, tuple(reversed(sides)))


def color_from_degeneracy(
    d: Digraph, order: DegeneracyOrder, lists: Sequence[set[int]]
) -> list[int]:
    """List acyclic colouring read off a degeneracy order.

    Each vertex avoids the colours of the smaller of its earlier in- and
    out-neighbourhoods (at most ``k`` vertices), taking the smallest colour
    left in its list.
    """
    if len(lists) != d.n:
        raise ValueError("one list per vertex required")
    k = order.k
    pos = {v: j for j, v in enumerate(order.order)}
    colors = [0] * d.n
    for j, v in enumerate(order.order):
        if len(lists[v]) < k + 1:
            raise ListTooSmall(v, len(lists[v]), k + 1)
        back_in = [u for u in d.in_adj[v] if pos[u] < j]
        back_out = [u for u in d.out_adj[v] if pos[u] < j]
        blockers = back_in if len(back_in) <= len(back_out) else back_out
        if len(blockers) > k:
            raise ValueError(f"order is not {k}-degenerate at vertex {v}")
        taken = {colors[u] for u in blockers}
        colors[v] = min(c for c in lists[v] if c not in taken)
    return colors


def degeneracy_coloring(d: Digraph, k: int, lists: Sequence[set[int]] | None = None) -> list[int]:
    """Colour with lists (default ``{1..k+1}``) along a freshly computed k-degeneracy order."""
    if lists is None:
        lists = [set(range(1, k + 2))] * d.n
    return color_from_degeneracy(d, degeneracy_order(d, k), lists)


def scc_reduce(d: Digraph, component_solver: Callable[[Digraph], Sequence[int]]) -> list[int]:
    """Colour each strong component with ``component_solver`` and reuse colours across components.

    Every directed cycle lies inside one strong component, so the union of
    the per-component colourings is valid and uses as many colours as the
    worst component. Singleton components get colour 1 without a solver call.
    """
    colors = [1] * d.n
    for comp in strongly_connected_components(d):
        if len(comp) == 1:
            continue
        sub, labels = d.induced(comp)
        sub_colors = component_solver(sub)
        if len(sub_colors) != sub.n:
            raise ValueError("component solver returned a colouring of the wrong length")
        for i, c in enumerate(sub_colors):
            colors[labels[i]] = c
    return colors
