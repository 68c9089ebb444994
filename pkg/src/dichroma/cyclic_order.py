"""Cyclic orders of strong digraphs and the circumference/digirth colouring.

An enumeration is a tuple listing every vertex once. Rotating it, or
swapping its first two vertices when they are non-adjacent, gives an
elementarily equivalent enumeration; the classes of the generated
equivalence are the cyclic orders. An arc is backward when its head comes
first, and the index of a cycle is its number of backward arcs, which is
the same for every enumeration of a cyclic order.

Colouring: inside each strong component take a longest cycle C, make a
coherent enumeration in which C is simple, move within its cyclic order to
an enumeration that splits into |C| consecutive stable intervals, and give
each run of g-1 consecutive intervals one colour (g the digirth).
"""

from __future__ import annotations

import heapq
import itertools
import math
from collections import deque
from collections.abc import Sequence

from .digraph import (
    DEFAULT_BUDGET,
    Digraph,
    digirth,
    is_acyclic,
    longest_cycle,
    strongly_connected_components,
)
from .errors import BudgetExceeded

FORWARD, BACKWARD = "forward", "backward"

Enumeration = tuple[int, ...]


def _check_enumeration(d: Digraph, e: Sequence[int]) -> Enumeration:
    e = tuple(e)
    if sorted(e) != list(range(d.n)):
        raise ValueError("enumeration must list every vertex exactly once")
    return e


def _positions(e: Sequence[int]) -> dict[int, int]:
    return {v: i for i, v in enumerate(e)}


def arc_direction(e: Sequence[int], arc: tuple[int, int]) -> str:
    pos = _positions(e)
    u, v = arc
    return FORWARD if pos[u] < pos[v] else BACKWARD


def _check_cycle(d: Digraph, cycle: Sequence[int]) -> None:
    if len(cycle) < 2 or len(set(cycle)) != len(cycle):
        raise ValueError(f"{list(cycle)} is not a directed cycle")
    for a, b in zip(cycle, [*cycle[1:], cycle[0]]):
        if not d.has_arc(a, b):
            raise ValueError(f"{list(cycle)} is not a directed cycle: missing arc {a}->{b}")


def cycle_index(e: Sequence[int], cycle: Sequence[int], d: Digraph | None = None) -> int:
    """Number of backward arcs of ``cycle`` (given as its vertex sequence) in ``e``."""
    if d is not None:
        _check_cycle(d, cycle)
    elif len(cycle) < 2 or len(set(cycle)) != len(cycle):
        raise ValueError(f"{list(cycle)} is not a directed cycle")
    pos = _positions(e)
    return sum(1 for a, b in zip(cycle, [*cycle[1:], cycle[0]]) if pos[a] > pos[b])


def rotate(e: Sequence[int]) -> Enumeration:
    """Move the last vertex to the front."""
    e = tuple(e)
    return e[-1:] + e[:-1]


def elementary_moves(d: Digraph, e: Sequence[int]) -> list[Enumeration]:
    e = tuple(e)
    moves = [rotate(e)]
    if len(e) >= 2 and not d.adjacent(e[0], e[1]):
        moves.append((e[1], e[0]) + e[2:])
    return moves


def canonical(e: Sequence[int]) -> Enumeration:
    """Representative of the rotation orbit of ``e``: the rotation starting at its smallest vertex."""
    e = tuple(e)
    i = e.index(min(e))
    return e[i:] + e[:i]


def equivalence_class(d: Digraph, e: Sequence[int], budget: int = 100_000) -> set[Enumeration]:
    """All rotation orbits (as canonical representatives) of the cyclic order of ``e``.

    Breadth-first closure under elementary moves; raises
    :class:`BudgetExceeded` once more than ``budget`` orbits are found.
    """
    start = canonical(_check_enumeration(d, e))
    seen = {start}
    queue = deque([start])
    while queue:
        rep = queue.popleft()
        for r in range(len(rep)):
            rot = rep[r:] + rep[:r]
            if len(rot) >= 2 and not d.adjacent(rot[0], rot[1]):
                nxt = canonical((rot[1], rot[0]) + rot[2:])
                if nxt not in seen:
                    seen.add(nxt)
                    if len(seen) > budget:
                        raise BudgetExceeded(f"cyclic order has more than {budget} orbits")
                    queue.append(nxt)
    return seen


def _forward_reach(d: Digraph, e: Enumeration, i: int, j: int) -> set[int]:
    """Vertices at positions i..j reachable from ``e[i]`` by forward paths inside that window."""
    pos = _positions(e)
    reached = {e[i]}
    for p in range(i, j + 1):
        v = e[p]
        if v in reached:
            for u in d.out_adj[v]:
                if pos[u] > p and pos[u] <= j:
                    reached.add(u)
    return reached


def incoherent_arc(d: Digraph, e: Sequence[int]) -> tuple[int, int] | None:
    """A backward arc of ``e`` with no forward path from its head to its tail, if any.

    Returned as the position pair ``(i, j)``, ``i < j``, of the arc ``e[j] -> e[i]``.
    """
    e = tuple(e)
    pos = _positions(e)
    for j, v in enumerate(e):
        for u in d.out_adj[v]:
            i = pos[u]
            if i < j and v not in _forward_reach(d, e, i, j):
                return i, j
    return None


def is_coherent(d: Digraph, e: Sequence[int], budget: int = 100_000) -> bool:
    """Coherence of the cyclic order of ``e``, checked on every member of its class.

    The class is enumerated explicitly; use :func:`is_coherent_by_rotations`
    for the equivalent linear-size test.
    """
    for rep in equivalence_class(d, e, budget):
        for r in range(len(rep)):
            if incoherent_arc(d, rep[r:] + rep[:r]) is not None:
                return False
    return True


def is_coherent_by_rotations(d: Digraph, e: Sequence[int]) -> bool:
    """Coherence checked on the rotations of ``e`` only.

    A backward arc with a forward path back closes a cycle of index one, so
    an enumeration passes the single check iff each of its backward arcs
    lies on a simple cycle. Indices are class invariants, and each arc is
    backward in some rotation, so coherence of the class is the same as
    every arc lying on a simple cycle, which the rotations already decide.
    """
    e = _check_enumeration(d, e)
    return all(incoherent_arc(d, e[r:] + e[:r]) is None for r in range(len(e)))


def _repair(d: Digraph, e: Enumeration, i: int, j: int) -> Enumeration:
    # move the part of the window not forward-reachable from e[i] (it contains
    # e[j]) in front of the reachable part; no arc changes from forward to
    # backward and e[j] -> e[i] becomes forward
    reach = _forward_reach(d, e, i, j)
    window = e[i:j + 1]
    head = tuple(v for v in window if v not in reach)
    tail = tuple(v for v in window if v in reach)
    return e[:i] + head + tail + e[j + 1:]


def find_coherent_order(d: Digraph, cycle: Sequence[int], budget: int = DEFAULT_BUDGET) -> Enumeration:
    """A coherent enumeration of the strong digraph ``d`` in which ``cycle`` is simple.

    Starts from ``cycle`` followed by the other vertices and repairs
    incoherent backward arcs (over all rotations) until none remain. A repair
    never turns a forward arc backward and fixes one arc lying on a cycle, so
    the sum of all cycle indices drops each time and the loop ends; the index
    of ``cycle`` stays 1 throughout.
    """
    _check_cycle(d, cycle)
    if len(strongly_connected_components(d)) != 1:
        raise ValueError("digraph must be strongly connected")
    on_cycle = set(cycle)
    e = tuple(cycle) + tuple(v for v in range(d.n) if v not in on_cycle)
    repairs = 0
    while True:
        for r in range(d.n):
            rot = e[r:] + e[:r]
            bad = incoherent_arc(d, rot)
            if bad is not None:
                e = _repair(d, rot, *bad)
                repairs += 1
                break
        else:
            return e
        if repairs > budget:
            raise BudgetExceeded(f"coherent order repair exceeded {budget} steps")


class _Orientations:
    """Acyclic orientations of the underlying graph, one bit per edge.

    An enumeration orients each edge from its earlier end. Enumerations of
    one cyclic order correspond to the orientations reachable by turning a
    sink into a source or a source into a sink: a sink can be commuted past
    the non-adjacent vertices after it and then rotated to the front.
    """

    def __init__(self, d: Digraph):
        self.n = d.n
        edges = sorted({(min(u, v), max(u, v)) for u, v in d.arcs()})
        self.edges = edges
        self.incident: list[list[tuple[int, int, bool]]] = [[] for _ in range(d.n)]
        for idx, (u, v) in enumerate(edges):
            self.incident[u].append((idx, v, True))
            self.incident[v].append((idx, u, False))
        self.incident_mask = [sum(1 << idx for idx, _, _ in inc) for inc in self.incident]

    def of(self, e: Sequence[int]) -> int:
        pos = _positions(e)
        return sum(1 << idx for idx, (u, v) in enumerate(self.edges) if pos[u] < pos[v])

    def _points_out(self, state: int, v: int, idx: int, low_end: bool) -> bool:
        # bit set means the edge points from its lower id to its higher id
        return bool(state >> idx & 1) == low_end

    def out_neighbours(self, state: int, v: int) -> list[int]:
        return [w for idx, w, low in self.incident[v] if self._points_out(state, v, idx, low)]

    def layers(self, state: int) -> list[int]:
        """``layer[v]`` = vertex count of a longest path ending at ``v``."""
        indeg = [0] * self.n
        outs = [self.out_neighbours(state, v) for v in range(self.n)]
        for v in range(self.n):
            for w in outs[v]:
                indeg[w] += 1
        layer = [1] * self.n
        ready = [v for v in range(self.n) if indeg[v] == 0]
        while ready:
            v = ready.pop()
            for w in outs[v]:
                layer[w] = max(layer[w], layer[v] + 1)
                indeg[w] -= 1
                if indeg[w] == 0:
                    ready.append(w)
        return layer

    def flips(self, state: int):
        for v in range(self.n):
            if not self.incident[v]:
                continue
            outs = self.out_neighbours(state, v)
            if not outs or len(outs) == len(self.incident[v]):
                yield state ^ self.incident_mask[v]


def stable_interval_partition(
    d: Digraph, e: Sequence[int], cycle: Sequence[int], budget: int = 200_000
) -> list[list[int]]:
    """Intervals of an enumeration in the cyclic order of ``e`` that are stable sets.

    ``cycle`` must be simple in ``e``; the result has exactly ``len(cycle)``
    intervals, which for a longest cycle of a coherent order is guaranteed
    to be achievable. For a fixed enumeration the fewest consecutive stable
    intervals equals the vertex count of a longest path of its orientation,
    so the search is best-first over the orientations of the cyclic order,
    ordered by that length. Raises :class:`BudgetExceeded` after ``budget``
    expansions.
    """
    e = _check_enumeration(d, e)
    _check_cycle(d, cycle)
    if cycle_index(e, cycle) != 1:
        raise ValueError("cycle must be simple in the enumeration")
    target = len(cycle)
    space = _Orientations(d)
    start = space.of(e)
    tie = itertools.count()
    height = max(space.layers(start), default=0)
    heap = [(height, next(tie), start)]
    seen = {start}
    expanded = 0
    while heap:
        height, _, state = heapq.heappop(heap)
        if height <= target:
            layer = space.layers(state)
            return [
                [v for v in range(d.n) if layer[v] == h]
                for h in range(1, height + 1)
            ]
        expanded += 1
        if expanded > budget:
            raise BudgetExceeded(
                f"no {target}-interval enumeration found in {budget} expansions",
                bound=height,
            )
        for nxt in space.flips(state):
            if nxt not in seen:
                seen.add(nxt)
                heapq.heappush(heap, (max(space.layers(nxt)), next(tie), nxt))
    raise BudgetExceeded(f"cyclic order has no {target}-interval enumeration")


def short_cycle_bound(d: Digraph, budget: int = DEFAULT_BUDGET) -> int:
    """``ceil(s / (g - 1))`` for circumference ``s`` and digirth ``g``; 1 if acyclic."""
    g = digirth(d)
    if g is None:
        return 1
    cyc = longest_cycle(d, budget)
    return math.ceil(len(cyc) / (g - 1))


def color_short_cycles(d: Digraph, budget: int = DEFAULT_BUDGET) -> list[int]:
    """Acyclic colouring with at most ``ceil(s / (g - 1))`` colours.

    Colours each strong component with its own circumference and digirth
    (which can only lower the count) and reuses colours across components.
    """
    colors = [1] * d.n
    if is_acyclic(d):
        return colors
    for comp in strongly_connected_components(d):
        if len(comp) == 1:
            continue
        sub, labels = d.induced(comp)
        cyc = longest_cycle(sub, budget)
        g = digirth(sub)
        e = find_coherent_order(sub, cyc, budget)
        intervals = stable_interval_partition(sub, e, cyc, budget)
        for j, interval in enumerate(intervals):
            for v in interval:
                colors[labels[v]] = j // (g - 1) + 1
    return colors
