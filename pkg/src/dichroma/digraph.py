"""Digraph and multidigraph values, structural queries and the text format.

Vertices are the dense integers ``0..n-1``. A :class:`Digraph` is simple
(no loops, no parallel arcs; digons allowed) and stores both out- and
in-adjacency. A :class:`MultiDigraph` allows loops and repeated arcs.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import BudgetExceeded

DEFAULT_BUDGET = 10**7

# the subset table holds 2**N int64 entries per strong component
_MAX_TABLE_VERTICES = 24


def _check_vertex(v: int, n: int) -> None:
    if not 0 <= v < n:
        raise ValueError(f"vertex {v} out of range 0..{n - 1}")


@dataclass(frozen=True)
class Digraph:
    n: int
    out_adj: tuple[tuple[int, ...], ...]
    in_adj: tuple[tuple[int, ...], ...] = field(repr=False)

    def __post_init__(self):
        if len(self.out_adj) != self.n or len(self.in_adj) != self.n:
            raise ValueError("adjacency length does not match n")
        for v, outs in enumerate(self.out_adj):
            for u in outs:
                _check_vertex(u, self.n)
            if v in outs:
                raise ValueError(f"loop at vertex {v}")
            if any(a >= b for a, b in zip(outs, outs[1:])):
                raise ValueError(f"out-list of {v} is not strictly increasing")
        if sum(map(len, self.in_adj)) != sum(map(len, self.out_adj)):
            raise ValueError("in- and out-adjacency disagree")
        for v, ins in enumerate(self.in_adj):
            for u in ins:
                if v not in self.out_adj[u]:
                    raise ValueError(f"in-list of {v} lists {u} without arc {u}->{v}")

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> Digraph:
        if n < 0:
            raise ValueError("n must be non-negative")
        outs: list[set[int]] = [set() for _ in range(n)]
        for u, v in arcs:
            _check_vertex(u, n)
            _check_vertex(v, n)
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if v in outs[u]:
                raise ValueError(f"parallel arc {u}->{v}")
            outs[u].add(v)
        ins: list[list[int]] = [[] for _ in range(n)]
        for u in range(n):
            for v in outs[u]:
                ins[v].append(u)
        return cls(
            n,
            tuple(tuple(sorted(o)) for o in outs),
            tuple(tuple(sorted(i)) for i in ins),
        )

    @classmethod
    def empty(cls, n: int) -> Digraph:
        return cls.from_arcs(n, ())

    @cached_property
    def m(self) -> int:
        return sum(map(len, self.out_adj))

    @cached_property
    def out_mask(self) -> tuple[int, ...]:
        """Out-neighbourhoods as integer bitmasks."""
        return tuple(sum(1 << u for u in outs) for outs in self.out_adj)

    @cached_property
    def in_mask(self) -> tuple[int, ...]:
        return tuple(sum(1 << u for u in ins) for ins in self.in_adj)

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.out_adj[u]]

    def has_arc(self, u: int, v: int) -> bool:
        return (self.out_mask[u] >> v) & 1 == 1

    def adjacent(self, u: int, v: int) -> bool:
        return self.has_arc(u, v) or self.has_arc(v, u)

    def outdeg(self, v: int) -> int:
        return len(self.out_adj[v])

    def indeg(self, v: int) -> int:
        return len(self.in_adj[v])

    def induced(self, vertices: Iterable[int]) -> tuple[Digraph, list[int]]:
        """Induced subdigraph relabelled to ``0..k-1`` in increasing id order.

        Returns the subdigraph and the list mapping new ids to old ids.
        """
        keep = sorted(set(vertices))
        for v in keep:
            _check_vertex(v, self.n)
        index = {v: i for i, v in enumerate(keep)}
        arcs = [
            (index[u], index[v])
            for u in keep
            for v in self.out_adj[u]
            if v in index
        ]
        return Digraph.from_arcs(len(keep), arcs), keep

    def reverse(self) -> Digraph:
        return Digraph(self.n, self.in_adj, self.out_adj)

    def has_digon(self) -> bool:
        return any(self.has_arc(v, u) for u, v in self.arcs())

    def is_oriented(self) -> bool:
        return not self.has_digon()


@dataclass(frozen=True)
class MultiDigraph:
    """Multidigraph with loops; ``out_adj[v]`` lists heads with repetition, sorted."""

    n: int
    out_adj: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.out_adj) != self.n:
            raise ValueError("adjacency length does not match n")
        for outs in self.out_adj:
            for u in outs:
                _check_vertex(u, self.n)

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> MultiDigraph:
        outs: list[list[int]] = [[] for _ in range(n)]
        for u, v in arcs:
            _check_vertex(u, n)
            _check_vertex(v, n)
            outs[u].append(v)
        return cls(n, tuple(tuple(sorted(o)) for o in outs))

    @property
    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.out_adj[u]]

    @cached_property
    def m(self) -> int:
        return sum(map(len, self.out_adj))

    def multiplicity(self, u: int, v: int) -> int:
        return self.out_adj[u].count(v)

    def indegrees(self) -> list[int]:
        deg = [0] * self.n
        for outs in self.out_adj:
            for v in outs:
                deg[v] += 1
        return deg

    def loop_vertices(self) -> list[int]:
        return [v for v in range(self.n) if v in self.out_adj[v]]

    def simplify(self) -> Digraph:
        """Drop loops and collapse parallel arcs."""
        arcs = {(u, v) for u, v in self.arcs if u != v}
        return Digraph.from_arcs(self.n, sorted(arcs))


def _members(d: Digraph, s: Iterable[int] | None) -> list[int]:
    if s is None:
        return list(range(d.n))
    members = sorted(set(s))
    for v in members:
        _check_vertex(v, d.n)
    return members


def is_acyclic(d: Digraph, s: Iterable[int] | None = None) -> bool:
    """True iff the subdigraph induced on ``s`` (default: all of ``d``) has no directed cycle.

    Kahn-style peeling of sources.
    """
    members = _members(d, s)
    inside = set(members)
    indeg = {v: sum(1 for u in d.in_adj[v] if u in inside) for v in members}
    stack = [v for v in members if indeg[v] == 0]
    removed = 0
    while stack:
        v = stack.pop()
        removed += 1
        for u in d.out_adj[v]:
            if u in inside:
                indeg[u] -= 1
                if indeg[u] == 0:
                    stack.append(u)
    return removed == len(members)


def find_cycle(d: Digraph, s: Iterable[int] | None = None) -> list[int] | None:
    """Some directed cycle inside ``s`` as a vertex list, or None. Iterative DFS."""
    members = _members(d, s)
    inside = set(members)
    state = dict.fromkeys(members, 0)  # 0 new, 1 on stack, 2 done
    parent: dict[int, int] = {}
    for root in members:
        if state[root]:
            continue
        state[root] = 1
        stack = [(root, iter(d.out_adj[root]))]
        while stack:
            v, it = stack[-1]
            for u in it:
                if u not in inside:
                    continue
                if state[u] == 0:
                    state[u] = 1
                    parent[u] = v
                    stack.append((u, iter(d.out_adj[u])))
                    break
                if state[u] == 1:
                    cycle = [v]
                    while cycle[-1] != u:
                        cycle.append(parent[cycle[-1]])
                    cycle.reverse()
                    return cycle
            else:
                state[v] = 2
                stack.pop()
    return None


def strongly_connected_components(d: Digraph) -> list[list[int]]:
    """Strong components in reverse topological order (sink components first).

    Iterative Tarjan; every arc goes from a component to one listed no later.
    """
    index = [-1] * d.n
    low = [0] * d.n
    on_stack = [False] * d.n
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0
    for root in range(d.n):
        if index[root] >= 0:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [(root, 0)]
        while work:
            v, i = work[-1]
            outs = d.out_adj[v]
            if i < len(outs):
                work[-1] = (v, i + 1)
                u = outs[i]
                if index[u] < 0:
                    index[u] = low[u] = counter
                    counter += 1
                    stack.append(u)
                    on_stack[u] = True
                    work.append((u, 0))
                elif on_stack[u]:
                    low[v] = min(low[v], index[u])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    u = stack.pop()
                    on_stack[u] = False
                    comp.append(u)
                    if u == v:
                        break
                components.append(sorted(comp))
    return components


def is_strong(d: Digraph) -> bool:
    return d.n > 0 and len(strongly_connected_components(d)) == 1


def digirth(d: Digraph) -> int | None:
    """Length of a shortest directed cycle, or None when ``d`` is acyclic."""
    best = None
    for v in range(d.n):
        targets = set(d.in_adj[v])
        if not targets:
            continue
        dist = {v: 0}
        frontier = [v]
        found = None
        while frontier and found is None:
            nxt = []
            for x in frontier:
                if x in targets:
                    found = dist[x] + 1
                    break
                for y in d.out_adj[x]:
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        nxt.append(y)
            frontier = nxt
            if best is not None and frontier and dist[frontier[0]] + 1 >= best:
                break
        if found is not None and (best is None or found < best):
            best = found
            if best == 2:
                break
    return best


class _CycleTable:
    """Subset dynamic programme over one strong component.

    ``ends[mask]`` is the bitmask of vertices ``v`` such that a directed path
    starts at the lowest vertex of ``mask``, visits exactly ``mask`` and ends
    at ``v``. A cycle on ``mask`` exists iff some end has an arc back to the
    start.
    """

    def __init__(self, d: Digraph):
        N = d.n
        size = 1 << N
        masks = np.arange(size, dtype=np.int64)
        self.pop = np.bitwise_count(masks).astype(np.int64)
        low = masks & -masks
        start = np.bitwise_count(np.maximum(low - 1, 0)).astype(np.int64)
        in_mask = np.array(d.in_mask, dtype=np.int64)
        ends = np.zeros(size, dtype=np.int64)
        for s in range(N):
            ends[1 << s] = 1 << s
        by_pop = np.argsort(self.pop, kind="stable")
        bounds = np.concatenate(([0], np.cumsum(np.bincount(self.pop, minlength=N + 1))))
        for L in range(1, N):
            idx = by_pop[bounds[L]:bounds[L + 1]]
            cur = ends[idx]
            live = cur != 0
            idx, cur = idx[live], cur[live]
            lo = low[idx]
            for w in range(N):
                bw = 1 << w
                sel = ((idx & bw) == 0) & (lo < bw) & ((cur & in_mask[w]) != 0)
                if sel.any():
                    ends[idx[sel] | bw] |= bw
        self.d = d
        self.ends = ends
        self.start = start
        self.closing = ends & in_mask[start] if N else ends
        self.closed = (self.closing != 0) & (self.pop >= 2)

    def lengths(self) -> set[int]:
        return {int(x) for x in np.unique(self.pop[self.closed])}

    def longest(self) -> list[int] | None:
        hits = np.flatnonzero(self.closed)
        if hits.size == 0:
            return None
        mask = int(hits[np.argmax(self.pop[hits])])
        s = int(self.start[mask])
        ends_bits = int(self.closing[mask])
        v = (ends_bits & -ends_bits).bit_length() - 1
        path = [v]
        while mask != 1 << s:
            prev = mask ^ (1 << v)
            cand = int(self.ends[prev]) & self.d.in_mask[v]
            v = (cand & -cand).bit_length() - 1
            path.append(v)
            mask = prev
        path.reverse()
        return path


def _cycle_tables(d: Digraph, budget: int):
    comps = [c for c in strongly_connected_components(d) if len(c) > 1]
    cost = sum(len(c) << len(c) for c in comps)
    biggest = max((len(c) for c in comps), default=0)
    if cost > budget or biggest > _MAX_TABLE_VERTICES:
        raise BudgetExceeded(
            f"exact cycle search needs {cost} nodes (largest strong component "
            f"{biggest}), budget {budget}"
        )
    for comp in comps:
        sub, labels = d.induced(comp)
        yield _CycleTable(sub), labels


def cycle_length_set(d: Digraph, budget: int = DEFAULT_BUDGET) -> set[int]:
    """All lengths of directed cycles of ``d`` (exact; exponential in the largest strong component)."""
    lengths: set[int] = set()
    for table, _ in _cycle_tables(d, budget):
        lengths |= table.lengths()
    return lengths


def longest_cycle(d: Digraph, budget: int = DEFAULT_BUDGET) -> list[int] | None:
    best = None
    for table, labels in _cycle_tables(d, budget):
        cyc = table.longest()
        if cyc is not None and (best is None or len(cyc) > len(best)):
            best = [labels[v] for v in cyc]
    return best


def circumference(d: Digraph, budget: int = DEFAULT_BUDGET) -> int | None:
    """Length of a longest directed cycle, or None when ``d`` is acyclic.

    Raises :class:`BudgetExceeded` rather than guessing when the search would
    exceed ``budget`` nodes.
    """
    cyc = longest_cycle(d, budget)
    return None if cyc is None else len(cyc)


# ---------------------------------------------------------------- text format

def format_digraph(d: Digraph) -> str:
    lines = [f"DIGRAPH {d.n} {d.m}"]
    lines += [f"{u} {v}" for u, v in d.arcs()]
    return "\n".join(lines) + "\n"


def format_multidigraph(g: MultiDigraph) -> str:
    lines = [f"MULTIDIGRAPH {g.n} {g.m}"]
    lines += [f"{u} {v}" for u, v in g.arcs]
    return "\n".join(lines) + "\n"


def _parse(text: str, header: str) -> tuple[int, list[tuple[int, int]]]:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty input")
    head = lines[0].split()
    if len(head) != 3 or head[0] != header:
        raise ValueError(f"expected header '{header} n m', got {lines[0]!r}")
    n, m = int(head[1]), int(head[2])
    if len(lines) - 1 != m:
        raise ValueError(f"header declares {m} arcs, found {len(lines) - 1}")
    arcs = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"bad arc line {ln!r}")
        arcs.append((int(parts[0]), int(parts[1])))
    return n, arcs


def parse_digraph(text: str) -> Digraph:
    return Digraph.from_arcs(*_parse(text, "DIGRAPH"))


def parse_multidigraph(text: str) -> MultiDigraph:
    return MultiDigraph.from_arcs(*_parse(text, "MULTIDIGRAPH"))


def read_digraph(path) -> Digraph:
    with open(path, encoding="ascii") as fh:
        return parse_digraph(fh.read())


def write_digraph(d: Digraph, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_digraph(d))


def read_multidigraph(path) -> MultiDigraph:
    with open(path, encoding="ascii") as fh:
        return parse_multidigraph(fh.read())


def write_multidigraph(g: MultiDigraph, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_multidigraph(g))


def vertex_set(d: Digraph, members: Sequence[int]) -> list[int]:
    """Validate and normalise a vertex subset to a sorted duplicate-free list."""
    return _members(d, members)
