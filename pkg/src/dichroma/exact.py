"""Exact acyclic-set, dichromatic-number and list-colourability solvers.

These are exponential-time searches meant for small instances; they are the
oracles the polynomial algorithms are checked against. Every search takes a
node budget and raises :class:`~dichroma.errors.BudgetExceeded` instead of
returning an unproven answer.

A colouring is a sequence of positive integers indexed by vertex. A list
assignment is a sequence of sets of positive integers indexed by vertex.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np

from .digraph import (
    DEFAULT_BUDGET,
    Digraph,
    MultiDigraph,
    is_acyclic,
    strongly_connected_components,
)
from .errors import BudgetExceeded

# strong components up to this size fall back to full subset enumeration
SUBSET_FALLBACK_MAX = 20


class _OutOfBudget(Exception):
    pass


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _reach_closes(out_mask, in_mask, v: int, cls: int) -> bool:
    """Would adding ``v`` to the acyclic class ``cls`` (a bitmask) close a cycle?"""
    target = in_mask[v] & cls
    if not target:
        return False
    frontier = out_mask[v] & cls
    seen = frontier
    while frontier:
        if seen & target:
            return True
        nxt = 0
        for u in _bits(frontier):
            nxt |= out_mask[u]
        frontier = nxt & cls & ~seen
        seen |= frontier
    return bool(seen & target)


# ------------------------------------------------------------ colourings

def is_valid_coloring(d: Digraph, colors: Sequence[int]) -> bool:
    """Every colour class induces an acyclic subdigraph."""
    if len(colors) != d.n:
        return False
    classes: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        if not isinstance(c, (int, np.integer)) or c < 1:
            return False
        classes.setdefault(int(c), []).append(v)
    return all(is_acyclic(d, members) for members in classes.values())


def respects_lists(colors: Sequence[int], lists: Sequence[set[int]]) -> bool:
    return len(colors) == len(lists) and all(c in l for c, l in zip(colors, lists))


def num_colors(colors: Sequence[int]) -> int:
    return len(set(colors))


def color_classes(colors: Sequence[int]) -> dict[int, list[int]]:
    classes: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        classes.setdefault(c, []).append(v)
    return classes


def check_lists(lists: Sequence[set[int]], n: int) -> list[frozenset[int]]:
    if len(lists) != n:
        raise ValueError(f"list assignment has {len(lists)} entries for {n} vertices")
    out = []
    for v, l in enumerate(lists):
        l = frozenset(int(c) for c in l)
        if not l:
            raise ValueError(f"empty list at vertex {v}")
        if min(l) < 1:
            raise ValueError(f"non-positive colour in list of vertex {v}")
        out.append(l)
    return out


def format_lists(lists: Sequence[set[int]]) -> str:
    lines = [f"LISTS {len(lists)}"]
    for v, l in enumerate(lists):
        lines.append(" ".join(str(x) for x in [v, *sorted(l)]))
    return "\n".join(lines) + "\n"


def parse_lists(text: str) -> list[frozenset[int]]:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0][0] != "LISTS" or len(lines[0]) != 2:
        raise ValueError("expected header 'LISTS n'")
    n = int(lines[0][1])
    if len(lines) - 1 != n:
        raise ValueError(f"header declares {n} lists, found {len(lines) - 1}")
    lists: list = [None] * n
    for parts in lines[1:]:
        v = int(parts[0])
        if not 0 <= v < n or lists[v] is not None:
            raise ValueError(f"bad or repeated vertex {v}")
        lists[v] = {int(x) for x in parts[1:]}
    return check_lists(lists, n)


def read_lists(path) -> list[frozenset[int]]:
    with open(path, encoding="ascii") as fh:
        return parse_lists(fh.read())


def write_lists(lists: Sequence[set[int]], path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_lists(lists))


# ------------------------------------------------------------ max acyclic set

class _FVSSearch:
    """Branch and bound for a minimum feedback vertex set of a strong digraph.

    Branches on the undecided vertices of a shortest cycle of the current
    core: the i-th child deletes the i-th vertex and keeps the earlier ones,
    so children are disjoint. The lower bound is a greedy packing of
    vertex-disjoint cycles.
    """

    def __init__(self, d: Digraph, budget: int):
        self.n = d.n
        self.out = d.out_mask
        self.inn = d.in_mask
        self.budget = budget
        self.nodes = 0
        self.best_deleted, self.best_alive = self._greedy()

    def _core(self, alive: int) -> int:
        out, inn = self.out, self.inn
        changed = True
        while changed:
            changed = False
            for v in _bits(alive):
                if not (out[v] & alive) or not (inn[v] & alive):
                    alive &= ~(1 << v)
                    changed = True
        return alive

    def _shortest_cycle(self, core: int) -> list[int]:
        out, inn = self.out, self.inn
        best: list[int] | None = None
        for v in _bits(core):
            target = inn[v] & core
            parent = {v: -1}
            frontier = [v]
            depth = 0
            hit = -1
            while frontier and hit < 0:
                depth += 1
                if best is not None and depth >= len(best):
                    break
                nxt = []
                for x in frontier:
                    if target >> x & 1:
                        hit = x
                        break
                    for y in _bits(out[x] & core):
                        if y not in parent:
                            parent[y] = x
                            nxt.append(y)
                frontier = nxt
            if hit >= 0:
                cyc = [hit]
                while cyc[-1] != v:
                    cyc.append(parent[cyc[-1]])
                cyc.reverse()
                if best is None or len(cyc) < len(best):
                    best = cyc
                    if len(best) == 2:
                        break
        assert best is not None
        return best

    def _greedy(self) -> tuple[int, int]:
        alive = (1 << self.n) - 1
        deleted = 0
        core = self._core(alive)
        while core:
            v = max(
                _bits(core),
                key=lambda x: (
                    (self.out[x] & core).bit_count() * (self.inn[x] & core).bit_count(),
                    -x,
                ),
            )
            alive &= ~(1 << v)
            deleted += 1
            core = self._core(alive)
        return deleted, alive

    def _packing(self, core: int, kept: int) -> int | None:
        """Number of disjoint cycles found greedily; None if some cycle is fully kept."""
        count = 0
        while core:
            cyc = self._shortest_cycle(core)
            if all(kept >> v & 1 for v in cyc):
                return None
            count += 1
            for v in cyc:
                core &= ~(1 << v)
            core = self._core(core)
        return count

    def run(self) -> int:
        self._search((1 << self.n) - 1, 0, 0)
        return self.best_alive

    def _search(self, alive: int, kept: int, deleted: int) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise _OutOfBudget
        core = self._core(alive)
        if not core:
            if deleted < self.best_deleted:
                self.best_deleted, self.best_alive = deleted, alive
            return
        packed = self._packing(core, kept)
        if packed is None or deleted + packed >= self.best_deleted:
            return
        cyc = self._shortest_cycle(core)
        undecided = sorted(v for v in cyc if not kept >> v & 1)
        for i, u in enumerate(undecided):
            extra = sum(1 << w for w in undecided[:i])
            self._search(alive & ~(1 << u), kept | extra, deleted + 1)


def acyclic_subset_table(d: Digraph) -> np.ndarray:
    """Boolean array over all ``2**n`` vertex subsets (as bitmasks): is the subset acyclic?

    A nonempty subset is acyclic iff it has a sink whose removal leaves an
    acyclic subset; subsets are processed by increasing size.
    """
    n = d.n
    size = 1 << n
    masks = np.arange(size, dtype=np.int64)
    pop = np.bitwise_count(masks)
    acyc = np.zeros(size, dtype=bool)
    acyc[0] = True
    out = np.array(d.out_mask, dtype=np.int64)
    by_pop = np.argsort(pop, kind="stable")
    bounds = np.concatenate(([0], np.cumsum(np.bincount(pop, minlength=n + 1))))
    for L in range(1, n + 1):
        idx = by_pop[bounds[L]:bounds[L + 1]]
        ok = np.zeros(idx.size, dtype=bool)
        for v in range(n):
            bv = 1 << v
            sink = ((idx & bv) != 0) & ((idx & out[v]) == 0)
            ok |= sink & acyc[idx ^ bv]
        acyc[idx] = ok
    return acyc


def _max_acyclic_by_table(d: Digraph) -> int:
    acyc = acyclic_subset_table(d)
    hits = np.flatnonzero(acyc)
    pops = np.bitwise_count(hits)
    best = pops.max()
    # lowest-id-first: the lexicographically smallest sorted member list
    winners = [int(h) for h in hits[pops == best]]
    return min(winners, key=lambda m: list(_bits(m)))


def _max_acyclic_strong(d: Digraph, budget: int) -> tuple[int, int]:
    """Return (bitmask of a maximum acyclic set, nodes used)."""
    search = _FVSSearch(d, budget)
    try:
        return search.run(), search.nodes
    except _OutOfBudget:
        if d.n <= SUBSET_FALLBACK_MAX:
            return _max_acyclic_by_table(d), search.nodes
        raise BudgetExceeded(
            "maximum acyclic set search exceeded its budget",
            bound=d.n - search.best_deleted,
            witness=list(_bits(search.best_alive)),
        ) from None


def max_acyclic_set(d: Digraph | MultiDigraph, budget: int = DEFAULT_BUDGET) -> list[int]:
    """A maximum acyclic vertex set, sorted.

    The problem splits over strong components; each nontrivial component is
    solved as a minimum feedback vertex set by branch and bound, with a
    subset-enumeration fallback for components of at most 20 vertices. For a
    multidigraph, loop vertices are excluded and parallel arcs collapsed.
    On an exhausted budget raises :class:`BudgetExceeded` whose ``bound`` is
    the size of the acyclic ``witness`` found so far.
    """
    if isinstance(d, MultiDigraph):
        loops = set(d.loop_vertices())
        simple = d.simplify()
        sub, labels = simple.induced(v for v in range(d.n) if v not in loops)
        return [labels[v] for v in max_acyclic_set(sub, budget)]
    chosen: list[int] = []
    remaining = budget
    comps = strongly_connected_components(d)
    for i, comp in enumerate(comps):
        if len(comp) == 1:
            chosen.append(comp[0])
            continue
        sub, labels = d.induced(comp)
        try:
            mask, used = _max_acyclic_strong(sub, max(remaining, 0))
        except BudgetExceeded as exc:
            rest = [v for c in comps[i + 1:] for v in c if len(c) == 1]
            witness = sorted(chosen + [labels[v] for v in exc.witness] + rest)
            raise BudgetExceeded(str(exc), bound=len(witness), witness=witness) from None
        remaining -= used
        chosen.extend(labels[v] for v in _bits(mask))
    return sorted(chosen)


# ------------------------------------------------------------ dichromatic number

def _greedy_coloring(d: Digraph, order: Sequence[int]) -> list[int]:
    colors = [0] * d.n
    classes: list[int] = []
    for v in order:
        for c, cls in enumerate(classes):
            if not _reach_closes(d.out_mask, d.in_mask, v, cls):
                classes[c] |= 1 << v
                colors[v] = c + 1
                break
        else:
            classes.append(1 << v)
            colors[v] = len(classes)
    return colors


class _ColoringSearch:
    def __init__(self, d: Digraph, budget: int):
        self.d = d
        self.budget = budget
        self.nodes = 0
        self.order = sorted(range(d.n), key=lambda v: (-(d.indeg(v) + d.outdeg(v)), v))

    def k_colorable(self, k: int) -> list[int] | None:
        colors = [0] * self.d.n
        classes = [0] * k
        out, inn = self.d.out_mask, self.d.in_mask

        def go(i: int, used: int) -> bool:
            self.nodes += 1
            if self.nodes > self.budget:
                raise _OutOfBudget
            if i == len(self.order):
                return True
            v = self.order[i]
            for c in range(min(used + 1, k)):
                if _reach_closes(out, inn, v, classes[c]):
                    continue
                classes[c] |= 1 << v
                colors[v] = c + 1
                if go(i + 1, max(used, c + 1)):
                    return True
                classes[c] &= ~(1 << v)
            colors[v] = 0
            return False

        return list(colors) if go(0, 0) else None


def _chi_strong(d: Digraph, budget: int) -> tuple[int, list[int], int]:
    if d.n == 1:
        return 1, [1], 0
    search = _ColoringSearch(d, budget)
    witness = _greedy_coloring(d, search.order)
    upper = num_colors(witness)
    lower = 2
    spent = 0
    if d.n <= SUBSET_FALLBACK_MAX:
        # exact alpha is affordable here, so ceil(n / alpha) is a sound bound
        try:
            mask, spent = _max_acyclic_strong(d, budget // 4 + 1)
            lower = max(lower, math.ceil(d.n / mask.bit_count()))
        except BudgetExceeded:
            pass
    search.budget = max(budget - spent, 0)
    try:
        for k in range(lower, upper):
            found = search.k_colorable(k)
            if found is not None:
                return k, found, spent + search.nodes
    except _OutOfBudget:
        raise BudgetExceeded(
            f"dichromatic number search exceeded its budget (best upper bound {upper})",
            bound=upper,
            witness=witness,
        ) from None
    return upper, witness, spent + search.nodes


def dichromatic_number(d: Digraph, budget: int = DEFAULT_BUDGET) -> tuple[int, list[int]]:
    """Exact dichromatic number and an optimal colouring.

    Strong components are coloured independently with a shared palette, so
    the answer is the maximum over components. Raises :class:`BudgetExceeded`
    with ``bound`` an upper bound and ``witness`` a valid colouring achieving it.
    """
    colors = [1] * d.n
    k = 1 if d.n else 0
    remaining = budget
    for comp in strongly_connected_components(d):
        if len(comp) == 1:
            continue
        sub, labels = d.induced(comp)
        try:
            kc, cc, used = _chi_strong(sub, remaining)
        except BudgetExceeded as exc:
            for i, c in enumerate(exc.witness):
                colors[labels[i]] = c
            raise BudgetExceeded(str(exc), bound=max(k, exc.bound), witness=colors) from None
        remaining -= used
        k = max(k, kc)
        for i, c in enumerate(cc):
            colors[labels[i]] = c
    return k, colors


# ------------------------------------------------------------ list colouring

def _list_color_strong(d: Digraph, lists, budget: int) -> tuple[list[int] | None, int]:
    n = d.n
    out, inn = d.out_mask, d.in_mask
    colors = [0] * n
    classes: dict[int, int] = {}
    nodes = 0

    def go(unassigned: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise _OutOfBudget
        if not unassigned:
            return True
        best_v, best_opts = -1, None
        for v in _bits(unassigned):
            opts = [
                c for c in sorted(lists[v])
                if not _reach_closes(out, inn, v, classes.get(c, 0))
            ]
            if best_opts is None or len(opts) < len(best_opts):
                best_v, best_opts = v, opts
                if not opts:
                    return False
        for c in best_opts:
            classes[c] = classes.get(c, 0) | (1 << best_v)
            colors[best_v] = c
            if go(unassigned & ~(1 << best_v)):
                return True
            classes[c] &= ~(1 << best_v)
        colors[best_v] = 0
        return False

    try:
        ok = go((1 << n) - 1)
    except _OutOfBudget:
        return None, -1
    return (list(colors) if ok else None), nodes


def is_list_colorable(
    d: Digraph, lists: Sequence[set[int]], budget: int = DEFAULT_BUDGET
) -> list[int] | None:
    """An acyclic colouring with ``colors[v] in lists[v]``, or None if none exists.

    Backtracking with most-constrained-vertex ordering, run independently per
    strong component. An exhausted budget (the "unknown" outcome) raises
    :class:`BudgetExceeded`.
    """
    lists = check_lists(lists, d.n)
    colors = [0] * d.n
    remaining = budget
    for comp in strongly_connected_components(d):
        if len(comp) == 1:
            colors[comp[0]] = min(lists[comp[0]])
            continue
        sub, labels = d.induced(comp)
        found, used = _list_color_strong(sub, [lists[v] for v in comp], remaining)
        if used < 0:
            raise BudgetExceeded("list colouring search exceeded its budget")
        if found is None:
            return None
        remaining -= used
        for i, c in enumerate(found):
            colors[labels[i]] = c
    return colors
