"""Instance sources: random models, explicit constructions and small fixtures.

Randomness comes from numpy ``Generator`` objects seeded with plain
integers. Stream splitting: the seed of sub-sample ``key`` of master seed
``s`` is :func:`derive_seed` ``(s, *key)``, a fixed function of its inputs,
so samples are reproducible independently of execution order.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .digraph import Digraph, MultiDigraph
from .errors import RejectionFailed
from .exact import max_acyclic_set

MAX_BLOWUP_VERTICES = 200_000


def derive_seed(master: int, *key: int) -> int:
    """Deterministic 63-bit seed for sub-stream ``key`` of ``master``."""
    ss = np.random.SeedSequence(int(master), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1))


def make_rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


# ------------------------------------------------------------ fixtures

def directed_cycle(n: int) -> Digraph:
    return Digraph.from_arcs(n, [(i, (i + 1) % n) for i in range(n)])


def directed_path(n: int) -> Digraph:
    return Digraph.from_arcs(n, [(i, i + 1) for i in range(n - 1)])


def transitive_tournament(n: int) -> Digraph:
    """Arcs ``i -> j`` for ``i < j``: vertex 0 is the source, ``n - 1`` the sink."""
    return Digraph.from_arcs(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def bidirected(n: int, edges) -> Digraph:
    return Digraph.from_arcs(n, [a for u, v in edges for a in ((u, v), (v, u))])


def bidirected_complete(n: int) -> Digraph:
    return bidirected(n, itertools.combinations(range(n), 2))


def bidirected_cycle(n: int) -> Digraph:
    return bidirected(n, [(i, (i + 1) % n) for i in range(n)])


def disjoint_union(*parts: Digraph) -> Digraph:
    arcs, offset = [], 0
    for d in parts:
        arcs += [(u + offset, v + offset) for u, v in d.arcs()]
        offset += d.n
    return Digraph.from_arcs(offset, arcs)


def paley_tournament(q: int = 7) -> Digraph:
    """Quadratic-residue tournament, ``i -> i + s mod q`` for nonzero squares ``s`` (q = 3 mod 4 prime)."""
    if q % 4 != 3:
        raise ValueError("q must be 3 mod 4")
    squares = sorted({(x * x) % q for x in range(1, q)})
    return Digraph.from_arcs(q, [(i, (i + s) % q) for i in range(q) for s in squares])


def cycle_blowup(sizes, density: float = 1.0, seed=None) -> Digraph:
    """Replace vertex i of a directed cycle by an independent set of ``sizes[i]`` vertices.

    Arcs go from block i to block i+1 (cyclically); with ``density < 1`` each
    such arc is kept independently with that probability.
    """
    k = len(sizes)
    starts = np.concatenate(([0], np.cumsum(sizes))).astype(int)
    rng = make_rng(seed)
    arcs = []
    for i in range(k):
        j = (i + 1) % k
        for u in range(starts[i], starts[i + 1]):
            for v in range(starts[j], starts[j + 1]):
                if density >= 1.0 or rng.random() < density:
                    arcs.append((u, v))
    return Digraph.from_arcs(int(starts[-1]), arcs)


FIXTURES = {
    "paley7": lambda: paley_tournament(7),
    "c3": lambda: directed_cycle(3),
    "c4": lambda: directed_cycle(4),
    "c5": lambda: directed_cycle(5),
    "tt4": lambda: transitive_tournament(4),
    "k4": lambda: bidirected_complete(4),
    "k5": lambda: bidirected_complete(5),
}


# ------------------------------------------------------------ directed configuration model

@dataclass(frozen=True)
class ConfigPairing:
    """Out-point ``i*r + a`` (slot ``a`` of vertex ``i``) is paired with in-point ``pairing[i*r + a]``."""

    n: int
    r: int
    pairing: np.ndarray

    def heads(self) -> np.ndarray:
        """Head vertex of each out-point, shape ``(n, r)``."""
        return (self.pairing // self.r).reshape(self.n, self.r) if self.r else np.zeros((self.n, 0), int)

    def multidigraph(self) -> MultiDigraph:
        heads = np.sort(self.heads(), axis=1)
        return MultiDigraph(self.n, tuple(tuple(row) for row in heads.tolist()))


@dataclass(frozen=True)
class SimplicityReport:
    loops: int
    parallel_arcs: int
    digons: int

    @property
    def simple(self) -> bool:
        return self.loops == 0 and self.parallel_arcs == 0

    @property
    def oriented(self) -> bool:
        return self.simple and self.digons == 0


def sample_pairing(n: int, r: int, rng: np.random.Generator) -> ConfigPairing:
    if n < 1 or r < 0:
        raise ValueError("need n >= 1 and r >= 0")
    # numpy's permutation is a Fisher-Yates shuffle of the in-point array
    return ConfigPairing(n, r, rng.permutation(n * r))


def sample_directed_configuration(n: int, r: int, seed) -> tuple[ConfigPairing, MultiDigraph]:
    """Uniform directed configuration on ``n`` vertices with ``r`` in- and out-points each."""
    pairing = sample_pairing(n, r, make_rng(seed))
    return pairing, pairing.multidigraph()


def classify(g: MultiDigraph) -> SimplicityReport:
    """Count loop arcs, surplus parallel non-loop arcs and digon vertex pairs."""
    counts = Counter(g.arcs)
    loops = sum(c for (u, v), c in counts.items() if u == v)
    parallel = sum(c - 1 for (u, v), c in counts.items() if u != v)
    digons = sum(1 for (u, v) in counts if u < v and (v, u) in counts)
    return SimplicityReport(loops, parallel, digons)


def heads_oriented(heads: np.ndarray) -> np.ndarray:
    """Vectorised orientedness test for a batch of configurations.

    ``heads`` has shape ``(batch, n, r)``; returns a boolean per configuration
    that is True iff it has no loop, parallel arc or digon, i.e. all the
    unordered vertex pairs of its arcs are distinct and non-degenerate.
    """
    batch, n, r = heads.shape
    tails = np.broadcast_to(np.arange(n)[None, :, None], heads.shape)
    lo = np.minimum(tails, heads).reshape(batch, -1).astype(np.int64)
    hi = np.maximum(tails, heads).reshape(batch, -1).astype(np.int64)
    no_loop = ~(lo == hi).any(axis=1)
    keys = np.sort(lo * n + hi, axis=1)
    distinct = ~(keys[:, 1:] == keys[:, :-1]).any(axis=1)
    return no_loop & distinct


_MODES = ("multi", "simple", "oriented")


def _accepts(report: SimplicityReport, mode: str) -> bool:
    return mode == "multi" or (report.simple if mode == "simple" else report.oriented)


def sample_regular(n: int, r: int, mode: str = "oriented", seed=0, max_tries: int = 100_000):
    """Uniform r-regular (multi)digraph of the requested class, by rejection.

    ``mode`` is ``"multi"`` (configuration multidigraph, never rejected),
    ``"simple"`` or ``"oriented"``; accepted configurations are uniform over
    their class because every simple digraph arises from the same number of
    configurations. Attempt ``t`` uses seed ``derive_seed(seed, t)``.
    Returns a :class:`MultiDigraph` for ``multi`` and a :class:`Digraph`
    otherwise.
    """
    if mode not in _MODES:
        raise ValueError(f"mode must be one of {_MODES}")
    if r < 1:
        raise ValueError("r must be positive")
    if mode == "simple" and n < r + 1:
        raise ValueError("a simple r-regular digraph needs n >= r + 1")
    if mode == "oriented" and n < 2 * r + 1:
        raise ValueError("an oriented r-regular digraph needs n >= 2r + 1")
    for t in range(max_tries):
        _, g = sample_directed_configuration(n, r, derive_seed(seed, t))
        if mode == "multi":
            return g
        if _accepts(classify(g), mode):
            return g.simplify()
    raise RejectionFailed(max_tries)


def orientedness_probability(r: int) -> float:
    """Limit probability that the directed configuration multidigraph is oriented: ``exp(-mu1 - mu2)``."""
    if r < 1:
        raise ValueError("r must be positive")
    mu = lambda i: ((2 * r - 1) ** i + 1) / (2 * i)
    return math.exp(-mu(1) - mu(2))


# ------------------------------------------------------------ binomial models

def sample_binomial_oriented(n: int, p: float, seed) -> Digraph:
    """Each unordered pair becomes an edge with probability ``2p``, oriented by a fair coin."""
    if not 0 <= 2 * p <= 1:
        raise ValueError("need 0 <= 2p <= 1")
    rng = make_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    chosen = rng.random(iu.size) < 2 * p
    flip = rng.random(iu.size) < 0.5
    tails = np.where(flip, ju, iu)[chosen]
    heads = np.where(flip, iu, ju)[chosen]
    return Digraph.from_arcs(n, zip(tails.tolist(), heads.tolist()))


def random_tournament(n: int, seed) -> Digraph:
    return sample_binomial_oriented(n, 0.5, seed)


def block_sizes(n: int, s: int) -> list[int]:
    """``ceil(n/s)`` block sizes, as equal as possible, each at most ``s``."""
    b = math.ceil(n / s)
    q, extra = divmod(n, b)
    return [q + 1] * extra + [q] * (b - extra)


def layered_tournament(
    n: int,
    s: int,
    seed=0,
    verify_blocks: bool = False,
    max_tries: int = 1000,
    alpha_cap: int = 24,
    budget: int = 10**6,
) -> Digraph:
    """Tournament whose cycles stay inside blocks of at most ``s`` vertices.

    Blocks are consecutive id ranges; every arc between blocks goes from the
    earlier block to the later one, and each block carries a random
    tournament. With ``verify_blocks`` each block is resampled until its exact
    maximum acyclic set is smaller than ``2 log2(s) + 2``.
    """
    if not 1 <= s <= n:
        raise ValueError("need 1 <= s <= n")
    if verify_blocks and s > alpha_cap:
        raise ValueError(f"block size {s} exceeds the exact-oracle cap {alpha_cap}")
    limit = 2 * math.log2(s) + 2
    arcs = []
    start = 0
    sizes = block_sizes(n, s)
    for b, size in enumerate(sizes):
        for t in range(max_tries):
            block = random_tournament(size, derive_seed(seed, b, t))
            if not verify_blocks or len(max_acyclic_set(block, budget)) < limit:
                break
        else:
            raise RejectionFailed(max_tries)
        arcs += [(u + start, v + start) for u, v in block.arcs()]
        arcs += [
            (u, v)
            for u in range(start, start + size)
            for v in range(start + size, n)
        ]
        start += size
    return Digraph.from_arcs(n, arcs)


def layered_blocks(n: int, s: int) -> list[list[int]]:
    out, start = [], 0
    for size in block_sizes(n, s):
        out.append(list(range(start, start + size)))
        start += size
    return out


def modular_blowup(k: int, t: int) -> tuple[Digraph, list[frozenset[int]]]:
    """Blow-up of the directed k-cycle whose cycle lengths are multiples of k, with
    a t-list assignment it cannot satisfy.

    With ``c = k(t-1) + 1`` each block has ``C(c, t)`` independent vertices
    whose lists are the distinct t-subsets of ``{1..c}`` in lexicographic order;
    block i is completely joined to block i+1 (mod k).
    """
    if k < 3 or t < 1:
        raise ValueError("need k >= 3 and t >= 1")
    c = k * (t - 1) + 1
    size = math.comb(c, t)
    if k * size > MAX_BLOWUP_VERTICES:
        raise ValueError(f"blow-up would have {k * size} vertices")
    d = cycle_blowup([size] * k)
    subsets = [frozenset(sub) for sub in itertools.combinations(range(1, c + 1), t)]
    return d, subsets * k


# ------------------------------------------------------------ Eulerian orientations

def _multigraph_edges(g: MultiDigraph) -> list[tuple[int, int]]:
    """Edges of the underlying multigraph (orientation forgotten), normalised ``u <= v``."""
    return sorted((min(u, v), max(u, v)) for u, v in g.arcs)


def count_eulerian_orientations(g: MultiDigraph, max_edges: int = 24) -> int:
    """Labelled Eulerian orientations of the multigraph underlying ``g``, loops counting twice.

    Brute force over all orientations of the labelled non-loop edges; each
    loop is balanced whichever way it turns and contributes a factor 2.
    """
    edges = _multigraph_edges(g)
    loops = sum(1 for u, v in edges if u == v)
    proper = [(u, v) for u, v in edges if u != v]
    if len(proper) > max_edges:
        raise ValueError(f"{len(proper)} edges is too many for brute force (max {max_edges})")
    count = 0
    for bits in range(1 << len(proper)):
        balance = [0] * g.n
        for i, (u, v) in enumerate(proper):
            if bits >> i & 1:
                u, v = v, u
            balance[u] += 1
            balance[v] -= 1
        if not any(balance):
            count += 1
    return count << loops


def eulerian_orientation_weight(g: MultiDigraph) -> int:
    """The same count via unlabelled Eulerian orientations weighted by binomials.

    Sum over orientations that choose how many copies of each edge go each
    way, of ``2^loops * prod C(mult(e), copies oriented low -> high)``.
    """
    edges = Counter(_multigraph_edges(g))
    loops = sum(c for (u, v), c in edges.items() if u == v)
    proper = [(e, c) for e, c in edges.items() if e[0] != e[1]]
    total = 0
    for forward in itertools.product(*[range(c + 1) for _, c in proper]):
        balance = [0] * g.n
        weight = 1
        for ((u, v), c), f in zip(proper, forward):
            balance[u] += f - (c - f)
            balance[v] -= f - (c - f)
            weight *= math.comb(c, f)
        if not any(balance):
            total += weight
    return total << loops


def expected_eulerian_orientations(n: int, r: int) -> Fraction:
    """Mean labelled Eulerian-orientation count of the 2r-regular configuration multigraph on n vertices."""
    return Fraction(2 ** (n * r) * math.comb(2 * r, r) ** n, math.comb(2 * n * r, n * r))


def _perfect_matchings(points: list[int]):
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for i, other in enumerate(rest):
        for m in _perfect_matchings(rest[:i] + rest[i + 1:]):
            yield [(first, other), *m]


def _multigraph_key(n: int, edges) -> tuple:
    return tuple(sorted((min(u, v), max(u, v)) for u, v in edges))


def configuration_law(n: int, degree: int) -> dict[tuple, Fraction]:
    """Exact law of the undirected configuration multigraph ``G*(n, degree)`` by enumerating pairings."""
    points = list(range(n * degree))
    law: dict[tuple, Fraction] = {}
    matchings = list(_perfect_matchings(points))
    for m in matchings:
        key = _multigraph_key(n, [(a // degree, b // degree) for a, b in m])
        law[key] = law.get(key, 0) + Fraction(1, len(matchings))
    return law


def forgotten_directed_law(n: int, r: int) -> dict[tuple, Fraction]:
    """Exact law of the directed configuration multidigraph with orientations forgotten."""
    law: dict[tuple, Fraction] = {}
    perms = list(itertools.permutations(range(n * r)))
    for perm in perms:
        key = _multigraph_key(n, [(a // r, b // r) for a, b in enumerate(perm)])
        law[key] = law.get(key, 0) + Fraction(1, len(perms))
    return law


def eulerian_identity_table(n: int, r: int) -> list[dict]:
    """Per 2r-regular multigraph on n vertices: both sides of ``E*/E[E*] = Q/P``.

    P is the configuration law with degree 2r, Q the forgotten directed law
    with degree r, both by full enumeration; ``E*`` is the brute-force count.
    """
    P = configuration_law(n, 2 * r)
    Q = forgotten_directed_law(n, r)
    mean = expected_eulerian_orientations(n, r)
    enumerated_mean = sum(
        p * count_eulerian_orientations(MultiDigraph.from_arcs(n, key)) for key, p in P.items()
    )
    rows = []
    for key, p in sorted(P.items()):
        g = MultiDigraph.from_arcs(n, key)
        e_star = count_eulerian_orientations(g)
        rows.append(
            {
                "edges": key,
                "P": p,
                "Q": Q.get(key, Fraction(0)),
                "E*": e_star,
                "lhs": Fraction(e_star) / mean,
                "rhs": Q.get(key, Fraction(0)) / p,
                "enumerated_mean": enumerated_mean,
                "formula_mean": mean,
            }
        )
    return rows
