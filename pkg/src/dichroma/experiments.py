"""Monte Carlo harness for random regular digraphs.

Every sample gets its own seed, ``derive_seed(master, kind_code, n, r or
round(p * 1e9), index)``, and its statistics are a pure function of
``(kind, n, r, p, seed)`` (see :func:`sample_statistics`). Records are
therefore identical whether cells run sequentially or in parallel.

Stochastic claims are checked at fixed ``(n, samples)``; confidence
half-widths use the normal approximation with ``z = 3``. These tolerances
are engineering choices, not finite-n theorems.
"""

from __future__ import annotations

import csv
import io
import math
import os
import statistics
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .digraph import DEFAULT_BUDGET
from .exact import max_acyclic_set
from .generators import (
    derive_seed,
    heads_oriented,
    make_rng,
    orientedness_probability,
    sample_binomial_oriented,
    sample_pairing,
    sample_regular,
)
from .heuristics import greedy_acyclic

KINDS = ("orientedness", "greedy-scaling", "r1-cycles", "abk-probe", "upper-bound-consistency")
_KIND_CODE = {k: i for i, k in enumerate(KINDS)}
Z = 3.0
CSV_HEADER = ["kind", "n", "r", "p", "sample", "seed", "stat", "value"]


@dataclass
class ExperimentConfig:
    kind: str
    ns: Sequence[int]
    rs: Sequence[int] = ()
    ps: Sequence[float] = ()
    samples: int = 100
    seed: int = 0
    output: str | None = None
    # "oriented": rejection-sampled oriented graphs; "config": the raw
    # configuration multidigraph (loops ignored by the greedy)
    model: str = "oriented"
    max_tries: int = 100_000
    exact_max_n: int = 15
    budget: int = DEFAULT_BUDGET
    workers: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.samples < 1:
            raise ValueError("samples must be positive")
        if self.model not in ("oriented", "config"):
            raise ValueError("model must be 'oriented' or 'config'")


@dataclass(frozen=True)
class ExperimentRecord:
    kind: str
    n: int
    r: int | None
    p: float | None
    sample: int
    seed: int
    stat: str
    value: float


@dataclass
class ExperimentResult:
    records: list[ExperimentRecord]
    summary: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


def harmonic(n: int) -> float:
    return math.fsum(1.0 / i for i in range(1, n + 1))


def greedy_floor(n: int, r: int) -> float:
    return n * math.log2(r + 1) / (5 * r)


def alpha_upper(n: int, r: int) -> float:
    return (2 * math.log(r) + 4) * n / r


def permutation_cycles(perm: Sequence[int]) -> int:
    seen = bytearray(len(perm))
    cycles = 0
    for start in range(len(perm)):
        if not seen[start]:
            cycles += 1
            v = start
            while not seen[v]:
                seen[v] = 1
                v = perm[v]
    return cycles


def _cell_key(r, p) -> int:
    return int(r) if r is not None else int(round(p * 1e9))


def sample_seed(cfg: ExperimentConfig, n: int, r, p, index: int) -> int:
    return derive_seed(cfg.seed, _KIND_CODE[cfg.kind], n, _cell_key(r, p), index)


def _regular_graph(n, r, seed, model, max_tries):
    if model == "config":
        return sample_regular(n, r, "multi", seed)
    return sample_regular(n, r, "oriented", seed, max_tries)


def sample_statistics(kind: str, n: int, r, p, seed: int, cfg: ExperimentConfig) -> list[tuple[str, float]]:
    """All statistics of one sample, recomputed from its seed."""
    if kind == "orientedness":
        pairing = sample_pairing(n, r, make_rng(seed))
        ok = heads_oriented(pairing.heads()[None])[0]
        return [("oriented", float(ok))]

    if kind == "greedy-scaling":
        g = _regular_graph(n, r, seed, cfg.model, cfg.max_tries)
        order = make_rng(derive_seed(seed, 1)).permutation(n)
        size = greedy_acyclic(g, order).size
        stats = [
            ("greedy_size", size),
            ("floor_violation", float(size < greedy_floor(n, r))),
            ("upper_violation", float(size > alpha_upper(n, r))),
        ]
        if r >= 2:
            stats.append(("ratio", size * r / (n * math.log(r))))
        return stats

    if kind == "r1-cycles":
        pairing = sample_pairing(n, 1, make_rng(seed))
        cycles = permutation_cycles(pairing.pairing.tolist())
        stats = [("cycles", cycles), ("n_minus_cycles", n - cycles)]
        if n <= cfg.exact_max_n:
            alpha = len(max_acyclic_set(pairing.multidigraph(), cfg.budget))
            stats.append(("alpha", alpha))
        return stats

    if kind == "abk-probe":
        if r is not None:
            g = _regular_graph(n, r, seed, cfg.model, cfg.max_tries)
        else:
            g = sample_binomial_oriented(n, p, seed)
        m = g.m
        order = make_rng(derive_seed(seed, 1)).permutation(n)
        size = greedy_acyclic(g, order).size
        stats = [("greedy_size", size), ("m", m)]
        if m > n:
            stats.append(("ratio", size / ((n * n / m) * math.log2(m / n))))
        return stats

    if kind == "upper-bound-consistency":
        g = _regular_graph(n, r, seed, cfg.model, cfg.max_tries)
        alpha = len(max_acyclic_set(g, cfg.budget))
        return [("alpha", alpha), ("alpha_over_n", alpha / n)]

    raise ValueError(f"unknown experiment kind {kind!r}")


def _cells(cfg: ExperimentConfig) -> list[tuple[int, int | None, float | None]]:
    cells = []
    for n in cfg.ns:
        if cfg.kind == "r1-cycles":
            cells.append((n, 1, None))
            continue
        for r in cfg.rs:
            cells.append((n, r, None))
        if cfg.kind == "abk-probe":
            for p in cfg.ps:
                cells.append((n, None, p))
    return cells


def _work(args):
    cfg, n, r, p, index = args
    seed = sample_seed(cfg, n, r, p, index)
    return [
        ExperimentRecord(cfg.kind, n, r, p, index, seed, stat, float(value))
        for stat, value in sample_statistics(cfg.kind, n, r, p, seed, cfg)
    ]


def _worker_count(cfg: ExperimentConfig) -> int:
    if cfg.workers is not None:
        return max(1, cfg.workers)
    return max(1, int(os.environ.get("DICHROMA_THREADS", "1")))


def collect_records(cfg: ExperimentConfig) -> list[ExperimentRecord]:
    tasks = [(cfg, n, r, p, i) for n, r, p in _cells(cfg) for i in range(cfg.samples)]
    workers = _worker_count(cfg)
    if workers == 1 or len(tasks) < 2:
        chunks = map(_work, tasks)
        return [rec for chunk in chunks for rec in chunk]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map preserves task order, so the output matches the sequential run
        chunks = pool.map(_work, tasks, chunksize=max(1, len(tasks) // (8 * workers)))
        return [rec for chunk in chunks for rec in chunk]


def _describe(values: list[float]) -> dict:
    return {
        "count": len(values),
        "min": min(values),
        "max": max(values),
        "mean": statistics.fmean(values),
        "std": statistics.stdev(values) if len(values) > 1 else 0.0,
    }


def summarize(cfg: ExperimentConfig, records: Iterable[ExperimentRecord]) -> list[dict]:
    groups: dict[tuple, list[float]] = {}
    for rec in records:
        groups.setdefault((rec.n, rec.r, rec.p, rec.stat), []).append(rec.value)
    rows = []
    for (n, r, p, stat), values in groups.items():
        row = {"kind": cfg.kind, "n": n, "r": r, "p": p, "stat": stat, **_describe(values)}
        if cfg.kind == "orientedness":
            target = orientedness_probability(r)
            row["target"] = target
            row["half_width"] = Z * math.sqrt(target * (1 - target) / len(values))
        elif cfg.kind == "greedy-scaling" and stat.endswith("violation"):
            row["violations"] = int(sum(values))
        elif cfg.kind == "greedy-scaling" and stat == "greedy_size":
            row["floor"] = greedy_floor(n, r)
            row["upper"] = alpha_upper(n, r)
        elif cfg.kind == "r1-cycles" and stat == "cycles":
            row["target"] = harmonic(n)
            row["half_width"] = Z * row["std"] / math.sqrt(len(values)) if len(values) > 1 else 0.0
        rows.append(row)
    return rows


def _notes(cfg: ExperimentConfig) -> list[str]:
    notes = ["tolerances are engineering choices at fixed (n, samples); no finite-n error bounds are known"]
    if cfg.kind == "abk-probe":
        for n, r, p in _cells(cfg):
            if r is not None and r <= 1:
                notes.append(f"n={n} r={r}: ratio skipped, m <= n makes log2(m/n) non-positive")
        notes.append("for r-regular graphs m = nr and the denominator reduces to (n/r) log2 r")
    if cfg.kind in ("greedy-scaling", "abk-probe") and cfg.model == "config":
        notes.append("graphs are raw configuration multidigraphs; loops are ignored by the greedy")
    if cfg.kind == "upper-bound-consistency" and cfg.model == "config":
        notes.append("graphs are raw configuration multidigraphs; loop vertices are excluded from the acyclic set")
    return notes


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    records = collect_records(cfg)
    result = ExperimentResult(records, summarize(cfg, records), _notes(cfg))
    if cfg.output:
        write_csv(records, cfg.output)
    return result


def _run_kind(kind: str, cfg: ExperimentConfig) -> ExperimentResult:
    if cfg.kind != kind:
        raise ValueError(f"config kind {cfg.kind!r} does not match {kind!r}")
    return run_experiment(cfg)


def run_orientedness(cfg: ExperimentConfig) -> ExperimentResult:
    """Fraction of configuration multidigraphs that are oriented, per (n, r)."""
    return _run_kind("orientedness", cfg)


def run_greedy_scaling(cfg: ExperimentConfig) -> ExperimentResult:
    """Greedy acyclic set sizes against the lower floor and the upper bound on the maximum."""
    return _run_kind("greedy-scaling", cfg)


def run_r1_cycle_count(cfg: ExperimentConfig) -> ExperimentResult:
    return _run_kind("r1-cycles", cfg)


def run_abk_probe(cfg: ExperimentConfig) -> ExperimentResult:
    """Greedy size over ``(n^2/m) log2(m/n)``; reported, never judged."""
    return _run_kind("abk-probe", cfg)


def run_upper_bound_consistency(cfg: ExperimentConfig) -> ExperimentResult:
    return _run_kind("upper-bound-consistency", cfg)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.9g}"
    return str(x)


def records_to_csv(records: Iterable[ExperimentRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow(
            [rec.kind, rec.n, _fmt(rec.r), _fmt(rec.p), rec.sample, rec.seed, rec.stat, _fmt(float(rec.value))]
        )
    return buf.getvalue()


def write_csv(records: Iterable[ExperimentRecord], path) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(records_to_csv(records))


def read_csv(path) -> list[ExperimentRecord]:
    with open(path, encoding="ascii", newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [
        ExperimentRecord(
            row["kind"],
            int(row["n"]),
            int(row["r"]) if row["r"] else None,
            float(row["p"]) if row["p"] else None,
            int(row["sample"]),
            int(row["seed"]),
            row["stat"],
            float(row["value"]),
        )
        for row in rows
    ]
