"""Acyclic sets and dichromatic numbers of digraphs."""

from .cyclic_order import (
    color_short_cycles,
    cycle_index,
    equivalence_class,
    find_coherent_order,
    is_coherent,
    is_coherent_by_rotations,
    stable_interval_partition,
)
from .degeneracy import (
    DegeneracyOrder,
    color_from_degeneracy,
    degeneracy_coloring,
    degeneracy_order,
    scc_reduce,
    verify_degenerate,
)
from .digraph import (
    Digraph,
    MultiDigraph,
    circumference,
    cycle_length_set,
    digirth,
    find_cycle,
    is_acyclic,
    longest_cycle,
    parse_digraph,
    read_digraph,
    strongly_connected_components,
    write_digraph,
)
from .errors import (
    BudgetExceeded,
    DichromaError,
    ForbiddenSubgraph,
    ListTooSmall,
    NotDegenerate,
    RejectionFailed,
)
from .exact import (
    dichromatic_number,
    is_list_colorable,
    is_valid_coloring,
    max_acyclic_set,
)
from .experiments import ExperimentConfig, ExperimentRecord, run_experiment
from .heuristics import (
    GreedyTrace,
    c3free_acyclic,
    greedy_acyclic,
    greedy_truncated,
    tt3free_acyclic,
)

__version__ = "0.1.0"
