"""Treewidth 2-approximation by local splitting of tree decompositions.

Given a graph and an integer k, the package either produces a tree
decomposition of width at most 2k+1 or a machine-checkable certificate that
the treewidth exceeds k. Exhaustive oracles for exact treewidth and minimum
splits back the incremental engine in tests, and PACE-format .gr/.td text is
supported throughout.
"""

from .dpengine import EditPlan, SplitEngine
from .errors import BudgetError, ContractViolation, ParseError
from .graph import Graph, emit_gr, parse_gr
from .improver import (
    Decomposition,
    EditableInfo,
    LowerBound,
    RunStats,
    approximate,
    build_replacement,
    find_editable,
    potential,
    reduce_width_pass,
)
from .oracle import exact_treewidth, exact_treewidth_naive, exhaustive_min_split
from .splits import (
    Split,
    better_objective,
    canonical_groups,
    is_valid_split,
    make_split,
    split_distance,
)
from .treedec import (
    STRATEGIES,
    RootedView,
    TreeDecomposition,
    decomposition_from_order,
    emit_td,
    initial_decomposition,
    normalize_degree3,
    parse_td,
    root_and_home_bags,
    validate,
    width,
)

__all__ = [
    "BudgetError",
    "ContractViolation",
    "Decomposition",
    "EditPlan",
    "EditableInfo",
    "Graph",
    "LowerBound",
    "ParseError",
    "RootedView",
    "RunStats",
    "STRATEGIES",
    "Split",
    "SplitEngine",
    "TreeDecomposition",
    "approximate",
    "better_objective",
    "build_replacement",
    "canonical_groups",
    "decomposition_from_order",
    "emit_gr",
    "emit_td",
    "exact_treewidth",
    "exact_treewidth_naive",
    "exhaustive_min_split",
    "find_editable",
    "initial_decomposition",
    "is_valid_split",
    "make_split",
    "normalize_degree3",
    "parse_gr",
    "parse_td",
    "potential",
    "reduce_width_pass",
    "root_and_home_bags",
    "split_distance",
    "validate",
    "width",
]
