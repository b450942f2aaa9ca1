"""Decision engine: grammar analyses, search, oracle and the decision loop."""

from pvas_bound.core.bruteforce import brute_force_certificate
from pvas_bound.core.certsearch import (
    MaxOutTable,
    find_certificate,
    maxout_table,
    theoretical_cap,
)
from pvas_bound.core.decide import DecideOptions, decide
from pvas_bound.core.displacement import (
    bounded_displacement,
    derivability_witness,
    derive_witness,
    displacement_table,
    elementary_tree,
    find_positive_pump,
)
from pvas_bound.core.flowtree import (
    build_flow_tree,
    good_witness,
    is_good,
    rank_of,
    validate_certificate,
    validate_flow_tree,
)
from pvas_bound.core.grammar import (
    derivable_set,
    member,
    parse_word,
    prefix_closure_violations,
    productive_set,
    prune_nonproductive,
    shortest_tree,
    sum_of,
    yield_of,
)
from pvas_bound.core.normalize import normalize
from pvas_bound.core.oracle import ReachTable, max_reachable, reach_table, reachability_set
from pvas_bound.core.pvas import bfs_reach, reduce_to_gvas, step

__all__ = [
    "DecideOptions",
    "MaxOutTable",
    "ReachTable",
    "bfs_reach",
    "bounded_displacement",
    "brute_force_certificate",
    "build_flow_tree",
    "decide",
    "derivability_witness",
    "derivable_set",
    "derive_witness",
    "displacement_table",
    "elementary_tree",
    "find_certificate",
    "find_positive_pump",
    "good_witness",
    "is_good",
    "max_reachable",
    "maxout_table",
    "member",
    "normalize",
    "parse_word",
    "prefix_closure_violations",
    "productive_set",
    "prune_nonproductive",
    "rank_of",
    "reach_table",
    "reachability_set",
    "reduce_to_gvas",
    "shortest_tree",
    "step",
    "sum_of",
    "theoretical_cap",
    "validate_certificate",
    "validate_flow_tree",
    "yield_of",
]
