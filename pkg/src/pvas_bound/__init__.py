"""pvas-bound: counter-boundedness of one-dimensional pushdown VAS."""

from pvas_bound.core import (
    DecideOptions,
    decide,
    find_certificate,
    normalize,
    reachability_set,
    reduce_to_gvas,
    validate_certificate,
    validate_flow_tree,
)
from pvas_bound.core.errors import PvasBoundError
from pvas_bound.models import (
    Certificate,
    FlowTree,
    Gvas,
    NormalizedGvas,
    Pvas,
    Verdict,
    VerdictKind,
)

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "DecideOptions",
    "FlowTree",
    "Gvas",
    "NormalizedGvas",
    "Pvas",
    "PvasBoundError",
    "Verdict",
    "VerdictKind",
    "decide",
    "find_certificate",
    "normalize",
    "reachability_set",
    "reduce_to_gvas",
    "validate_certificate",
    "validate_flow_tree",
]
