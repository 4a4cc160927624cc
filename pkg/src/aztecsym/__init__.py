"""Exact matching counts for Aztec-rectangle graph families and for square-lattice
regions with drawn-in diagonals, together with the closed-form product formulas
that enumerate their centrally symmetric tilings.

Everything is computed in exact rational arithmetic; no counting path touches
floating point.
"""

from .graph import (
    CapExceeded,
    Involution,
    Matching,
    NonPlanar,
    NotCentrallySymmetric,
    Unmatchable,
    WeightedGraph,
    central_involution,
    count_matchings,
    count_symmetric_matchings,
    enumerate_perfect_matchings,
    reduce_forced_edges,
)

__all__ = [
    "CapExceeded",
    "Involution",
    "Matching",
    "NonPlanar",
    "NotCentrallySymmetric",
    "Unmatchable",
    "WeightedGraph",
    "central_involution",
    "count_matchings",
    "count_symmetric_matchings",
    "enumerate_perfect_matchings",
    "reduce_forced_edges",
]

__version__ = "0.1.0"
