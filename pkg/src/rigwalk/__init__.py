"""Random walks on binomial random intersection graphs G(n, m, p).

Sampling, cover-time and return-probability estimation, exact small-graph
oracles, asymptotic predictions and checks of the typical-graph properties.
"""
from .genrand import RngStream, intersection_of, sample_bipartite, sample_er, sample_graph
from .model import (
    BipartiteGraph,
    CapacityError,
    DerivedQuantities,
    GraphParams,
    IntersectionGraph,
    ParameterError,
    derive,
    derive_params,
)
from .theory import cover_prediction, lambda_family, lambda_value, theory_report
from .verify import property_report, verify_frequencies
from .walk import WalkError, estimate_cover_time, exact_cover_time, return_stats

__version__ = "0.1.0"

__all__ = [
    "BipartiteGraph",
    "CapacityError",
    "DerivedQuantities",
    "GraphParams",
    "IntersectionGraph",
    "ParameterError",
    "RngStream",
    "WalkError",
    "cover_prediction",
    "derive",
    "derive_params",
    "estimate_cover_time",
    "exact_cover_time",
    "intersection_of",
    "lambda_family",
    "lambda_value",
    "property_report",
    "return_stats",
    "sample_bipartite",
    "sample_er",
    "sample_graph",
    "theory_report",
    "verify_frequencies",
]
