"""Exact broadcast independence, witness families and an extremal-graph generator."""

__version__ = "0.1.0"

from .exact_solvers import (
    Broadcast,
    Budget,
    SolverResult,
    Violation,
    alpha_b_bruteforce,
    alpha_b_exact,
    diametral_broadcast,
    is_independent_broadcast,
    max_independent_set,
    max_packing,
    validate_broadcast,
)
from .extremal_gen import (
    ConstructionOptions,
    ConstructionReport,
    run_construction,
    structural_violations,
    sweep_csv,
    sweep_summary,
)
from .graph_core import (
    NAMED_GRAPHS,
    DisconnectedGraphError,
    Graph,
    GraphError,
    all_pairs_distances,
    diameter,
    eccentricity,
    girth,
    is_connected,
    min_degree,
    parse_graph,
    serialize_graph,
    square_graph,
)
from .witness import (
    Certificate,
    HypothesisViolation,
    WitnessFamily,
    build_witness,
    strict_improvement_check,
    verify_witness,
)

__all__ = [
    "all_pairs_distances",
    "alpha_b_bruteforce",
    "alpha_b_exact",
    "Broadcast",
    "Budget",
    "build_witness",
    "Certificate",
    "ConstructionOptions",
    "ConstructionReport",
    "diameter",
    "diametral_broadcast",
    "DisconnectedGraphError",
    "eccentricity",
    "girth",
    "Graph",
    "GraphError",
    "HypothesisViolation",
    "is_connected",
    "is_independent_broadcast",
    "max_independent_set",
    "max_packing",
    "min_degree",
    "NAMED_GRAPHS",
    "parse_graph",
    "run_construction",
    "serialize_graph",
    "SolverResult",
    "square_graph",
    "strict_improvement_check",
    "structural_violations",
    "sweep_csv",
    "sweep_summary",
    "validate_broadcast",
    "verify_witness",
    "Violation",
    "WitnessFamily",
]
