"""Exact edge orientation: minimize the maximum out-degree over all
orientations of an undirected graph (equivalently, compute its
pseudoarboricity), with improving-path engines, flow baselines and
optimality certificates."""

from .graph import (
    Orientation,
    Path,
    UndirectedGraph,
    build_graph,
    flip_path,
    max_out_degree,
    orientation_from_arcs,
)
from .graphio import (
    ParseError,
    parse_edge_list,
    parse_matrix_market,
    parse_metis,
    write_orientation,
    write_report,
)
from .initialize import fast_improve, initial_orientation
from .reduction import (
    ReductionOutcome,
    charikar_peel,
    maybe_reduce,
    merge_orientation,
    reduce,
)
from .search import (
    Counters,
    LayerBuckets,
    SearchState,
    SolveReport,
    SolveTimeout,
    SolverConfig,
    batched_bfs,
    eager_layer_count,
    eager_path_search,
    exhaustive_dfs,
    find_improving_path,
    naive_dfs,
    solve_rpo,
)
from .flow import (
    FlowNetwork,
    bipartite_dstar,
    bipartite_oracle,
    kowalik_solve,
    kowalik_test,
    max_flow,
)
from .verify import (
    Certificate,
    CertificateError,
    ValidationError,
    brute_force_dstar,
    certificate_or_refine,
    extract_certificate,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "CertificateError",
    "Counters",
    "FlowNetwork",
    "LayerBuckets",
    "Orientation",
    "ParseError",
    "Path",
    "ReductionOutcome",
    "SearchState",
    "SolveReport",
    "SolveTimeout",
    "SolverConfig",
    "UndirectedGraph",
    "ValidationError",
    "batched_bfs",
    "bipartite_dstar",
    "bipartite_oracle",
    "brute_force_dstar",
    "build_graph",
    "certificate_or_refine",
    "charikar_peel",
    "eager_layer_count",
    "eager_path_search",
    "exhaustive_dfs",
    "extract_certificate",
    "fast_improve",
    "find_improving_path",
    "flip_path",
    "initial_orientation",
    "kowalik_solve",
    "kowalik_test",
    "max_flow",
    "max_out_degree",
    "maybe_reduce",
    "merge_orientation",
    "naive_dfs",
    "orientation_from_arcs",
    "parse_edge_list",
    "parse_matrix_market",
    "parse_metis",
    "reduce",
    "solve_rpo",
    "validate",
    "write_orientation",
    "write_report",
]
