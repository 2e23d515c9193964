"""Graph representation, generators, parsing and structural queries."""

from euler_entropy.graph.generators import (
    GeneratorKind,
    GeneratorSpec,
    cartesian_product,
    generate,
    load_graph,
    parse_generator_spec,
)
from euler_entropy.graph.multigraph import (
    MultiGraph,
    adjacency_matrix,
    canonical_edges,
    disjoint_union,
    edge_of,
    format_edge_list,
    girth,
    parse_edge_list,
    partner,
    relabel,
    require_regular_degree,
    validate_eulerian_input,
)

__all__ = [
    "GeneratorKind",
    "GeneratorSpec",
    "MultiGraph",
    "adjacency_matrix",
    "canonical_edges",
    "cartesian_product",
    "disjoint_union",
    "edge_of",
    "format_edge_list",
    "generate",
    "girth",
    "load_graph",
    "parse_edge_list",
    "parse_generator_spec",
    "partner",
    "relabel",
    "require_regular_degree",
    "validate_eulerian_input",
]
