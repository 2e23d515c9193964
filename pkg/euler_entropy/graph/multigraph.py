"""The dart-based multigraph used throughout the package.

Every edge e is stored as two darts (half-edges), 2e and 2e + 1, one owned by each
endpoint. The partner of dart x is therefore x ^ 1, which is a fixed-point-free
involution on dart ids. Vertex ids are dense integers in [0, n) and dart ids are dense
integers in [0, 2m).
"""

from __future__ import annotations

import math
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import numpy.typing as npt

from euler_entropy.errors import (
    EdgeListParseError,
    IrregularGraphError,
    LoopEdgeError,
    OddDegreeError,
    ValidationError,
    VertexRangeError,
)


def partner(dart: int) -> int:
    """Get the other dart of the same edge."""
    return dart ^ 1


def edge_of(dart: int) -> int:
    """Get the id of the edge a dart belongs to."""
    return dart >> 1


@dataclass(frozen=True)
class MultiGraph:
    """An undirected loopless multigraph made of darts.

    Instances are immutable and can be shared freely between threads.
    """

    n: int
    """The number of vertices."""
    dart_vertex: tuple[int, ...]
    """The vertex owning each dart."""
    vertex_darts: tuple[tuple[int, ...], ...]
    """The darts incident to each vertex, in increasing order."""

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> MultiGraph:
        """Create a MultiGraph from a sequence of edges.

        Dart ids are assigned in the order the edges are given.

        Args:
            n: The number of vertices
            edges: Pairs of endpoints (parallel edges are allowed)
        Raises:
            ValidationError: n is negative
            VertexRangeError: An endpoint is outside [0, n)
            LoopEdgeError: An edge joins a vertex to itself
        """
        if n < 0:
            raise ValidationError(f"Number of vertices must be non-negative: {n}")

        dart_vertex: list[int] = []
        vertex_darts: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            for w in (u, v):
                if not 0 <= w < n:
                    raise VertexRangeError(w, n)
            if u == v:
                raise LoopEdgeError(u)

            for w in (u, v):
                vertex_darts[w].append(len(dart_vertex))
                dart_vertex.append(w)

        return cls(n, tuple(dart_vertex), tuple(map(tuple, vertex_darts)))

    @property
    def m(self) -> int:
        """The number of edges."""
        return len(self.dart_vertex) // 2

    def edge(self, e: int) -> tuple[int, int]:
        """Get the endpoints of edge e, in dart order."""
        return self.dart_vertex[2 * e], self.dart_vertex[2 * e + 1]

    def edges(self) -> list[tuple[int, int]]:
        """Get the endpoints of all edges, in edge id order."""
        return [self.edge(e) for e in range(self.m)]

    def degree(self, v: int) -> int:
        """Get the degree of vertex v."""
        return len(self.vertex_darts[v])

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        """The degree of every vertex."""
        return tuple(map(len, self.vertex_darts))

    @cached_property
    def regular_degree(self) -> int | None:
        """The common degree of all vertices, or None if the graph is irregular."""
        distinct = set(self.degrees)
        if len(distinct) == 1:
            return distinct.pop()
        return None

    @cached_property
    def is_simple(self) -> bool:
        """Whether the graph has no parallel edges."""
        return len(set(canonical_edges(self))) == self.m

    def neighbours(self, v: int) -> list[int]:
        """Get the far endpoint of each dart at v (with repeats for parallel edges)."""
        return [self.dart_vertex[partner(x)] for x in self.vertex_darts[v]]


def canonical_edges(graph: MultiGraph) -> list[tuple[int, int]]:
    """Get the sorted list of edges with each edge written as (min, max)."""
    return sorted((min(u, v), max(u, v)) for u, v in graph.edges())


def parse_edge_list(text: str) -> MultiGraph:
    """Parse a graph from an edge list.

    The first non-comment line is a header "n m"; it is followed by m lines of the form
    "u v". Anything after a '#' is a comment.

    >>> parse_edge_list("3 3\\n0 1\\n1 2\\n2 0").m
    3

    Raises:
        EdgeListParseError: A line is malformed or the edge count is wrong
        LoopEdgeError: An edge joins a vertex to itself
        VertexRangeError: A vertex index is out of range
    """
    header: tuple[int, int] | None = None
    edges: list[tuple[int, int]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.partition("#")[0].strip()
        if not line:
            continue

        fields = line.split()
        if len(fields) != 2:
            raise EdgeListParseError(line_no, raw, "expected two integers")
        try:
            a, b = int(fields[0]), int(fields[1])
        except ValueError:
            raise EdgeListParseError(line_no, raw, "expected two integers")

        if header is None:
            if a < 0 or b < 0:
                raise EdgeListParseError(line_no, raw, "header values must be >= 0")
            header = (a, b)
            continue

        n = header[0]
        for w in (a, b):
            if not 0 <= w < n:
                raise VertexRangeError(w, n)
        if a == b:
            raise LoopEdgeError(a)
        edges.append((a, b))

    if header is None:
        raise EdgeListParseError(0, "", "missing 'n m' header")
    if len(edges) != header[1]:
        raise EdgeListParseError(
            0, "", f"header declares {header[1]} edges but {len(edges)} were listed"
        )

    return MultiGraph.from_edges(header[0], edges)


def format_edge_list(graph: MultiGraph) -> str:
    """Write a graph as an edge list which parse_edge_list can read back."""
    lines = [f"{graph.n} {graph.m}", *(f"{u} {v}" for u, v in graph.edges())]
    return "\n".join(lines) + "\n"


def adjacency_matrix(graph: MultiGraph) -> npt.NDArray[np.int64]:
    """Get the adjacency matrix, counting parallel edges."""
    adj = np.zeros((graph.n, graph.n), dtype=np.int64)
    for u, v in graph.edges():
        adj[u, v] += 1
        adj[v, u] += 1
    return adj


def girth(graph: MultiGraph) -> float:
    """Get the length of the shortest cycle.

    Parallel edges form cycles of length 2. Forests have infinite girth.

    Returns:
        The girth as an int, or math.inf if the graph has no cycles
    """
    best = math.inf
    for root in range(graph.n):
        dist = [-1] * graph.n
        via = [-1] * graph.n  # edge used to reach each vertex
        dist[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] >= best:
                break
            for x in graph.vertex_darts[u]:
                e = edge_of(x)
                if e == via[u]:
                    continue
                w = graph.dart_vertex[partner(x)]
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    via[w] = e
                    queue.append(w)
                else:
                    best = min(best, dist[u] + dist[w] + 1)

    return best


def validate_eulerian_input(graph: MultiGraph, require_regular: bool = False) -> None:
    """Check that every degree is even (and, optionally, that all are equal).

    Raises:
        OddDegreeError: A vertex has odd degree
        IrregularGraphError: require_regular is set and the degrees differ
    """
    for v, degree in enumerate(graph.degrees):
        if degree % 2:
            raise OddDegreeError(v, degree)

    if require_regular and graph.n and graph.regular_degree is None:
        raise IrregularGraphError(frozenset(graph.degrees))


def require_regular_degree(graph: MultiGraph) -> int:
    """Get the degree of an even-degree regular graph.

    Raises:
        OddDegreeError: A vertex has odd degree
        IrregularGraphError: The graph is not regular
    """
    validate_eulerian_input(graph, require_regular=True)
    if graph.regular_degree is None:
        raise ValidationError("The graph has no vertices")
    return graph.regular_degree


def disjoint_union(first: MultiGraph, second: MultiGraph) -> MultiGraph:
    """Get the disjoint union; the second graph's vertices are shifted by first.n."""
    shifted = ((u + first.n, v + first.n) for u, v in second.edges())
    return MultiGraph.from_edges(first.n + second.n, [*first.edges(), *shifted])


def relabel(graph: MultiGraph, permutation: Sequence[int]) -> MultiGraph:
    """Rename vertex v to permutation[v], keeping the edge order.

    Raises:
        ValidationError: permutation is not a permutation of range(n)
    """
    if sorted(permutation) != list(range(graph.n)):
        raise ValidationError("Relabelling must be a permutation of the vertices")
    return MultiGraph.from_edges(
        graph.n, ((permutation[u], permutation[v]) for u, v in graph.edges())
    )
