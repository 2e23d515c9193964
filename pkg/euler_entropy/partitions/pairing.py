"""Eulerian partitions: per-vertex pairings of darts and the trails they induce.

A partition is stored as a flat tuple `mate` of length 2m, where mate[x] is the dart
paired with x at the vertex owning x. Following a trail means crossing an edge
(x -> partner(x)) and then turning at the far vertex (y -> mate[y]).
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Iterator, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cache, cached_property

import numpy as np

from euler_entropy import config
from euler_entropy.budget import resolve_cap, send_progress
from euler_entropy.errors import (
    EnumerationCapExceeded,
    InvalidPartitionError,
    ValidationError,
)
from euler_entropy.graph import MultiGraph, partner, validate_eulerian_input

SAMPLE_STREAM = 0
"""First spawn-key word of the random streams used to draw partitions."""

BOOTSTRAP_STREAM = 1
"""First spawn-key word of the random stream used for bootstrap resampling."""


def pairings_per_vertex(d: int) -> int:
    """Get the number of ways of pairing the darts at a vertex of degree d.

    This is d! / ((d/2)! 2^(d/2)) = (d - 1)!!.

    >>> pairings_per_vertex(6)
    15

    Raises:
        ValidationError: d is odd or less than 2
    """
    if d < 2 or d % 2:
        raise ValidationError(f"Degree must be even and at least 2: {d}")
    return math.factorial(d) // (math.factorial(d // 2) * 2 ** (d // 2))


def partition_count(graph: MultiGraph) -> int:
    """Get the number of Eulerian partitions of a graph, the product of (deg - 1)!!."""
    validate_eulerian_input(graph)
    return math.prod(pairings_per_vertex(d) for d in graph.degrees if d)


@cache
def index_matchings(d: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Get all perfect matchings of range(d) in lexicographic order.

    The first point is matched with each of the others in turn and the rest are
    matched recursively.
    """
    if d == 0:
        return ((),)

    matchings = []
    for j in range(1, d):
        rest = [i for i in range(1, d) if i != j]
        for sub in index_matchings(d - 2):
            matchings.append(((0, j), *((rest[a], rest[b]) for a, b in sub)))
    return tuple(matchings)


@dataclass(frozen=True)
class Trail:
    """A closed trail, stored as the sequence of darts by which it leaves each vertex.

    Dart i leaves vertices[i]; the trail enters vertices[i + 1] by partner(darts[i]).
    """

    darts: tuple[int, ...]
    vertices: tuple[int, ...] = field(compare=False)

    @classmethod
    def from_darts(cls, graph: MultiGraph, darts: Sequence[int]) -> Trail:
        """Create a Trail from its outgoing darts.

        Raises:
            ValidationError: The darts do not form a closed trail
        """
        darts = tuple(darts)
        vertices = tuple(graph.dart_vertex[x] for x in darts)
        for i, x in enumerate(darts):
            if graph.dart_vertex[partner(x)] != vertices[(i + 1) % len(darts)]:
                raise ValidationError(f"Darts {darts} do not form a closed walk")
        if len({x >> 1 for x in darts}) != len(darts):
            raise ValidationError(f"Darts {darts} repeat an edge")
        return cls(darts, vertices)

    @property
    def length(self) -> int:
        """The number of edges."""
        return len(self.darts)

    @cached_property
    def distinct_vertices(self) -> int:
        """The number of distinct vertices visited."""
        return len(set(self.vertices))

    def visits(self) -> dict[int, list[tuple[int, int]]]:
        """Get the (incoming, outgoing) dart pair of every visit, grouped by vertex.

        Visits to a vertex are listed in the order they occur along the trail.
        """
        by_vertex: dict[int, list[tuple[int, int]]] = {}
        for i, x in enumerate(self.darts):
            incoming = partner(self.darts[i - 1])
            by_vertex.setdefault(self.vertices[i], []).append((incoming, x))
        return by_vertex


@dataclass(frozen=True)
class TrailSet:
    """The closed trails induced by a partition."""

    trails: tuple[Trail, ...]

    def __len__(self) -> int:
        """Get the number of trails."""
        return len(self.trails)

    def __iter__(self) -> Iterator[Trail]:
        """Iterate over the trails."""
        return iter(self.trails)

    @property
    def total_length(self) -> int:
        """The sum of the trail lengths, which equals m."""
        return sum(t.length for t in self.trails)


@dataclass(frozen=True)
class EulerianPartition:
    """A pairing of the darts at every vertex of a graph."""

    graph: MultiGraph = field(compare=False, repr=False)
    mate: tuple[int, ...]

    def __post_init__(self) -> None:
        """Check that mate is a valid pairing at every vertex.

        Raises:
            InvalidPartitionError: The pairing is invalid
        """
        dart_vertex = self.graph.dart_vertex
        if len(self.mate) != len(dart_vertex):
            raise InvalidPartitionError(
                f"Expected {len(dart_vertex)} darts, got {len(self.mate)}"
            )
        for x, y in enumerate(self.mate):
            if not 0 <= y < len(dart_vertex) or y == x or self.mate[y] != x:
                raise InvalidPartitionError(f"Dart {x} is not properly paired")
            if dart_vertex[y] != dart_vertex[x]:
                raise InvalidPartitionError(
                    f"Darts {x} and {y} are paired but lie at different vertices"
                )

    def pairs_at(self, v: int) -> list[tuple[int, int]]:
        """Get the pairs at vertex v, each written (smaller, larger)."""
        mate = self.mate
        return [(x, mate[x]) for x in self.graph.vertex_darts[v] if x < mate[x]]

    def induces(self, trail: Trail) -> bool:
        """Whether every turn of the trail is a pair of this partition."""
        return all(self.mate[x] == y for x, y in _turns(trail))

    def with_pairs(self, pairs: Sequence[tuple[int, int]]) -> EulerianPartition:
        """Get a copy in which each given pair has been made."""
        mate = list(self.mate)
        for a, b in pairs:
            mate[a] = b
            mate[b] = a
        return EulerianPartition(self.graph, tuple(mate))


def _turns(trail: Trail) -> Iterator[tuple[int, int]]:
    for i, x in enumerate(trail.darts):
        yield partner(trail.darts[i - 1]), x


def _trail_cycles(mate: Sequence[int]) -> Iterator[list[int]]:
    """Yield the outgoing darts of each trail, one direction per trail."""
    seen = bytearray(len(mate))
    for start in range(len(mate)):
        if seen[start]:
            continue
        darts = []
        x = start
        while not seen[x]:
            seen[x] = seen[partner(x)] = 1
            darts.append(x)
            x = mate[partner(x)]
        yield darts


def count_trails(mate: Sequence[int]) -> int:
    """Get the number of trails induced by a pairing without building them."""
    return sum(1 for _ in _trail_cycles(mate))


def extract_trails(partition: EulerianPartition) -> TrailSet:
    """Get the closed trails induced by a partition.

    Starting from the lowest unvisited dart, edges are crossed and pairs followed until
    the starting dart comes round again. Both darts of each edge are marked, so each
    trail is produced once, in one direction.
    """
    dart_vertex = partition.graph.dart_vertex
    return TrailSet(
        tuple(
            Trail(tuple(darts), tuple(dart_vertex[x] for x in darts))
            for darts in _trail_cycles(partition.mate)
        )
    )


@dataclass(frozen=True)
class PartitionStats:
    """Trail statistics of one partition."""

    T: int
    """The number of trails."""
    S_k: int
    """The number of trails on at most k distinct vertices."""
    L_k: int
    """The number of the other trails."""
    X: tuple[int, ...]
    """The number of trails through each vertex."""
    k: int

    @property
    def X_total(self) -> int:
        """The number of (vertex, trail) incidences."""
        return sum(self.X)


def partition_stats(partition: EulerianPartition, k: int) -> PartitionStats:
    """Compute the trail statistics of a partition.

    Raises:
        ValidationError: k is negative
    """
    if k < 0:
        raise ValidationError(f"k must be non-negative: {k}")

    trails = extract_trails(partition)
    X = [0] * partition.graph.n
    short = 0
    for trail in trails:
        vertices = set(trail.vertices)
        for v in vertices:
            X[v] += 1
        if len(vertices) <= k:
            short += 1

    return PartitionStats(len(trails), short, len(trails) - short, tuple(X), k)


def random_stream(seed: int, *key: int) -> np.random.Generator:
    """Get an independent counter-based random stream for the given key."""
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(seed, spawn_key=key))
    )


def draw_pairing(graph: MultiGraph, rng: np.random.Generator) -> tuple[int, ...]:
    """Pair the darts at every vertex uniformly at random.

    The first unpaired dart at a vertex is paired with one of the others chosen
    uniformly, and the chosen dart is replaced by the last one. All the choices for a
    sample are drawn in one call.
    """
    highs = [j for d in graph.degrees for j in range(d - 1, 0, -2)]
    draws = iter(rng.integers(0, highs).tolist() if highs else [])

    mate = [0] * len(graph.dart_vertex)
    for darts in graph.vertex_darts:
        pool = list(darts)
        while pool:
            first = pool.pop(0)
            j = next(draws)
            other = pool[j]
            pool[j] = pool[-1]
            pool.pop()
            mate[first] = other
            mate[other] = first
    return tuple(mate)


def sample_partition(
    graph: MultiGraph, seed: int | None = None, index: int = 0
) -> EulerianPartition:
    """Draw a uniformly random Eulerian partition.

    Each (seed, index) pair has its own random stream, so samples can be drawn in any
    order and in parallel with the same results.

    Raises:
        OddDegreeError: A vertex has odd degree
    """
    validate_eulerian_input(graph)
    seed = config.DEFAULT_SEED if seed is None else seed
    rng = random_stream(seed, SAMPLE_STREAM, index)
    return EulerianPartition(graph, draw_pairing(graph, rng))


def sample_partitions(
    graph: MultiGraph, samples: int, seed: int | None = None, threads: int = 1
) -> Iterator[tuple[int, EulerianPartition]]:
    """Draw many partitions, yielding (index, partition) in index order."""
    validate_eulerian_input(graph)
    if threads <= 1:
        for i in range(samples):
            yield i, sample_partition(graph, seed, i)
        return

    with ThreadPoolExecutor(threads) as pool:
        draws = pool.map(lambda i: sample_partition(graph, seed, i), range(samples))
        yield from enumerate(draws)


def enumerate_partitions(
    graph: MultiGraph, cap: int | None = None
) -> Iterator[EulerianPartition]:
    """Enumerate every Eulerian partition exactly once.

    Partitions come in lexicographic order of the per-vertex matching indices, with
    vertex 0 the most significant.

    Args:
        graph: A graph with every degree even
        cap: The largest number of partitions allowed (default from config/environment)
    Raises:
        OddDegreeError: A vertex has odd degree
        EnumerationCapExceeded: There are more partitions than the cap
    """
    total = partition_count(graph)
    cap = resolve_cap(config.DEFAULT_PARTITION_CAP) if cap is None else cap
    if total > cap:
        raise EnumerationCapExceeded(total, cap)
    logging.debug(f"Enumerating {total} partitions")

    choices = [
        [
            [(darts[a], darts[b]) for a, b in matching]
            for matching in index_matchings(len(darts))
        ]
        for darts in graph.vertex_darts
    ]
    mate = [0] * len(graph.dart_vertex)
    for count, combination in enumerate(itertools.product(*choices), start=1):
        for pairs in combination:
            for a, b in pairs:
                mate[a] = b
                mate[b] = a
        yield EulerianPartition(graph, tuple(mate))

        if count % config.PROGRESS_INTERVAL == 0:
            send_progress("partitions", count, total)
