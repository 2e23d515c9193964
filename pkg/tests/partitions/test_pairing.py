"""Tests for Eulerian partitions, their trails and sampling."""

from contextlib import nullcontext as does_not_raise

import pytest

from euler_entropy.errors import (
    EnumerationCapExceeded,
    InvalidPartitionError,
    OddDegreeError,
    ValidationError,
)
from euler_entropy.graph import MultiGraph, cartesian_product
from euler_entropy.graph.generators import complete, cycle
from euler_entropy.partitions import (
    EulerianPartition,
    Trail,
    count_trails,
    enumerate_partitions,
    extract_trails,
    pairings_per_vertex,
    partition_count,
    partition_stats,
    sample_partition,
    sample_partitions,
)
from euler_entropy.partitions.pairing import index_matchings

TRIANGLE_MATE = (5, 2, 1, 4, 3, 0)
"""The only partition of the triangle."""


@pytest.mark.parametrize("d,expected", ((2, 1), (4, 3), (6, 15), (8, 105)))
def test_pairings_per_vertex(d: int, expected: int) -> None:
    """Test pairings_per_vertex."""
    assert pairings_per_vertex(d) == expected
    assert len(index_matchings(d)) == expected


@pytest.mark.parametrize("d", (0, 3, 7))
def test_pairings_per_vertex_errors(d: int) -> None:
    """Check that odd and too small degrees are rejected."""
    with pytest.raises(ValidationError):
        pairings_per_vertex(d)


def test_index_matchings() -> None:
    """Check the order of the matchings of four points."""
    assert index_matchings(4) == (
        ((0, 1), (2, 3)),
        ((0, 2), (1, 3)),
        ((0, 3), (1, 2)),
    )


@pytest.mark.parametrize(
    "graph,expected",
    (
        (cycle(5), 1),
        (complete(5), 243),
        (cartesian_product(cycle(3), cycle(3)), 19683),
        (MultiGraph.from_edges(2, [(0, 1)] * 6), 225),
    ),
)
def test_partition_count(graph: MultiGraph, expected: int) -> None:
    """Test partition_count."""
    assert partition_count(graph) == expected


def test_partition_count_octahedron(octahedron: MultiGraph) -> None:
    """The octahedron has 3^6 partitions."""
    assert partition_count(octahedron) == 729


def test_enumerate_partitions(k5: MultiGraph) -> None:
    """Check that every partition is produced exactly once."""
    mates = [p.mate for p in enumerate_partitions(k5)]
    assert len(mates) == 243
    assert len(set(mates)) == 243


def test_enumerate_partitions_cap(k5: MultiGraph, monkeypatch) -> None:
    """Check that the enumeration cap is enforced."""
    with pytest.raises(EnumerationCapExceeded) as info:
        next(enumerate_partitions(k5, cap=242))
    assert info.value.count == 243

    monkeypatch.setenv("EULER_ENTROPY_BUDGET", "100")
    with pytest.raises(EnumerationCapExceeded):
        next(enumerate_partitions(k5))


def test_enumerate_partitions_odd_degree() -> None:
    """Check that graphs with odd degrees have no partitions."""
    with pytest.raises(OddDegreeError):
        next(enumerate_partitions(complete(4)))


@pytest.mark.parametrize(
    "mate,raises",
    (
        (TRIANGLE_MATE, does_not_raise()),
        ((5, 2, 1), pytest.raises(InvalidPartitionError)),
        ((1, 0, 3, 2, 5, 4), pytest.raises(InvalidPartitionError)),
        ((5, 2, 1, 4, 3, 3), pytest.raises(InvalidPartitionError)),
        ((0, 2, 1, 4, 3, 5), pytest.raises(InvalidPartitionError)),
    ),
)
def test_eulerian_partition_validation(mate: tuple[int, ...], raises) -> None:
    """Check that invalid pairings are rejected."""
    with raises:
        EulerianPartition(cycle(3), mate)


def test_pairs_at() -> None:
    """Test pairs_at."""
    partition = EulerianPartition(cycle(3), TRIANGLE_MATE)
    assert partition.pairs_at(0) == [(0, 5)]
    assert partition.pairs_at(2) == [(3, 4)]


def test_with_pairs(k5: MultiGraph) -> None:
    """Check that with_pairs makes the given pairs and keeps the others."""
    partition = next(enumerate_partitions(k5))
    a, b = partition.pairs_at(0)
    changed = partition.with_pairs([(a[0], b[0]), (a[1], b[1])])
    assert changed.pairs_at(0) == sorted([(a[0], b[0]), (a[1], b[1])])
    assert changed.pairs_at(1) == partition.pairs_at(1)


def test_trail_from_darts(k5: MultiGraph) -> None:
    """Check a triangle of K5 and the visits it makes."""
    trail = Trail.from_darts(k5, [0, 8, 3])
    assert trail.vertices == (0, 1, 2)
    assert trail.length == 3
    assert trail.distinct_vertices == 3
    assert trail.visits() == {0: [(2, 0)], 1: [(1, 8)], 2: [(9, 3)]}


@pytest.mark.parametrize("darts", ([0, 3], [0, 1], [0, 8]))
def test_trail_from_darts_errors(k5: MultiGraph, darts: list[int]) -> None:
    """Check that open walks and walks repeating an edge are rejected."""
    with pytest.raises(ValidationError):
        Trail.from_darts(k5, darts)


def test_extract_trails(k5: MultiGraph) -> None:
    """Check that the trails of every partition cover each edge once."""
    for partition in enumerate_partitions(k5):
        trails = extract_trails(partition)
        assert trails.total_length == k5.m
        assert len(trails) == count_trails(partition.mate)
        edges = [x >> 1 for trail in trails for x in trail.darts]
        assert sorted(edges) == list(range(k5.m))
        for trail in trails:
            assert Trail.from_darts(k5, trail.darts) == trail
            assert partition.induces(trail)


def test_extract_trails_cycle() -> None:
    """A cycle has a single trail through every vertex."""
    (trail,) = extract_trails(EulerianPartition(cycle(3), TRIANGLE_MATE))
    assert trail.length == 3
    assert sorted(trail.vertices) == [0, 1, 2]


def test_partition_stats() -> None:
    """Check the statistics of the partition of a cycle."""
    partition = sample_partition(cycle(5))
    stats = partition_stats(partition, 5)
    assert (stats.T, stats.S_k, stats.L_k) == (1, 1, 0)
    assert stats.X == (1,) * 5
    assert stats.X_total == 5

    stats = partition_stats(partition, 4)
    assert (stats.S_k, stats.L_k) == (0, 1)

    with pytest.raises(ValidationError):
        partition_stats(partition, -1)


def test_sample_partition_deterministic(k5: MultiGraph) -> None:
    """Check that each (seed, index) pair always gives the same partition."""
    assert sample_partition(k5, 7, 3) == sample_partition(k5, 7, 3)
    mates = {sample_partition(k5, 7, i).mate for i in range(50)}
    assert len(mates) > 1


def test_sample_partition_default_seed(k5: MultiGraph) -> None:
    """Check that the default seed is fixed."""
    assert sample_partition(k5) == sample_partition(k5)


@pytest.mark.parametrize("threads", (2, 4))
def test_sample_partitions_threads(octahedron: MultiGraph, threads: int) -> None:
    """Check that threads do not change the samples or their order."""
    serial = list(sample_partitions(octahedron, 20, seed=1))
    assert [i for i, _ in serial] == list(range(20))
    assert list(sample_partitions(octahedron, 20, seed=1, threads=threads)) == serial


def test_sample_partition_covers_all() -> None:
    """Check that sampling reaches every partition of a small graph."""
    graph = MultiGraph.from_edges(2, [(0, 1)] * 4)
    mates = {sample_partition(graph, 1, i).mate for i in range(200)}
    assert len(mates) == partition_count(graph)


def test_sample_partition_odd_degree() -> None:
    """Check that graphs with odd degrees are rejected."""
    with pytest.raises(OddDegreeError):
        sample_partition(complete(4))
