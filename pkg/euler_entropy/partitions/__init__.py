"""Eulerian partitions, their trails, sampling and exact laws."""

from euler_entropy.partitions.estimate import (
    IdentityReport,
    MCEstimate,
    exact_E2T,
    mc_estimate,
)
from euler_entropy.partitions.laws import (
    PMF,
    LongTrailReport,
    MGFRow,
    PartitionLaw,
    exact_partition_law,
    expected_X,
    lk_inequality_holds,
    long_trail_report,
    mgf_check,
    pmf_mean,
    xi_pmf_bruteforce,
    xi_pmf_theoretical,
)
from euler_entropy.partitions.pairing import (
    EulerianPartition,
    PartitionStats,
    Trail,
    TrailSet,
    count_trails,
    enumerate_partitions,
    extract_trails,
    pairings_per_vertex,
    partition_count,
    partition_stats,
    sample_partition,
    sample_partitions,
)

__all__ = [
    "PMF",
    "EulerianPartition",
    "IdentityReport",
    "LongTrailReport",
    "MCEstimate",
    "MGFRow",
    "PartitionLaw",
    "PartitionStats",
    "Trail",
    "TrailSet",
    "count_trails",
    "enumerate_partitions",
    "exact_E2T",
    "exact_partition_law",
    "expected_X",
    "extract_trails",
    "lk_inequality_holds",
    "long_trail_report",
    "mc_estimate",
    "mgf_check",
    "pairings_per_vertex",
    "partition_count",
    "partition_stats",
    "pmf_mean",
    "sample_partition",
    "sample_partitions",
    "xi_pmf_bruteforce",
    "xi_pmf_theoretical",
]
