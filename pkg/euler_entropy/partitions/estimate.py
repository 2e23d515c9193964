"""Exact and Monte Carlo evaluation of E 2^|T(P)| over uniform Eulerian partitions.

For a d-regular graph the residual entropy satisfies

    rho = rho_hat + (1/n) log E 2^|T(P)|

where P is a uniformly random Eulerian partition and |T(P)| its number of trails.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np
from frozendict import frozendict

from euler_entropy import config
from euler_entropy.budget import send_progress
from euler_entropy.errors import ValidationError
from euler_entropy.graph import MultiGraph, require_regular_degree
from euler_entropy.orientations import count_eulerian_orientations, pauling_estimate
from euler_entropy.partitions.pairing import (
    BOOTSTRAP_STREAM,
    SAMPLE_STREAM,
    count_trails,
    draw_pairing,
    enumerate_partitions,
    pairings_per_vertex,
    random_stream,
)


@dataclass(frozen=True)
class IdentityReport:
    """Both sides of sum_P 2^|T(P)| C(d,d/2)^n = EO (d-1)!!^n 2^(nd/2)."""

    n: int
    d: int
    sum_2T: int
    """The sum of 2^|T(P)| over all partitions."""
    partitions: int
    """The number of partitions, ((d - 1)!!)^n."""
    eo: int
    """The number of Eulerian orientations."""

    @property
    def lhs(self) -> int:
        """The partition side of the identity."""
        return self.sum_2T * math.comb(self.d, self.d // 2) ** self.n

    @property
    def rhs(self) -> int:
        """The orientation side of the identity."""
        pairings = pairings_per_vertex(self.d) ** self.n
        return self.eo * pairings * 2 ** (self.n * self.d // 2)

    @property
    def equal(self) -> bool:
        """Whether the two sides agree."""
        return self.lhs == self.rhs

    @property
    def mean_2T(self) -> Fraction:
        """The exact value of E 2^|T(P)|."""
        return Fraction(self.sum_2T, self.partitions)

    def as_dict(self) -> dict[str, Any]:
        """Get a plain representation for reports; big integers become strings."""
        return {
            "n": self.n,
            "d": self.d,
            "sum_2T": str(self.sum_2T),
            "partitions": str(self.partitions),
            "eo": str(self.eo),
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "equal": self.equal,
            "mean_2T_num": str(self.mean_2T.numerator),
            "mean_2T_den": str(self.mean_2T.denominator),
        }


def exact_E2T(
    graph: MultiGraph,
    cap: int | None = None,
    max_edges: int | None = None,
    threads: int = 1,
) -> IdentityReport:
    """Compute sum_P 2^|T(P)| by enumeration and check it against the EO count.

    Args:
        graph: A regular graph of even degree
        cap: Partition enumeration cap
        max_edges: Edge cap for orientation counting
        threads: Workers for orientation counting
    Raises:
        EnumerationCapExceeded: Too many partitions
        EdgeCapExceeded: Too many edges to count orientations
    """
    d = require_regular_degree(graph)
    total = 0
    partitions = 0
    for partition in enumerate_partitions(graph, cap):
        total += 1 << count_trails(partition.mate)
        partitions += 1

    eo = count_eulerian_orientations(graph, max_edges, threads).eo
    report = IdentityReport(graph.n, d, total, partitions, eo)
    if not report.equal:
        logging.error(f"Identity fails: {report.lhs} != {report.rhs}")
    return report


def _log_mean(values: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Get log of the weighted mean of 2^values along the last axis.

    The weights along the last axis must sum to one.
    """
    with np.errstate(divide="ignore"):
        terms = np.log(weights) + values * math.log(2)
    return np.logaddexp.reduce(terms, axis=-1)


@dataclass(frozen=True)
class MCEstimate:
    """A Monte Carlo estimate of the residual entropy."""

    n: int
    d: int
    samples: int
    seed: int
    rho_hat: float
    log_mean_2T: float
    """log of the sample mean of 2^|T(P)|."""
    ci_low: float
    ci_high: float
    histogram: frozendict[int, int]
    """How many samples had each number of trails."""

    @property
    def rho_estimate(self) -> float:
        """rho_hat + (1/n) log mean 2^|T(P)|."""
        return self.rho_hat + self.log_mean_2T / self.n

    @property
    def mean_2T(self) -> float:
        """The sample mean of 2^|T(P)| (infinite if it overflows a float)."""
        try:
            return math.exp(self.log_mean_2T)
        except OverflowError:
            return math.inf

    def as_dict(self) -> dict[str, Any]:
        """Get a plain representation for reports."""
        return {
            "n": self.n,
            "d": self.d,
            "samples": self.samples,
            "seed": self.seed,
            "rho_hat": self.rho_hat,
            "rho_estimate": self.rho_estimate,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "log_mean_2T": self.log_mean_2T,
            "trail_count_histogram": {str(t): c for t, c in self.histogram.items()},
        }


def _sample_chunk(graph: MultiGraph, seed: int, indices: range) -> Counter[int]:
    counts: Counter[int] = Counter()
    for i in indices:
        rng = random_stream(seed, SAMPLE_STREAM, i)
        counts[count_trails(draw_pairing(graph, rng))] += 1
    return counts


def mc_estimate(
    graph: MultiGraph,
    samples: int,
    seed: int | None = None,
    threads: int = 1,
    resamples: int = config.DEFAULT_BOOTSTRAP_RESAMPLES,
) -> MCEstimate:
    """Estimate the residual entropy from uniformly random partitions.

    Samples are drawn in fixed chunks of indices, each from its own random streams,
    and only the histogram of trail counts is kept. The mean of 2^|T| and its
    percentile bootstrap interval are evaluated in log space from that histogram.

    Args:
        graph: A regular graph of even degree
        samples: The number of partitions to draw
        seed: The seed (default from config)
        threads: Number of workers drawing chunks
        resamples: Number of bootstrap resamples
    Raises:
        ValidationError: Too few samples
    """
    d = require_regular_degree(graph)
    if samples < config.MIN_MC_SAMPLES:
        raise ValidationError(
            f"At least {config.MIN_MC_SAMPLES} samples are needed, got {samples}"
        )
    seed = config.DEFAULT_SEED if seed is None else seed

    chunks = [
        range(start, min(start + config.MC_CHUNK_SIZE, samples))
        for start in range(0, samples, config.MC_CHUNK_SIZE)
    ]
    histogram: Counter[int] = Counter()
    with ThreadPoolExecutor(max(1, threads)) as pool:
        results = pool.map(lambda c: _sample_chunk(graph, seed, c), chunks)
        for chunk, chunk_counts in zip(chunks, results):
            histogram.update(chunk_counts)
            send_progress("sampling", chunk.stop, samples)

    values = np.array(sorted(histogram), dtype=float)
    counts = np.array([histogram[t] for t in sorted(histogram)], dtype=float)
    probs = counts / samples
    log_mean = float(_log_mean(values, probs))

    rng = random_stream(seed, BOOTSTRAP_STREAM)
    draws = rng.multinomial(samples, probs, size=resamples) / samples
    rho_hat = pauling_estimate(d)
    boot = rho_hat + _log_mean(values, draws) / graph.n
    tail = 100 * (1 - config.BOOTSTRAP_CONFIDENCE) / 2
    low, high = np.percentile(boot, [tail, 100 - tail])

    estimate = rho_hat + log_mean / graph.n
    logging.info(f"rho estimate {estimate:.6f} from {samples} samples (seed {seed})")
    return MCEstimate(
        graph.n,
        d,
        samples,
        seed,
        rho_hat,
        log_mean,
        min(float(low), estimate),
        max(float(high), estimate),
        frozendict({int(t): histogram[t] for t in sorted(histogram)}),
    )
