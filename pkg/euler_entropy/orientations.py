"""Exact counting of Eulerian orientations and Pauling's estimate."""

from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from euler_entropy import config
from euler_entropy.budget import send_progress
from euler_entropy.errors import EdgeCapExceeded, ValidationError
from euler_entropy.graph import (
    MultiGraph,
    require_regular_degree,
    validate_eulerian_input,
)


@dataclass(frozen=True)
class EOCount:
    """The number of Eulerian orientations of a graph."""

    eo: int
    """The exact count."""
    rho: float
    """The residual entropy, (1/n) log eo."""
    n: int
    m: int


def _edge_order(graph: MultiGraph) -> list[int]:
    """Order edges by descending degree sum of their endpoints, then by id."""
    degrees = graph.degrees
    return sorted(
        range(graph.m),
        key=lambda e: (-sum(degrees[w] for w in graph.edge(e)), e),
    )


class _OrientationCounter:
    """Backtracking over edge directions with per-vertex balance budgets.

    For every vertex we keep the number of incident edges not yet oriented and the
    current out-degree minus in-degree. A branch is abandoned as soon as some vertex
    can no longer return to balance.
    """

    def __init__(self, graph: MultiGraph, order: list[int]) -> None:
        self.ends = [graph.edge(e) for e in order]
        self.remaining = list(graph.degrees)
        self.imbalance = [0] * graph.n

    def _orient(self, tail: int, head: int, sign: int) -> bool:
        """Orient an edge (sign 1) or undo it (sign -1).

        Returns:
            Whether both endpoints can still be balanced
        """
        self.remaining[tail] -= sign
        self.remaining[head] -= sign
        self.imbalance[tail] += sign
        self.imbalance[head] -= sign
        return (
            abs(self.imbalance[tail]) <= self.remaining[tail]
            and abs(self.imbalance[head]) <= self.remaining[head]
        )

    def apply_prefix(self, directions: tuple[bool, ...]) -> bool:
        """Orient the first edges as given; False if the prefix is infeasible."""
        feasible = True
        for (u, v), forward in zip(self.ends, directions):
            tail, head = (u, v) if forward else (v, u)
            feasible = self._orient(tail, head, 1) and feasible
        return feasible

    def count(self, index: int = 0) -> int:
        if index == len(self.ends):
            return 1

        u, v = self.ends[index]
        total = 0
        for tail, head in ((u, v), (v, u)):
            if self._orient(tail, head, 1):
                total += self.count(index + 1)
            self._orient(tail, head, -1)
        return total


def _count_branch(graph: MultiGraph, order: list[int], prefix: tuple[bool, ...]) -> int:
    counter = _OrientationCounter(graph, order)
    if not counter.apply_prefix(prefix):
        return 0
    return counter.count(len(prefix))


def count_eulerian_orientations(
    graph: MultiGraph, max_edges: int | None = None, threads: int = 1
) -> EOCount:
    """Count the Eulerian orientations of a graph exactly.

    Args:
        graph: A graph with every degree even
        max_edges: The largest number of edges accepted (default from config)
        threads: Number of workers; the first edge decisions are split between them
    Raises:
        OddDegreeError: A vertex has odd degree
        EdgeCapExceeded: The graph has more than max_edges edges
    """
    validate_eulerian_input(graph)
    if graph.n < 1:
        raise ValidationError("The graph has no vertices")
    cap = config.DEFAULT_EO_MAX_EDGES if max_edges is None else max_edges
    if graph.m > cap:
        raise EdgeCapExceeded(graph.m, cap)

    order = _edge_order(graph)
    if threads <= 1 or graph.m < 2:
        eo = _count_branch(graph, order, ())
    else:
        depth = min(graph.m, max(1, (4 * threads - 1).bit_length()))
        prefixes = list(itertools.product((True, False), repeat=depth))
        total = 0
        with ThreadPoolExecutor(threads) as pool:
            branches = pool.map(lambda p: _count_branch(graph, order, p), prefixes)
            for done, count in enumerate(branches, start=1):
                total += count
                send_progress("orientations", done, len(prefixes))
        eo = total

    logging.info(f"EO = {eo} for graph with n={graph.n}, m={graph.m}")
    return EOCount(eo, math.log(eo) / graph.n, graph.n, graph.m)


def _require_even_degree(d: int) -> None:
    if d < 2 or d % 2:
        raise ValidationError(f"Degree must be even and at least 2: {d}")


def pauling_estimate(d: int) -> float:
    """Get Pauling's estimate log C(d, d/2) - (d/2) log 2 of the residual entropy.

    >>> round(pauling_estimate(4), 6)
    0.405465

    Raises:
        ValidationError: d is odd or less than 2
    """
    _require_even_degree(d)
    return math.log(math.comb(d, d // 2)) - (d // 2) * math.log(2)


def vertex_balance_probability(d: int) -> Fraction:
    """Get the probability that a vertex is balanced under a random orientation.

    Each of the d edges at the vertex points in or out with probability 1/2, so the
    probability is C(d, d/2) / 2^d. Pauling's estimate is
    (1/n) log(2^(nd/2) p^n) for this p.
    """
    _require_even_degree(d)
    return Fraction(math.comb(d, d // 2), 2**d)


@dataclass(frozen=True)
class LiebWuReport:
    """Comparison of the exact residual entropy with Pauling's estimate."""

    n: int
    m: int
    d: int
    eo: int
    rho: float
    rho_hat: float

    @property
    def gap(self) -> float:
        """rho - rho_hat."""
        return self.rho - self.rho_hat

    @property
    def passed(self) -> bool:
        """Whether rho >= rho_hat up to rounding."""
        return self.gap >= -config.LIEB_WU_SLACK

    def as_dict(self) -> dict[str, Any]:
        """Get a plain representation for reports."""
        return {
            "n": self.n,
            "m": self.m,
            "d": self.d,
            "eo_decimal_string": str(self.eo),
            "rho": self.rho,
            "rho_hat": self.rho_hat,
            "gap": self.gap,
            "passed": self.passed,
        }


def lieb_wu_check(
    graph: MultiGraph, max_edges: int | None = None, threads: int = 1
) -> LiebWuReport:
    """Check that the residual entropy is at least Pauling's estimate.

    Raises:
        IrregularGraphError: The graph is not regular
        OddDegreeError: A vertex has odd degree
        EdgeCapExceeded: The graph is too large to count exactly
    """
    d = require_regular_degree(graph)
    count = count_eulerian_orientations(graph, max_edges, threads)
    report = LiebWuReport(graph.n, graph.m, d, count.eo, count.rho, pauling_estimate(d))
    if not report.passed:
        logging.warning(f"rho is below Pauling's estimate by {-report.gap}")
    return report
