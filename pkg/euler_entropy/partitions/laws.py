"""Exact laws of the trail statistics of a uniformly random Eulerian partition.

X_i is the number of trails through vertex i and X is their sum. At a vertex of
degree d, X_i has the law of 1 + Be(1/3) + Be(1/5) + ... + Be(1/(d - 1)) with
independent terms, whatever the pairings at the other vertices. The joint law of
X_1, ..., X_n need not factorize: on K5, P(X_0 = X_1 = 2) = 19/81 rather than 1/9.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from frozendict import frozendict

from euler_entropy import config
from euler_entropy.errors import ValidationError
from euler_entropy.graph import MultiGraph, require_regular_degree
from euler_entropy.partitions.pairing import (
    enumerate_partitions,
    extract_trails,
    index_matchings,
    pairings_per_vertex,
    partition_stats,
)

PMF = frozendict[int, Fraction]
"""An exact probability mass function on the integers."""

DEFAULT_MGF_LAMBDAS = (0.25, 0.5, 1.0)
"""Values of lambda at which E e^(lambda X) is compared with e^(2 lambda E X)."""

LONG_TRAIL_EXPONENT = Fraction(7, 2)
"""The exponent a in E 2^(a L_k) when bounding long trails."""


def _normalise(counts: Mapping[int, int]) -> PMF:
    total = sum(counts.values())
    return frozendict({v: Fraction(c, total) for v, c in sorted(counts.items())})


def xi_pmf_theoretical(d: int) -> PMF:
    """Get the law of 1 + sum_{j=2}^{d/2} Be(1/(2j - 1)) by convolution.

    >>> xi_pmf_theoretical(4)[1]
    Fraction(2, 3)

    Raises:
        ValidationError: d is odd or less than 2
    """
    pairings_per_vertex(d)

    pmf: dict[int, Fraction] = {1: Fraction(1)}
    for j in range(2, d // 2 + 1):
        p = Fraction(1, 2 * j - 1)
        nxt: dict[int, Fraction] = {}
        for value, prob in pmf.items():
            nxt[value] = nxt.get(value, Fraction(0)) + prob * (1 - p)
            nxt[value + 1] = nxt.get(value + 1, Fraction(0)) + prob * p
        pmf = nxt
    return frozendict(sorted(pmf.items()))


def _involution(matching: Iterable[tuple[int, int]], d: int) -> list[int]:
    perm = [0] * d
    for a, b in matching:
        perm[a] = b
        perm[b] = a
    return perm


def _cycle_count(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    cycles = 0
    for start in range(len(perm)):
        if not seen[start]:
            cycles += 1
            x = start
            while not seen[x]:
                seen[x] = True
                x = perm[x]
    return cycles


def xi_pmf_bruteforce(d: int) -> PMF:
    """Get the law of X_i by enumerating pairs of fixed-point-free involutions.

    The trails through a vertex correspond to the cycles of the composition of the
    pairing at the vertex with the pairing induced by the rest of the graph; each
    trail accounts for two cycles (one per direction).

    Raises:
        ValidationError: d is odd, less than 2 or too large to enumerate
    """
    pairings_per_vertex(d)
    if d > config.XI_BRUTEFORCE_MAX_DEGREE:
        raise ValidationError(
            f"Brute force is limited to d <= {config.XI_BRUTEFORCE_MAX_DEGREE}: {d}"
        )

    involutions = [_involution(m, d) for m in index_matchings(d)]
    counts: Counter[int] = Counter()
    for sigma, tau in itertools.product(involutions, repeat=2):
        composed = [sigma[tau[i]] for i in range(d)]
        counts[_cycle_count(composed) // 2] += 1
    return _normalise(counts)


def expected_X(d: int, n: int) -> Fraction:
    """Get E X = n sum_{i=1}^{d/2} 1/(2i - 1) for a d-regular graph on n vertices.

    >>> expected_X(6, 1)
    Fraction(23, 15)
    """
    pairings_per_vertex(d)
    return n * sum((Fraction(1, 2 * i - 1) for i in range(1, d // 2 + 1)), Fraction(0))


def pmf_mean(pmf: Mapping[int, Fraction]) -> Fraction:
    """Get the mean of an exact PMF."""
    return sum((v * p for v, p in pmf.items()), Fraction(0))


@dataclass(frozen=True)
class PartitionLaw:
    """The exact joint law of the trail statistics, found by enumeration."""

    n: int
    d: int
    partitions: int
    joint: frozendict[tuple[int, ...], Fraction]
    """The law of (X_1, ..., X_n)."""
    trail_count: PMF
    """The law of |T(P)|."""

    @property
    def marginals(self) -> tuple[PMF, ...]:
        """The law of each X_i."""
        counts: list[dict[int, Fraction]] = [{} for _ in range(self.n)]
        for xs, p in self.joint.items():
            for i, x in enumerate(xs):
                counts[i][x] = counts[i].get(x, Fraction(0)) + p
        return tuple(frozendict(sorted(c.items())) for c in counts)

    @property
    def x_total(self) -> PMF:
        """The law of X = X_1 + ... + X_n."""
        pmf: dict[int, Fraction] = {}
        for xs, p in self.joint.items():
            pmf[sum(xs)] = pmf.get(sum(xs), Fraction(0)) + p
        return frozendict(sorted(pmf.items()))

    @property
    def expected_X(self) -> Fraction:
        """The exact mean of X."""
        return pmf_mean(self.x_total)

    def factorizes(self) -> bool:
        """Whether the joint law is the product of the marginals.

        Every point of the product of the supports is checked, so a missing
        combination is a failure.
        """
        marginals = self.marginals
        for xs in itertools.product(*(m.keys() for m in marginals)):
            product = math.prod(
                (m[x] for m, x in zip(marginals, xs)), start=Fraction(1)
            )
            if self.joint.get(xs, Fraction(0)) != product:
                return False
        return True

    def as_dict(self) -> dict[str, Any]:
        """Get a plain representation for reports."""
        return {
            "n": self.n,
            "d": self.d,
            "partitions": self.partitions,
            "marginals": [_pmf_rows(m) for m in self.marginals],
            "trail_count": _pmf_rows(self.trail_count),
            "expected_X_num": self.expected_X.numerator,
            "expected_X_den": self.expected_X.denominator,
            "factorizes": self.factorizes(),
        }


def _pmf_rows(pmf: Mapping[int, Fraction]) -> list[dict[str, int]]:
    return [
        {"value": v, "prob_num": p.numerator, "prob_den": p.denominator}
        for v, p in pmf.items()
    ]


def exact_partition_law(graph: MultiGraph, cap: int | None = None) -> PartitionLaw:
    """Find the exact law of the trail statistics by enumerating every partition.

    Raises:
        OddDegreeError: A vertex has odd degree
        IrregularGraphError: The graph is not regular
        EnumerationCapExceeded: Too many partitions
    """
    d = require_regular_degree(graph)
    joint: Counter[tuple[int, ...]] = Counter()
    trails: Counter[int] = Counter()
    for partition in enumerate_partitions(graph, cap):
        stats = partition_stats(partition, graph.n)
        joint[stats.X] += 1
        trails[stats.T] += 1

    total = sum(joint.values())
    return PartitionLaw(
        graph.n,
        d,
        total,
        frozendict({xs: Fraction(c, total) for xs, c in sorted(joint.items())}),
        _normalise(trails),
    )


@dataclass(frozen=True)
class MGFRow:
    """Comparison of E e^(lambda X) with e^(2 lambda E X)."""

    lam: float
    mgf: float
    bound: float

    @property
    def passed(self) -> bool:
        """Whether the moment generating function lies within the bound."""
        return self.mgf <= self.bound


def mgf_check(
    law: PartitionLaw, lambdas: Iterable[float] = DEFAULT_MGF_LAMBDAS
) -> tuple[MGFRow, ...]:
    """Compare the exact E e^(lambda X) with e^(2 lambda E X) for each lambda.

    Raises:
        ValidationError: A lambda lies outside [0, 1]
    """
    ex = float(law.expected_X)
    rows = []
    for lam in lambdas:
        if not 0 <= lam <= 1:
            raise ValidationError(f"lambda must lie in [0, 1]: {lam}")
        mgf = sum(float(p) * math.exp(lam * x) for x, p in law.x_total.items())
        rows.append(MGFRow(lam, mgf, math.exp(2 * lam * ex)))
    return tuple(rows)


@dataclass(frozen=True)
class LongTrailReport:
    """Exact moments bounding the contribution of trails on more than k vertices."""

    k: int
    E_2_aL: float
    """E 2^(a L_k)."""
    E_2_aX_over_k: float
    """E 2^(a X / k), which dominates E 2^(a L_k) because L_k <= X / k."""
    lam: float
    """a log(2) / k."""
    mgf_bound: float | None
    """e^(2 lam E X), when lam <= 1."""

    @property
    def passed(self) -> bool:
        """Whether the chain of inequalities holds."""
        ok = self.E_2_aL <= self.E_2_aX_over_k * (1 + 1e-12)
        if self.mgf_bound is not None:
            ok = ok and self.E_2_aX_over_k <= self.mgf_bound * (1 + 1e-12)
        return ok


def long_trail_report(
    graph: MultiGraph, k: int, cap: int | None = None
) -> LongTrailReport:
    """Evaluate E 2^(a L_k) and the quantities bounding it, with a = 7/2.

    Raises:
        ValidationError: k is less than 1
        EnumerationCapExceeded: Too many partitions
    """
    if k < 1:
        raise ValidationError(f"k must be at least 1: {k}")
    d = require_regular_degree(graph)
    a = float(LONG_TRAIL_EXPONENT)

    e_long = 0.0
    e_x = 0.0
    total = 0
    for partition in enumerate_partitions(graph, cap):
        stats = partition_stats(partition, k)
        e_long += 2.0 ** (a * stats.L_k)
        e_x += 2.0 ** (a * stats.X_total / k)
        total += 1

    lam = a * math.log(2) / k
    bound = math.exp(2 * lam * float(expected_X(d, graph.n))) if lam <= 1 else None
    return LongTrailReport(k, e_long / total, e_x / total, lam, bound)


def lk_inequality_holds(
    graph: MultiGraph, ks: Iterable[int] | None = None, cap: int | None = None
) -> bool:
    """Check that L_k(P) <= X(P) / k for every partition P and every k in ks.

    Trails counted by L_k pass through more than k vertices, so each contributes
    more than k to X.

    Args:
        graph: A graph with every degree even
        ks: Values of k to check (default 1..n)
        cap: Partition enumeration cap
    """
    ks = tuple(range(1, graph.n + 1) if ks is None else ks)
    for partition in enumerate_partitions(graph, cap):
        sizes = [t.distinct_vertices for t in extract_trails(partition)]
        x_total = sum(sizes)
        for k in ks:
            if k * sum(1 for s in sizes if s > k) > x_total:
                return False
    return True
