"""The switching graph over short-trail profiles and bounds on its class masses.

Partitions are grouped into classes by their profile m = (m_3, ..., m_L), where m_ell
counts the induced trails of length ell on at most k distinct vertices. An edge
(m, m', ell) records that some ell-switching takes a partition in class m to one in
class m'. Colour ell may leave class m only if m_ell >= |m|/L, where |m| is the sum of
the profile.

Each edge carries alpha = b / a, where a is the fewest ell-switchings on any partition
in m and b is the most ell-switchings producing any partition in m'. With every colour
weighted 1/L, alpha_hat = L alpha. For disjoint sets Y and Z of classes,

    mass(Y) <= max alpha_hat(D over Y->Z paths) / (1 - max alpha_hat(D over Y->Y paths))
               * mass(Z)

where the paths have no internal vertices in Y or Z.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from collections.abc import Iterable, Iterator, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from frozendict import frozendict

from euler_entropy import config
from euler_entropy.budget import Budget, resolve_cap
from euler_entropy.errors import ConditionViolationError, PathBudgetExceeded
from euler_entropy.graph import MultiGraph, require_regular_degree
from euler_entropy.partitions import (
    EulerianPartition,
    Trail,
    enumerate_partitions,
    extract_trails,
    partition_stats,
)
from euler_entropy.switching.moves import (
    apply_t_switching,
    enumerate_t_switchings,
    inverse_t_switching,
)
from euler_entropy.trails import closed_trails, count_short_closed_trails

Profile = tuple[int, ...]
"""Numbers of short trails of each length 3..L."""

TAIL_MGF_EXPONENT = Fraction(7, 5)
"""The exponent a in E 2^(a S_k)."""


def default_L(graph: MultiGraph, k: int) -> int:
    """Get C(k, 2), capped at the number of edges."""
    return min(k * (k - 1) // 2, graph.m)


def _short_trails(partition: EulerianPartition, k: int, L: int) -> list[Trail]:
    return [
        t
        for t in extract_trails(partition)
        if 3 <= t.length <= L and t.distinct_vertices <= k
    ]


def profile_of(partition: EulerianPartition, k: int, L: int) -> Profile:
    """Get the short-trail profile (m_3, ..., m_L) of a partition."""
    counts = [0] * max(L - 2, 0)
    for trail in _short_trails(partition, k, L):
        counts[trail.length - 3] += 1
    return tuple(counts)


def colour_allowed(profile: Profile, ell: int, L: int) -> bool:
    """Whether switchings of colour ell may leave the class with this profile."""
    return profile[ell - 3] > 0 and L * profile[ell - 3] >= sum(profile)


@dataclass(frozen=True)
class SwitchingEdge:
    """An edge of the switching graph."""

    source: Profile
    target: Profile
    colour: int
    switchings: int
    """The number of (P, P') pairs realising the edge."""
    a: int
    """The fewest colour switchings on any partition in the source class."""
    b: int
    """The most colour switchings producing any partition in the target class."""
    L: int = field(repr=False)

    @property
    def alpha(self) -> Fraction | float:
        """b / a, or infinity if a partition in the source class has no switchings."""
        return Fraction(self.b, self.a) if self.a else math.inf

    @property
    def alpha_hat(self) -> float:
        """L alpha."""
        return float(self.alpha) * self.L

    def as_dict(self) -> dict[str, Any]:
        """Get a plain representation for reports.

        An infinite alpha is written with denominator 0.
        """
        alpha = self.alpha
        num, den = (1, 0)
        if isinstance(alpha, Fraction):
            num, den = alpha.numerator, alpha.denominator
        return {
            "m": list(self.source),
            "m_prime": list(self.target),
            "ell": self.colour,
            "alpha_num": num,
            "alpha_den": den,
            "alpha_hat": self.alpha_hat,
            "switchings": self.switchings,
        }


@dataclass(frozen=True)
class SwitchingInstance:
    """The switching graph of a graph, built from all of its partitions."""

    graph: MultiGraph = field(compare=False, repr=False)
    d: int
    k: int
    L: int
    C: float
    classes: frozendict[Profile, int]
    """N(m) for every non-empty class."""
    edges: tuple[SwitchingEdge, ...]
    min_out: frozendict[tuple[Profile, int], int]
    """a for every (class, colour) with switchings."""
    max_in: frozendict[tuple[Profile, int], int]
    """b for every (class, colour) that switchings reach."""
    short_trail_counts: frozendict[int, int]
    """c_{k,ell} of the graph."""

    @property
    def n(self) -> int:
        """The number of vertices of the graph."""
        return self.graph.n

    @property
    def M0(self) -> float:
        """2 C n L^2 / d."""
        return 2 * self.C * self.n * self.L**2 / self.d

    @property
    def vertices(self) -> list[Profile]:
        """The classes, in sorted order."""
        return sorted(self.classes)

    def out_edges(self, v: Profile) -> list[SwitchingEdge]:
        """Get the edges leaving a class."""
        return [e for e in self.edges if e.source == v]

    def is_sink(self, v: Profile) -> bool:
        """Whether no edge leaves a class."""
        return not any(e.source == v for e in self.edges)

    def mass(self, vertices: Iterable[Profile]) -> int:
        """Get the total number of partitions in some classes."""
        return sum(self.classes[v] for v in vertices)

    def alpha_hat_bound(self, edge: SwitchingEdge) -> float | None:
        """c_{k,ell} L^2 / (|m| (d - 2L)^ell), which alpha_hat cannot exceed.

        Returns:
            None if d <= 2L, when the per-trail floor on switchings is not defined
        """
        c = self.short_trail_counts.get(edge.colour)
        if self.d <= 2 * self.L or c is None:
            return None
        floor = (self.d - 2 * self.L) ** edge.colour
        return c * self.L**2 / (sum(edge.source) * floor)

    def alpha_hat_estimate(self, edge: SwitchingEdge) -> float | None:
        """2 c_{k,ell} L^2 / (d^ell |m|), the large-d form of alpha_hat_bound."""
        c = self.short_trail_counts.get(edge.colour)
        if self.d <= 2 * self.L or c is None:
            return None
        return 2 * c * self.L**2 / (self.d**edge.colour * sum(edge.source))

    def alpha_hat_bounds_hold(self) -> bool | None:
        """Whether every alpha_hat is within alpha_hat_bound (None if d <= 2L)."""
        if self.d <= 2 * self.L:
            return None
        for edge in self.edges:
            bound = self.alpha_hat_bound(edge)
            if bound is None or edge.alpha_hat > bound:
                return False
        return True

    def split(self, M: float, M0: float | None = None) -> tuple[frozenset, frozenset]:
        """Get Y = {|m| > M} and Z = {|m| <= M0} (M0 defaults to 2CnL^2/d)."""
        M0 = self.M0 if M0 is None else M0
        Y = frozenset(v for v in self.classes if sum(v) > M)
        Z = frozenset(v for v in self.classes if sum(v) <= M0)
        return Y, Z

    def as_dict(self) -> dict[str, Any]:
        """Get a plain representation for reports."""
        return {
            "params": {
                "n": self.n,
                "d": self.d,
                "k": self.k,
                "L": self.L,
                "C": self.C,
                "M0": self.M0,
            },
            "vertices": [{"m": list(v), "N": self.classes[v]} for v in self.vertices],
            "edges": [
                {
                    **e.as_dict(),
                    "alpha_hat_bound": self.alpha_hat_bound(e),
                    "alpha_hat_estimate": self.alpha_hat_estimate(e),
                }
                for e in self.edges
            ],
        }


def _forward_tallies(
    partitions: Sequence[EulerianPartition],
    profiles: dict[tuple[int, ...], Profile],
    k: int,
    L: int,
) -> tuple[Counter, Counter, dict[tuple[Profile, int], int]]:
    """Apply every allowed switching to each partition.

    Returns:
        The switchings per (m, m', colour), the switchings producing each
        (colour, partition) and the fewest switchings per (m, colour)
    """
    edges: Counter[tuple[Profile, Profile, int]] = Counter()
    incoming: Counter[tuple[int, tuple[int, ...]]] = Counter()
    fewest: dict[tuple[Profile, int], int] = {}
    for partition in partitions:
        m = profiles[partition.mate]
        trails = _short_trails(partition, k, L)
        for ell in range(3, L + 1):
            if not colour_allowed(m, ell, L):
                continue

            total = 0
            for trail in (t for t in trails if t.length == ell):
                _, choices = enumerate_t_switchings(partition, trail)
                for choice in choices:
                    switched = apply_t_switching(partition, choice)
                    edges[m, profiles[switched.mate], ell] += 1
                    incoming[ell, switched.mate] += 1
                    total += 1
            fewest[m, ell] = min(fewest.get((m, ell), total), total)
    return edges, incoming, fewest


def build_switching_graph(
    graph: MultiGraph,
    k: int,
    L: int | None = None,
    C: float = 1.0,
    cap: int | None = None,
    threads: int = 1,
) -> SwitchingInstance:
    """Build the switching graph from an exhaustive enumeration of partitions.

    Args:
        graph: A regular graph of even degree
        k: The vertex cap for short trails
        L: The longest short trail (default C(k, 2), capped at the number of edges)
        C: The constant in M0 = 2CnL^2/d
        cap: Partition enumeration cap
        threads: Workers between which the partitions are divided
    Raises:
        EnumerationCapExceeded: Too many partitions
    """
    d = require_regular_degree(graph)
    L = default_L(graph, k) if L is None else L

    partitions = list(enumerate_partitions(graph, cap))
    profiles = {p.mate: profile_of(p, k, L) for p in partitions}
    classes = Counter(profiles.values())

    workers = max(1, min(threads, len(partitions)))
    chunks = [partitions[i::workers] for i in range(workers)]
    edges: Counter[tuple[Profile, Profile, int]] = Counter()
    incoming: Counter[tuple[int, tuple[int, ...]]] = Counter()
    fewest: dict[tuple[Profile, int], int] = {}
    with ThreadPoolExecutor(workers) as pool:
        for e, i, f in pool.map(lambda c: _forward_tallies(c, profiles, k, L), chunks):
            edges.update(e)
            incoming.update(i)
            for key, value in f.items():
                fewest[key] = min(fewest.get(key, value), value)

    most: dict[tuple[Profile, int], int] = {}
    for (ell, mate), count in incoming.items():
        key = (profiles[mate], ell)
        most[key] = max(most.get(key, 0), count)

    realised = {(m, ell) for m, _, ell in edges}
    min_out = {key: value for key, value in fewest.items() if key in realised}
    edge_list = tuple(
        SwitchingEdge(m, m2, ell, s, min_out[m, ell], most[m2, ell], L)
        for (m, m2, ell), s in sorted(edges.items())
    )

    short_counts: frozendict[int, int] = frozendict()
    if L >= 3:
        table = count_short_closed_trails(graph, L, k)
        short_counts = table.short_counts or frozendict()

    logging.info(
        f"Switching graph: {len(classes)} classes, {len(edge_list)} edges "
        f"from {len(partitions)} partitions"
    )
    return SwitchingInstance(
        graph,
        d,
        k,
        L,
        C,
        frozendict(sorted(classes.items())),
        edge_list,
        frozendict(sorted(min_out.items())),
        frozendict(sorted(most.items())),
        short_counts,
    )


def inverse_switch_counts(
    inst: SwitchingInstance, cap: int | None = None
) -> frozendict[tuple[Profile, int], int]:
    """Recompute b for every (class, colour) from inverse switchings.

    For every partition P' and every short closed trail T of the graph, an inverse
    T-switching gives at most one partition P; it is counted if colour len(T) may
    leave the class of P. The result must equal SwitchingInstance.max_in.
    """
    graph, k, L = inst.graph, inst.k, inst.L
    if L < 3:
        return frozendict()

    trails = [Trail.from_darts(graph, darts) for darts in closed_trails(graph, L, k)]
    most: dict[tuple[Profile, int], int] = {}
    for switched in enumerate_partitions(graph, cap):
        target = profile_of(switched, k, L)
        counts: Counter[int] = Counter()
        for trail in trails:
            original = inverse_t_switching(switched, trail)
            if original is not None and colour_allowed(
                profile_of(original, k, L), trail.length, L
            ):
                counts[trail.length] += 1
        for ell, count in counts.items():
            most[target, ell] = max(most.get((target, ell), 0), count)
    return frozendict(sorted(most.items()))


def aggregate_floor_holds(inst: SwitchingInstance) -> bool | None:
    """Check that a >= |m| (d - 2L)^ell / L for every class and colour.

    Returns:
        None if d <= 2L, when the floor is not defined
    """
    if inst.d <= 2 * inst.L:
        return None
    return all(
        inst.L * a >= sum(m) * (inst.d - 2 * inst.L) ** ell
        for (m, ell), a in inst.min_out.items()
    )


def check_conditions(inst: SwitchingInstance, Y: frozenset, Z: frozenset) -> None:
    """Check that Y and Z may be used to bound class masses.

    Raises:
        ConditionViolationError: Z is empty, Y and Z meet, or a sink or a class with an
            edge of alpha_hat >= 1 lies outside Z
    """
    if not Z:
        raise ConditionViolationError(None, "Z must not be empty")
    if Y & Z:
        raise ConditionViolationError(min(Y & Z), "Y and Z must be disjoint")

    for v in inst.vertices:
        if v in Z:
            continue
        if inst.is_sink(v):
            raise ConditionViolationError(v, "sinks must lie in Z")
        if any(e.alpha_hat >= 1 for e in inst.out_edges(v)):
            raise ConditionViolationError(
                v, "classes with an edge of alpha_hat >= 1 must lie in Z"
            )


@dataclass(frozen=True)
class PathBound:
    """The largest path products and the resulting factor."""

    max_to_Z: float
    """Largest alpha_hat over paths from Y to Z (0 if there are none)."""
    max_to_Y: float
    """Largest alpha_hat over paths from Y to Y (0 if there are none)."""

    @property
    def factor(self) -> float:
        """max_to_Z / (1 - max_to_Y), or infinity if the denominator is not positive."""
        if self.max_to_Y >= 1:
            return math.inf
        return self.max_to_Z / (1 - self.max_to_Y)


def path_bound(
    inst: SwitchingInstance,
    Y: frozenset,
    Z: frozenset,
    max_path_length: int | None = None,
    budget: int | None = None,
) -> PathBound:
    """Find the largest alpha_hat products over paths from Y to Z and from Y to Y.

    Paths have at least one edge and their internal vertices are distinct and lie
    outside Y and Z. A path may end where it started, so a loop at a vertex of Y is a
    path from Y to Y.

    Args:
        inst: The switching graph
        Y: The classes to bound
        Z: The classes bounding them
        max_path_length: Longest path considered (default unlimited)
        budget: Maximum number of path extensions (default from config/environment)
    Raises:
        ConditionViolationError: Y and Z are unsuitable
        PathBudgetExceeded: The budget ran out
    """
    check_conditions(inst, Y, Z)
    limit = resolve_cap(config.DEFAULT_PATH_BUDGET) if budget is None else budget
    steps = Budget("paths", limit, PathBudgetExceeded)
    longest = math.inf if max_path_length is None else max_path_length
    out = {v: inst.out_edges(v) for v in inst.vertices}
    best = {"Z": 0.0, "Y": 0.0}

    def extend(v: Profile, product: float, length: int, internal: set[Profile]) -> None:
        for edge in out[v]:
            steps.tick()
            w = edge.target
            value = product * edge.alpha_hat
            if w in Z:
                best["Z"] = max(best["Z"], value)
            elif w in Y:
                best["Y"] = max(best["Y"], value)
            elif w not in internal and length + 1 < longest:
                internal.add(w)
                extend(w, value, length + 1, internal)
                internal.remove(w)

    for start in sorted(Y):
        extend(start, 1.0, 0, set())

    return PathBound(best["Z"], best["Y"])


@dataclass(frozen=True)
class SwitchingBoundReport:
    """Comparison of the exact class masses with the switching bound."""

    mass_Y: int
    mass_Z: int
    bound: PathBound
    closed_form: float | None
    """2 e^(-M + M0), when every edge out of a class above M0 has alpha_hat below
    e^-(ell + 1)."""

    @property
    def vacuous(self) -> bool:
        """Whether the check cannot fail (Y is empty or the factor is infinite)."""
        return self.mass_Y == 0 or math.isinf(self.bound.factor)

    @property
    def slack(self) -> float:
        """factor * mass(Z) - mass(Y)."""
        return self.bound.factor * self.mass_Z - self.mass_Y

    @property
    def passed(self) -> bool:
        """Whether mass(Y) <= factor * mass(Z)."""
        return self.mass_Y <= self.bound.factor * self.mass_Z * (1 + 1e-12)

    @property
    def closed_form_passed(self) -> bool | None:
        """Whether mass(Y) <= 2 e^(-M + M0) mass(Z), if the closed form applies."""
        if self.closed_form is None:
            return None
        return self.mass_Y <= self.closed_form * self.mass_Z * (1 + 1e-12)

    def as_dict(self) -> dict[str, Any]:
        """Get a plain representation for reports."""
        return {
            "mass_Y": self.mass_Y,
            "mass_Z": self.mass_Z,
            "max_to_Z": self.bound.max_to_Z,
            "max_to_Y": self.bound.max_to_Y,
            "factor": self.bound.factor,
            "closed_form": self.closed_form,
            "closed_form_passed": self.closed_form_passed,
            "passed": self.passed,
            "vacuous": self.vacuous,
            "slack": self.slack,
        }


def _closed_form_applies(inst: SwitchingInstance, M0: float) -> bool:
    return all(
        e.alpha_hat <= math.exp(-(e.colour + 1))
        for e in inst.edges
        if sum(e.source) > M0
    )


def check_switching_bound(
    inst: SwitchingInstance,
    Y: frozenset,
    Z: frozenset,
    M: float | None = None,
    M0: float | None = None,
    max_path_length: int | None = None,
) -> SwitchingBoundReport:
    """Check mass(Y) against the switching bound.

    If M is given and every edge leaving a class with |m| > M0 has alpha_hat at most
    e^-(ell + 1), the closed form 2 e^(-M + M0) is evaluated as well.

    Raises:
        ConditionViolationError: Y and Z are unsuitable
    """
    bound = path_bound(inst, Y, Z, max_path_length)
    M0 = inst.M0 if M0 is None else M0
    closed = None
    if M is not None and _closed_form_applies(inst, M0):
        closed = 2 * math.exp(-M + M0)

    report = SwitchingBoundReport(inst.mass(Y), inst.mass(Z), bound, closed)
    if not report.passed:
        logging.error(f"Switching bound fails: {report.as_dict()}")
    return report


@dataclass(frozen=True)
class Split:
    """A choice of Y = {|m| > M} and Z = {|m| <= M0}."""

    M: int
    M0: int
    Y: frozenset
    Z: frozenset
    vacuous: bool
    """Whether Y is empty."""


def admissible_splits(inst: SwitchingInstance) -> Iterator[Split]:
    """Yield every threshold split which satisfies the conditions of the bound.

    Integer thresholds M0 < M are tried over the range of |m|.
    """
    top = max((sum(v) for v in inst.classes), default=0)
    for M0 in range(top + 1):
        for M in range(M0 + 1, top + 1):
            Y, Z = inst.split(M, M0)
            try:
                check_conditions(inst, Y, Z)
            except ConditionViolationError:
                continue
            yield Split(M, M0, Y, Z, not Y)


def free_classes(inst: SwitchingInstance) -> frozenset:
    """Get the classes which may lie outside Z.

    These are the classes with at least one edge leaving and no edge of alpha_hat >= 1.
    Every suitable Y is a subset of them.
    """
    return frozenset(
        v
        for v in inst.vertices
        if not inst.is_sink(v) and all(e.alpha_hat < 1 for e in inst.out_edges(v))
    )


def widest_split(inst: SwitchingInstance) -> tuple[frozenset, frozenset] | None:
    """Get the suitable Y and Z with Y as large as possible.

    Y holds every free class and Z the rest.

    Returns:
        None if no class is free, or if every class is
    """
    Y = free_classes(inst)
    Z = frozenset(inst.classes) - Y
    if not Y or not Z:
        return None
    return Y, Z


@dataclass(frozen=True)
class TailRow:
    """Pr(S_k > M) next to its bound."""

    M: int
    exact_tail: Fraction
    bound: float
    """min(1, 2 e^(-M + M0))."""

    @property
    def vacuous(self) -> bool:
        """Whether the bound is at least 1."""
        return self.bound >= 1

    @property
    def passed(self) -> bool:
        """Whether the exact tail lies within the bound."""
        return self.exact_tail <= self.bound


@dataclass(frozen=True)
class TailReport:
    """Exact tail of S_k and its moment, with their bounds."""

    n: int
    d: int
    k: int
    L: int
    C: float
    M0: float
    S_pmf: frozendict[int, Fraction]
    rows: tuple[TailRow, ...]

    @property
    def max_S(self) -> int:
        """The largest value of S_k over all partitions."""
        return max(self.S_pmf)

    @property
    def lam(self) -> float:
        """(7/5) log 2."""
        return float(TAIL_MGF_EXPONENT) * math.log(2)

    @property
    def mgf_exact(self) -> float:
        """E 2^((7/5) S_k)."""
        a = float(TAIL_MGF_EXPONENT)
        return sum(float(p) * 2.0 ** (a * s) for s, p in self.S_pmf.items())

    @property
    def mgf_bound(self) -> float:
        """e^(lam M0) (1 + 2 / (1 - lam))."""
        return math.exp(self.lam * self.M0) * (1 + 2 / (1 - self.lam))

    @property
    def mgf_vacuous(self) -> bool:
        """Whether M0 is at least every value of S_k."""
        return self.M0 >= self.max_S

    @property
    def passed(self) -> bool:
        """Whether every tail and the moment lie within their bounds."""
        return all(r.passed for r in self.rows) and self.mgf_exact <= self.mgf_bound

    def as_dict(self) -> dict[str, Any]:
        """Get a plain representation for reports."""
        return {
            "n": self.n,
            "d": self.d,
            "k": self.k,
            "L": self.L,
            "C": self.C,
            "M0": self.M0,
            "max_S": self.max_S,
            "mgf_exact": self.mgf_exact,
            "mgf_bound": self.mgf_bound,
            "mgf_vacuous": self.mgf_vacuous,
            "passed": self.passed,
            "rows": [
                {
                    "M": r.M,
                    "exact_tail": float(r.exact_tail),
                    "bound": r.bound,
                    "vacuous": r.vacuous,
                }
                for r in self.rows
            ],
        }


def tail_report(
    graph: MultiGraph,
    k: int,
    C: float,
    L: int | None = None,
    cap: int | None = None,
) -> TailReport:
    """Compare the exact law of S_k with the tail bound 2 e^(-M + M0).

    Args:
        graph: A regular graph of even degree
        k: The vertex cap for short trails
        C: The constant in M0 = 2CnL^2/d
        L: Override for C(k, 2), capped at the number of edges, in M0
        cap: Partition enumeration cap
    Raises:
        EnumerationCapExceeded: Too many partitions
    """
    d = require_regular_degree(graph)
    L = default_L(graph, k) if L is None else L
    M0 = 2 * C * graph.n * L**2 / d

    counts: Counter[int] = Counter(
        partition_stats(p, k).S_k for p in enumerate_partitions(graph, cap)
    )
    total = sum(counts.values())
    pmf = frozendict({s: Fraction(c, total) for s, c in sorted(counts.items())})

    rows = []
    for M in range(max(pmf) + 1):
        tail = sum((p for s, p in pmf.items() if s > M), Fraction(0))
        rows.append(TailRow(M, tail, min(1.0, 2 * math.exp(-M + M0))))

    return TailReport(graph.n, d, k, L, C, M0, pmf, tuple(rows))
