"""Exact counting of closed trails and the short-trail hypothesis checker.

A closed trail is a cyclic sequence of distinct edges; two trails are the same if one
is a rotation or a reversal of the other. Each trail is counted once by rooting the
search at its smallest edge id and only accepting the traversal direction in which the
second edge has a smaller id than the last. Trails of length at least 3 never repeat an
edge, so this rule leaves no ties; trails that read the same in both directions are
counted once.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from frozendict import frozendict

from euler_entropy import config
from euler_entropy.budget import Budget, resolve_cap
from euler_entropy.errors import (
    StateBudgetExceeded,
    TrailBudgetExceeded,
    ValidationError,
)
from euler_entropy.graph import MultiGraph, require_regular_degree


@dataclass(frozen=True)
class KLParams:
    """The vertex cap k and the maximum short-trail length L."""

    k: int
    L: int
    lmax: int
    d: int


def compute_k_L(d: int, lmax: int) -> KLParams:
    """Compute k = floor(min(lmax / 2, (log d)^2)) and L = k(k - 1)/2.

    The natural logarithm is used and k is at least 1.

    >>> compute_k_L(20, 12)
    KLParams(k=6, L=15, lmax=12, d=20)
    """
    if d < 2 or d % 2:
        raise ValidationError(f"Degree must be even and at least 2: {d}")
    if lmax < 3:
        raise ValidationError(f"lmax must be at least 3: {lmax}")

    k = max(1, math.floor(min(lmax / 2, math.log(d) ** 2)))
    return KLParams(k, k * (k - 1) // 2, lmax, d)


@dataclass(frozen=True)
class TrailCountTable:
    """Numbers of closed trails of each length from 3 up to lmax."""

    lmax: int
    counts: frozendict[int, int] | None
    """c_ell for 3 <= ell <= lmax (None if only short trails were counted)."""
    short_counts: frozendict[int, int] | None = None
    """c_{k,ell}: trails on at most k distinct vertices."""
    k: int | None = None
    partial: bool = False
    """Set if the search was cut short by its budget; the counts are then too low."""


class _TrailSearch:
    """Depth-first search over dart sequences rooted at given edges."""

    def __init__(
        self,
        graph: MultiGraph,
        lmax: int,
        k: int | None,
        budget: Budget,
        collect: bool = False,
    ) -> None:
        self.graph = graph
        self.lmax = lmax
        self.k = graph.n if k is None else k
        self.budget = budget
        self.counts = [0] * (lmax + 1)
        self.visits = [0] * graph.n
        self.distinct = 0
        self.path: list[int] = []
        self.found: list[tuple[int, ...]] | None = [] if collect else None

    def run(self, root_edges: Sequence[int]) -> list[int]:
        if self.k < 2:
            return self.counts

        for e in root_edges:
            for root in (2 * e, 2 * e + 1):
                start = self.graph.dart_vertex[root]
                head = self.graph.dart_vertex[root ^ 1]
                self._enter(start)
                self._enter(head)
                self.path.append(root)
                self._extend(start, head, e, 1 << e, 1, -1)
                self.path.pop()
                self._leave(head)
                self._leave(start)
        return self.counts

    def _enter(self, v: int) -> None:
        if not self.visits[v]:
            self.distinct += 1
        self.visits[v] += 1

    def _leave(self, v: int) -> None:
        self.visits[v] -= 1
        if not self.visits[v]:
            self.distinct -= 1

    def _extend(
        self, start: int, v: int, root: int, used: int, length: int, second: int
    ) -> None:
        self.budget.tick()
        if length == self.lmax:
            return

        graph = self.graph
        for x in graph.vertex_darts[v]:
            f = x >> 1
            if f <= root or used >> f & 1:
                continue

            w = graph.dart_vertex[x ^ 1]
            self._enter(w)
            if self.distinct <= self.k:
                sec = f if length == 1 else second
                self.path.append(x)
                if w == start and length + 1 >= 3 and sec < f:
                    self.counts[length + 1] += 1
                    if self.found is not None:
                        self.found.append(tuple(self.path))
                self._extend(start, w, root, used | 1 << f, length + 1, sec)
                self.path.pop()
            self._leave(w)


def _search(
    graph: MultiGraph,
    lmax: int,
    k: int | None,
    budget: int | None,
    threads: int,
) -> tuple[list[int], bool]:
    """Count closed trails, splitting the root edges between workers.

    Returns:
        The counts indexed by length and whether the budget was exhausted
    """
    limit = resolve_cap(config.DEFAULT_TRAIL_BUDGET) if budget is None else budget
    shared = Budget("trails", limit, TrailBudgetExceeded)
    workers = max(1, min(threads, graph.m))
    chunks = [range(graph.m)[i::workers] for i in range(workers)]
    searches = [_TrailSearch(graph, lmax, k, shared) for _ in chunks]

    exhausted = False
    if workers == 1:
        try:
            searches[0].run(chunks[0])
        except StateBudgetExceeded:
            exhausted = True
    else:
        with ThreadPoolExecutor(workers) as pool:
            futures = [pool.submit(s.run, c) for s, c in zip(searches, chunks)]
            for future in futures:
                if isinstance(future.exception(), StateBudgetExceeded):
                    exhausted = True
                elif future.exception() is not None:
                    raise future.exception()  # type: ignore[misc]

    totals = [sum(s.counts[ell] for s in searches) for ell in range(lmax + 1)]
    return totals, exhausted


def _as_table(counts: Sequence[int], lmax: int) -> frozendict[int, int]:
    return frozendict({ell: counts[ell] for ell in range(3, lmax + 1)})


def _raise_partial(table: TrailCountTable, limit: int | None) -> None:
    limit = limit or resolve_cap(config.DEFAULT_TRAIL_BUDGET)
    error = TrailBudgetExceeded("trails", limit)
    error.partial = table
    logging.warning(f"Closed-trail search stopped early: {error!s}")
    raise error


def count_closed_trails(
    graph: MultiGraph, lmax: int, budget: int | None = None, threads: int = 1
) -> TrailCountTable:
    """Count the closed trails of every length from 3 to lmax exactly.

    Args:
        graph: The graph
        lmax: The longest trail length to count
        budget: Maximum number of search states (default from config/environment)
        threads: Number of workers between which root edges are divided
    Raises:
        TrailBudgetExceeded: The budget ran out; the partial table is attached
    """
    if lmax < 3:
        raise ValidationError(f"lmax must be at least 3: {lmax}")

    counts, exhausted = _search(graph, lmax, None, budget, threads)
    table = TrailCountTable(lmax, _as_table(counts, lmax), partial=exhausted)
    if exhausted:
        _raise_partial(table, budget)
    return table


def count_short_closed_trails(
    graph: MultiGraph, L: int, k: int, budget: int | None = None, threads: int = 1
) -> TrailCountTable:
    """Count closed trails of length 3..L on at most k distinct vertices.

    Raises:
        TrailBudgetExceeded: The budget ran out; the partial table is attached
    """
    if k < 0:
        raise ValidationError(f"k must be non-negative: {k}")

    top = max(L, 2)
    counts, exhausted = _search(graph, top, k, budget, threads)
    table = TrailCountTable(
        L, None, short_counts=_as_table(counts, L), k=k, partial=exhausted
    )
    if exhausted:
        _raise_partial(table, budget)
    return table


def closed_trails(
    graph: MultiGraph, lmax: int, k: int | None = None, budget: int | None = None
) -> list[tuple[int, ...]]:
    """List every closed trail of length 3..lmax once, as its outgoing darts.

    Each trail starts with a dart of its smallest edge. If k is given, only trails on
    at most k distinct vertices are listed.

    Raises:
        TrailBudgetExceeded: The budget ran out
    """
    limit = resolve_cap(config.DEFAULT_TRAIL_BUDGET) if budget is None else budget
    search = _TrailSearch(
        graph, lmax, k, Budget("trails", limit, TrailBudgetExceeded), collect=True
    )
    search.run(range(graph.m))
    return search.found or []


def _log_hypothesis_bound(C: float, ell: int, d: int, n: int) -> float:
    """Get log(C e^-(ell+1) d^(ell-1) n)."""
    return math.log(C) - (ell + 1) + (ell - 1) * math.log(d) + math.log(n)


@dataclass(frozen=True)
class HypothesisRow:
    """One trail length of the short-trail hypothesis check."""

    ell: int
    c_ell: int | None
    c_k_ell: int | None
    bound: float
    crude_bound: float | None = None
    """n d^(k-1) k^(ell-1), used for lmax < ell <= L."""

    @property
    def ratio(self) -> float | None:
        """The trail count relative to the bound."""
        count = self.c_ell if self.c_ell is not None else self.c_k_ell
        return None if count is None else count / self.bound

    @property
    def passed(self) -> bool:
        """Whether every available count lies within the bound."""
        return all(c <= self.bound for c in (self.c_ell, self.c_k_ell) if c is not None)


@dataclass(frozen=True)
class HypothesisReport:
    """Outcome of checking c_ell(G) <= C e^-(ell+1) d^(ell-1) n."""

    n: int
    d: int
    C: float
    params: KLParams
    rows: tuple[HypothesisRow, ...] = field(default=())

    @property
    def degenerate(self) -> bool:
        """Whether k < 3, so that no trail counts as short."""
        return self.params.k < 3

    @property
    def passed(self) -> bool:
        """Whether the hypothesis holds for every checked length."""
        return all(row.passed for row in self.rows)

    def as_dict(self) -> dict[str, Any]:
        """Get a plain representation for reports."""
        return {
            "n": self.n,
            "d": self.d,
            "C": self.C,
            "k": self.params.k,
            "L": self.params.L,
            "lmax": self.params.lmax,
            "degenerate": self.degenerate,
            "passed": self.passed,
            "rows": [
                {
                    "ell": row.ell,
                    "c_ell": row.c_ell,
                    "c_k_ell": row.c_k_ell,
                    "bound": row.bound,
                    "crude_bound": row.crude_bound,
                    "ratio": row.ratio,
                    "pass": row.passed,
                }
                for row in self.rows
            ],
        }


def check_theorem_hypothesis(
    graph: MultiGraph,
    C: float,
    lmax: int,
    k: int | None = None,
    budget: int | None = None,
    threads: int = 1,
) -> HypothesisReport:
    """Check the closed-trail hypothesis for every length from 3 to lmax.

    The extension to short trails (at most k distinct vertices, length up to L) is
    checked as well unless k < 3, in which case the report is flagged as degenerate.

    Args:
        graph: A simple regular graph of even degree
        C: The constant of the hypothesis
        lmax: The longest trail length checked directly
        k: Override for the vertex cap (default from compute_k_L)
        budget: Search state budget
        threads: Number of search workers
    Raises:
        ValidationError: The graph is not simple or C is not positive
        OddDegreeError: A vertex has odd degree
        IrregularGraphError: The graph is not regular
    """
    d = require_regular_degree(graph)
    if not graph.is_simple:
        raise ValidationError("The closed-trail hypothesis is checked on simple graphs")
    if C <= 0:
        raise ValidationError(f"C must be positive: {C}")

    params = compute_k_L(d, lmax)
    if k is not None:
        params = KLParams(k, k * (k - 1) // 2, lmax, d)

    full = count_closed_trails(graph, lmax, budget, threads).counts or {}
    short: dict[int, int] = {}
    if params.k >= 3:
        table = count_short_closed_trails(graph, params.L, params.k, budget, threads)
        short = dict(table.short_counts or {})
    else:
        logging.info(f"k = {params.k} < 3: short-trail extension is vacuous")

    rows = []
    for ell in range(3, max(lmax, params.L if params.k >= 3 else 0) + 1):
        crude = None
        if ell > lmax:
            crude = graph.n * float(d) ** (params.k - 1) * float(params.k) ** (ell - 1)
        rows.append(
            HypothesisRow(
                ell,
                full.get(ell),
                short.get(ell),
                math.exp(_log_hypothesis_bound(C, ell, d, graph.n)),
                crude,
            )
        )

    return HypothesisReport(graph.n, d, C, params, tuple(rows))
