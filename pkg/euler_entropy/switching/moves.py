"""T-switchings: local rewirings of a partition at every vertex a trail visits.

Suppose a trail T induced by P visits vertex v t times, with (incoming, outgoing)
darts (e_i, e'_i) on its i-th visit. A T-switching picks t further pairs of P at v,
each with an orientation, as (e_{t+i}, e'_{t+i}), and replaces the 2t pairs
{e_i, e'_i}, {e_{t+i}, e'_{t+i}} by {e_i, e_{t+i}}, {e'_i, e'_{t+i}}. Given the result
and T the original partition can be recovered, so choices and results correspond one
to one.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

from frozendict import frozendict

from euler_entropy.errors import InvalidSwitchingError
from euler_entropy.partitions import EulerianPartition, Trail

OrderedPair = tuple[int, int]
"""A pair of darts at one vertex, with an orientation."""


@dataclass(frozen=True)
class TSwitchingChoice:
    """The additional pairs chosen at each vertex visited by a trail."""

    trail: Trail
    extra: frozendict[int, tuple[OrderedPair, ...]]
    """For every visited vertex, the ordered pairs (e_{t+i}, e'_{t+i}), i = 1..t."""


def _trail_darts_at(trail: Trail) -> dict[int, set[int]]:
    return {
        v: {x for pair in visits for x in pair} for v, visits in trail.visits().items()
    }


def _validate_choice(partition: EulerianPartition, choice: TSwitchingChoice) -> None:
    """Check a choice against the partition it is applied to.

    Raises:
        InvalidSwitchingError: The choice does not fit the partition
    """
    trail = choice.trail
    if not partition.induces(trail):
        raise InvalidSwitchingError(f"Trail {trail.darts} is not induced by partition")

    visits = trail.visits()
    if set(choice.extra) != set(visits):
        raise InvalidSwitchingError("Pairs must be chosen at the visited vertices")

    trail_darts = _trail_darts_at(trail)
    for v, pairs in choice.extra.items():
        if len(pairs) != len(visits[v]):
            raise InvalidSwitchingError(
                f"Vertex {v} is visited {len(visits[v])} times but {len(pairs)} pairs "
                "were chosen"
            )
        seen: set[int] = set()
        for a, b in pairs:
            if partition.mate[a] != b or partition.graph.dart_vertex[a] != v:
                raise InvalidSwitchingError(f"({a}, {b}) is not a pair at vertex {v}")
            if a in trail_darts[v] or a in seen or b in seen:
                raise InvalidSwitchingError(f"({a}, {b}) cannot be chosen at {v}")
            seen.update((a, b))


def apply_t_switching(
    partition: EulerianPartition, choice: TSwitchingChoice
) -> EulerianPartition:
    """Perform a T-switching.

    Raises:
        InvalidSwitchingError: The trail is not induced by the partition or the chosen
            pairs are not pairs of it
    """
    _validate_choice(partition, choice)

    new_pairs = []
    for v, visits in choice.trail.visits().items():
        for (e, e_out), (f, f_out) in zip(visits, choice.extra[v]):
            new_pairs.extend(((e, f), (e_out, f_out)))
    return partition.with_pairs(new_pairs)


def inverse_t_switching(
    switched: EulerianPartition, trail: Trail
) -> EulerianPartition | None:
    """Undo a T-switching, given its result and the trail.

    Returns:
        The unique partition from which a T-switching gives switched, or None if no
        inverse T-switching can be performed (two of the trail's darts at a vertex are
        paired together)
    """
    mate = switched.mate
    for v, darts in _trail_darts_at(trail).items():
        if any(mate[x] in darts for x in darts):
            return None

    restored = []
    for visits in trail.visits().values():
        for e, e_out in visits:
            restored.extend(((e, e_out), (mate[e], mate[e_out])))
    return switched.with_pairs(restored)


def count_t_switchings(partition: EulerianPartition, trail: Trail) -> int:
    """Get the number of T-switchings on a partition.

    At a vertex of degree d visited t times the j-th extra pair can be chosen in
    d - 2t - 2(j - 1) ways.
    """
    total = 1
    for v, visits in trail.visits().items():
        t = len(visits)
        d = partition.graph.degree(v)
        total *= math.prod(max(d - 2 * t - 2 * j, 0) for j in range(t))
    return total


def _choices_at(
    partition: EulerianPartition, v: int, trail_darts: set[int], t: int
) -> Iterator[tuple[OrderedPair, ...]]:
    others = [p for p in partition.pairs_at(v) if p[0] not in trail_darts]
    for pairs in itertools.permutations(others, t):
        for flips in itertools.product((False, True), repeat=t):
            yield tuple((b, a) if f else (a, b) for (a, b), f in zip(pairs, flips))


def enumerate_t_switchings(
    partition: EulerianPartition, trail: Trail
) -> tuple[int, Iterator[TSwitchingChoice]]:
    """Get the number of T-switchings on a partition and an iterator over them.

    Raises:
        InvalidSwitchingError: The trail is not induced by the partition
    """
    if not partition.induces(trail):
        raise InvalidSwitchingError(f"Trail {trail.darts} is not induced by partition")

    visits = trail.visits()
    trail_darts = _trail_darts_at(trail)
    vertices = sorted(visits)

    def choices() -> Iterator[TSwitchingChoice]:
        per_vertex: Sequence[list[tuple[OrderedPair, ...]]] = [
            list(_choices_at(partition, v, trail_darts[v], len(visits[v])))
            for v in vertices
        ]
        for combination in itertools.product(*per_vertex):
            yield TSwitchingChoice(trail, frozendict(zip(vertices, combination)))

    return count_t_switchings(partition, trail), choices()


def switching_floor(d: int, L: int, ell: int) -> int | None:
    """Get the lower bound (d - 2L)^ell on the switchings of a short trail.

    The bound applies to trails of length ell <= L in a d-regular graph with d > 2L;
    otherwise None is returned.
    """
    if d <= 2 * L or ell > L:
        return None
    return (d - 2 * L) ** ell
