"""Tests for the switching graph and the bounds on its class masses."""

import math
from dataclasses import replace
from fractions import Fraction

import pytest
from frozendict import frozendict

from euler_entropy.errors import ConditionViolationError, PathBudgetExceeded
from euler_entropy.graph import MultiGraph
from euler_entropy.graph.generators import circulant, complete, cycle
from euler_entropy.partitions import enumerate_partitions
from euler_entropy.switching import (
    Split,
    SwitchingEdge,
    SwitchingInstance,
    admissible_splits,
    aggregate_floor_holds,
    build_switching_graph,
    check_conditions,
    check_switching_bound,
    colour_allowed,
    default_L,
    free_classes,
    inverse_switch_counts,
    path_bound,
    profile_of,
    tail_report,
    widest_split,
)

A, B, C = (0,), (1,), (2,)

HAMILTON_PAIR = (0, 0, 2, 0, 0, 0, 0, 0)
"""The class of K5's partitions into two Hamilton cycles, with k = 5."""


def _instance(classes: dict, *edges: tuple) -> SwitchingInstance:
    """Build a switching graph by hand, from (source, target, alpha_hat) edges."""
    return SwitchingInstance(
        cycle(3),
        2,
        3,
        1,
        1.0,
        frozendict(classes),
        tuple(
            SwitchingEdge(s, t, 3, 1, alpha.denominator, alpha.numerator, 1)
            for s, t, alpha in edges
        ),
        frozendict(),
        frozendict(),
        frozendict(),
    )


@pytest.fixture(scope="module")
def k5_instance() -> SwitchingInstance:
    """The switching graph of K5 with k = 3."""
    return build_switching_graph(complete(5), 3)


@pytest.fixture(scope="module")
def k5_all_trails() -> SwitchingInstance:
    """The switching graph of K5 with k = 5, in which every trail is short."""
    return build_switching_graph(complete(5), 5)


@pytest.fixture(scope="module")
def octahedron_all_trails() -> SwitchingInstance:
    """The switching graph of the octahedron with k = 6."""
    return build_switching_graph(circulant(6, (1, 2)), 6)


def test_default_L(k5: MultiGraph, c5: MultiGraph) -> None:
    """Test default_L."""
    assert default_L(k5, 3) == 3
    assert default_L(k5, 5) == 10
    assert default_L(c5, 5) == 5


@pytest.mark.parametrize(
    "profile,ell,L,expected",
    (
        ((1,), 3, 3, True),
        ((0,), 3, 3, False),
        ((1, 0, 5), 3, 3, False),
        ((2, 0, 4), 3, 3, True),
        ((2, 0, 5), 5, 3, True),
        ((2, 0, 5), 3, 3, False),
    ),
)
def test_colour_allowed(profile: tuple, ell: int, L: int, expected: bool) -> None:
    """Colour ell may leave a class only if m_ell >= |m| / L."""
    assert colour_allowed(profile, ell, L) == expected


def test_profile_of(k5: MultiGraph) -> None:
    """Check the profiles of K5's partitions."""
    profiles = [profile_of(p, 3, 3) for p in enumerate_partitions(k5)]
    assert profiles.count((0,)) == 168
    assert profiles.count((1,)) == 60
    assert profiles.count((2,)) == 15
    assert all(len(profile_of(p, 5, 6)) == 4 for p in enumerate_partitions(k5))


def test_switching_graph_cycle(c5: MultiGraph) -> None:
    """A cycle has one class and no switchings."""
    inst = build_switching_graph(c5, 5)
    assert inst.L == 5
    assert inst.classes == {(0, 0, 1): 1}
    assert inst.edges == ()
    assert inst.is_sink((0, 0, 1))


def test_switching_graph_k5(k5_instance: SwitchingInstance) -> None:
    """Check the classes and the fewest switchings on K5."""
    inst = k5_instance
    assert inst.classes == {A: 168, B: 60, C: 15}
    assert inst.min_out == {(B, 3): 8, (C, 3): 16}
    assert inst.is_sink(A)
    assert {e.source for e in inst.edges} == {B, C}
    assert all(e.alpha == Fraction(e.b, e.a) for e in inst.edges)
    assert inst.short_trail_counts == {3: 10}
    assert inst.M0 == pytest.approx(22.5)

    out = inst.as_dict()
    assert out["params"]["L"] == 3
    assert out["vertices"][0] == {"m": [0], "N": 168}


def test_switching_graph_threads(k5: MultiGraph, k5_instance) -> None:
    """Check that threads do not change the switching graph."""
    assert build_switching_graph(k5, 3, threads=4) == k5_instance


def test_switching_graph_all_trails(k5_all_trails: SwitchingInstance) -> None:
    """With k = n every partition is counted once."""
    inst = k5_all_trails
    assert inst.L == 10
    assert inst.mass(inst.vertices) == 243


def test_inverse_switch_counts(k5_instance: SwitchingInstance) -> None:
    """Check that b found by inverse switchings matches the forward count."""
    assert inverse_switch_counts(k5_instance) == k5_instance.max_in
    assert all(
        b <= k5_instance.short_trail_counts[ell]
        for (_, ell), b in k5_instance.max_in.items()
    )


def test_aggregate_floor_undefined(k5_instance: SwitchingInstance) -> None:
    """With d <= 2L the aggregate floor is not defined."""
    assert aggregate_floor_holds(k5_instance) is None


def test_aggregate_floor() -> None:
    """Check a >= |m| (d - 2L)^ell / L when d > 2L."""
    inst = replace(_instance({C: 1}), d=6, min_out=frozendict({(C, 3): 128}))
    assert aggregate_floor_holds(inst)
    inst = replace(inst, min_out=frozendict({(C, 3): 127}))
    assert aggregate_floor_holds(inst) is False


def test_path_bound_single_edge() -> None:
    """Check the bound for a single edge from Y to Z."""
    inst = _instance({A: 10, B: 2}, (B, A, Fraction(1, 2)))
    Y, Z = frozenset({B}), frozenset({A})
    bound = path_bound(inst, Y, Z)
    assert (bound.max_to_Z, bound.max_to_Y) == (0.5, 0.0)
    assert bound.factor == 0.5

    report = check_switching_bound(inst, Y, Z)
    assert (report.mass_Y, report.mass_Z) == (2, 10)
    assert report.passed
    assert not report.vacuous
    assert report.slack == pytest.approx(3.0)
    assert report.closed_form is None
    assert report.as_dict()["factor"] == 0.5


def test_path_bound_two_hops() -> None:
    """Check that products are taken along paths through other classes."""
    inst = _instance(
        {A: 10, B: 3, C: 1},
        (C, B, Fraction(1, 2)),
        (B, A, Fraction(1, 4)),
    )
    Y, Z = frozenset({C}), frozenset({A})
    assert path_bound(inst, Y, Z).max_to_Z == pytest.approx(0.125)
    assert path_bound(inst, Y, Z, max_path_length=1).max_to_Z == 0.0


def test_path_bound_loop() -> None:
    """A loop at a class of Y is a path from Y to Y."""
    inst = _instance(
        {A: 10, C: 1},
        (C, C, Fraction(1, 2)),
        (C, A, Fraction(1, 2)),
    )
    bound = path_bound(inst, frozenset({C}), frozenset({A}))
    assert bound.max_to_Y == 0.5
    assert bound.factor == pytest.approx(1.0)


def test_path_bound_budget() -> None:
    """Check that the path search stops when its budget runs out."""
    inst = _instance({A: 10, B: 2}, (B, A, Fraction(1, 2)))
    with pytest.raises(PathBudgetExceeded):
        path_bound(inst, frozenset({B}), frozenset({A}), budget=0)


@pytest.mark.parametrize(
    "Y,Z,vertex",
    (
        (frozenset({B}), frozenset(), None),
        (frozenset({A, B}), frozenset({A}), A),
        (frozenset({B}), frozenset({C}), A),
        (frozenset(), frozenset({A}), C),
    ),
)
def test_check_conditions(Y: frozenset, Z: frozenset, vertex) -> None:
    """Check each way in which Y and Z can be unsuitable."""
    inst = _instance(
        {A: 10, B: 2, C: 1},
        (B, C, Fraction(1, 2)),
        (C, A, Fraction(3, 2)),
    )
    with pytest.raises(ConditionViolationError) as info:
        check_conditions(inst, Y, Z)
    assert info.value.vertex == vertex


def test_closed_form() -> None:
    """Check the closed form when every alpha_hat is tiny."""
    inst = _instance({A: 100, B: 1}, (B, A, Fraction(1, 1000)))
    report = check_switching_bound(inst, frozenset({B}), frozenset({A}), M=1, M0=0)
    assert report.closed_form == pytest.approx(2 * math.exp(-1))
    assert report.closed_form_passed


def test_admissible_splits() -> None:
    """Check the threshold splits of a small switching graph."""
    inst = _instance(
        {A: 10, B: 2, C: 1},
        (B, A, Fraction(1, 2)),
        (C, A, Fraction(1, 4)),
    )
    assert list(admissible_splits(inst)) == [
        Split(1, 0, frozenset({C}), frozenset({A}), False),
        Split(2, 0, frozenset(), frozenset({A}), True),
        Split(2, 1, frozenset(), frozenset({A, B}), True),
    ]


def test_admissible_splits_k5(k5_instance: SwitchingInstance) -> None:
    """Every admissible split of K5 satisfies the conditions and the bound."""
    for split in admissible_splits(k5_instance):
        check_conditions(k5_instance, split.Y, split.Z)
        report = check_switching_bound(k5_instance, split.Y, split.Z)
        assert not report.vacuous or report.passed
        assert split.vacuous == (not split.Y)


def test_tail_report(k5: MultiGraph) -> None:
    """Check the tail of the number of triangles in K5's partitions."""
    report = tail_report(k5, 3, 0.01)
    assert report.L == 3
    assert report.M0 == pytest.approx(0.225)
    assert report.S_pmf == {
        0: Fraction(56, 81),
        1: Fraction(20, 81),
        2: Fraction(5, 81),
    }
    assert [r.exact_tail for r in report.rows] == [
        Fraction(25, 81),
        Fraction(5, 81),
        Fraction(0),
    ]
    assert [r.vacuous for r in report.rows] == [True, False, False]
    assert report.rows[1].bound == pytest.approx(2 * math.exp(-0.775))
    assert report.passed

    a = 1.4
    mgf = (56 + 20 * 2**a + 5 * 2 ** (2 * a)) / 81
    assert report.mgf_exact == pytest.approx(mgf)
    lam = a * math.log(2)
    assert report.mgf_bound == pytest.approx(
        math.exp(lam * 0.225) * (1 + 2 / (1 - lam))
    )
    assert not report.mgf_vacuous
    assert report.as_dict()["max_S"] == 2


def test_tail_report_vacuous_mgf(k5: MultiGraph) -> None:
    """With a large C every value of S_k is below M0."""
    report = tail_report(k5, 3, 1.0)
    assert report.mgf_vacuous
    assert all(r.vacuous for r in report.rows)


def test_tail_report_default_L(c5: MultiGraph) -> None:
    """By default L is C(k, 2) capped at the number of edges."""
    report = tail_report(cycle(4), 4, 0.01)
    assert report.L == default_L(cycle(4), 4) == 4
    assert report.M0 == pytest.approx(0.64)
    assert report.S_pmf == {1: Fraction(1)}
    assert tail_report(c5, 5, 0.01).L == build_switching_graph(c5, 5).L == 5


def test_alpha_hat_bound_undefined(k5_instance: SwitchingInstance) -> None:
    """With d <= 2L there is no bound on alpha_hat to compare with."""
    assert all(k5_instance.alpha_hat_bound(e) is None for e in k5_instance.edges)
    assert all(k5_instance.alpha_hat_estimate(e) is None for e in k5_instance.edges)
    assert k5_instance.alpha_hat_bounds_hold() is None
    edge = k5_instance.as_dict()["edges"][0]
    assert edge["alpha_hat_bound"] is None
    assert edge["alpha_hat_estimate"] is None


def test_alpha_hat_bound() -> None:
    """Check c L^2 / (|m| (d - 2L)^ell) and its large-d form when d > 2L."""
    inst = _instance({A: 5, C: 1}, (C, A, Fraction(1, 10)))
    inst = replace(inst, d=8, L=3, short_trail_counts=frozendict({3: 10}))
    (edge,) = inst.edges
    assert inst.alpha_hat_bound(edge) == pytest.approx(10 * 9 / (2 * 2**3))
    assert inst.alpha_hat_estimate(edge) == pytest.approx(2 * 10 * 9 / (8**3 * 2))
    assert inst.alpha_hat_bounds_hold()
    assert inst.as_dict()["edges"][0]["alpha_hat_bound"] == pytest.approx(5.625)

    inst = replace(inst, edges=(replace(edge, a=1, b=6),))
    assert inst.edges[0].alpha_hat == 6
    assert inst.alpha_hat_bounds_hold() is False


def test_free_classes() -> None:
    """Only non-sinks whose edges all have alpha_hat < 1 may lie outside Z."""
    inst = _instance(
        {A: 10, B: 2, C: 1},
        (B, A, Fraction(1, 2)),
        (C, A, Fraction(3, 2)),
    )
    assert free_classes(inst) == {B}
    assert widest_split(inst) == (frozenset({B}), frozenset({A, C}))


@pytest.mark.parametrize(
    "classes,edges",
    (
        ({A: 1}, ()),
        ({A: 1, B: 1}, ((A, B, Fraction(1, 2)), (B, A, Fraction(1, 2)))),
    ),
)
def test_widest_split_none(classes: dict, edges: tuple) -> None:
    """There is no widest split if no class is free or if every class is."""
    assert widest_split(_instance(classes, *edges)) is None


def test_threshold_splits_all_trails(
    k5_all_trails: SwitchingInstance, octahedron_all_trails: SwitchingInstance
) -> None:
    """With k = n no threshold split is suitable on K5 or the octahedron."""
    assert list(admissible_splits(k5_all_trails)) == []
    assert list(admissible_splits(octahedron_all_trails)) == []


def test_hamilton_pair_split(k5_all_trails: SwitchingInstance) -> None:
    """The partitions of K5 into two Hamilton cycles are bounded by all the others.

    Each of the six such partitions has 2 * 2^5 switchings, and a partition is reached
    from at most three of them, in two ways each, so alpha_hat <= 10 * 6 / 64 < 1.
    """
    inst = k5_all_trails
    assert inst.classes[HAMILTON_PAIR] == 6
    out = inst.out_edges(HAMILTON_PAIR)
    assert out
    assert all(e.colour == 5 and e.a == 64 and 2 <= e.b <= 6 for e in out)
    assert HAMILTON_PAIR in free_classes(inst)

    Y = frozenset({HAMILTON_PAIR})
    Z = frozenset(inst.classes) - Y
    check_conditions(inst, Y, Z)
    report = check_switching_bound(inst, Y, Z)
    assert (report.mass_Y, report.mass_Z) == (6, 237)
    assert report.bound.max_to_Y < 1
    assert not report.vacuous
    assert report.passed


def test_widest_split_k5(k5_all_trails: SwitchingInstance) -> None:
    """The widest split of K5 is suitable and gives a non-vacuous bound."""
    free = widest_split(k5_all_trails)
    assert free is not None
    Y, Z = free
    assert HAMILTON_PAIR in Y
    check_conditions(k5_all_trails, Y, Z)
    report = check_switching_bound(k5_all_trails, Y, Z)
    assert not report.vacuous
    assert report.passed
