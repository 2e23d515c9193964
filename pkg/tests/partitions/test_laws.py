"""Tests for the exact laws of the trail statistics."""

import math
from fractions import Fraction

import pytest

from euler_entropy.errors import EnumerationCapExceeded, ValidationError
from euler_entropy.graph import MultiGraph, cartesian_product, require_regular_degree
from euler_entropy.graph.generators import circulant, complete, cycle
from euler_entropy.partitions import (
    exact_partition_law,
    expected_X,
    lk_inequality_holds,
    long_trail_report,
    mgf_check,
    pmf_mean,
    xi_pmf_bruteforce,
    xi_pmf_theoretical,
)


@pytest.mark.parametrize(
    "d,expected",
    (
        (2, {1: Fraction(1)}),
        (4, {1: Fraction(2, 3), 2: Fraction(1, 3)}),
        (6, {1: Fraction(8, 15), 2: Fraction(2, 5), 3: Fraction(1, 15)}),
    ),
)
def test_xi_pmf_theoretical(d: int, expected: dict[int, Fraction]) -> None:
    """Test xi_pmf_theoretical."""
    assert xi_pmf_theoretical(d) == expected


@pytest.mark.parametrize("d", (2, 4, 6, 8))
def test_xi_pmf_bruteforce(d: int) -> None:
    """Check that enumerating pairings gives the Bernoulli-sum law."""
    assert xi_pmf_bruteforce(d) == xi_pmf_theoretical(d)


@pytest.mark.slow
def test_xi_pmf_bruteforce_largest() -> None:
    """Check the largest degree that is brute forced."""
    assert xi_pmf_bruteforce(10) == xi_pmf_theoretical(10)


@pytest.mark.parametrize("d", (3, 12))
def test_xi_pmf_bruteforce_errors(d: int) -> None:
    """Check that odd and too large degrees are rejected."""
    with pytest.raises(ValidationError):
        xi_pmf_bruteforce(d)


@pytest.mark.parametrize(
    "d,n,expected",
    ((2, 7, Fraction(7)), (4, 5, Fraction(20, 3)), (6, 1, Fraction(23, 15))),
)
def test_expected_X(d: int, n: int, expected: Fraction) -> None:
    """Check E X and that it is n times the mean of the per-vertex law."""
    assert expected_X(d, n) == expected
    assert n * pmf_mean(xi_pmf_theoretical(d)) == expected


K5_X_TOTAL = {
    5: Fraction(44, 81),
    8: Fraction(20, 81),
    9: Fraction(10, 81),
    10: Fraction(7, 81),
}
"""The law of X on K5: 132 Euler circuits, then the 2- and 3-trail partitions."""


def test_exact_partition_law_k5(k5: MultiGraph) -> None:
    """Check the exact laws on K5."""
    law = exact_partition_law(k5)
    assert law.partitions == 243
    assert all(m == xi_pmf_theoretical(4) for m in law.marginals)
    assert law.x_total == K5_X_TOTAL
    assert law.expected_X == Fraction(20, 3)
    assert law.trail_count == {
        1: Fraction(44, 81),
        2: Fraction(32, 81),
        3: Fraction(5, 81),
    }
    assert sum(p * 2**t for t, p in law.trail_count.items()) == Fraction(256, 81)


def test_exact_partition_law_k5_joint(k5: MultiGraph) -> None:
    """Check that the X_i of K5 are dependent although each has the right law."""
    law = exact_partition_law(k5)
    both = sum(p for xs, p in law.joint.items() if xs[0] == xs[1] == 2)
    assert both == Fraction(19, 81)
    assert not law.factorizes()

    out = law.as_dict()
    assert (out["expected_X_num"], out["expected_X_den"]) == (20, 3)
    assert out["factorizes"] is False
    assert out["marginals"][0][0] == {"value": 1, "prob_num": 2, "prob_den": 3}


@pytest.mark.parametrize(
    "graph", (circulant(6, (1, 2)), cartesian_product(cycle(3), cycle(3)))
)
def test_exact_partition_law_marginals(graph: MultiGraph) -> None:
    """Check the per-vertex law on other 4-regular graphs."""
    law = exact_partition_law(graph)
    assert law.marginals == (xi_pmf_theoretical(4),) * graph.n
    assert law.expected_X == expected_X(4, graph.n)


def test_exact_partition_law_multigraph() -> None:
    """Two vertices joined by parallel edges lie on exactly the same trails."""
    law = exact_partition_law(MultiGraph.from_edges(2, [(0, 1)] * 6))
    assert law.marginals == (xi_pmf_theoretical(6),) * 2
    assert all(x0 == x1 for x0, x1 in law.joint)
    assert not law.factorizes()


def test_exact_partition_law_cap(k5: MultiGraph) -> None:
    """Check that the enumeration cap is honoured."""
    with pytest.raises(EnumerationCapExceeded):
        exact_partition_law(k5, cap=10)


def test_mgf_check(k5: MultiGraph) -> None:
    """Check E e^(lambda X) against its closed form and bound on K5."""
    law = exact_partition_law(k5)
    rows = mgf_check(law)
    assert [row.lam for row in rows] == [0.25, 0.5, 1.0]
    assert all(row.passed for row in rows)

    lam = rows[-1].lam
    closed_form = sum(float(p) * math.exp(lam * x) for x, p in K5_X_TOTAL.items())
    assert rows[-1].mgf == pytest.approx(closed_form)
    assert rows[-1].bound == pytest.approx(math.exp(2 * lam * 20 / 3))


def test_mgf_check_errors(k5: MultiGraph) -> None:
    """Check that lambda must lie in [0, 1]."""
    law = exact_partition_law(k5)
    with pytest.raises(ValidationError):
        mgf_check(law, [1.5])


@pytest.mark.parametrize("k,has_bound", ((1, False), (3, True), (5, True)))
def test_long_trail_report(k5: MultiGraph, k: int, has_bound: bool) -> None:
    """Check the bounds on long trails for several k."""
    report = long_trail_report(k5, k)
    assert report.passed
    assert (report.mgf_bound is not None) == has_bound
    assert report.lam == pytest.approx(3.5 * math.log(2) / k)


def test_long_trail_report_no_long_trails(k5: MultiGraph) -> None:
    """With k = n no trail is long."""
    assert long_trail_report(k5, 5).E_2_aL == 1.0


def test_long_trail_report_errors(k5: MultiGraph) -> None:
    """Check that k must be positive."""
    with pytest.raises(ValidationError):
        long_trail_report(k5, 0)


def test_lk_inequality_holds(k5: MultiGraph, octahedron: MultiGraph) -> None:
    """Test lk_inequality_holds."""
    assert lk_inequality_holds(k5)
    assert lk_inequality_holds(octahedron, ks=(1, 2, 3))


FIXTURES = (
    cycle(5),
    cycle(6),
    complete(5),
    circulant(6, (1, 2)),
    cartesian_product(cycle(3), cycle(3)),
)
"""Small regular graphs whose partitions can all be listed."""


@pytest.mark.parametrize("graph", FIXTURES)
def test_laws_on_fixtures(graph: MultiGraph) -> None:
    """Check E X, the moment bound and L_k <= X / k for every k on each fixture."""
    law = exact_partition_law(graph)
    assert law.expected_X == expected_X(require_regular_degree(graph), graph.n)
    assert pmf_mean(law.x_total) == law.expected_X
    assert all(row.passed for row in mgf_check(law, [0.25, 0.5, 0.75, 1.0]))
    assert lk_inequality_holds(graph, ks=range(1, graph.n + 1))
