"""Graph spectra and the eigenvalue-based sufficient conditions.

Eigenvalues are computed with cyclic Jacobi rotations on the dense adjacency matrix.
Spectra of Cartesian products are obtained by convolving the factor spectra, either
with exact integer multiplicities or, for many factors, as normalised distributions.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from euler_entropy import config
from euler_entropy.errors import (
    IrregularGraphError,
    NonConvergenceError,
    ValidationError,
)
from euler_entropy.graph import MultiGraph, adjacency_matrix, girth
from euler_entropy.trails import count_closed_trails


@dataclass(frozen=True)
class Spectrum:
    """The eigenvalues of a symmetric matrix with their multiplicities."""

    values: tuple[tuple[float, int], ...]
    """(eigenvalue, multiplicity) pairs in non-increasing order of eigenvalue."""

    @property
    def n(self) -> int:
        """The total multiplicity."""
        return sum(mult for _, mult in self.values)

    def as_dict(self) -> dict[str, Any]:
        """Get a plain representation for reports."""
        return {
            "n": self.n,
            "values": [{"value": v, "multiplicity": m} for v, m in self.values],
        }


def _merge(
    pairs: Iterable[tuple[float, Any]], tol: float
) -> list[tuple[float, Any]]:
    """Merge values closer than tol, summing their weights.

    The merged value is the weighted mean of the group when the weights are integers.
    """
    merged: list[tuple[float, Any]] = []
    group: list[tuple[float, Any]] = []
    for value, weight in sorted(pairs, key=lambda p: -p[0]):
        if group and group[-1][0] - value > tol:
            merged.append(_collapse(group))
            group = []
        group.append((value, weight))
    if group:
        merged.append(_collapse(group))
    return merged


def _collapse(group: list[tuple[float, Any]]) -> tuple[float, Any]:
    total = sum(w for _, w in group)
    if len(group) == 1:
        return group[0]
    value = math.fsum(v * float(w) for v, w in group) / float(total)
    return value, total


def jacobi_eigenvalues(
    matrix: np.ndarray,
    tol: float = config.DEFAULT_JACOBI_TOL,
    max_sweeps: int = config.DEFAULT_JACOBI_SWEEPS,
) -> np.ndarray:
    """Get the eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Args:
        matrix: A symmetric square matrix
        tol: Stop once the off-diagonal Frobenius norm is below tol * ||A||_F
        max_sweeps: The maximum number of sweeps over all (p, q) pairs
    Returns:
        The unsorted diagonal of the rotated matrix
    Raises:
        NonConvergenceError: The iteration did not converge within max_sweeps
    """
    a = np.array(matrix, dtype=np.float64)
    n = a.shape[0]
    norm = float(np.linalg.norm(a))
    target = tol * norm

    def off_norm() -> float:
        return float(np.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0)))

    for sweep in range(max_sweeps + 1):
        off = off_norm()
        if off <= target:
            logging.debug(f"Jacobi converged after {sweep} sweeps")
            return np.diag(a).copy()
        if sweep == max_sweeps:
            raise NonConvergenceError(max_sweeps, off)

        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue

                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c

                col_p = a[:, p].copy()
                a[:, p] = c * col_p - s * a[:, q]
                a[:, q] = s * col_p + c * a[:, q]
                row_p = a[p, :].copy()
                a[p, :] = c * row_p - s * a[q, :]
                a[q, :] = s * row_p + c * a[q, :]
                a[p, q] = a[q, p] = 0.0

    raise AssertionError("unreachable")


def eigenvalues(
    graph: MultiGraph,
    tol: float = config.DEFAULT_JACOBI_TOL,
    max_sweeps: int = config.DEFAULT_JACOBI_SWEEPS,
) -> Spectrum:
    """Get the spectrum of a graph's adjacency matrix.

    Eigenvalues within 1e-7 * max(1, ||A||_F) of each other are merged into one value
    with a multiplicity.

    Raises:
        ValidationError: The graph has no vertices or tol is not positive
        NonConvergenceError: The Jacobi iteration did not converge
    """
    if graph.n < 1:
        raise ValidationError("Spectrum of an empty graph is undefined")
    if tol <= 0:
        raise ValidationError(f"Tolerance must be positive: {tol}")

    adj = adjacency_matrix(graph)
    diag = jacobi_eigenvalues(adj, tol, max_sweeps)
    merge_tol = config.MULTIPLICITY_MERGE_TOL * max(1.0, float(np.linalg.norm(adj)))
    return Spectrum(tuple(_merge(((float(v), 1) for v in diag), merge_tol)))


def _convolve(
    factors: Sequence[Sequence[tuple[float, Any]]],
) -> list[tuple[float, Any]]:
    """Get all sums of one value per factor, multiplying weights."""
    if not factors:
        raise ValidationError("At least one factor is required")

    scale = sum(max(abs(v) for v, _ in f) for f in factors)
    tol = config.MULTIPLICITY_MERGE_TOL * max(1.0, scale)
    current: list[tuple[float, Any]] = [(0.0, 1)]
    for factor in factors:
        current = _merge(
            ((a + b, wa * wb) for a, wa in current for b, wb in factor), tol
        )
    return current


def product_spectrum(factors: Sequence[Spectrum]) -> Spectrum:
    """Get the spectrum of a Cartesian product from the spectra of its factors.

    Multiplicities are exact integers (products of the factors' multiplicities).
    """
    return Spectrum(tuple(_convolve([f.values for f in factors])))


def spectrum_distribution(spectrum: Spectrum) -> tuple[tuple[float, float], ...]:
    """Get the eigenvalue distribution, with weights proportional to multiplicity."""
    n = spectrum.n
    return tuple((v, m / n) for v, m in spectrum.values)


def product_distribution(
    factors: Sequence[Spectrum],
) -> tuple[tuple[float, float], ...]:
    """Get the normalised eigenvalue distribution of a Cartesian product.

    This is the distribution of the independent sum of the factors' distributions and
    avoids the huge integer multiplicities of products with many factors.
    """
    return tuple(_convolve([spectrum_distribution(f) for f in factors]))


def spectral_moment(spectrum: Spectrum, ell: int) -> float:
    """Get the sum of the ell-th powers of the eigenvalues."""
    if ell < 1:
        raise ValidationError(f"Moment order must be positive: {ell}")
    return math.fsum(float(m) * v**ell for v, m in spectrum.values)


def closed_walk_count(graph: MultiGraph, ell: int) -> int:
    """Get the number of closed walks of length ell, i.e. trace(A^ell), exactly."""
    if ell < 1:
        raise ValidationError(f"Walk length must be positive: {ell}")
    adj = adjacency_matrix(graph).astype(object)
    return int(np.trace(np.linalg.matrix_power(adj, ell)))


def outlier_count(spectrum: Spectrum, threshold: float) -> int:
    """Count eigenvalues (with multiplicity) strictly outside [-threshold, threshold].

    Values within rounding distance of the boundary count as on the boundary.
    """
    if threshold < 0:
        raise ValidationError(f"Threshold must be non-negative: {threshold}")
    slack = config.MULTIPLICITY_MERGE_TOL * max(1.0, threshold)
    return sum(m for v, m in spectrum.values if abs(v) > threshold + slack)


def hoeffding_tail_bound(h: Sequence[int], delta: float) -> float:
    """Get Hoeffding's bound on Pr(|X| >= d_t^(1 - delta/4)) for a product of graphs.

    Args:
        h: The degrees of the factor graphs
        delta: The exponent parameter, in (0, 1)
    """
    if not h or any(x <= 0 for x in h):
        raise ValidationError("Factor degrees must be a non-empty list of positives")
    if not 0 < delta < 1:
        raise ValidationError(f"delta must lie in (0, 1): {delta}")

    d_t = sum(h)
    return 2.0 * math.exp(-(d_t ** (2 - delta / 2)) / (2 * sum(x * x for x in h)))


@dataclass(frozen=True)
class TrailMargin:
    """How far c_ell lies below the bounds used by the spectral condition."""

    ell: int
    c_ell: int
    closed_walks: int
    split_bound: float
    """n d^(ell-1) for short ell, else n d^(ell-1) (d^(1-delta ell) + d^(1-f))."""
    hypothesis_bound: float
    """C e^-(ell+1) d^(ell-1) n with C = e^(1 + 2/delta)."""

    @property
    def margin(self) -> float:
        """The slack of c_ell against the hypothesis bound."""
        return self.hypothesis_bound - self.c_ell


@dataclass(frozen=True)
class SpectralReport:
    """Outcome of checking the eigenvalue outlier condition."""

    delta: float
    threshold: float
    n: int
    d: int
    outliers: int
    f_implied: float
    C_constant: float
    boundary: str = "strict"
    """Eigenvalues on the interval boundary are not counted as outliers."""
    hypothesis_margin: tuple[TrailMargin, ...] = field(default=())

    @property
    def fraction(self) -> float:
        """The fraction of eigenvalues which are outliers."""
        return self.outliers / self.n

    def as_dict(self) -> dict[str, Any]:
        """Get a plain representation for reports."""
        out = asdict(self)
        out["fraction"] = self.fraction
        out["hypothesis_margin"] = [
            {**asdict(row), "margin": row.margin} for row in self.hypothesis_margin
        ]
        return out


def spectral_trail_margins(
    graph: MultiGraph, delta: float, lmax: int, spectrum: Spectrum | None = None
) -> tuple[TrailMargin, ...]:
    """Compare exact closed-trail counts with the bounds of the spectral condition.

    For ell <= 2/delta the trivial bound n d^(ell-1) is used, otherwise the bound
    obtained by splitting the spectrum at d^(1-delta).
    """
    d = _regular_degree(graph)
    spectrum = spectrum or eigenvalues(graph)
    outliers = outlier_count(spectrum, d ** (1 - delta))
    f = _implied_f(outliers, graph.n, d)
    table = count_closed_trails(graph, lmax)
    big_c = math.exp(1 + 2 / delta)

    rows = []
    for ell in range(3, lmax + 1):
        base = graph.n * float(d) ** (ell - 1)
        if ell <= 2 / delta:
            split = base
        else:
            tail = 0.0 if math.isinf(f) else float(d) ** (1 - f)
            split = base * (float(d) ** (1 - delta * ell) + tail)
        rows.append(
            TrailMargin(
                ell,
                table.counts[ell],
                closed_walk_count(graph, ell),
                split,
                big_c * math.exp(-(ell + 1)) * base,
            )
        )
    return tuple(rows)


def _regular_degree(graph: MultiGraph) -> int:
    d = graph.regular_degree
    if d is None:
        raise IrregularGraphError(frozenset(graph.degrees))
    return d


def _implied_f(outliers: int, n: int, d: int) -> float:
    """Solve outliers = n d^-f for f."""
    if outliers == 0:
        return math.inf
    return -math.log(outliers / n) / math.log(d)


def check_corollary_spectral(
    graph: MultiGraph, delta: float, lmax: int | None = None
) -> SpectralReport:
    """Check how many eigenvalues lie outside [-d^(1-delta), d^(1-delta)].

    Args:
        graph: A regular graph of degree at least 2
        delta: The exponent parameter, in (0, 1)
        lmax: If given, also compute per-length trail margins up to lmax
    Raises:
        ValidationError: The degree is below 2 or delta is out of range
    """
    if not 0 < delta < 1:
        raise ValidationError(f"delta must lie in (0, 1): {delta}")
    d = _regular_degree(graph)
    if d < 2:
        raise ValidationError(f"Degree must be at least 2, got {d}")

    spectrum = eigenvalues(graph)
    threshold = d ** (1 - delta)
    outliers = outlier_count(spectrum, threshold)
    margins = (
        spectral_trail_margins(graph, delta, lmax, spectrum) if lmax is not None else ()
    )
    return SpectralReport(
        delta=delta,
        threshold=threshold,
        n=graph.n,
        d=d,
        outliers=outliers,
        f_implied=_implied_f(outliers, graph.n, d),
        C_constant=math.exp(1 + 2 / delta),
        hypothesis_margin=margins,
    )


@dataclass(frozen=True)
class GirthReport:
    """Outcome of the growing-girth checks."""

    n: int
    d: int
    girth: float
    walk_length: int | None
    """The even walk length used, shorter than the girth (None if no such length)."""
    closed_walks: int | None
    walk_bound: int | None
    """2^ell (d-1)^(ell/2) n."""
    large_eigenvalues: int
    """The number of eigenvalues with |lambda| > d^(2/3)."""
    large_eigenvalue_cap: float | None
    """2^ell d^(-ell/6) n."""
    trail_cap: float
    """The most trails any Eulerian partition can induce, n d / (2 g)."""

    @property
    def walk_bound_holds(self) -> bool:
        """Whether the closed walk count respects the tree-like bound."""
        if self.walk_bound is None or self.closed_walks is None:
            return True
        return self.closed_walks <= self.walk_bound

    @property
    def eigenvalue_cap_holds(self) -> bool:
        """Whether the number of large eigenvalues respects the implied cap."""
        cap = self.large_eigenvalue_cap
        return cap is None or self.large_eigenvalues <= cap

    def as_dict(self) -> dict[str, Any]:
        """Get a plain representation for reports."""
        return {
            **asdict(self),
            "walk_bound_holds": self.walk_bound_holds,
            "eigenvalue_cap_holds": self.eigenvalue_cap_holds,
        }


def check_corollary_girth(graph: MultiGraph, ell: int | None = None) -> GirthReport:
    """Check the growing-girth condition through closed walks and eigenvalues.

    Args:
        graph: A regular graph
        ell: An even walk length below the girth (default: the largest such <= 12)
    Raises:
        ValidationError: ell is not an even number below the girth
    """
    d = _regular_degree(graph)

    g = girth(graph)
    if ell is None:
        ell = min(12, int(g) - 1 if not math.isinf(g) else 12)
        ell -= ell % 2
    if ell < 2:
        ell_used: int | None = None
    elif ell % 2 or ell >= g:
        raise ValidationError(f"Walk length must be even and below the girth: {ell}")
    else:
        ell_used = ell

    spectrum = eigenvalues(graph)
    large = outlier_count(spectrum, d ** (2 / 3))
    trail_cap = 0.0 if math.isinf(g) else graph.n * d / (2 * g)
    if ell_used is None:
        return GirthReport(graph.n, d, g, None, None, None, large, None, trail_cap)

    walks = closed_walk_count(graph, ell_used)
    walk_bound = 2**ell_used * (d - 1) ** (ell_used // 2) * graph.n
    cap = 2**ell_used * float(d) ** (-ell_used / 6) * graph.n
    return GirthReport(
        graph.n, d, g, ell_used, walks, walk_bound, large, cap, trail_cap
    )


@dataclass(frozen=True)
class ProductReport:
    """Outcome of checking the Cartesian-product condition."""

    h: tuple[int, ...]
    delta: float
    d_t: int
    sum_h_squared: int
    condition_ratio: float
    """sum h_i^2 / d_t^(2 - delta), which must stay bounded."""
    threshold: float
    """d_t^(1 - delta/4)."""
    hoeffding_bound: float
    exact_tail: float | None = None
    """Pr(|X| >= threshold) from the factor spectra, when supplied."""

    @property
    def holds(self) -> bool:
        """Whether the exact tail respects Hoeffding's bound (True if not computed)."""
        return self.exact_tail is None or self.exact_tail <= self.hoeffding_bound

    def as_dict(self) -> dict[str, Any]:
        """Get a plain representation for reports."""
        return {**asdict(self), "holds": self.holds}


def check_corollary_product(
    h: Sequence[int], delta: float, factors: Sequence[Spectrum] | None = None
) -> ProductReport:
    """Check the Cartesian-product condition for factors of the given degrees.

    Args:
        h: The degrees of the factors
        delta: The exponent parameter, in (0, 1)
        factors: The factor spectra (optional); enables the exact tail probability
    """
    bound = hoeffding_tail_bound(h, delta)
    d_t = sum(h)
    threshold = d_t ** (1 - delta / 4)

    exact = None
    if factors is not None:
        if len(factors) != len(h):
            raise ValidationError("One spectrum is needed per factor degree")
        slack = config.MULTIPLICITY_MERGE_TOL * max(1.0, threshold)
        exact = math.fsum(
            w for v, w in product_distribution(factors) if abs(v) >= threshold - slack
        )

    sum_h2 = sum(x * x for x in h)
    return ProductReport(
        tuple(h),
        delta,
        d_t,
        sum_h2,
        sum_h2 / d_t ** (2 - delta),
        threshold,
        bound,
        exact,
    )
