"""The subcommands of the tool.

Each command takes a resolved RunConfig and returns a CommandOutput holding the
result for the JSON report and, where the command has one, the table written in CSV
format. Commands only call into the library and format what it returns.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Mapping, Sequence
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any

from euler_entropy.cli.run_config import RunConfig
from euler_entropy.errors import RunConfigError
from euler_entropy.graph import (
    GeneratorKind,
    MultiGraph,
    format_edge_list,
    generate,
    girth,
    load_graph,
    parse_generator_spec,
    require_regular_degree,
)
from euler_entropy.orientations import (
    count_eulerian_orientations,
    lieb_wu_check,
    pauling_estimate,
    vertex_balance_probability,
)
from euler_entropy.partitions import (
    exact_E2T,
    exact_partition_law,
    lk_inequality_holds,
    long_trail_report,
    mc_estimate,
    mgf_check,
    xi_pmf_bruteforce,
    xi_pmf_theoretical,
)
from euler_entropy.spectra import (
    check_corollary_girth,
    check_corollary_product,
    check_corollary_spectral,
    eigenvalues,
)
from euler_entropy.switching import (
    admissible_splits,
    aggregate_floor_holds,
    build_switching_graph,
    check_switching_bound,
    inverse_switch_counts,
    tail_report,
    widest_split,
)
from euler_entropy.trails import (
    HypothesisReport,
    check_theorem_hypothesis,
    compute_k_L,
    count_closed_trails,
    count_short_closed_trails,
)

HYPOTHESIS_CSV_HEADER = ("ell", "c_ell", "c_k_ell", "bound", "pass")
PMF_CSV_HEADER = ("value", "prob_num", "prob_den")
TAIL_CSV_HEADER = ("M", "exact_tail", "bound", "vacuous")


@dataclass(frozen=True)
class CommandOutput:
    """What a command produces."""

    result: dict[str, Any]
    """The body of the JSON report."""
    csv_header: tuple[str, ...] | None = None
    """Column names of the CSV table (None if the command has no table)."""
    csv_rows: tuple[tuple[Any, ...], ...] = field(default=())
    text: str | None = None
    """Plain text written instead of a report (used for edge lists)."""


def _graph_source(cfg: RunConfig) -> str:
    if cfg.graph is None:
        raise RunConfigError(f"{cfg.command} needs a graph (--graph)")
    return cfg.graph


def _graph(cfg: RunConfig) -> MultiGraph:
    return load_graph(_graph_source(cfg))


def _k(cfg: RunConfig, graph: MultiGraph) -> int:
    """Get the vertex cap from the config, else from the degree and lmax."""
    if cfg.k is not None:
        return cfg.k
    return compute_k_L(require_regular_degree(graph), cfg.lmax).k


def _pmf_rows(pmf: Mapping[int, Fraction]) -> tuple[tuple[int, int, int], ...]:
    return tuple((v, p.numerator, p.denominator) for v, p in pmf.items())


def _hypothesis_rows(report: HypothesisReport) -> tuple[tuple[Any, ...], ...]:
    return tuple(
        (r.ell, r.c_ell, r.c_k_ell, r.bound, r.passed) for r in report.rows
    )


def gen(cfg: RunConfig) -> CommandOutput:
    """Generate or read a graph and write it out."""
    graph = _graph(cfg)
    summary = {
        "n": graph.n,
        "m": graph.m,
        "degrees": list(graph.degrees),
        "girth": girth(graph),
    }
    if cfg.format is None:
        return CommandOutput(summary, text=format_edge_list(graph))
    rows = tuple((v, d) for v, d in enumerate(graph.degrees))
    return CommandOutput(summary, ("vertex", "degree"), rows)


def eo(cfg: RunConfig) -> CommandOutput:
    """Count Eulerian orientations exactly."""
    graph = _graph(cfg)
    if graph.regular_degree is not None:
        report = lieb_wu_check(graph, cfg.max_edges, cfg.threads)
        result = {**report.as_dict(), "eo": report.eo}
    else:
        count = count_eulerian_orientations(graph, cfg.max_edges, cfg.threads)
        result = {"n": count.n, "m": count.m, "eo": count.eo, "rho": count.rho}
    return CommandOutput(result)


def pauling(cfg: RunConfig) -> CommandOutput:
    """Evaluate Pauling's estimate for a degree."""
    d = cfg.d if cfg.d is not None else require_regular_degree(_graph(cfg))
    return CommandOutput(
        {
            "d": d,
            "rho_hat": pauling_estimate(d),
            "balance_probability": vertex_balance_probability(d),
        }
    )


def mc(cfg: RunConfig) -> CommandOutput:
    """Estimate the residual entropy from random partitions."""
    estimate = mc_estimate(_graph(cfg), cfg.samples, cfg.seed, cfg.threads)
    rows = tuple(sorted(estimate.histogram.items()))
    return CommandOutput(estimate.as_dict(), ("trails", "count"), rows)


def trails(cfg: RunConfig) -> CommandOutput:
    """Count closed trails, and short closed trails if k is given."""
    graph = _graph(cfg)
    table = count_closed_trails(graph, cfg.lmax, threads=cfg.threads)
    counts = dict(table.counts or {})
    short: dict[int, int] = {}
    if cfg.k is not None:
        L = cfg.L if cfg.L is not None else cfg.k * (cfg.k - 1) // 2
        short_table = count_short_closed_trails(graph, L, cfg.k, threads=cfg.threads)
        short = dict(short_table.short_counts or {})

    result = {"lmax": cfg.lmax, "k": cfg.k, "c_ell": counts, "c_k_ell": short}
    lengths = sorted(set(counts) | set(short))
    rows = tuple(
        (ell, counts.get(ell), short.get(ell), None, None) for ell in lengths
    )
    return CommandOutput(result, HYPOTHESIS_CSV_HEADER, rows)


def spectrum(cfg: RunConfig) -> CommandOutput:
    """Compute the adjacency spectrum."""
    spec = eigenvalues(_graph(cfg))
    return CommandOutput(spec.as_dict(), ("value", "multiplicity"), spec.values)


def check_theorem(cfg: RunConfig) -> CommandOutput:
    """Check the closed-trail hypothesis."""
    report = check_theorem_hypothesis(
        _graph(cfg), cfg.C, cfg.lmax, cfg.k, threads=cfg.threads
    )
    return CommandOutput(
        report.as_dict(), HYPOTHESIS_CSV_HEADER, _hypothesis_rows(report)
    )


def check_spectral(cfg: RunConfig) -> CommandOutput:
    """Check the eigenvalue outlier condition."""
    report = check_corollary_spectral(_graph(cfg), cfg.delta, cfg.lmax)
    rows = tuple(
        (r.ell, r.c_ell, r.closed_walks, r.split_bound, r.hypothesis_bound, r.margin)
        for r in report.hypothesis_margin
    )
    header = ("ell", "c_ell", "closed_walks", "split_bound", "hypothesis_bound")
    return CommandOutput(report.as_dict(), (*header, "margin"), rows)


def check_girth(cfg: RunConfig) -> CommandOutput:
    """Check the growing-girth condition."""
    return CommandOutput(check_corollary_girth(_graph(cfg)).as_dict())


def check_product(cfg: RunConfig) -> CommandOutput:
    """Check the Cartesian-product condition from degrees or a product graph."""
    if cfg.h is not None:
        report = check_corollary_product(cfg.h, cfg.delta)
    else:
        spec = parse_generator_spec(_graph_source(cfg))
        if spec.kind != GeneratorKind.PRODUCT:
            raise RunConfigError("check-product needs --h or a product:... graph")
        factors = [generate(f) for f in spec.factors]
        h = [require_regular_degree(f) for f in factors]
        spectra = [eigenvalues(f) for f in factors]
        report = check_corollary_product(h, cfg.delta, spectra)
    return CommandOutput(report.as_dict())


def switchlab(cfg: RunConfig) -> CommandOutput:
    """Build the switching graph and evaluate every bound on it."""
    graph = _graph(cfg)
    k = _k(cfg, graph)
    inst = build_switching_graph(graph, k, cfg.L, cfg.C, threads=cfg.threads)

    splits = []
    for split in admissible_splits(inst):
        bound = check_switching_bound(inst, split.Y, split.Z, split.M, split.M0)
        splits.append(
            {"M": split.M, "M0": split.M0, "vacuous": split.vacuous, **bound.as_dict()}
        )

    chosen = None
    if cfg.M is not None:
        Y, Z = inst.split(cfg.M)
        chosen = check_switching_bound(inst, Y, Z, cfg.M).as_dict()

    widest = None
    free = widest_split(inst)
    if free is not None:
        Y, Z = free
        widest = {
            "Y": [list(v) for v in sorted(Y)],
            **check_switching_bound(inst, Y, Z).as_dict(),
        }

    tail = tail_report(graph, k, cfg.C, inst.L)
    result = {
        "instance": inst.as_dict(),
        "dual_b_equal": inverse_switch_counts(inst) == inst.max_in,
        "aggregate_floor": aggregate_floor_holds(inst),
        "alpha_hat_bounds_hold": inst.alpha_hat_bounds_hold(),
        "admissible_splits": splits,
        "bound_at_M": chosen,
        "widest_split": widest,
        "tail": tail.as_dict(),
    }
    rows = tuple(
        (r.M, float(r.exact_tail), r.bound, r.vacuous) for r in tail.rows
    )
    return CommandOutput(result, TAIL_CSV_HEADER, rows)


def identity(cfg: RunConfig) -> CommandOutput:
    """Check the partition/orientation identity exactly."""
    report = exact_E2T(_graph(cfg), max_edges=cfg.max_edges, threads=cfg.threads)
    return CommandOutput(report.as_dict())


def xlaw(cfg: RunConfig) -> CommandOutput:
    """Compare laws of the number of trails through a vertex.

    With a degree the convolution formula is compared with brute force; with a graph
    the exact law is found from every partition.
    """
    if cfg.graph is None and cfg.d is None:
        raise RunConfigError("xlaw needs a degree (--d) or a graph (--graph)")

    result: dict[str, Any] = {}
    rows: Sequence[tuple[int, int, int]] = ()
    if cfg.d is not None:
        theory = xi_pmf_theoretical(cfg.d)
        brute = xi_pmf_bruteforce(cfg.d)
        result.update(
            d=cfg.d,
            theoretical=theory,
            bruteforce=brute,
            equal=theory == brute,
        )
        rows = _pmf_rows(theory)

    if cfg.graph is not None:
        graph = _graph(cfg)
        law = exact_partition_law(graph)
        k = cfg.k if cfg.k is not None else 1
        long_trails = long_trail_report(graph, k)
        result.update(
            law=law.as_dict(),
            mgf=[
                {"lam": r.lam, "mgf": r.mgf, "bound": r.bound, "passed": r.passed}
                for r in mgf_check(law)
            ],
            long_trails={**asdict(long_trails), "passed": long_trails.passed},
            lk_inequality=lk_inequality_holds(graph),
        )
        if not rows:
            rows = _pmf_rows(law.marginals[0])

    return CommandOutput(result, PMF_CSV_HEADER, tuple(rows))


COMMAND_FUNCTIONS: dict[str, Callable[[RunConfig], CommandOutput]] = {
    "gen": gen,
    "eo": eo,
    "pauling": pauling,
    "mc": mc,
    "trails": trails,
    "spectrum": spectrum,
    "check-theorem": check_theorem,
    "check-spectral": check_spectral,
    "check-girth": check_girth,
    "check-product": check_product,
    "switchlab": switchlab,
    "identity": identity,
    "xlaw": xlaw,
}
"""The function implementing each command."""


def run_command(cfg: RunConfig) -> CommandOutput:
    """Run the command named in a config."""
    logging.info(f"Running {cfg.command}")
    return COMMAND_FUNCTIONS[cfg.command](cfg)
