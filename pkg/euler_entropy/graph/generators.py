"""Graph generators and the generator DSL used on the command line.

The DSL has one form per generator kind:

    cycle:5  complete:5  hypercube:4  torus:3x3x3  circulant:11:1,2  rr:20:4:7
    product:(cycle:5),(cycle:5)

Generators are pure functions of their specification (including the seed).
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
from functools import reduce
from pathlib import Path

import numpy as np
from schema import And, Schema, SchemaError

from euler_entropy import config
from euler_entropy.errors import GeneratorSpecError, RejectionBudgetExceeded
from euler_entropy.graph.multigraph import MultiGraph, parse_edge_list


class GeneratorKind(Enum):
    """The families of graphs that can be generated."""

    CYCLE = "cycle"
    COMPLETE = "complete"
    HYPERCUBE = "hypercube"
    TORUS = "torus"
    CIRCULANT = "circulant"
    RANDOM_REGULAR = "random-regular"
    PRODUCT = "product"


_KIND_ALIASES = {"rr": GeneratorKind.RANDOM_REGULAR}
"""Short names accepted by the DSL in addition to the kind values."""


def _valid_circulant(params: list[int]) -> bool:
    n, offsets = params[0], params[1:]
    return (
        n >= 3
        and bool(offsets)
        and len(set(offsets)) == len(offsets)
        and all(1 <= s <= n // 2 for s in offsets)
    )


def _valid_random_regular(params: list[int]) -> bool:
    n, d = params
    return 0 <= d < n and (n * d) % 2 == 0


_single = And([int], lambda p: len(p) == 1)

_parameter_schemas = {
    GeneratorKind.CYCLE: Schema(And(_single, lambda p: p[0] >= 3)),
    GeneratorKind.COMPLETE: Schema(And(_single, lambda p: p[0] >= 2)),
    GeneratorKind.HYPERCUBE: Schema(And(_single, lambda p: p[0] >= 1)),
    GeneratorKind.TORUS: Schema(And([int], len, lambda p: all(s >= 3 for s in p))),
    GeneratorKind.CIRCULANT: Schema(
        And([int], lambda p: len(p) >= 2, _valid_circulant)
    ),
    GeneratorKind.RANDOM_REGULAR: Schema(
        And([int], lambda p: len(p) == 2, _valid_random_regular)
    ),
    GeneratorKind.PRODUCT: Schema(And([int], lambda p: not p)),
}
"""Schemas for the parameter lists of each kind of generator."""


@dataclass(frozen=True)
class GeneratorSpec:
    """A description of a graph to generate."""

    kind: GeneratorKind
    parameters: tuple[int, ...] = ()
    """Kind-specific integer parameters."""
    seed: int | None = None
    """Seed for random generators (ignored by the others)."""
    factors: tuple[GeneratorSpec, ...] = field(default=())
    """The factor graphs of a product."""

    def __post_init__(self) -> None:
        """Check that the parameters are valid for the kind of generator.

        Raises:
            GeneratorSpecError: The parameters are invalid
        """
        try:
            _parameter_schemas[self.kind].validate(list(self.parameters))
        except SchemaError as e:
            raise GeneratorSpecError(
                f"Invalid parameters for {self.kind.value}: {list(self.parameters)}"
            ) from e

        if (self.kind == GeneratorKind.PRODUCT) != bool(self.factors):
            raise GeneratorSpecError("Only products (and all products) have factors")

    def __str__(self) -> str:
        """Get the DSL representation of this spec."""
        match self.kind:
            case GeneratorKind.PRODUCT:
                return "product:" + ",".join(f"({f!s})" for f in self.factors)
            case GeneratorKind.TORUS:
                return "torus:" + "x".join(map(str, self.parameters))
            case GeneratorKind.CIRCULANT:
                n, *offsets = self.parameters
                return f"circulant:{n}:{','.join(map(str, offsets))}"
            case GeneratorKind.RANDOM_REGULAR:
                n, d = self.parameters
                seed = config.DEFAULT_SEED if self.seed is None else self.seed
                return f"rr:{n}:{d}:{seed}"
            case _:
                return f"{self.kind.value}:{self.parameters[0]}"


def _split_top_level(text: str) -> list[str]:
    """Split on commas which are not inside parentheses."""
    parts: list[str] = []
    depth = 0
    start = 0
    for i, char in enumerate(text):
        if char == "(":
            depth += 1
        elif char == ")":
            depth -= 1
            if depth < 0:
                raise GeneratorSpecError(f"Unbalanced parentheses in {text!r}")
        elif char == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    if depth:
        raise GeneratorSpecError(f"Unbalanced parentheses in {text!r}")
    parts.append(text[start:])
    return parts


def _parse_ints(text: str, sep: str) -> tuple[int, ...]:
    try:
        return tuple(int(s) for s in text.split(sep))
    except ValueError:
        raise GeneratorSpecError(f"Expected integers separated by {sep!r}: {text!r}")


def parse_generator_spec(text: str) -> GeneratorSpec:
    """Parse a generator DSL string.

    >>> str(parse_generator_spec("torus:3x3"))
    'torus:3x3'

    Raises:
        GeneratorSpecError: The string is malformed or its parameters are invalid
    """
    text = text.strip()
    name, _, rest = text.partition(":")
    try:
        kind = _KIND_ALIASES.get(name) or GeneratorKind(name)
    except ValueError:
        raise GeneratorSpecError(f"Unknown generator kind: {name!r}")
    if not rest:
        raise GeneratorSpecError(f"Missing parameters in {text!r}")

    match kind:
        case GeneratorKind.PRODUCT:
            factors = []
            for part in _split_top_level(rest):
                part = part.strip()
                if part.startswith("(") and part.endswith(")"):
                    part = part[1:-1]
                factors.append(parse_generator_spec(part))
            if len(factors) < 2:
                raise GeneratorSpecError("A product needs at least two factors")
            return GeneratorSpec(kind, factors=tuple(factors))
        case GeneratorKind.TORUS:
            return GeneratorSpec(kind, _parse_ints(rest, "x"))
        case GeneratorKind.CIRCULANT:
            n, _, offsets = rest.partition(":")
            return GeneratorSpec(kind, _parse_ints(n, ":") + _parse_ints(offsets, ","))
        case GeneratorKind.RANDOM_REGULAR:
            params = _parse_ints(rest, ":")
            if len(params) not in (2, 3):
                raise GeneratorSpecError(f"Expected rr:n:d[:seed], got {text!r}")
            seed = params[2] if len(params) == 3 else None
            return GeneratorSpec(kind, params[:2], seed)
        case _:
            return GeneratorSpec(kind, _parse_ints(rest, ":"))


def cycle(n: int) -> MultiGraph:
    """Get the cycle C_n."""
    return MultiGraph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def complete(n: int) -> MultiGraph:
    """Get the complete graph K_n."""
    return MultiGraph.from_edges(n, itertools.combinations(range(n), 2))


def hypercube(dim: int) -> MultiGraph:
    """Get the hypercube Q_dim on bit strings, adjacent when one bit differs."""
    n = 1 << dim
    return MultiGraph.from_edges(
        n,
        (
            (v, v ^ (1 << i))
            for v in range(n)
            for i in range(dim)
            if v < v ^ (1 << i)
        ),
    )


def circulant(n: int, offsets: Sequence[int]) -> MultiGraph:
    """Get the circulant graph where i ~ i + s (mod n) for every offset s."""
    edges = []
    for s in offsets:
        # When 2s == n, i and i + s would list each edge twice
        count = n // 2 if 2 * s == n else n
        edges.extend((i, (i + s) % n) for i in range(count))
    return MultiGraph.from_edges(n, edges)


def cartesian_product(first: MultiGraph, second: MultiGraph) -> MultiGraph:
    """Get the Cartesian product of two graphs.

    Vertex (u, v) is numbered u * second.n + v. Edges coming from the first factor are
    listed before those coming from the second.
    """
    nh = second.n
    edges = [
        (u * nh + v, w * nh + v) for u, w in first.edges() for v in range(nh)
    ] + [(u * nh + v, u * nh + w) for v, w in second.edges() for u in range(first.n)]
    return MultiGraph.from_edges(first.n * nh, edges)


def random_regular(
    n: int,
    d: int,
    seed: int | None = None,
    max_attempts: int = config.DEFAULT_REJECTION_ATTEMPTS,
) -> MultiGraph:
    """Get a uniformly random simple d-regular graph using the pairing model.

    The nd points are paired uniformly at random and the pairing is rejected if it
    creates a loop or a parallel edge.

    Args:
        n: The number of vertices
        d: The degree
        seed: Seed for the random number generator (None for the default seed)
        max_attempts: How many pairings to try before giving up
    Raises:
        RejectionBudgetExceeded: No simple pairing was found
    """
    rng = np.random.default_rng(config.DEFAULT_SEED if seed is None else seed)
    points = np.repeat(np.arange(n), d)
    for attempt in range(1, max_attempts + 1):
        pairs = rng.permutation(points).reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        keys = np.sort(pairs, axis=1)
        if len(np.unique(keys, axis=0)) < len(keys):
            continue

        logging.debug(f"Random {d}-regular graph on {n} vertices after {attempt} tries")
        return MultiGraph.from_edges(n, map(tuple, pairs.tolist()))

    raise RejectionBudgetExceeded(max_attempts)


def generate(spec: GeneratorSpec) -> MultiGraph:
    """Generate the graph described by spec.

    Raises:
        RejectionBudgetExceeded: A random regular graph could not be generated
    """
    params = spec.parameters
    match spec.kind:
        case GeneratorKind.CYCLE:
            return cycle(params[0])
        case GeneratorKind.COMPLETE:
            return complete(params[0])
        case GeneratorKind.HYPERCUBE:
            return hypercube(params[0])
        case GeneratorKind.TORUS:
            return reduce(cartesian_product, map(cycle, params))
        case GeneratorKind.CIRCULANT:
            return circulant(params[0], params[1:])
        case GeneratorKind.RANDOM_REGULAR:
            return random_regular(params[0], params[1], spec.seed)
        case GeneratorKind.PRODUCT:
            return reduce(cartesian_product, map(generate, spec.factors))


def load_graph(source: str) -> MultiGraph:
    """Load a graph from an edge-list file or generate it from a DSL string.

    If source is the path of an existing file it is read as an edge list, otherwise it
    is parsed as a generator specification.
    """
    path = Path(source)
    if path.is_file():
        logging.info(f"Reading edge list from {path}")
        return parse_edge_list(path.read_text())

    return generate(parse_generator_spec(source))
