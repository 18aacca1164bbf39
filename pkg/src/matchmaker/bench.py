"""Iteration-count benchmark of the two augmenting-path strategies.

Each instance is a random pair of services with ``size`` outputs apiece whose
datatypes are drawn uniformly; the output-side bipartite network is solved
with both strategies. Iteration counts are checked against their bounds:
depth-first never needs more augmentations than the flow value (each adds at
least one unit), breadth-first never more than ``V * E``.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Iterable, Iterator

from .descriptor import DataType, Parameter, ServiceProfile
from .flownet import Strategy, max_flow
from .matcher import build_bipartite, to_flow_network
from .simrules import DEFAULT_TABLE, SimilarityTable

CSV_HEADER = ("strategy", "vertices", "edges", "fmax", "iterations", "nanos")

_TYPES = tuple(DataType)


class BoundViolation(AssertionError):
    pass


@dataclass(frozen=True)
class BenchRow:
    strategy: Strategy
    vertices: int
    edges: int
    fmax: int
    iterations: int
    nanos: int

    def as_csv(self) -> tuple:
        return (self.strategy.value, self.vertices, self.edges, self.fmax, self.iterations, self.nanos)


def random_profile(rng: random.Random, name: str, n_inputs: int, n_outputs: int) -> ServiceProfile:
    def params(prefix: str, n: int) -> tuple[Parameter, ...]:
        return tuple(Parameter(f"{prefix}{i}", rng.choice(_TYPES)) for i in range(n))

    return ServiceProfile(name, params("in", n_inputs), params("out", n_outputs))


def instance_rng(seed: int, size: int, index: int) -> random.Random:
    # str seeds hash through sha512, independent of PYTHONHASHSEED
    return random.Random(f"{seed}:{size}:{index}")


def run_instance(size: int, rng: random.Random, table: SimilarityTable = DEFAULT_TABLE) -> list[BenchRow]:
    requested = random_profile(rng, "requested", 0, size)
    advertised = random_profile(rng, "advertised", 0, size)
    net = to_flow_network(build_bipartite(requested.outputs, advertised.outputs, table))
    rows = []
    for strategy in (Strategy.DFS, Strategy.BFS):
        start = time.perf_counter_ns()
        flow = max_flow(net, strategy)
        nanos = time.perf_counter_ns() - start
        rows.append(BenchRow(strategy, net.vertex_count, net.edge_count, flow.value, flow.iterations, nanos))
    check_bounds(rows)
    return rows


def check_bounds(rows: Iterable[BenchRow]) -> None:
    rows = list(rows)
    values = {r.fmax for r in rows}
    if len(values) > 1:
        raise BoundViolation(f"strategies disagree on the maximum flow: {sorted(values)}")
    for r in rows:
        if r.strategy is Strategy.DFS and r.iterations > r.fmax:
            raise BoundViolation(f"dfs took {r.iterations} augmentations for a flow of {r.fmax}")
        if r.strategy is Strategy.BFS and r.iterations > r.vertices * r.edges:
            raise BoundViolation(
                f"bfs took {r.iterations} augmentations, above V*E = {r.vertices * r.edges}"
            )


def run_bench(sizes: Iterable[int], seeds: int, seed: int = 0) -> Iterator[BenchRow]:
    for size in sizes:
        for index in range(seeds):
            yield from run_instance(size, instance_rng(seed, size, index))
