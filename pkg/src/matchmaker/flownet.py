"""Integer max-flow by the Ford-Fulkerson method.

Flows are kept in skew-symmetric form: ``f(u, v) = -f(v, u)`` for every
ordered pair, so the residual capacity of any pair is simply
``c(u, v) - f(u, v)`` and pushing flow back along a reverse arc is ordinary
arithmetic. Augmenting paths are found either depth-first or breadth-first
(the latter being Edmonds-Karp). Neighbours are always explored in ascending
vertex id, so results are deterministic.

:func:`min_cut_value` is a brute-force cut enumeration intended as a test
oracle for :func:`max_flow`; it shares no code with the path search.
"""

from __future__ import annotations

import enum
import types
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterator, Mapping, Optional, Sequence, Union

import numpy as np

__all__ = [
    "Strategy",
    "FlowNetwork",
    "Flow",
    "AugmentingPath",
    "NetworkError",
    "NetworkTooLarge",
    "residual_capacity",
    "find_augmenting_path",
    "augment",
    "max_flow",
    "flow_violations",
    "min_cut_value",
    "MIN_CUT_MAX_VERTICES",
    "network_from_edges",
]

Pair = tuple[int, int]

MIN_CUT_MAX_VERTICES = 20


class Strategy(str, enum.Enum):
    DFS = "dfs"
    BFS = "bfs"

    @classmethod
    def _missing_(cls, value: object) -> Optional["Strategy"]:
        if isinstance(value, str):
            return _STRATEGY_NAMES.get(value.lower())
        return None


_STRATEGY_NAMES = {
    "dfs": Strategy.DFS,
    "bfs": Strategy.BFS,
    "depth-first": Strategy.DFS,
    "breadth-first": Strategy.BFS,
}


class NetworkError(ValueError):
    pass


class NetworkTooLarge(NetworkError):
    pass


@dataclass(frozen=True)
class FlowNetwork:
    """Directed graph with non-negative integer capacities.

    ``capacity`` maps ordered vertex pairs to ``c(u, v)``; absent pairs have
    capacity 0. Vertices are ``0 .. vertex_count - 1``.
    """

    vertex_count: int
    source: int
    sink: int
    capacity: Mapping[Pair, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        n = self.vertex_count
        if not isinstance(n, int) or n < 1:
            raise NetworkError(f"vertex_count must be a positive integer, got {n!r}")
        for name, vertex in (("source", self.source), ("sink", self.sink)):
            if not (isinstance(vertex, int) and 0 <= vertex < n):
                raise NetworkError(f"{name} {vertex!r} is not a vertex")
        if self.source == self.sink:
            raise NetworkError("source and sink must differ")
        caps: dict[Pair, int] = {}
        for (u, v), c in self.capacity.items():
            if not (isinstance(u, int) and isinstance(v, int) and 0 <= u < n and 0 <= v < n):
                raise NetworkError(f"edge ({u!r}, {v!r}) has an endpoint outside 0..{n - 1}")
            if not isinstance(c, int) or isinstance(c, bool):
                raise NetworkError(f"capacity of ({u}, {v}) must be an integer, got {c!r}")
            if c < 0:
                raise NetworkError(f"capacity of ({u}, {v}) is negative")
            if u == v and c:
                raise NetworkError(f"self-loop at vertex {u}")
            if c:
                caps[u, v] = c
        object.__setattr__(self, "capacity", types.MappingProxyType(dict(sorted(caps.items()))))

    def __getitem__(self, pair: Pair) -> int:
        return self.capacity.get(pair, 0)

    @property
    def edge_count(self) -> int:
        return len(self.capacity)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        """Ascending neighbours of each vertex in either direction.

        Residual capacity can only be positive between such pairs.
        """
        adj: list[set[int]] = [set() for _ in range(self.vertex_count)]
        for u, v in self.capacity:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def _rows(self) -> tuple[dict[int, int], ...]:
        rows: list[dict[int, int]] = [{} for _ in range(self.vertex_count)]
        for (u, v), c in self.capacity.items():
            rows[u][v] = c
        return tuple(rows)


@dataclass(frozen=True)
class Flow:
    """A skew-symmetric integer flow.

    ``amount`` holds only the non-zero entries; both ``(u, v)`` and ``(v, u)``
    are present whenever either is. ``iterations`` counts the augmentations
    that produced it.
    """

    amount: Mapping[Pair, int] = field(default_factory=dict)
    value: int = 0
    iterations: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "amount",
            types.MappingProxyType({k: v for k, v in sorted(self.amount.items()) if v}),
        )

    def __getitem__(self, pair: Pair) -> int:
        return self.amount.get(pair, 0)

    def positive(self) -> Iterator[tuple[int, int, int]]:
        """``(u, v, f)`` for every pair carrying positive flow, in pair order."""
        for (u, v), f in self.amount.items():
            if f > 0:
                yield u, v, f


@dataclass(frozen=True)
class AugmentingPath:
    vertices: tuple[int, ...]
    bottleneck: int

    def edges(self) -> Iterator[Pair]:
        return zip(self.vertices, self.vertices[1:])


# ---------------------------------------------------------------------------
# internal mutable flow: one dict per tail vertex

_FlowRows = list[dict[int, int]]


def _rows_of(net: FlowNetwork, flow: Flow) -> _FlowRows:
    rows: _FlowRows = [{} for _ in range(net.vertex_count)]
    for (u, v), f in flow.amount.items():
        rows[u][v] = f
    return rows


def _freeze(net: FlowNetwork, rows: _FlowRows, iterations: int) -> Flow:
    amount = {(u, v): f for u, row in enumerate(rows) for v, f in row.items()}
    return Flow(amount, sum(rows[net.source].values()), iterations)


def _search(net: FlowNetwork, rows: _FlowRows, strategy: Strategy) -> Optional[AugmentingPath]:
    s, t = net.source, net.sink
    caps = net._rows
    adj = net.neighbors
    parent = [-1] * net.vertex_count
    parent[s] = s

    if strategy is Strategy.BFS:
        queue = deque([s])
        found = False
        while queue and not found:
            u = queue.popleft()
            cu, fu = caps[u], rows[u]
            for v in adj[u]:
                if parent[v] == -1 and cu.get(v, 0) - fu.get(v, 0) > 0:
                    parent[v] = u
                    if v == t:
                        found = True
                        break
                    queue.append(v)
        if not found:
            return None
    else:
        # parent is recorded when a vertex is popped, so the tree path
        # reproduces recursive DFS order
        parent[s] = -1
        stack = [(s, s)]
        while stack:
            u, p = stack.pop()
            if parent[u] != -1:
                continue
            parent[u] = p
            if u == t:
                break
            cu, fu = caps[u], rows[u]
            for v in reversed(adj[u]):
                if parent[v] == -1 and cu.get(v, 0) - fu.get(v, 0) > 0:
                    stack.append((v, u))
        if parent[t] == -1:
            return None

    path = [t]
    while path[-1] != s:
        path.append(parent[path[-1]])
    path.reverse()
    bottleneck = min(caps[u].get(v, 0) - rows[u].get(v, 0) for u, v in zip(path, path[1:]))
    return AugmentingPath(tuple(path), bottleneck)


def _push(rows: _FlowRows, path: AugmentingPath) -> None:
    b = path.bottleneck
    for u, v in path.edges():
        f = rows[u].get(v, 0) + b
        if f:
            rows[u][v] = f
            rows[v][u] = -f
        else:
            del rows[u][v]
            del rows[v][u]


# ---------------------------------------------------------------------------
# public operations

def residual_capacity(net: FlowNetwork, flow: Flow, u: int, v: int) -> int:
    """How much more flow can be pushed from ``u`` to ``v``: ``c(u, v) - f(u, v)``."""
    return net[u, v] - flow[u, v]


def find_augmenting_path(
    net: FlowNetwork, flow: Flow, strategy: Union[Strategy, str] = Strategy.BFS
) -> Optional[AugmentingPath]:
    """Find a simple source-to-sink path of positive residual capacity.

    Breadth-first search returns a shortest such path (the lexicographically
    smallest one among equals); depth-first search returns the first path a
    lowest-id-first traversal reaches. ``None`` means ``flow`` is maximum.
    """
    return _search(net, _rows_of(net, flow), Strategy(strategy))


def augment(flow: Flow, path: AugmentingPath) -> Flow:
    """Push ``path.bottleneck`` units along ``path``, returning a new flow."""
    amount = dict(flow.amount)
    b = path.bottleneck
    for u, v in path.edges():
        f = amount.get((u, v), 0) + b
        amount[u, v] = f
        amount[v, u] = -f
    return Flow(amount, flow.value + b, flow.iterations + 1)


def max_flow(
    net: FlowNetwork,
    strategy: Union[Strategy, str] = Strategy.BFS,
    *,
    on_augment: Optional[Callable[[Flow, AugmentingPath], None]] = None,
) -> Flow:
    """Compute a maximum flow, starting from zero and augmenting until stuck.

    ``on_augment`` is called with the updated flow after every augmentation;
    it is meant for tests and instrumentation and slows the loop down.
    """
    strategy = Strategy(strategy)
    rows: _FlowRows = [{} for _ in range(net.vertex_count)]
    iterations = 0
    while True:
        path = _search(net, rows, strategy)
        if path is None:
            break
        _push(rows, path)
        iterations += 1
        if on_augment is not None:
            on_augment(_freeze(net, rows, iterations), path)
    return _freeze(net, rows, iterations)


def flow_violations(net: FlowNetwork, flow: Flow) -> list[str]:
    """List every way ``flow`` breaks the flow properties on ``net``.

    Checks the capacity constraint, skew symmetry, conservation at inner
    vertices, integrality, and that ``flow.value`` is the net flow out of
    the source. An empty list means the flow is feasible.
    """
    problems: list[str] = []
    n = net.vertex_count
    balance = [0] * n
    for (u, v), f in flow.amount.items():
        if not isinstance(f, int):
            problems.append(f"f({u}, {v}) = {f!r} is not an integer")
            continue
        if not (0 <= u < n and 0 <= v < n):
            problems.append(f"f({u}, {v}) refers to a vertex outside the network")
            continue
        if f > net[u, v]:
            problems.append(f"capacity: f({u}, {v}) = {f} > c({u}, {v}) = {net[u, v]}")
        if flow[v, u] != -f:
            problems.append(f"skew symmetry: f({u}, {v}) = {f} but f({v}, {u}) = {flow[v, u]}")
        balance[u] += f
    for u in range(n):
        if u not in (net.source, net.sink) and balance[u] != 0:
            problems.append(f"conservation: net flow out of {u} is {balance[u]}")
    if balance[net.source] != flow.value:
        problems.append(
            f"value: flow.value = {flow.value} but net flow out of source is {balance[net.source]}"
        )
    return problems


def min_cut_value(net: FlowNetwork) -> int:
    """Minimum s-t cut capacity, by enumerating every vertex bipartition.

    Only feasible for small networks; raises :class:`NetworkTooLarge` above
    :data:`MIN_CUT_MAX_VERTICES` vertices.
    """
    n = net.vertex_count
    if n > MIN_CUT_MAX_VERTICES:
        raise NetworkTooLarge(
            f"cut enumeration limited to {MIN_CUT_MAX_VERTICES} vertices, network has {n}"
        )
    inner = [v for v in range(n) if v not in (net.source, net.sink)]
    masks = np.arange(1 << len(inner), dtype=np.int64)
    on_source_side = np.zeros((n, masks.size), dtype=bool)
    on_source_side[net.source] = True
    for bit, v in enumerate(inner):
        on_source_side[v] = (masks >> bit) & 1 == 1
    cut = np.zeros(masks.size, dtype=np.int64)
    for (u, v), c in net.capacity.items():
        cut += c * (on_source_side[u] & ~on_source_side[v])
    return int(cut.min())


def network_from_edges(
    vertex_count: int, source: int, sink: int, edges: Sequence[tuple[int, int, int]]
) -> FlowNetwork:
    """Build a network from ``(u, v, capacity)`` triples; repeated pairs add up."""
    caps: dict[Pair, int] = {}
    for u, v, c in edges:
        caps[u, v] = caps.get((u, v), 0) + c
    return FlowNetwork(vertex_count, source, sink, caps)
