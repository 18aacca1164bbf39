"""Similarity of two services through bipartite max-flow.

For one side (outputs, or inputs) the requested service's parameters form the
left vertex set and the advertised service's parameters the right one. Every
pair with a non-zero rule weight becomes an edge with that capacity; a source
feeds each left vertex and each right vertex drains to a sink, both with
capacity :data:`ATTACH_CAPACITY`. The side's score is the max-flow value per
requested parameter, so it lies in ``[0, 10]``. The overall score averages the
two sides.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Optional, Sequence, Union

from .descriptor import Parameter, ServiceProfile
from .flownet import Flow, FlowNetwork, Strategy, max_flow
from .simrules import DEFAULT_TABLE, MAX_WEIGHT, SimilarityTable, param_similarity

__all__ = [
    "ATTACH_CAPACITY",
    "SOURCE",
    "SINK",
    "BipartiteSpec",
    "MatchReport",
    "build_bipartite",
    "to_flow_network",
    "directional_similarity",
    "match_services",
    "format_score",
]

ATTACH_CAPACITY = MAX_WEIGHT
SOURCE = 0
SINK = 1


@dataclass(frozen=True)
class BipartiteSpec:
    left: tuple[Parameter, ...]
    right: tuple[Parameter, ...]
    edge_weights: Mapping[tuple[int, int], int] = field(default_factory=dict)

    def left_vertex(self, i: int) -> int:
        return 2 + i

    def right_vertex(self, j: int) -> int:
        return 2 + len(self.left) + j


def build_bipartite(
    requested_params: Sequence[Parameter],
    advertised_params: Sequence[Parameter],
    table: SimilarityTable = DEFAULT_TABLE,
) -> BipartiteSpec:
    weights: dict[tuple[int, int], int] = {}
    for i, a in enumerate(requested_params):
        for j, b in enumerate(advertised_params):
            w = param_similarity(table, a.datatype, b.datatype)
            if w > 0:
                weights[i, j] = w
    return BipartiteSpec(tuple(requested_params), tuple(advertised_params), weights)


def to_flow_network(spec: BipartiteSpec) -> FlowNetwork:
    """Vertices: source 0, sink 1, then left parameters, then right ones."""
    caps: dict[tuple[int, int], int] = {}
    for i in range(len(spec.left)):
        caps[SOURCE, spec.left_vertex(i)] = ATTACH_CAPACITY
    for (i, j), w in spec.edge_weights.items():
        caps[spec.left_vertex(i), spec.right_vertex(j)] = w
    for j in range(len(spec.right)):
        caps[spec.right_vertex(j), SINK] = ATTACH_CAPACITY
    return FlowNetwork(2 + len(spec.left) + len(spec.right), SOURCE, SINK, caps)


def directional_similarity(
    requested_params: Sequence[Parameter],
    advertised_params: Sequence[Parameter],
    table: SimilarityTable = DEFAULT_TABLE,
    strategy: Union[Strategy, str] = Strategy.BFS,
) -> tuple[Fraction, Flow]:
    """Score how well ``advertised_params`` cover ``requested_params``.

    An empty request is trivially covered and scores 10.
    """
    flow = max_flow(to_flow_network(build_bipartite(requested_params, advertised_params, table)), strategy)
    if not requested_params:
        return Fraction(MAX_WEIGHT), flow
    return Fraction(flow.value, len(requested_params)), flow


@dataclass(frozen=True)
class MatchReport:
    advertised_name: str
    output_score: Fraction
    input_score: Fraction
    output_flow: Flow
    input_flow: Flow
    overall: Optional[Fraction] = None

    def __post_init__(self) -> None:
        mean = (self.output_score + self.input_score) / 2
        if self.overall is None:
            object.__setattr__(self, "overall", mean)
        elif self.overall != mean:
            raise ValueError(f"overall {self.overall} is not the mean of the side scores ({mean})")

    def to_dict(self) -> dict[str, Any]:
        return {
            "advertised_name": self.advertised_name,
            "input_score": _score_to_json(self.input_score),
            "output_score": _score_to_json(self.output_score),
            "overall": _score_to_json(self.overall),
            "input_flow": _flow_to_json(self.input_flow),
            "output_flow": _flow_to_json(self.output_flow),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "MatchReport":
        return cls(
            advertised_name=data["advertised_name"],
            output_score=Fraction(data["output_score"]["fraction"]),
            input_score=Fraction(data["input_score"]["fraction"]),
            output_flow=_flow_from_json(data["output_flow"]),
            input_flow=_flow_from_json(data["input_flow"]),
            overall=Fraction(data["overall"]["fraction"]),
        )


def match_services(
    requested: ServiceProfile,
    advertised: ServiceProfile,
    table: SimilarityTable = DEFAULT_TABLE,
    strategy: Union[Strategy, str] = Strategy.BFS,
) -> MatchReport:
    output_score, output_flow = directional_similarity(requested.outputs, advertised.outputs, table, strategy)
    input_score, input_flow = directional_similarity(requested.inputs, advertised.inputs, table, strategy)
    return MatchReport(advertised.name, output_score, input_score, output_flow, input_flow)


def _decimal(q: Fraction, places: int = 6) -> str:
    """Exact decimal expansion if it terminates, else ``~`` and ``places`` digits."""
    d = q.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    if d == 1:
        digits = 0
        while (q * 10**digits).denominator != 1:
            digits += 1
        scaled = abs(q.numerator * 10**digits // q.denominator)
        text = str(scaled).rjust(digits + 1, "0")
        body = text if digits == 0 else f"{text[:-digits]}.{text[-digits:]}"
        return ("-" if q < 0 else "") + body
    rounded = round(q * 10**places)
    text = str(abs(rounded)).rjust(places + 1, "0")
    return ("-" if q < 0 else "") + f"~{text[:-places]}.{text[-places:]}"


def format_score(q: Fraction) -> str:
    """``8.75 (35/4)``; whole numbers print bare."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{_decimal(q)} ({q})"


def _score_to_json(q: Fraction) -> dict[str, str]:
    return {"fraction": str(q), "decimal": _decimal(q)}


def _flow_to_json(flow: Flow) -> dict[str, Any]:
    return {
        "value": flow.value,
        "iterations": flow.iterations,
        "edges": [[u, v, f] for u, v, f in flow.positive()],
    }


def _flow_from_json(data: Mapping[str, Any]) -> Flow:
    amount: dict[tuple[int, int], int] = {}
    for u, v, f in data["edges"]:
        amount[u, v] = f
        amount[v, u] = -f
    return Flow(amount, data["value"], data["iterations"])
