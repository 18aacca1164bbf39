"""Datatype compatibility rules between a requested and an advertised parameter.

Weights run from 0 (no match, the pair cannot be substituted) to 10 (complete
match). The relation is asymmetric: rows are indexed by the requested
parameter's type and columns by the advertised parameter's type.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Union

from .descriptor import DataType

__all__ = [
    "MAX_WEIGHT",
    "SimilarityTable",
    "TableError",
    "DEFAULT_TABLE",
    "param_similarity",
    "load_table",
    "dump_table",
]

MAX_WEIGHT = 10

# row/column order of the weight matrix
TYPE_ORDER: tuple[DataType, ...] = (
    DataType.INTEGER,
    DataType.REAL,
    DataType.STRING,
    DataType.DATE,
    DataType.BOOLEAN,
)
_INDEX = {dt: i for i, dt in enumerate(TYPE_ORDER)}


class TableError(ValueError):
    """Invalid rule table.

    ``code`` is one of ``syntax``, ``unknown-datatype``, ``non-integer-weight``,
    ``weight-out-of-range``, ``diagonal-not-ten``, ``duplicate-pair`` or
    ``missing-pair``.
    """

    def __init__(self, code: str, message: str, line: Optional[int] = None) -> None:
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{code}: {message}")
        self.code = code
        self.message = message
        self.line = line


@dataclass(frozen=True)
class SimilarityTable:
    weights: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        weights = tuple(tuple(row) for row in self.weights)
        if len(weights) != len(TYPE_ORDER) or any(len(r) != len(TYPE_ORDER) for r in weights):
            raise TableError("syntax", "weight matrix must be 5x5")
        for i, row in enumerate(weights):
            for j, w in enumerate(row):
                _check_weight(TYPE_ORDER[i], TYPE_ORDER[j], w)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_pairs(cls, pairs: Mapping[tuple[DataType, DataType], int]) -> "SimilarityTable":
        for r in TYPE_ORDER:
            for q in TYPE_ORDER:
                if (r, q) not in pairs:
                    raise TableError("missing-pair", f"no weight for ({r}, {q})")
        return cls(tuple(tuple(pairs[r, q] for q in TYPE_ORDER) for r in TYPE_ORDER))

    def weight(self, requested: DataType, advertised: DataType) -> int:
        return self.weights[_INDEX[requested]][_INDEX[advertised]]

    def pairs(self) -> Iterable[tuple[DataType, DataType, int]]:
        for r in TYPE_ORDER:
            for q in TYPE_ORDER:
                yield r, q, self.weight(r, q)


def _check_weight(r: DataType, q: DataType, w: object, line: Optional[int] = None) -> None:
    if not isinstance(w, int) or isinstance(w, bool):
        raise TableError("non-integer-weight", f"weight for ({r}, {q}) is not an integer", line)
    if not 0 <= w <= MAX_WEIGHT:
        raise TableError(
            "weight-out-of-range", f"weight {w} for ({r}, {q}) outside [0, {MAX_WEIGHT}]", line
        )
    if r is q and w != MAX_WEIGHT:
        raise TableError(
            "diagonal-not-ten", f"identical types ({r}, {q}) must weigh {MAX_WEIGHT}, got {w}", line
        )


# Rows: requested type; columns: advertised type, both in TYPE_ORDER.
DEFAULT_TABLE = SimilarityTable(
    (
        (10, 5, 3, 1, 1),    # Integer
        (10, 10, 1, 0, 1),   # Real
        (7, 7, 10, 8, 3),    # String
        (1, 0, 1, 10, 0),    # Date
        (1, 0, 1, 0, 10),    # Boolean
    )
)


def param_similarity(
    table: SimilarityTable, requested: DataType, advertised: DataType
) -> int:
    """Weight of substituting an ``advertised`` parameter for a ``requested`` one."""
    return table.weight(requested, advertised)


def load_table(text: Union[str, bytes]) -> SimilarityTable:
    """Parse a rule table of ``ReqType AdvType Weight`` lines.

    All 25 pairs must appear exactly once, in any order. ``#`` starts a comment.
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError:
            raise TableError("syntax", "rule table is not valid UTF-8") from None
    pairs: dict[tuple[DataType, DataType], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].split()
        if not content:
            continue
        if len(content) != 3:
            raise TableError("syntax", f"expected `ReqType AdvType Weight`, got {raw.strip()!r}", lineno)
        try:
            r = DataType.parse(content[0])
            q = DataType.parse(content[1])
        except ValueError as exc:
            raise TableError("unknown-datatype", str(exc), lineno) from None
        token = content[2]
        if not token.lstrip("+-").isdigit() or not token.isascii():
            raise TableError("non-integer-weight", f"weight {token!r} is not an integer", lineno)
        w = int(token)
        _check_weight(r, q, w, lineno)
        if (r, q) in pairs:
            raise TableError("duplicate-pair", f"({r}, {q}) given more than once", lineno)
        pairs[r, q] = w
    return SimilarityTable.from_pairs(pairs)


def dump_table(table: SimilarityTable) -> str:
    """Render ``table`` in the format :func:`load_table` reads."""
    width = max(len(dt.value) for dt in TYPE_ORDER)
    lines = ["# requested advertised weight"]
    for r, q, w in table.pairs():
        lines.append(f"{r.value:<{width}} {q.value:<{width}} {w}")
    return "\n".join(lines) + "\n"
