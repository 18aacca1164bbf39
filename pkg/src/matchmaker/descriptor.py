"""Service profile descriptors: typed input/output signatures of a service.

A descriptor document looks like::

    # currency conversion
    service "CurrencyConvert" in(amount: Real, code: String) out(converted: Real)

Datatype tokens are case-insensitive; parameter names are not.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional, Sequence, Union

__all__ = [
    "DataType",
    "Parameter",
    "ServiceProfile",
    "Diagnostic",
    "DescriptorError",
    "parse_profile",
    "serialize_profile",
    "validate_profile",
]


class DataType(enum.Enum):
    INTEGER = "Integer"
    REAL = "Real"
    STRING = "String"
    DATE = "Date"
    BOOLEAN = "Boolean"

    @classmethod
    def parse(cls, token: str) -> "DataType":
        """Look up a datatype by name, ignoring case."""
        try:
            return _DATATYPES_BY_LOWER[token.lower()]
        except KeyError:
            raise ValueError(f"unknown datatype `{token}`") from None

    def __str__(self) -> str:
        return self.value


_DATATYPES_BY_LOWER = {dt.value.lower(): dt for dt in DataType}

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Parameter:
    name: str
    datatype: DataType

    def __str__(self) -> str:
        return f"{self.name}: {self.datatype}"


@dataclass(frozen=True)
class ServiceProfile:
    """A named service with ordered, typed inputs and outputs.

    Construction does not enforce invariants so that :func:`validate_profile`
    can report on arbitrary profiles; :func:`parse_profile` only ever returns
    profiles whose invariants hold.
    """

    name: str
    inputs: tuple[Parameter, ...] = ()
    outputs: tuple[Parameter, ...] = ()

    def __post_init__(self) -> None:
        # accept any sequence but store tuples so profiles stay hashable
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" or "warning"
    code: str
    message: str
    line: Optional[int] = None
    column: Optional[int] = None

    def __str__(self) -> str:
        where = f"{self.line}:{self.column}: " if self.line is not None else ""
        return f"{where}{self.severity}: {self.code}: {self.message}"


class DescriptorError(ValueError):
    """A descriptor document could not be parsed.

    ``code`` is one of ``syntax``, ``encoding``, ``unknown-datatype``,
    ``duplicate-parameter`` or ``missing-name``; ``line`` and ``column`` are
    1-based.
    """

    def __init__(self, code: str, message: str, line: int, column: int) -> None:
        super().__init__(f"{line}:{column}: {code}: {message}")
        self.code = code
        self.message = message
        self.line = line
        self.column = column

    def to_diagnostic(self) -> Diagnostic:
        return Diagnostic("error", self.code, self.message, self.line, self.column)


# ---------------------------------------------------------------------------
# lexing

class _Token(NamedTuple):
    kind: str  # IDENT, STRING, PUNCT, EOF
    text: str
    value: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n\f\v]+)
  | (?P<comment>\#[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<punct>[():,])
    """,
    re.VERBOSE | re.DOTALL,
)

_ESCAPE_RE = re.compile(r"\\(.)", re.DOTALL)


def _tokenize(text: str) -> Iterator[_Token]:
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        column = pos - line_start + 1
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos] == '"':
                raise DescriptorError("syntax", "unterminated string", line, column)
            raise DescriptorError(
                "syntax", f"unexpected character {text[pos]!r}", line, column
            )
        kind = m.lastgroup
        chunk = m.group()
        if kind == "string":
            body = chunk[1:-1]
            bad = next((e for e in _ESCAPE_RE.finditer(body) if e.group(1) not in '"\\'), None)
            if bad is not None:
                raise DescriptorError(
                    "syntax",
                    f"invalid escape {bad.group()!r} in string",
                    line,
                    column + 1 + bad.start(),
                )
            yield _Token("STRING", chunk, _ESCAPE_RE.sub(r"\1", body), line, column)
        elif kind == "ident":
            yield _Token("IDENT", chunk, chunk, line, column)
        elif kind == "punct":
            yield _Token("PUNCT", chunk, chunk, line, column)
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + chunk.rindex("\n") + 1
        pos = m.end()
    yield _Token("EOF", "", "", line, pos - line_start + 1)


# ---------------------------------------------------------------------------
# parsing

class _Parser:
    def __init__(self, text: str) -> None:
        self._tokens = _tokenize(text)
        self._current = next(self._tokens)

    def _advance(self) -> _Token:
        token = self._current
        if token.kind != "EOF":
            self._current = next(self._tokens)
        return token

    def _error(self, expected: str, code: str = "syntax") -> DescriptorError:
        tok = self._current
        found = "end of document" if tok.kind == "EOF" else f"`{tok.text}`"
        return DescriptorError(code, f"expected {expected}, found {found}", tok.line, tok.column)

    def _expect(self, kind: str, text: Optional[str] = None) -> _Token:
        tok = self._current
        if tok.kind != kind or (text is not None and tok.text != text):
            raise self._error(f"`{text}`" if text is not None else kind.lower())
        return self._advance()

    def parse(self) -> ServiceProfile:
        self._expect("IDENT", "service")
        if self._current.kind != "STRING":
            raise self._error("quoted service name", code="missing-name")
        name_tok = self._advance()
        if name_tok.value == "":
            raise DescriptorError(
                "missing-name", "service name is empty", name_tok.line, name_tok.column
            )
        inputs = self._param_list("in")
        outputs = self._param_list("out")
        if self._current.kind != "EOF":
            raise self._error("end of document")
        return ServiceProfile(name_tok.value, inputs, outputs)

    def _param_list(self, keyword: str) -> tuple[Parameter, ...]:
        self._expect("IDENT", keyword)
        self._expect("PUNCT", "(")
        params: list[Parameter] = []
        seen: set[str] = set()
        if not (self._current.kind == "PUNCT" and self._current.text == ")"):
            while True:
                name_tok = self._current
                if name_tok.kind != "IDENT":
                    raise self._error("parameter name")
                self._advance()
                self._expect("PUNCT", ":")
                type_tok = self._current
                if type_tok.kind != "IDENT":
                    raise self._error("datatype")
                self._advance()
                try:
                    datatype = DataType.parse(type_tok.text)
                except ValueError as exc:
                    raise DescriptorError(
                        "unknown-datatype", str(exc), type_tok.line, type_tok.column
                    ) from None
                if name_tok.text in seen:
                    raise DescriptorError(
                        "duplicate-parameter",
                        f"parameter `{name_tok.text}` repeated in `{keyword}` list",
                        name_tok.line,
                        name_tok.column,
                    )
                seen.add(name_tok.text)
                params.append(Parameter(name_tok.text, datatype))
                if self._current.kind == "PUNCT" and self._current.text == ",":
                    self._advance()
                    continue
                break
        self._expect("PUNCT", ")")
        return tuple(params)


def parse_profile(text: Union[str, bytes]) -> ServiceProfile:
    """Parse one descriptor document.

    Bytes are decoded as UTF-8. Any malformed input raises
    :class:`DescriptorError`; no other exception escapes.
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            prefix = bytes(text)[: exc.start].decode("utf-8")
            line = prefix.count("\n") + 1
            column = len(prefix) - (prefix.rfind("\n") + 1) + 1
            raise DescriptorError("encoding", "invalid UTF-8", line, column) from None
    if text.startswith("\ufeff"):
        text = text[1:]
    return _Parser(text).parse()


def _quote(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _format_params(params: Sequence[Parameter]) -> str:
    return ", ".join(str(p) for p in params)


def serialize_profile(profile: ServiceProfile) -> str:
    return (
        f"service {_quote(profile.name)} "
        f"in({_format_params(profile.inputs)}) "
        f"out({_format_params(profile.outputs)})\n"
    )


def validate_profile(profile: ServiceProfile) -> list[Diagnostic]:
    diagnostics: list[Diagnostic] = []
    if not isinstance(profile.name, str) or not profile.name:
        diagnostics.append(Diagnostic("error", "missing-name", "service name is empty"))
    for side, params in (("in", profile.inputs), ("out", profile.outputs)):
        seen: set[str] = set()
        for param in params:
            if not isinstance(param.name, str) or not _IDENT_RE.match(param.name):
                diagnostics.append(
                    Diagnostic(
                        "error",
                        "invalid-parameter-name",
                        f"parameter name {param.name!r} in `{side}` list is not an identifier",
                    )
                )
            if not isinstance(param.datatype, DataType):
                diagnostics.append(
                    Diagnostic(
                        "error",
                        "unknown-datatype",
                        f"parameter `{param.name}` has unknown datatype {param.datatype!r}",
                    )
                )
            if param.name in seen:
                diagnostics.append(
                    Diagnostic(
                        "error",
                        "duplicate-parameter",
                        f"parameter `{param.name}` repeated in `{side}` list",
                    )
                )
            seen.add(param.name)
    if not profile.inputs and not profile.outputs:
        diagnostics.append(
            Diagnostic("warning", "vacuous-profile", "service has no inputs and no outputs")
        )
    return diagnostics
