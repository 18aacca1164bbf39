"""A file-backed collection of advertised services and best-match discovery.

A registry lives either in a directory of ``.svc`` files (loaded in filename
order) or in a single ``.svcreg`` bundle whose descriptors are separated by
lines reading exactly ``---``.
"""

from __future__ import annotations

import os
import re
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional, Sequence, Union

from . import matcher
from .descriptor import DescriptorError, ServiceProfile, parse_profile, serialize_profile
from .flownet import Strategy
from .matcher import MatchReport
from .simrules import DEFAULT_TABLE, MAX_WEIGHT, SimilarityTable

__all__ = [
    "Registry",
    "RegistryError",
    "DiscoveryResult",
    "load_registry",
    "parse_bundle",
    "format_bundle",
    "add_profile",
    "discover",
]

BUNDLE_SEPARATOR = "---"
BUNDLE_SUFFIX = ".svcreg"
PROFILE_SUFFIX = ".svc"


class RegistryError(Exception):
    """``code`` is ``parse``, ``duplicate-name`` or ``io``."""

    def __init__(self, code: str, message: str, *, path: Optional[Path] = None,
                 line: Optional[int] = None, column: Optional[int] = None) -> None:
        where = ""
        if path is not None:
            where = str(path)
            if line is not None:
                where += f":{line}:{column}"
            where += ": "
        super().__init__(f"{where}{code}: {message}")
        self.code = code
        self.message = message
        self.path = path
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Registry:
    entries: tuple[ServiceProfile, ...] = ()
    source_path: Optional[Path] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))
        seen: set[str] = set()
        for p in self.entries:
            if p.name in seen:
                raise RegistryError("duplicate-name", f"service `{p.name}` registered twice")
            seen.add(p.name)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[ServiceProfile]:
        return iter(self.entries)

    def __contains__(self, name: object) -> bool:
        return any(p.name == name for p in self.entries)


@dataclass(frozen=True)
class DiscoveryResult:
    best: Optional[MatchReport]
    scanned_count: int
    ranked: tuple[MatchReport, ...] = field(default=())


def _check_unique(profiles: Sequence[ServiceProfile], origins: Sequence[tuple[Path, int]]) -> None:
    seen: set[str] = set()
    for p, (path, line) in zip(profiles, origins):
        if p.name in seen:
            raise RegistryError(
                "duplicate-name", f"service `{p.name}` registered twice", path=path, line=line, column=1
            )
        seen.add(p.name)


def parse_bundle(text: str, path: Optional[Path] = None) -> list[ServiceProfile]:
    """Split a bundle on ``---`` lines and parse each non-blank chunk.

    Positions in errors refer to lines of the whole bundle.
    """
    profiles: list[ServiceProfile] = []
    origins: list[tuple[Path, int]] = []
    chunk: list[str] = []
    chunk_start = 1

    def flush() -> None:
        body = "".join(chunk)
        if not _is_blank(body):
            try:
                profiles.append(parse_profile(body))
            except DescriptorError as exc:
                raise RegistryError(
                    "parse", f"{exc.code}: {exc.message}", path=path,
                    line=chunk_start + exc.line - 1, column=exc.column,
                ) from exc
            origins.append((path, chunk_start))

    for lineno, line in enumerate(text.splitlines(keepends=True), start=1):
        if line.rstrip("\r\n") == BUNDLE_SEPARATOR:
            flush()
            chunk = []
            chunk_start = lineno + 1
        else:
            chunk.append(line)
    flush()
    _check_unique(profiles, origins)
    return profiles


_COMMENT_RE = re.compile(r"#[^\n]*")


def _is_blank(text: str) -> bool:
    return not _COMMENT_RE.sub("", text).strip()


def format_bundle(profiles: Sequence[ServiceProfile]) -> str:
    return f"{BUNDLE_SEPARATOR}\n".join(serialize_profile(p) for p in profiles)


def load_registry(path: Union[str, os.PathLike]) -> Registry:
    path = Path(path)
    try:
        if path.is_dir():
            files = sorted(p for p in path.iterdir() if p.suffix == PROFILE_SUFFIX and p.is_file())
            profiles = []
            for f in files:
                try:
                    profiles.append(parse_profile(f.read_bytes()))
                except DescriptorError as exc:
                    raise RegistryError(
                        "parse", f"{exc.code}: {exc.message}", path=f, line=exc.line, column=exc.column
                    ) from exc
            _check_unique(profiles, [(f, 1) for f in files])
        else:
            try:
                text = path.read_bytes().decode("utf-8")
            except UnicodeDecodeError as exc:
                raise RegistryError("parse", "bundle is not valid UTF-8", path=path) from exc
            profiles = parse_bundle(text.removeprefix("\ufeff"), path)
    except OSError as exc:
        raise RegistryError("io", exc.strerror or str(exc), path=path) from exc
    return Registry(tuple(profiles), path)


def _atomic_write(target: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def _file_stem(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]", "_", name) or "service"


def add_profile(registry: Registry, profile: ServiceProfile) -> Registry:
    """Return a registry with ``profile`` appended, persisting it if file-backed.

    A bundle is rewritten atomically; a directory gains one ``.svc`` file.
    On any failure the on-disk state is left as it was.
    """
    if profile.name in registry:
        raise RegistryError("duplicate-name", f"service `{profile.name}` already registered")
    updated = Registry(registry.entries + (profile,), registry.source_path)
    path = registry.source_path
    if path is None:
        return updated
    try:
        if path.is_dir():
            target = path / f"{_file_stem(profile.name)}{PROFILE_SUFFIX}"
            if target.exists():
                raise RegistryError("io", f"{target.name} already exists", path=target)
            _atomic_write(target, serialize_profile(profile))
        else:
            _atomic_write(path, format_bundle(updated.entries))
    except OSError as exc:
        raise RegistryError("io", exc.strerror or str(exc), path=path) from exc
    return updated


def discover(
    registry: Registry,
    requested: ServiceProfile,
    table: SimilarityTable = DEFAULT_TABLE,
    strategy: Union[Strategy, str] = Strategy.BFS,
    mode: str = "best",
    *,
    workers: Optional[int] = None,
) -> DiscoveryResult:
    """Find the advertised service most similar to ``requested``.

    ``best`` mode scans in registry order, keeps the first entry seen with
    the highest score, and stops as soon as one scores the maximum.
    ``ranked`` mode scores every entry and sorts them (stable, so ties keep
    registry order); ``workers`` lets that scan run on a thread pool.
    """
    if mode == "best":
        best: Optional[MatchReport] = None
        scanned = 0
        for advertised in registry:
            report = matcher.match_services(requested, advertised, table, strategy)
            scanned += 1
            if best is None or report.overall > best.overall:
                best = report
            if report.overall == MAX_WEIGHT:
                break
        return DiscoveryResult(best, scanned)
    if mode == "ranked":
        def score(advertised: ServiceProfile) -> MatchReport:
            return matcher.match_services(requested, advertised, table, strategy)

        if workers and workers > 1 and len(registry) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                reports = list(pool.map(score, registry.entries))
        else:
            reports = [score(p) for p in registry]
        ranked = tuple(sorted(reports, key=lambda r: r.overall, reverse=True))
        return DiscoveryResult(ranked[0] if ranked else None, len(reports), ranked)
    raise ValueError(f"unknown discovery mode {mode!r}")
