"""Edge-list and pattern-matrix text formats.

Edge list: one ``<src> <dst>`` pair per line, ``#`` starts a comment line.
Pattern matrix: ``n`` lines of ``n`` characters from ``{'0', 'x'}``.
"""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Iterable

from .errors import ParseError
from .pattern import LoopDigraph, PatternMatrix, pattern_of

log = logging.getLogger(__name__)


def parse_edge_list(lines: Iterable[str], path: str | None = None) -> tuple[list[tuple[int, int]], int, int]:
    """Return ``(unique_edges, max_id + 1, duplicates_collapsed)``."""
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    dupes = 0
    top = -1
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected '<src> <dst>', got {line!r}", lineno, path)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer vertex id in {line!r}", lineno, path) from None
        if u < 0 or v < 0:
            raise ParseError(f"negative vertex id in {line!r}", lineno, path)
        if (u, v) in seen:
            dupes += 1
            continue
        seen.add((u, v))
        edges.append((u, v))
        top = max(top, u, v)
    return edges, top + 1, dupes


def read_edge_list(path: str | Path, n_hint: int | None = None) -> LoopDigraph:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        edges, n, dupes = parse_edge_list(fh, str(path))
    if dupes:
        log.info("%s: collapsed %d duplicate edges", path, dupes)
    if n_hint is not None:
        n = max(n, n_hint)
    return LoopDigraph.from_edges(n, edges)


def write_edge_list(G: LoopDigraph, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write(f"# n={G.n} m={G.edge_count}\n")
        for u, v in G.edges():
            fh.write(f"{u} {v}\n")


def parse_pattern(lines: Iterable[str], path: str | None = None) -> PatternMatrix:
    rows = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if set(line) - {"0", "x"}:
            raise ParseError(f"pattern rows may only contain '0' and 'x', got {line!r}", lineno, path)
        rows.append((lineno, line))
    if not rows:
        raise ParseError("empty pattern matrix", None, path)
    n = len(rows)
    for lineno, line in rows:
        if len(line) != n:
            raise ParseError(f"row has {len(line)} entries, expected {n}", lineno, path)
    return PatternMatrix.from_rows([line for _, line in rows])


def read_pattern(path: str | Path) -> PatternMatrix:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        return parse_pattern(fh, str(path))


def write_pattern(A: PatternMatrix, path: str | Path) -> None:
    Path(path).write_text("\n".join(A.rows()) + "\n", encoding="utf-8")


def _looks_like_pattern(lines: list[str]) -> bool:
    body = [ln.strip() for ln in lines if ln.strip() and not ln.strip().startswith("#")]
    return bool(body) and all(" " not in ln and "\t" not in ln and not set(ln) - {"0", "x"} for ln in body)


def read_instance(path: str | Path, fmt: str = "auto", n_hint: int | None = None) -> PatternMatrix:
    """Load a state-matrix pattern from either supported text format.

    ``fmt`` is ``"matrix"``, ``"edges"`` or ``"auto"`` (sniffed from content).
    Edge lists are converted with the convention that edge ``u -> v`` means
    ``A[v, u]`` is a star.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    lines = text.splitlines()
    if fmt == "auto":
        fmt = "matrix" if _looks_like_pattern(lines) else "edges"
    if fmt == "matrix":
        return parse_pattern(lines, str(path))
    if fmt != "edges":
        raise ValueError(f"unknown input format {fmt!r}")
    edges, n, dupes = parse_edge_list(lines, str(path))
    if dupes:
        log.info("%s: collapsed %d duplicate edges", path, dupes)
    if n_hint is not None:
        n = max(n, n_hint)
    if n == 0:
        raise ParseError("edge list defines no vertices", None, str(path))
    return pattern_of(LoopDigraph.from_edges(n, edges))


__all__ = [
    "parse_edge_list",
    "parse_pattern",
    "read_edge_list",
    "read_instance",
    "read_pattern",
    "write_edge_list",
    "write_pattern",
]
