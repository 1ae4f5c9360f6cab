"""Converters from common network formats to 0-based edge lists.

Two sources are handled: MATPOWER case files (``mpc.branch`` rows become
edges between buses) and labelled edge lists with arbitrary node ids, as
distributed by most network repositories. Node ids are renumbered
``0..n-1`` in sorted order (numeric when every id is an integer).
"""
from __future__ import annotations

import re
from pathlib import Path

from .errors import ParseError
from .pattern import LoopDigraph

_MATRIX_RE = re.compile(r"mpc\.(\w+)\s*=\s*\[(.*?)\]\s*;", re.DOTALL)


def _sort_key(ids: list[str]):
    if all(re.fullmatch(r"-?\d+", s) for s in ids):
        return lambda s: (int(s), s)
    return lambda s: s


def relabel(pairs: list[tuple[str, str]], extra: list[str] = ()) -> tuple[LoopDigraph, list[str]]:
    """Renumber arbitrary node ids; returns the graph and ``labels[i]`` = original id of vertex i."""
    seen = list({u for e in pairs for u in e} | set(extra))
    ids = sorted(seen, key=_sort_key(seen))
    index = {u: i for i, u in enumerate(ids)}
    return LoopDigraph.from_edges(len(ids), [(index[u], index[v]) for u, v in pairs]), ids


def _matlab_rows(body: str) -> list[list[str]]:
    rows = []
    for line in body.splitlines():
        line = line.split("%", 1)[0]
        for chunk in line.split(";"):
            toks = chunk.replace(",", " ").split()
            if toks:
                rows.append(toks)
    return rows


def parse_matpower(text: str, path: str | None = None, undirected: bool = False) -> tuple[LoopDigraph, list[str]]:
    """Bus graph of a MATPOWER case: one edge ``from -> to`` per in-service branch.

    Branches with status 0 (eleventh column) are dropped. With
    ``undirected`` each branch contributes both directions.
    """
    blocks = {name: body for name, body in _MATRIX_RE.findall(text)}
    if "branch" not in blocks:
        raise ParseError("no 'mpc.branch = [...];' block found", 1, path)
    buses = [r[0] for r in _matlab_rows(blocks.get("bus", ""))]
    pairs = []
    for row in _matlab_rows(blocks["branch"]):
        if len(row) < 2:
            raise ParseError(f"branch row {' '.join(row)!r} has fewer than two columns", 1, path)
        if len(row) >= 11 and float(row[10]) == 0:
            continue
        f, t = (str(int(float(x))) for x in row[:2])
        pairs.append((f, t))
        if undirected:
            pairs.append((t, f))
    return relabel(pairs, [str(int(float(b))) for b in buses])


def parse_labelled_edges(lines, path: str | None = None, undirected: bool = False) -> tuple[LoopDigraph, list[str]]:
    """Whitespace/comma separated ``u v [ignored...]`` rows; ``#`` and ``%`` start comments."""
    pairs = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].split("%", 1)[0].replace(",", " ").split()
        if not line:
            continue
        if len(line) < 2:
            raise ParseError(f"expected at least two node ids, got {raw.strip()!r}", lineno, path)
        u, v = line[:2]
        pairs.append((u, v))
        if undirected:
            pairs.append((v, u))
    return relabel(pairs)


def convert_file(src: str | Path, fmt: str, undirected: bool = False) -> tuple[LoopDigraph, list[str]]:
    text = Path(src).read_text(encoding="utf-8")
    if fmt == "matpower":
        return parse_matpower(text, str(src), undirected)
    if fmt == "edges":
        return parse_labelled_edges(text.splitlines(), str(src), undirected)
    raise ValueError(f"unknown source format {fmt!r}")


def write_converted(G: LoopDigraph, labels: list[str], dst: str | Path) -> None:
    """Edge list with the id mapping recorded as comments."""
    with Path(dst).open("w", encoding="utf-8") as fh:
        fh.write(f"# n={G.n} m={G.edge_count}\n")
        for i, label in enumerate(labels):
            fh.write(f"# vertex {i} = {label}\n")
        for u, v in G.edges():
            fh.write(f"{u} {v}\n")


__all__ = ["relabel", "parse_matpower", "parse_labelled_edges", "convert_file", "write_converted"]
