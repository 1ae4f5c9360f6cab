"""Structured pattern matrices, loop digraphs and vertex sets.

Vertices are 0-based everywhere in code. The 1-based labels ``x1..xn`` are
produced only by :meth:`VertexSet.labels` for human-readable output.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DimensionError

ZERO = False
STAR = True


@dataclass(frozen=True)
class VertexSet:
    """Subset of ``{0, ..., n-1}`` stored as an integer bitmask.

    Immutable and hashable; ``with_vertex``/``without`` return new sets in
    O(1) word operations, which is what the Markov chain and the closure
    engine need.
    """

    n: int
    mask: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise DimensionError(f"universe size must be non-negative, got {self.n}")
        if self.mask < 0 or self.mask >> self.n:
            raise DimensionError(f"mask has members outside [0, {self.n})")

    @classmethod
    def of(cls, n: int, members: Iterable[int] = ()) -> VertexSet:
        mask = 0
        for v in members:
            v = int(v)
            if not 0 <= v < n:
                raise DimensionError(f"vertex {v} outside [0, {n})")
            mask |= 1 << v
        return cls(n, mask)

    @classmethod
    def empty(cls, n: int) -> VertexSet:
        return cls(n, 0)

    @classmethod
    def full(cls, n: int) -> VertexSet:
        return cls(n, (1 << n) - 1)

    def __contains__(self, v: object) -> bool:
        return isinstance(v, (int, np.integer)) and 0 <= v < self.n and bool(self.mask >> int(v) & 1)

    def __iter__(self) -> Iterator[int]:
        m = self.mask
        while m:
            low = m & -m
            yield low.bit_length() - 1
            m ^= low

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def _check_same(self, other: VertexSet):
        if self.n != other.n:
            raise DimensionError(f"universe mismatch: {self.n} vs {other.n}")

    def __or__(self, other: VertexSet) -> VertexSet:
        self._check_same(other)
        return VertexSet(self.n, self.mask | other.mask)

    def __and__(self, other: VertexSet) -> VertexSet:
        self._check_same(other)
        return VertexSet(self.n, self.mask & other.mask)

    def __sub__(self, other: VertexSet) -> VertexSet:
        self._check_same(other)
        return VertexSet(self.n, self.mask & ~other.mask)

    def __le__(self, other: VertexSet) -> bool:
        self._check_same(other)
        return self.mask & ~other.mask == 0

    def complement(self) -> VertexSet:
        return VertexSet(self.n, ((1 << self.n) - 1) & ~self.mask)

    def with_vertex(self, v: int) -> VertexSet:
        if not 0 <= v < self.n:
            raise DimensionError(f"vertex {v} outside [0, {self.n})")
        return VertexSet(self.n, self.mask | (1 << v))

    def without(self, v: int) -> VertexSet:
        if not 0 <= v < self.n:
            raise DimensionError(f"vertex {v} outside [0, {self.n})")
        return VertexSet(self.n, self.mask & ~(1 << v))

    def sorted(self) -> list[int]:
        return list(self)

    def labels(self) -> list[str]:
        return [f"x{v + 1}" for v in self]

    def relabel(self, perm: Sequence[int]) -> VertexSet:
        """Image of the set under the vertex map ``v -> perm[v]``."""
        return VertexSet.of(self.n, (perm[v] for v in self))

    def __repr__(self) -> str:
        return f"VertexSet(n={self.n}, {{{', '.join(map(str, self))}}})"


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PatternMatrix:
    """Square zero/star pattern; ``entries[i, j]`` is True for a free parameter."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=bool, copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise DimensionError(f"pattern must be square with n >= 1, got shape {arr.shape}")
        object.__setattr__(self, "entries", _readonly(arr))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_rows(cls, rows: Sequence[str]) -> PatternMatrix:
        """Build from strings such as ``["x0", "xx"]`` ('x' is a star)."""
        return cls(np.array([[c == "x" for c in row] for row in rows], dtype=bool))

    @classmethod
    def zeros(cls, n: int) -> PatternMatrix:
        return cls(np.zeros((n, n), dtype=bool))

    @classmethod
    def identity(cls, n: int) -> PatternMatrix:
        return cls(np.eye(n, dtype=bool))

    def __getitem__(self, ij) -> bool:
        return bool(self.entries[ij])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PatternMatrix):
            return NotImplemented
        return self.entries.shape == other.entries.shape and bool(np.array_equal(self.entries, other.entries))

    def __hash__(self) -> int:
        return hash((self.n, np.packbits(self.entries).tobytes()))

    def star_count(self) -> int:
        return int(self.entries.sum())

    def diagonal(self) -> np.ndarray:
        return np.diag(self.entries)

    def rows(self) -> list[str]:
        return ["".join("x" if e else "0" for e in row) for row in self.entries]

    def relabel(self, perm: Sequence[int]) -> PatternMatrix:
        """Pattern of ``P A P^T`` where vertex ``v`` becomes ``perm[v]``."""
        p = np.asarray(perm)
        out = np.zeros_like(self.entries)
        out[np.ix_(p, p)] = self.entries
        return PatternMatrix(out)

    def __repr__(self) -> str:
        return f"PatternMatrix(n={self.n}, stars={self.star_count()})"


@dataclass(frozen=True)
class LoopDigraph:
    """Directed graph on ``0..n-1`` where self-loops are allowed.

    ``out_adj[u]`` and ``in_adj[v]`` are sorted tuples; ``out_mask[u]`` is the
    out-neighbourhood as a bitmask.
    """

    n: int
    out_adj: tuple[tuple[int, ...], ...]
    in_adj: tuple[tuple[int, ...], ...] = field(repr=False)
    out_mask: tuple[int, ...] = field(repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> LoopDigraph:
        out_sets: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise DimensionError(f"edge ({u}, {v}) outside [0, {n})")
            out_sets[u].add(v)
        out_adj = tuple(tuple(sorted(s)) for s in out_sets)
        in_lists: list[list[int]] = [[] for _ in range(n)]
        for u in range(n):
            for v in out_adj[u]:
                in_lists[v].append(u)
        out_mask = tuple(sum(1 << v for v in adj) for adj in out_adj)
        return cls(n, out_adj, tuple(tuple(x) for x in in_lists), out_mask)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.out_adj[u]]

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.out_adj)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.out_mask[u] >> v & 1)

    def self_loops(self) -> VertexSet:
        return VertexSet.of(self.n, (v for v in range(self.n) if self.has_edge(v, v)))

    def relabel(self, perm: Sequence[int]) -> LoopDigraph:
        return LoopDigraph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges()))


@dataclass(frozen=True)
class InputPattern:
    """Dedicated input matrix: column ``k`` has its single star at row ``columns[k]``."""

    n: int
    columns: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.columns)) != len(self.columns):
            raise DimensionError("dedicated inputs must act on distinct states")
        for r in self.columns:
            if not 0 <= r < self.n:
                raise DimensionError(f"input row {r} outside [0, {self.n})")

    @property
    def m(self) -> int:
        return len(self.columns)

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.n, self.m), dtype=bool)
        out[list(self.columns), list(range(self.m))] = True
        return out


def graph_of(A: PatternMatrix) -> LoopDigraph:
    """Loop digraph with an edge ``j -> i`` for every star ``A[i, j]``.

    The column index is the edge source.
    """
    rows, cols = np.nonzero(A.entries)
    return LoopDigraph.from_edges(A.n, zip(cols.tolist(), rows.tolist()))


def pattern_of(G: LoopDigraph) -> PatternMatrix:
    """Inverse of :func:`graph_of`."""
    arr = np.zeros((G.n, G.n), dtype=bool)
    for u, v in G.edges():
        arr[v, u] = True
    return PatternMatrix(arr)


def modified_pattern(A: PatternMatrix) -> PatternMatrix:
    """Copy of ``A`` with every zero on the diagonal turned into a star."""
    arr = A.entries.copy()
    np.fill_diagonal(arr, True)
    return PatternMatrix(arr)


def input_pattern(S: VertexSet | Iterable[int], n: int) -> InputPattern:
    if isinstance(S, VertexSet):
        if S.n > n and S.mask >> n:
            raise DimensionError(f"set has members outside [0, {n})")
        members = S.sorted()
    else:
        members = sorted(set(int(v) for v in S))
    for v in members:
        if not 0 <= v < n:
            raise DimensionError(f"vertex {v} outside [0, {n})")
    return InputPattern(n, tuple(members))
