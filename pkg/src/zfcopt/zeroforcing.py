"""Zero-forcing closure on loop digraphs.

A vertex whose out-neighbourhood contains exactly one white vertex forces
that vertex black. The forcer's own colour is irrelevant unless it is its
own out-neighbour (self-loop). Self-forces ``i -> i`` can be disallowed for
a chosen set of vertices; the rule stays monotone under that restriction, so
the final black set does not depend on the order in which forces fire.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

from .errors import SizeGuardError
from .pattern import LoopDigraph, VertexSet

# Vertices i for which the force i -> i is disallowed.
ForbiddenSelfForcers = VertexSet


@dataclass(frozen=True)
class ClosureResult:
    black: VertexSet
    white_residual: VertexSet
    forces: tuple[tuple[int, int], ...]

    def labelled_forces(self) -> list[str]:
        return [f"x{u + 1}->x{v + 1}" for u, v in self.forces]


def closure(G: LoopDigraph, initial: VertexSet, forbidden: ForbiddenSelfForcers | None = None) -> ClosureResult:
    """Maximal black set reachable from ``initial`` plus the force list that got there.

    Work-queue propagation: every vertex keeps the number of white
    out-neighbours and the XOR of their ids, so once the count drops to one
    the XOR names the single white vertex. Queue order is FIFO seeded by
    ascending vertex id, which makes the reported force list deterministic.
    Runs in O(n + m).
    """
    n = G.n
    fmask = forbidden.mask if forbidden is not None else 0
    black = [bool(initial.mask >> v & 1) for v in range(n)]
    count = [0] * n
    xor = [0] * n
    for v, adj in enumerate(G.out_adj):
        c = x = 0
        for w in adj:
            if not black[w]:
                c += 1
                x ^= w
        count[v] = c
        xor[v] = x
    queue = deque(v for v in range(n) if count[v] == 1)
    in_adj = G.in_adj
    forces = []
    while queue:
        v = queue.popleft()
        if count[v] != 1:
            continue
        w = xor[v]
        if w == v and fmask >> v & 1:
            continue
        black[w] = True
        forces.append((v, w))
        for u in in_adj[w]:
            count[u] -= 1
            xor[u] ^= w
            if count[u] == 1:
                queue.append(u)
    mask = initial.mask
    for _, w in forces:
        mask |= 1 << w
    black_set = VertexSet(n, mask)
    return ClosureResult(black_set, black_set.complement(), tuple(forces))


def black_mask(G: LoopDigraph, start: int, forbidden: int = 0) -> int:
    """Bitmask-only closure used on hot paths; same fixed point as :func:`closure`.

    Stack worklist: every vertex is examined once, and again whenever one of
    its out-neighbours turns black.
    """
    out_mask = G.out_mask
    in_adj = G.in_adj
    black = start
    stack = list(range(G.n - 1, -1, -1))
    pop = stack.pop
    push = stack.extend
    while stack:
        v = pop()
        white = out_mask[v] & ~black
        if white and not white & (white - 1):
            if white >> v == 1 and forbidden >> v & 1:
                continue
            black |= white
            push(in_adj[white.bit_length() - 1])
    return black


def is_zfs(G: LoopDigraph, S: VertexSet, forbidden: ForbiddenSelfForcers | None = None) -> bool:
    full = (1 << G.n) - 1
    return black_mask(G, S.mask, forbidden.mask if forbidden is not None else 0) == full


def zero_forcing_number_exact(
    G: LoopDigraph, forbidden: ForbiddenSelfForcers | None = None, max_n: int = 25
) -> int:
    """Smallest zero forcing set size, by enumerating subsets of increasing size."""
    n = G.n
    if n > max_n:
        raise SizeGuardError(f"exhaustive zero forcing number limited to n <= {max_n}, got {n}")
    fmask = forbidden.mask if forbidden is not None else 0
    full = (1 << n) - 1
    for k in range(n + 1):
        for combo in itertools.combinations(range(n), k):
            start = sum(1 << v for v in combo)
            if black_mask(G, start, fmask) == full:
                return k
    # unreachable: V itself is always a zero forcing set
    raise AssertionError("no zero forcing set found")

