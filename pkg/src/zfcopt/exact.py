"""Exact minimum dedicated-input sets for small and mid-size instances.

:func:`solve_exact` enumerates subsets by increasing cardinality in
lexicographic order. :func:`solve_exact_bounded` answers the same question
for cardinalities up to ``k_max`` with a fort-guided search.

A *fort* here is the white residual of some closure: if ``B`` is a closed
black set (no legal force left) then any set contained in ``B`` closes to a
subset of ``B``, so every feasible input set must meet ``V \\ B``. Branching
on fort members therefore never loses a feasible set, and every feasible set
of the target size is reached exactly once.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import DomainError, SizeGuardError
from .pattern import VertexSet
from .scontrol import SControlInstance
from .zeroforcing import black_mask

DEFAULT_WITNESS_CAP = 1000


@dataclass(frozen=True)
class ExactResult:
    optimum: int
    witnesses: tuple[VertexSet, ...]
    subsets_checked: int
    truncated: bool = False

    def to_dict(self) -> dict:
        return {
            "optimum": self.optimum,
            "witnesses": [w.sorted() for w in self.witnesses],
            "subsets_checked": self.subsets_checked,
            "truncated": self.truncated,
        }


def _closed_sets(inst: SControlInstance, mask: int) -> tuple[int, int]:
    return black_mask(inst.G, mask), black_mask(inst.Gx, mask, inst.loops.mask)


def solve_exact(
    inst: SControlInstance,
    max_n: int = 20,
    witness_cap: int = DEFAULT_WITNESS_CAP,
    prune: bool = False,
) -> ExactResult:
    """Smallest feasible cardinality and all optimal sets (up to ``witness_cap``).

    With ``prune=True`` a candidate lying inside a closed black set already
    known to be infeasible is skipped without evaluation.
    """
    n = inst.n
    if n > max_n:
        raise SizeGuardError(f"exhaustive search limited to n <= {max_n}, got {n}")
    full = (1 << n) - 1
    closed: list[int] = []
    checked = 0
    for k in range(n + 1):
        witnesses: list[VertexSet] = []
        truncated = False
        for combo in itertools.combinations(range(n), k):
            mask = 0
            for v in combo:
                mask |= 1 << v
            if prune and any(mask & ~b == 0 for b in closed):
                continue
            checked += 1
            b, bx = _closed_sets(inst, mask)
            if b == full and bx == full:
                if len(witnesses) < witness_cap:
                    witnesses.append(VertexSet(n, mask))
                else:
                    truncated = True
            elif prune:
                for c in (b, bx):
                    if c != full and not any(c & ~d == 0 for d in closed):
                        closed = [d for d in closed if d & ~c != 0]
                        closed.append(c)
        if witnesses:
            return ExactResult(k, tuple(witnesses), checked, truncated)
    raise AssertionError("the full vertex set is always feasible")


class _FortSearch:
    def __init__(self, inst: SControlInstance, witness_cap: int):
        self.inst = inst
        self.n = inst.n
        self.full = (1 << inst.n) - 1
        self.forts: list[int] = []
        self.known: set[int] = set()
        self.checked = 0
        self.witness_cap = witness_cap
        self.witnesses: list[int] = []
        self.truncated = False

    def _shrink(self, black: int, graph, forbidden: int) -> int:
        """Greedily grow a closed black set while it stays short of ``V``."""
        white = self.full & ~black
        m = white
        while m:
            low = m & -m
            m ^= low
            if not white & low:
                continue
            nb = black_mask(graph, black | low, forbidden)
            if nb != self.full:
                black = nb
                white = self.full & ~nb
        return white

    def _learn(self, black: int, graph, forbidden: int):
        fort = self._shrink(black, graph, forbidden)
        if fort and fort not in self.known:
            self.known.add(fort)
            self.forts.append(fort)

    def feasible(self, mask: int) -> bool:
        self.checked += 1
        b, bx = _closed_sets(self.inst, mask)
        if b == self.full and bx == self.full:
            return True
        if b != self.full:
            self._learn(b, self.inst.G, 0)
        if bx != self.full:
            self._learn(bx, self.inst.Gx, self.inst.loops.mask)
        return False

    def search(self, chosen: int, excluded: int, size: int, k: int):
        if len(self.witnesses) >= self.witness_cap:
            self.truncated = True
            return
        allowed = self.full & ~excluded
        open_forts = [f for f in self.forts if not f & chosen]
        if not open_forts:
            if self.feasible(chosen):
                if size == k:
                    self.witnesses.append(chosen)
                return
            open_forts = [f for f in self.forts if not f & chosen]
        if size >= k:
            return
        # disjoint packing of open forts bounds the inputs still needed
        reduced = []
        for f in open_forts:
            r = f & allowed
            if not r:
                return
            reduced.append(r)
        reduced.sort(key=int.bit_count)
        used = 0
        need = 0
        for r in reduced:
            if not r & used:
                used |= r
                need += 1
        if size + need > k:
            return
        branch = reduced[0]
        done = 0
        m = branch
        while m:
            low = m & -m
            m ^= low
            self.search(chosen | low, excluded | done, size + 1, k)
            done |= low


def solve_exact_bounded(
    inst: SControlInstance, k_max: int, witness_cap: int = DEFAULT_WITNESS_CAP
) -> ExactResult | None:
    """Exact optimum if it is at most ``k_max``, otherwise ``None``.

    Iterative deepening over the target size with fort-guided branching and
    a disjoint-fort lower bound. Witnesses are reported in the same
    lexicographic order as :func:`solve_exact`.
    """
    if k_max < 0:
        raise DomainError(f"k_max must be non-negative, got {k_max}")
    n = inst.n
    fs = _FortSearch(inst, witness_cap)
    for k in range(min(k_max, n) + 1):
        fs.search(0, 0, 0, k)
        if fs.witnesses:
            found = sorted((VertexSet(n, m) for m in fs.witnesses), key=lambda s: s.sorted())
            return ExactResult(k, tuple(found), fs.checked, fs.truncated)
    return None
