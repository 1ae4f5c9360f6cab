"""Strong structural controllability with dedicated inputs.

``(A, B(S))`` is strongly structurally controllable iff

1. ``S`` is a zero forcing set of ``G(A)``, and
2. ``S`` is a zero forcing set of ``G(A_x)`` using no self-force ``i -> i``
   at a vertex whose original diagonal entry ``A[i, i]`` is a star.

The cost ``|S| + (1 + eps) |W(S) u W_x(S)|`` penalises the white residuals
of both closures; it equals ``|S|`` exactly on feasible sets.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError
from .pattern import LoopDigraph, PatternMatrix, VertexSet, graph_of, modified_pattern
from .zeroforcing import black_mask, closure


@dataclass(frozen=True)
class CostParams:
    epsilon: float = 0.1

    def __post_init__(self):
        if not self.epsilon > 0:
            raise DomainError(f"epsilon must be positive, got {self.epsilon}")


@dataclass(frozen=True, eq=False)
class SControlInstance:
    A: PatternMatrix
    G: LoopDigraph
    Gx: LoopDigraph
    loops: VertexSet

    @classmethod
    def from_pattern(cls, A: PatternMatrix) -> SControlInstance:
        loops = VertexSet.of(A.n, (i for i in range(A.n) if A[i, i]))
        return cls(A, graph_of(A), graph_of(modified_pattern(A)), loops)

    @property
    def n(self) -> int:
        return self.A.n

    def residual_masks(self, mask: int) -> tuple[int, int]:
        """White residual bitmasks ``(W, W_x)`` for the start set ``mask``."""
        full = (1 << self.A.n) - 1
        b = black_mask(self.G, mask)
        bx = black_mask(self.Gx, mask, self.loops.mask)
        return full & ~b, full & ~bx

    def residual_count(self, mask: int) -> int:
        """``|W(S) u W_x(S)|`` for the start set ``mask``."""
        w, wx = self.residual_masks(mask)
        return (w | wx).bit_count()

    def relabel(self, perm) -> SControlInstance:
        return SControlInstance.from_pattern(self.A.relabel(perm))


def _check(inst: SControlInstance, S: VertexSet):
    if S.n != inst.n:
        raise DomainError(f"vertex set universe {S.n} does not match instance size {inst.n}")


def white_residuals(inst: SControlInstance, S: VertexSet) -> tuple[VertexSet, VertexSet]:
    """``(W(S), W_x(S))``: vertices left white in ``G(A)`` and in ``G(A_x)``."""
    _check(inst, S)
    w, wx = inst.residual_masks(S.mask)
    return VertexSet(inst.n, w), VertexSet(inst.n, wx)


def verify(inst: SControlInstance, S: VertexSet) -> bool:
    w, wx = white_residuals(inst, S)
    return not w and not wx


def cost_terms(inst: SControlInstance, S: VertexSet) -> tuple[int, int]:
    """Integer parts ``(|S|, |W u W_x|)`` of the cost."""
    _check(inst, S)
    return len(S), inst.residual_count(S.mask)


def cost(inst: SControlInstance, S: VertexSet, params: CostParams = CostParams()) -> float:
    size, resid = cost_terms(inst, S)
    return size + (1.0 + params.epsilon) * resid


def repair(inst: SControlInstance, S: VertexSet) -> VertexSet:
    """Make ``S`` feasible by adding every vertex that stays white."""
    w, wx = white_residuals(inst, S)
    return S | w | wx


@dataclass(frozen=True)
class Diagnosis:
    """Per-condition verdict with the closures that justify it."""

    controllable: bool
    zfs_of_G: bool
    zfs_of_Gx: bool
    residual: VertexSet
    residual_x: VertexSet
    forces: tuple[tuple[int, int], ...]
    forces_x: tuple[tuple[int, int], ...]


def diagnose(inst: SControlInstance, S: VertexSet) -> Diagnosis:
    _check(inst, S)
    r = closure(inst.G, S)
    rx = closure(inst.Gx, S, inst.loops)
    return Diagnosis(
        controllable=not r.white_residual and not rx.white_residual,
        zfs_of_G=not r.white_residual,
        zfs_of_Gx=not rx.white_residual,
        residual=r.white_residual,
        residual_x=rx.white_residual,
        forces=r.forces,
        forces_x=rx.forces,
    )
