"""Metropolis chain over vertex subsets and its annealed driver.

From state ``S`` (``k = |S|`` of ``n`` vertices) a move class is drawn with
probabilities ``2(n-k)/3n`` (add), ``2k/3n`` (remove) and ``1/3`` (swap);
the vertex, or the (member, non-member) pair, is then uniform. A swap drawn
at ``S`` empty or full proposes ``S`` itself. The proposal is accepted with
probability ``min(1, exp((C(S) - C(S')) / T))``, giving the Gibbs law
``exp(-C/T) / Z`` as the stationary distribution at fixed ``T``.
"""
from __future__ import annotations

import enum
import math
import random
import time
from bisect import insort
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Any

import numpy as np

from .errors import DomainError, SizeGuardError
from .pattern import VertexSet
from .scontrol import CostParams, SControlInstance, repair, verify

SCHEMA = "zfc-opt/1"
RNG_ALGORITHM = "mt19937/python-random"


class Move(str, enum.Enum):
    ADD = "add"
    REMOVE = "remove"
    SWAP = "swap"
    STAY = "stay"


class Mode(str, enum.Enum):
    FAITHFUL = "faithful"
    BEST_FEASIBLE = "best_feasible"


@dataclass(frozen=True)
class AnnealConfig:
    t0: float = 1.5
    alpha: float = 0.95
    t_stop: float = 0.001
    epoch_len: int = 1000
    epsilon: float = 0.1
    seed: int = 0
    mode: Mode = Mode.BEST_FEASIBLE
    trace_every: int | None = None  # defaults to epoch_len
    cache_size: int = 1 << 17

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if not (self.t0 > 0 and self.t_stop > 0):
            raise DomainError("temperatures must be positive")
        if not self.t_stop < self.t0:
            raise DomainError(f"t_stop ({self.t_stop}) must be below t0 ({self.t0})")
        if not 0 < self.alpha < 1:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.epoch_len < 1:
            raise DomainError("epoch_len must be a positive integer")
        CostParams(self.epsilon)

    def epochs(self) -> int:
        """Number of temperature levels visited, computed the way the loop does."""
        k, T = 0, self.t0
        while self.t_stop <= T:
            k += 1
            T *= self.alpha
        return k

    def total_iterations(self) -> int:
        return self.epochs() * self.epoch_len


@dataclass
class ChainState:
    S: VertexSet
    cost_S: float
    t: int = 0
    temperature: float = 0.0
    best_feasible: tuple[VertexSet, int] | None = None


@dataclass
class RunReport:
    output_set: VertexSet
    output_cardinality: int
    feasible: bool
    final_set: VertexSet
    iterations: int
    cost_trace: list[tuple[int, float]]
    seed: int
    wall_time: float
    mode: Mode = Mode.BEST_FEASIBLE
    repaired: bool = False
    config: dict[str, Any] = field(default_factory=dict)
    rng: str = RNG_ALGORITHM

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA,
            "n": self.output_set.n,
            "output_set": self.output_set.sorted(),
            "output_labels": self.output_set.labels(),
            "output_cardinality": self.output_cardinality,
            "feasible": self.feasible,
            "repaired": self.repaired,
            "final_set": self.final_set.sorted(),
            "iterations": self.iterations,
            "mode": self.mode.value,
            "seed": self.seed,
            "rng": self.rng,
            "config": self.config,
            "cost_trace": [[t, c] for t, c in self.cost_trace],
            "wall_time": self.wall_time,
        }


def _draw(k: int, n: int, rng: random.Random) -> tuple[Move, int, int]:
    """Draw a move class and the ranks of the vertices it touches.

    Returns ``(move, rank_in_complement, rank_in_S)``; ranks index the sorted
    non-members and members respectively (-1 when unused).
    """
    r = rng.randrange(3 * n)
    if r < 2 * (n - k):
        return Move.ADD, rng.randrange(n - k), -1
    if r < 2 * n:
        return Move.REMOVE, -1, rng.randrange(k)
    if k == 0 or k == n:
        return Move.STAY, -1, -1
    return Move.SWAP, rng.randrange(n - k), rng.randrange(k)


def propose(S: VertexSet, n: int, rng: random.Random) -> tuple[VertexSet, Move]:
    """One proposal from ``S``; see the module docstring for the law."""
    if S.n != n:
        raise DomainError(f"set universe {S.n} != n={n}")
    members = S.sorted()
    others = S.complement().sorted()
    move, ia, ir = _draw(len(members), n, rng)
    if move is Move.ADD:
        return S.with_vertex(others[ia]), move
    if move is Move.REMOVE:
        return S.without(members[ir]), move
    if move is Move.SWAP:
        return S.without(members[ir]).with_vertex(others[ia]), move
    return S, move


def accept(cost_S: float, cost_Sp: float, T: float, rng: random.Random) -> bool:
    """Metropolis test; downhill and level moves never consume randomness."""
    if not T > 0:
        raise DomainError(f"temperature must be positive, got {T}")
    return _accept_delta(cost_S - cost_Sp, T, rng)


def _accept_delta(delta: float, T: float, rng: random.Random) -> bool:
    if delta >= 0:
        return True
    return rng.random() < math.exp(delta / T)


class _Chain:
    """Mutable chain state with sorted member lists and a residual cache."""

    def __init__(self, inst: SControlInstance, epsilon: float, rng: random.Random, cache_size: int = 1 << 17):
        self.inst = inst
        self.n = inst.n
        self.weight = 1.0 + epsilon
        self.rng = rng
        self.cache: dict[int, int] = {}
        self.cache_size = cache_size
        self.members: list[int] = []
        self.others: list[int] = list(range(self.n))
        self.mask = 0
        self.size = 0
        self.resid = self.residual(0)

    def residual(self, mask: int) -> int:
        r = self.cache.get(mask)
        if r is None:
            r = self.inst.residual_count(mask)
            if len(self.cache) < self.cache_size:
                self.cache[mask] = r
        return r

    @property
    def cost(self) -> float:
        return self.size + self.weight * self.resid

    def step(self, T: float) -> tuple[int, int, int]:
        """Advance one step; returns the proposal as ``(mask, size, residual)``."""
        move, ia, ir = _draw(self.size, self.n, self.rng)
        if move is Move.STAY:
            return self.mask, self.size, self.resid
        add = self.others[ia] if ia >= 0 else -1
        drop = self.members[ir] if ir >= 0 else -1
        mask = self.mask
        size = self.size
        if add >= 0:
            mask |= 1 << add
            size += 1
        if drop >= 0:
            mask &= ~(1 << drop)
            size -= 1
        resid = self.residual(mask)
        delta = (self.size - size) + self.weight * (self.resid - resid)
        if _accept_delta(delta, T, self.rng):
            if add >= 0:
                self.others.pop(ia)
                insort(self.members, add)
            if drop >= 0:
                self.members.remove(drop)
                insort(self.others, drop)
            self.mask, self.size, self.resid = mask, size, resid
        return mask, size, resid


def run(inst: SControlInstance, config: AnnealConfig = AnnealConfig()) -> RunReport:
    """Annealed chain started at the empty set.

    The temperature is multiplied by ``alpha`` after every ``epoch_len``
    iterations and the loop runs while ``t_stop <= T``. In FAITHFUL mode the
    output is the final chain state; in BEST_FEASIBLE mode it is the smallest
    feasible set evaluated during the run, or the repaired final state if no
    feasible set was seen.
    """
    started = time.perf_counter()
    n = inst.n
    rng = random.Random(config.seed)
    chain = _Chain(inst, config.epsilon, rng, config.cache_size)
    trace_every = config.trace_every or config.epoch_len
    trace: list[tuple[int, float]] = [(0, chain.cost)]
    best_mask, best_size = (0, 0) if chain.resid == 0 else (-1, n + 1)

    T = config.t0
    it = 0
    epoch_len = config.epoch_len
    while config.t_stop <= T:
        for _ in range(epoch_len):
            mask, size, resid = chain.step(T)
            it += 1
            if resid == 0 and size < best_size:
                best_mask, best_size = mask, size
            if it % trace_every == 0:
                trace.append((it, chain.cost))
        T *= config.alpha

    final = VertexSet(n, chain.mask)
    repaired = False
    if config.mode is Mode.FAITHFUL:
        output = final
    elif best_mask >= 0:
        output = VertexSet(n, best_mask)
    else:
        output = repair(inst, final)
        repaired = True
    cfg = asdict(config)
    cfg["mode"] = config.mode.value
    return RunReport(
        output_set=output,
        output_cardinality=len(output),
        feasible=verify(inst, output),
        final_set=final,
        iterations=it,
        cost_trace=trace,
        seed=config.seed,
        wall_time=time.perf_counter() - started,
        mode=config.mode,
        repaired=repaired,
        config=cfg,
    )


def _run_one(args):
    inst, config = args
    return run(inst, config)


def run_chains(
    inst: SControlInstance, config: AnnealConfig = AnnealConfig(), n_chains: int = 1, workers: int = 1
) -> RunReport:
    """Independent chains with seeds ``seed, seed+1, ...``; returns the best report.

    Best means feasible first, then smallest output, then lowest chain index.
    """
    if n_chains < 1:
        raise DomainError("n_chains must be at least 1")
    jobs = [(inst, replace(config, seed=config.seed + i)) for i in range(n_chains)]
    if workers > 1 and n_chains > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_run_one, jobs))
    else:
        reports = [_run_one(j) for j in jobs]
    return min(reports, key=lambda r: (not r.feasible, r.output_cardinality, reports.index(r)))


# -- exact small-n diagnostics -------------------------------------------------


def _cost_arrays(inst: SControlInstance) -> tuple[np.ndarray, np.ndarray]:
    n = inst.n
    sizes = np.array([m.bit_count() for m in range(1 << n)], dtype=np.int64)
    resid = np.array([inst.residual_count(m) for m in range(1 << n)], dtype=np.int64)
    return sizes, resid


def gibbs_distribution(inst: SControlInstance, T: float, params: CostParams = CostParams(), max_n: int = 20) -> np.ndarray:
    """``exp(-C(S)/T) / Z`` indexed by bitmask."""
    if inst.n > max_n:
        raise SizeGuardError(f"Gibbs vector limited to n <= {max_n}, got {inst.n}")
    sizes, resid = _cost_arrays(inst)
    c = sizes + (1.0 + params.epsilon) * resid
    w = np.exp(-(c - c.min()) / T)
    return w / w.sum()


def build_exact_tpm(
    inst: SControlInstance, T: float, params: CostParams = CostParams(), max_n: int = 10
) -> np.ndarray:
    """Dense ``2^n x 2^n`` transition matrix; row/column index is the subset bitmask."""
    n = inst.n
    if n > max_n:
        raise SizeGuardError(f"exact transition matrix limited to n <= {max_n}, got {n}")
    if not T > 0:
        raise DomainError(f"temperature must be positive, got {T}")
    weight = 1.0 + params.epsilon
    sizes, resid = _cost_arrays(inst)
    N = 1 << n
    P = np.zeros((N, N))
    step = 2.0 / (3.0 * n)
    for S in range(N):
        k = int(sizes[S])
        members = [v for v in range(n) if S >> v & 1]
        others = [v for v in range(n) if not S >> v & 1]

        def a(Sp):
            delta = (k - int(sizes[Sp])) + weight * int(resid[S] - resid[Sp])
            return 1.0 if delta >= 0 else math.exp(delta / T)

        for v in others:
            P[S, S | 1 << v] = step * a(S | 1 << v)
        for v in members:
            P[S, S & ~(1 << v)] = step * a(S & ~(1 << v))
        if 0 < k < n:
            swap = 1.0 / (3.0 * k * (n - k))
            for x in others:
                for y in members:
                    Sp = (S | 1 << x) & ~(1 << y)
                    P[S, Sp] = swap * a(Sp)
        P[S, S] = 0.0
        P[S, S] = 1.0 - P[S].sum()
    return P


def stationary_distribution(P: np.ndarray) -> np.ndarray:
    """Left eigenvector of ``P`` for the eigenvalue closest to 1, normalised."""
    vals, vecs = np.linalg.eig(P.T)
    i = int(np.argmin(np.abs(vals - 1.0)))
    v = np.real(vecs[:, i])
    return v / v.sum()


@dataclass(frozen=True)
class TpmDiagnostics:
    n: int
    temperature: float
    max_row_sum_deviation: float
    max_detailed_balance_violation: float
    stationary_vs_gibbs_tv: float
    stationary_vs_gibbs_max_abs: float


def tpm_diagnostics(
    inst: SControlInstance, T: float, params: CostParams = CostParams(), max_n: int = 10
) -> TpmDiagnostics:
    P = build_exact_tpm(inst, T, params, max_n)
    pi = gibbs_distribution(inst, T, params)
    flow = pi[:, None] * P
    stat = stationary_distribution(P)
    return TpmDiagnostics(
        n=inst.n,
        temperature=T,
        max_row_sum_deviation=float(np.max(np.abs(P.sum(axis=1) - 1.0))),
        max_detailed_balance_violation=float(np.max(np.abs(flow - flow.T))),
        stationary_vs_gibbs_tv=float(0.5 * np.abs(stat - pi).sum()),
        stationary_vs_gibbs_max_abs=float(np.max(np.abs(stat - pi))),
    )


def empirical_distribution(
    inst: SControlInstance,
    T: float,
    steps: int,
    burn_in: int = 0,
    seed: int = 0,
    params: CostParams = CostParams(),
) -> dict[VertexSet, float]:
    """Visit frequencies of the fixed-temperature chain after ``burn_in`` steps."""
    if not T > 0:
        raise DomainError(f"temperature must be positive, got {T}")
    chain = _Chain(inst, params.epsilon, random.Random(seed))
    for _ in range(burn_in):
        chain.step(T)
    counts: dict[int, int] = {}
    for _ in range(steps):
        chain.step(T)
        counts[chain.mask] = counts.get(chain.mask, 0) + 1
    if steps == 0:
        return {}
    return {VertexSet(inst.n, m): c / steps for m, c in sorted(counts.items())}


def total_variation(empirical: dict[VertexSet, float], exact: np.ndarray) -> float:
    """TV distance between a histogram keyed by sets and a bitmask-indexed vector."""
    p = np.zeros_like(exact)
    for S, f in empirical.items():
        p[S.mask] = f
    return float(0.5 * np.abs(p - exact).sum())
