from __future__ import annotations

import random

import numpy as np
import pytest

from zfcopt.fixtures import worked_example, banded_example
from zfcopt.generators import gen_erdos_renyi, gen_selfdamped_tree
from zfcopt.pattern import LoopDigraph, PatternMatrix, VertexSet
from zfcopt.scontrol import SControlInstance


@pytest.fixture
def inst_a() -> SControlInstance:
    return SControlInstance.from_pattern(worked_example())


@pytest.fixture
def inst_b() -> SControlInstance:
    return SControlInstance.from_pattern(banded_example())


def X(n: int, *labels: int) -> VertexSet:
    """Vertex set from 1-based labels, e.g. ``X(6, 1, 6)`` is {x1, x6}."""
    return VertexSet.of(n, (i - 1 for i in labels))


def naive_closure(G: LoopDigraph, initial: set[int], forbidden: set[int] = frozenset(), rng=None):
    """Reference closure: repeatedly scan for any legal force, in random order if ``rng`` given.

    Deliberately independent of the package's queue and bitmask engines.
    """
    black = set(initial)
    forces = []
    while True:
        legal = []
        for v in range(G.n):
            white = [w for w in G.out_adj[v] if w not in black]
            if len(white) == 1 and not (white[0] == v and v in forbidden):
                legal.append((v, white[0]))
        if not legal:
            return black, forces
        v, w = rng.choice(legal) if rng is not None else legal[0]
        black.add(w)
        forces.append((v, w))


def random_pattern(rng: random.Random, n: int, density: float | None = None) -> PatternMatrix:
    p = rng.uniform(0.05, 0.6) if density is None else density
    return PatternMatrix(np.array([[rng.random() < p for _ in range(n)] for _ in range(n)], dtype=bool))


def instance_zoo(count: int, n_max: int, seed: int = 0) -> list[SControlInstance]:
    """Mixed bag of small instances: ER, trees and arbitrary-density patterns."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(1, n_max)
        kind = i % 3
        if kind == 0 and n >= 2:
            A = gen_erdos_renyi(n, rng.choice([0.2, 0.5, 1.0]), seed=rng.randrange(1 << 30))
        elif kind == 1:
            A = gen_selfdamped_tree(n, seed=rng.randrange(1 << 30))
        else:
            A = random_pattern(rng, n)
        out.append(SControlInstance.from_pattern(A))
    return out


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion for the terminal summary."""

    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
