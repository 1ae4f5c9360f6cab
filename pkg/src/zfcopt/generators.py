"""Seeded random instance generators."""
from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .pattern import PatternMatrix


def er_probability(n: int, delta: float) -> float:
    """Star probability ``(1 + delta) ln(n) / n`` clamped to 1."""
    return min(1.0, (1.0 + delta) * math.log(n) / n)


def gen_erdos_renyi(n: int, delta: float = 0.5, seed: int = 0) -> PatternMatrix:
    """Pattern whose n*n entries are independently starred with ``er_probability``."""
    if n < 2:
        raise DomainError(f"Erdos-Renyi generator needs n >= 2, got {n}")
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    rng = np.random.default_rng(seed)
    return PatternMatrix(rng.random((n, n)) < er_probability(n, delta))


def gen_selfdamped_tree(n: int, seed: int = 0) -> PatternMatrix:
    """Self-damped directed tree from the uniform random recursive tree model.

    Vertex 0 is the root; vertex ``k`` picks its parent uniformly from
    ``0..k-1`` and the edge points parent -> child (``A[child, parent]``).
    """
    if n < 1:
        raise DomainError(f"tree generator needs n >= 1, got {n}")
    rng = np.random.default_rng(seed)
    arr = np.eye(n, dtype=bool)
    for k in range(1, n):
        parent = int(rng.integers(0, k))
        arr[k, parent] = True
    return PatternMatrix(arr)
