"""Small published instances used as golden fixtures."""
from __future__ import annotations

from .pattern import PatternMatrix

# Six-state worked example; vertex k is x(k+1).
WORKED_EXAMPLE_ROWS = (
    "x00000",
    "x0000x",
    "0x0000",
    "00x000",
    "x00x00",
    "x00000",
)


def worked_example() -> PatternMatrix:
    return PatternMatrix.from_rows(WORKED_EXAMPLE_ROWS)


def _band(n: int, spans: dict[int, range]) -> list[str]:
    return ["".join("x" if j in spans.get(i, ()) else "0" for j in range(n)) for i in range(n)]


# 15-state banded instance on which a greedy heuristic needs O(n) inputs
# while four dedicated inputs on the last four states suffice.
BANDED_EXAMPLE_ROWS = tuple(
    _band(
        15,
        {
            0: range(4, 5),
            1: range(4, 6),
            2: range(4, 7),
            3: range(5, 8),
            4: range(5, 9),
            5: range(5, 10),
            6: range(5, 11),
            7: range(8, 12),
            8: range(8, 13),
            9: range(8, 14),
            10: range(8, 15),
            11: range(11, 15),
            12: range(11, 15),
            13: range(11, 15),
            14: range(11, 15),
        },
    )
)
BANDED_EXAMPLE_INPUTS = (11, 12, 13, 14)


def banded_example() -> PatternMatrix:
    return PatternMatrix.from_rows(BANDED_EXAMPLE_ROWS)
