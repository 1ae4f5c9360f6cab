import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zfcopt.errors import DimensionError
from zfcopt.fixtures import worked_example
from zfcopt.pattern import (
    InputPattern,
    LoopDigraph,
    PatternMatrix,
    VertexSet,
    graph_of,
    input_pattern,
    modified_pattern,
    pattern_of,
)

from conftest import X

patterns = st.integers(1, 7).flatmap(
    lambda n: st.lists(st.booleans(), min_size=n * n, max_size=n * n).map(
        lambda cells: PatternMatrix(np.array(cells, dtype=bool).reshape(n, n))
    )
)


def test_vertex_set_basics():
    S = VertexSet.of(6, [0, 5])
    assert 0 in S and 5 in S and 3 not in S
    assert len(S) == 2
    assert S.sorted() == [0, 5]
    assert S.labels() == ["x1", "x6"]
    assert S.with_vertex(2) == VertexSet.of(6, [0, 2, 5])
    assert S.without(0) == VertexSet.of(6, [5])
    assert S.complement() == VertexSet.of(6, [1, 2, 3, 4])
    assert VertexSet.of(6, [5, 0, 0]) == S
    assert hash(VertexSet.of(6, [0, 5])) == hash(S)


def test_vertex_set_rejects_out_of_range():
    with pytest.raises(DimensionError):
        VertexSet.of(3, [3])
    with pytest.raises(DimensionError):
        VertexSet(3, 1 << 3)
    with pytest.raises(DimensionError):
        VertexSet.empty(3).with_vertex(5)


def test_pattern_is_immutable():
    A = worked_example()
    with pytest.raises(ValueError):
        A.entries[0, 1] = True
    with pytest.raises(DimensionError):
        PatternMatrix(np.zeros((2, 3), dtype=bool))
    with pytest.raises(DimensionError):
        PatternMatrix(np.zeros((0, 0), dtype=bool))


def test_graph_of_worked_example():
    G = graph_of(worked_example())
    expected = {
        (0, 0), (0, 1), (0, 4), (0, 5),  # x1 -> x1, x2, x5, x6
        (1, 2),  # x2 -> x3
        (2, 3),  # x3 -> x4
        (3, 4),  # x4 -> x5
        (5, 1),  # x6 -> x2
    }
    assert set(G.edges()) == expected
    assert G.edge_count == 8


def test_graph_of_trivial_patterns():
    G = graph_of(PatternMatrix.zeros(3))
    assert G.n == 3 and G.edges() == []
    G = graph_of(PatternMatrix.identity(4))
    assert G.edges() == [(0, 0), (1, 1), (2, 2), (3, 3)]


def test_graph_column_is_source():
    A = PatternMatrix.from_rows(["00", "x0"])  # A[1][0] star
    assert graph_of(A).edges() == [(0, 1)]


def test_in_out_adjacency_consistent():
    G = graph_of(worked_example())
    for u in range(G.n):
        for v in G.out_adj[u]:
            assert u in G.in_adj[v]
    for v in range(G.n):
        for u in G.in_adj[v]:
            assert v in G.out_adj[u]


def test_duplicate_edges_collapse():
    G = LoopDigraph.from_edges(2, [(0, 1), (0, 1), (1, 1)])
    assert G.edges() == [(0, 1), (1, 1)]


def test_modified_pattern_worked_example():
    Ax = modified_pattern(worked_example())
    assert Ax.rows() == [
        "x00000",
        "xx000x",
        "0xx000",
        "00xx00",
        "x00xx0",
        "x0000x",
    ]


def test_modified_pattern_trivial():
    I = PatternMatrix.identity(3)
    assert modified_pattern(I) == I
    assert modified_pattern(PatternMatrix.zeros(2)).rows() == ["x0", "0x"]


def test_input_pattern():
    B = input_pattern(X(6, 1), 6)
    assert B.columns == (0,)
    arr = B.to_array()
    assert arr.shape == (6, 1) and arr[0, 0] and arr.sum() == 1
    assert input_pattern(VertexSet.empty(4), 4).to_array().shape == (4, 0)
    assert np.array_equal(input_pattern(VertexSet.full(3), 3).to_array(), np.eye(3, dtype=bool))
    assert input_pattern([4, 1], 5).columns == (1, 4)
    with pytest.raises(DimensionError):
        input_pattern([6], 6)
    with pytest.raises(DimensionError):
        InputPattern(3, (1, 1))


@given(patterns)
def test_modified_pattern_idempotent(A):
    assert modified_pattern(modified_pattern(A)) == modified_pattern(A)


@given(patterns)
def test_modified_graph_adds_only_missing_loops(A):
    G, Gx = graph_of(A), graph_of(modified_pattern(A))
    added = set(Gx.edges()) - set(G.edges())
    assert set(G.edges()) <= set(Gx.edges())
    assert added == {(i, i) for i in range(A.n) if not A[i, i]}


@given(patterns, st.randoms(use_true_random=False))
@settings(max_examples=60)
def test_relabel_commutes(A, rnd):
    perm = list(range(A.n))
    rnd.shuffle(perm)
    assert graph_of(A.relabel(perm)) == graph_of(A).relabel(perm)
    assert modified_pattern(A.relabel(perm)) == modified_pattern(A).relabel(perm)


@given(patterns)
def test_pattern_graph_round_trip(A):
    assert pattern_of(graph_of(A)) == A


def test_relabel_moves_entries():
    A = PatternMatrix.from_rows(["0x", "00"])  # edge 1 -> 0
    B = A.relabel([1, 0])
    assert B.rows() == ["00", "x0"]
    rnd = random.Random(1)
    perm = list(range(6))
    rnd.shuffle(perm)
    S = X(6, 1, 3)
    assert S.relabel(perm) == VertexSet.of(6, [perm[0], perm[2]])
