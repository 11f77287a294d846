"""Score vectors: closed forms, oracle agreement, aggregation, CSV output."""

from __future__ import annotations

import io
import math

import numpy as np
import pytest

from communifind import (
    Graph,
    KrylovParams,
    ScoreVector,
    accumulate,
    clique,
    expm_action,
    expm_dense_oracle,
    generate,
    subgraph_centrality,
    total_communicability,
    write_scores_csv,
)
from conftest import mixed_model_spec


# =====================================================================
# Closed forms
# =====================================================================


def test_closed_walk_score_single_edge():
    sv = subgraph_centrality(clique(2).to_graph())
    # exp([[0,1],[1,0]]) has cosh(1) on the diagonal
    assert sv.scores == pytest.approx([math.cosh(1.0)] * 2, rel=1e-14)
    assert sv.scores[0] == pytest.approx(1.5430806348152437, rel=1e-15)


def test_closed_walk_score_triangle():
    sv = subgraph_centrality(clique(3).to_graph())
    # spectrum {2, -1, -1} with equal diagonal weight: (e^2 + 2 e^-1) / 3
    expected = (math.exp(2.0) + 2.0 * math.exp(-1.0)) / 3.0
    assert expected == pytest.approx(2.7082716604245114, rel=1e-15)
    assert sv.scores == pytest.approx([expected] * 3, rel=1e-14)


def test_row_sum_score_single_edge():
    sv = total_communicability(clique(2).to_graph())
    assert sv.scores == pytest.approx([math.e, math.e], rel=1e-12)


def test_isolated_nodes_score_exactly_one():
    g = Graph.from_pairs(4, [(0, 1)])
    sv = total_communicability(g)
    assert sv.scores[2] == pytest.approx(1.0, rel=1e-12)
    assert sv.scores[3] == pytest.approx(1.0, rel=1e-12)


# =====================================================================
# Agreement with the dense oracle
# =====================================================================


@pytest.mark.parametrize("index", range(0, 24, 3))
def test_closed_walk_matches_oracle_diagonal(index):
    g = generate(mixed_model_spec(index, max_n=150))
    sv = subgraph_centrality(g)
    reference = np.diag(expm_dense_oracle(g))
    assert sv.scores == pytest.approx(reference, rel=1e-10)


@pytest.mark.parametrize("index", range(0, 24, 3))
def test_row_sum_matches_oracle(index):
    g = generate(mixed_model_spec(index, max_n=150))
    sv = total_communicability(g, KrylovParams(tol=1e-10))
    reference = expm_dense_oracle(g).sum(axis=1)
    rel = np.linalg.norm(sv.scores - reference) / np.linalg.norm(reference)
    assert rel <= 1e-8


def test_row_sum_is_the_ones_action():
    g = generate(mixed_model_spec(2, max_n=100))
    params = KrylovParams(tol=1e-9)
    sv = total_communicability(g, params)
    direct = expm_action(g, np.ones(g.n), params)
    assert np.array_equal(sv.scores, direct.value)


def test_scores_at_least_one():
    # every node contributes the length-0 walk, so scores cannot dip below 1
    for index in (1, 5, 9):
        g = generate(mixed_model_spec(index, max_n=200))
        assert total_communicability(g).scores.min() >= 1.0 - 1e-9
        if g.n <= 512:
            assert subgraph_centrality(g).scores.min() >= 1.0 - 1e-9


def test_dense_path_node_limit_points_at_krylov_path():
    g = Graph.from_pairs(600, [(0, 1)])
    with pytest.raises(ValueError, match="total_communicability"):
        subgraph_centrality(g)


# =====================================================================
# Score vector container
# =====================================================================


def test_score_vector_validation():
    with pytest.raises(ValueError):
        ScoreVector(scores=np.ones((2, 2)), kind="tc")
    with pytest.raises(ValueError):
        ScoreVector(scores=np.array([1.0, np.inf]), kind="tc")
    with pytest.raises(ValueError):
        ScoreVector(scores=np.ones(2), kind="bogus")
    with pytest.raises(ValueError):
        ScoreVector(scores=np.ones(2), kind="tc", num_backgrounds=0)


def test_score_vector_is_frozen_and_detached():
    owner = np.array([1.0, 2.0])
    sv = ScoreVector(scores=owner, kind="tc")
    with pytest.raises(ValueError):
        sv.scores[0] = 9.0
    owner[0] = 9.0  # caller's array must stay writable
    assert sv.scores[0] == 1.0


# =====================================================================
# Aggregation over backgrounds
# =====================================================================


def test_accumulate_sums_entrywise():
    a = ScoreVector(scores=np.array([1.0, 2.0, 3.0]), kind="tc")
    b = ScoreVector(scores=np.array([10.0, 20.0, 30.0]), kind="tc")
    out = accumulate([a, b])
    assert out.kind == "tc_sum"
    assert out.num_backgrounds == 2
    assert out.scores == pytest.approx([11.0, 22.0, 33.0])


def test_accumulate_single_vector_keeps_values():
    a = ScoreVector(scores=np.array([4.0, 5.0]), kind="tc")
    out = accumulate([a])
    assert out.kind == "tc_sum" and out.num_backgrounds == 1
    assert np.array_equal(out.scores, a.scores)


def test_accumulate_is_sum_not_mean():
    vs = [ScoreVector(scores=np.full(3, 2.0), kind="tc") for _ in range(5)]
    assert accumulate(vs).scores == pytest.approx([10.0, 10.0, 10.0])


def test_accumulate_order_invariant():
    rng = np.random.default_rng(0)
    vs = [ScoreVector(scores=rng.uniform(1, 50, size=40), kind="tc") for _ in range(6)]
    fwd = accumulate(vs).scores
    rev = accumulate(vs[::-1]).scores
    assert fwd == pytest.approx(rev, rel=1e-12)


def test_accumulate_rejections():
    a = ScoreVector(scores=np.ones(3), kind="tc")
    with pytest.raises(ValueError):
        accumulate([])
    with pytest.raises(ValueError):
        accumulate([a, ScoreVector(scores=np.ones(4), kind="tc")])
    with pytest.raises(ValueError):
        accumulate([a, ScoreVector(scores=np.ones(3), kind="sc")])
    with pytest.raises(ValueError):
        accumulate([accumulate([a]), a])  # no re-accumulating a sum


# =====================================================================
# CSV output
# =====================================================================


def test_csv_layout():
    sv = ScoreVector(scores=np.array([1.5, 2.25]), kind="tc")
    buf = io.StringIO()
    write_scores_csv(sv, buf)
    assert buf.getvalue() == "node,score\n0,1.5\n1,2.25\n"


def test_csv_round_trips_doubles_exactly():
    rng = np.random.default_rng(3)
    scores = rng.uniform(1.0, 1e6, size=64)
    sv = ScoreVector(scores=scores, kind="tc")
    buf = io.StringIO()
    write_scores_csv(sv, buf)
    lines = buf.getvalue().splitlines()[1:]
    parsed = np.array([float(line.split(",")[1]) for line in lines])
    assert np.array_equal(parsed, sv.scores)
    assert [int(line.split(",")[0]) for line in lines] == list(range(64))
