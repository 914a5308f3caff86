import numpy as np

from regtail import verify
from regtail.graphs import SimpleGraph, named_pattern


def test_sweeps_clean():
    assert verify.sweep_finner(("k3",), instances=50, seed=1) == []
    assert verify.sweep_edge_rooted(("c4",), instances=25, seed=2) == []
    assert verify.sweep_outside_edge(("k3",), instances=25, seed=3) == []
    assert verify.sweep_spanning_excess(("k4",), instances=20, seed=4) == []
    assert verify.sweep_power_sum(trials=500, seed=5) == []
    assert verify.sweep_split_cost(k_max=40) == []
    assert verify.sweep_chernoff(n_max=40) == []
    assert verify.sweep_dyadic(trials=500, seed=6) == []
    assert verify.sweep_bk("k3", n_values=(5, 6)) == []
    assert verify.sweep_peel(("k3",), k_values=(2, 5), n=40) == []


def test_replay_each_target():
    records = [
        {"target": "lemma6", "pattern": "k3", "n": 4,
         "edges": [[0, 1], [1, 2], [0, 2]]},
        {"target": "lemma7", "pattern": "k3", "n": 6, "p": 0.2, "edge": [0, 1],
         "planted_edges": [[0, 1], [1, 2]]},
        {"target": "lemma7_outside", "pattern": "k3", "n": 6, "p": 0.2,
         "edge": [0, 5], "planted_edges": [[0, 1], [1, 2], [0, 2], [0, 5]]},
        {"target": "lemma9", "pattern": "c4", "n": 4,
         "edges": [[0, 1], [1, 2], [2, 3], [0, 3]]},
        {"target": "lemma17", "xs": [1.0, 2.0, 0.5], "p": 3.0},
        {"target": "lemma18", "k": 17, "a": 2.5, "q": 4},
        {"target": "chernoff", "N": 30, "M": 11, "p": 0.2},
        {"target": "dyadic", "l_list": [2, 9, 33]},
        {"target": "bk", "pattern": "k3", "n": 5, "p": 0.15},
        {"target": "poisson", "pattern": "k3", "n": 40, "p": 0.025,
         "samples": 3000, "seed": 0},
        {"target": "peel", "pattern": "k3", "n": 40, "k": 3},
    ]
    for record in records:
        result = verify.replay(record)
        assert result["ok"] is True, record["target"]


def test_pattern_payload_roundtrip():
    p = named_pattern("c4")
    payload = verify._pattern_payload(p)
    assert verify.pattern_from_payload(payload) == p
    named = verify._pattern_payload(p, "c4")
    assert verify.pattern_from_payload(named) == p


def test_sweep_outputs_are_replayable_shape():
    # fabricate a violation-like record by hand and ensure replay recomputes
    g = SimpleGraph(4, [(0, 1), (1, 2), (0, 2)])
    rec = verify.check_finner(named_pattern("k3"), g)
    assert rec is None  # the bound genuinely holds


def test_random_graph_generator_is_seeded():
    a = verify._random_graph(np.random.default_rng(9), 8)
    b = verify._random_graph(np.random.default_rng(9), 8)
    assert a == b
