import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boolnet_forge.boolfunc import AND, XOR, nondegenerate_tables, tabulate
from boolnet_forge.coding import parse_metric
from boolnet_forge.decouple import (
    CONVENTIONS,
    PRIMARY,
    Biclique,
    BipartiteGraph,
    NodePair,
    build_bipartite,
    calibrate,
    candidates,
    enumerate_klipschitz_pairs,
    find_biclique,
    max_edge_biclique,
    maximal_bicliques,
    pair_rows,
    two_node_network,
    verify_decoupling,
)
from boolnet_forge.errors import IndexOutOfRange, SignatureMismatch
from boolnet_forge.graph import evaluate, validate
from helpers import naive_min_lipschitz


@pytest.fixture(scope="module")
def pairs2():
    return enumerate_klipschitz_pairs(2)


@pytest.fixture(scope="module")
def graph2(pairs2):
    return build_bipartite(pairs2)


def test_candidates_are_sum_major():
    cands = candidates()
    tabs = nondegenerate_tables(2)
    assert len(cands) == 100
    assert cands[0] == NodePair(tabs[0], tabs[0])
    assert cands[13] == NodePair(tabs[1], tabs[3])


def _oracle_outputs(f1, f0, idx):
    c, a1, a0 = bool(idx & 1), bool(idx & 2), bool(idx & 4)
    s1, t = f1.g_s(c, a1), f1.g_t(c, a1)
    s0, q = f0.g_s(t, a0), f0.g_t(t, a0)
    return s1, s0, q


def test_network_matches_hand_composition():
    f = NodePair(XOR, AND)
    net = two_node_network(f, f)
    assert validate(net).ok
    tables = tabulate(net)
    for idx in range(8):
        want = _oracle_outputs(f, f, idx)
        assert tuple(bool((t.mask >> idx) & 1) for t in tables) == want


def test_no_path_from_a0_to_s1():
    net = two_node_network(NodePair(XOR, AND), NodePair(XOR, AND))
    reach, frontier = {"a0"}, ["a0"]
    while frontier:
        e = frontier.pop()
        for v in net.vertices:
            if e in v.ins:
                for o in v.outs:
                    if o not in reach:
                        reach.add(o)
                        frontier.append(o)
    assert "s1" not in reach
    assert {"s0", "q"} <= reach


def test_network_rejects_non_pairs():
    with pytest.raises(SignatureMismatch):
        two_node_network(XOR, AND)


def test_reproduces_pair_count(pairs2):
    assert len(pairs2) == 376
    assert pairs2 == sorted(pairs2)


@pytest.mark.parametrize("k,count", [(0, 0), (8, 10_000), (7, 10_000)])
def test_extreme_k(k, count):
    assert len(enumerate_klipschitz_pairs(k)) == count


def test_monotone_in_k(pairs2):
    p1 = set(enumerate_klipschitz_pairs(1))
    p3 = set(enumerate_klipschitz_pairs(3))
    assert p1 <= set(pairs2) <= p3


def test_deterministic_across_jobs(pairs2):
    assert enumerate_klipschitz_pairs(2, jobs=3) == pairs2
    assert pair_rows(enumerate_klipschitz_pairs(2, jobs=2)) == pair_rows(pairs2)


def test_membership_agrees_with_interpreter_oracle(pairs2):
    # rebuild a sample of networks and measure them with the naive pair loop
    d, e = PRIMARY.metrics()
    d_ref, e_ref = parse_metric("L1: bin[3]"), parse_metric("L1: bin[3]")
    assert (d, e) == (d_ref, e_ref)
    members = set(pairs2)
    cands = candidates()
    rnd = random.Random(7)
    sample = rnd.sample(range(10_000), 150) + [u * 100 + v for u, v in pairs2[:20]]
    for code in sample:
        u, v = divmod(code, 100)
        net = two_node_network(cands[u], cands[v])

        def fn(x, net=net):
            out = evaluate(net, {}, dict(zip(net.inputs, x)))
            return tuple(out[p] for p in net.priout)

        k = naive_min_lipschitz(fn, 3, d_ref, e_ref)
        assert (k <= 2) == ((u, v) in members), (u, v, k)


def test_build_bipartite(pairs2):
    g = build_bipartite(pairs2)
    assert len(g.left) == len(g.right) == 100
    assert len(g.edges) == 376
    assert build_bipartite([]).edges == frozenset()
    assert len(build_bipartite([(1, 2), (1, 2)]).edges) == 1
    with pytest.raises(IndexOutOfRange):
        build_bipartite([(100, 0)])


def test_biclique_of_experiment(graph2):
    b = max_edge_biclique(graph2)
    assert b.is_biclique_of(graph2)
    assert b.edge_count >= 60
    assert b.size == (6, 10)
    six_ten = find_biclique(graph2, 6, 10)
    ten_six = find_biclique(graph2, 10, 6)
    assert six_ten is not None and six_ten.is_biclique_of(graph2)
    assert ten_six is None


def test_verify_decoupling(graph2):
    b = max_edge_biclique(graph2)
    assert verify_decoupling(graph2, b, 2)
    assert verify_decoupling(graph2, Biclique((), ()), 2)
    u = b.S1[0]
    outsider = next(v for v in range(100) if (u, v) not in graph2.edges)
    assert not verify_decoupling(graph2, Biclique(b.S1, b.S0 + (outsider,)), 2)
    with pytest.raises(IndexOutOfRange):
        verify_decoupling(graph2, Biclique((100,), (0,)), 2)


def test_cross_validation_on_maximal_bicliques(graph2):
    for i, b in enumerate(maximal_bicliques(graph2, min_edges=1)):
        assert b.is_biclique_of(graph2)
        if i % 5 == 0:
            assert verify_decoupling(graph2, b, 2)


def _small_graph(n_left, n_right, edges):
    cands = candidates()
    return BipartiteGraph(cands[:n_left], cands[:n_right], edges)


def test_complete_and_empty_graphs():
    full = _small_graph(3, 3, set(itertools.product(range(3), range(3))))
    assert max_edge_biclique(full).edge_count == 9
    assert max_edge_biclique(_small_graph(3, 3, set())).edge_count == 0


def _brute_max_edges(g):
    nb = g.neighbours()
    best = 0
    for r in range(1, len(g.left) + 1):
        for S in itertools.combinations(range(len(g.left)), r):
            common = (1 << len(g.right)) - 1
            for u in S:
                common &= nb[u]
            best = max(best, r * bin(common).count("1"))
    return best


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.integers(1, 7), st.data())
def test_max_edge_biclique_matches_bruteforce(n_left, n_right, data):
    all_edges = list(itertools.product(range(n_left), range(n_right)))
    edges = data.draw(st.sets(st.sampled_from(all_edges)))
    g = _small_graph(n_left, n_right, edges)
    b = max_edge_biclique(g)
    assert b.is_biclique_of(g)
    assert b.edge_count == _brute_max_edges(g)


def test_biclique_json():
    b = Biclique((0, 6), (1, 2, 3))
    assert b.to_json() == {"S1": [0, 6], "S0": [1, 2, 3], "size": [2, 3]}


def test_calibration_table():
    rows = calibrate(2)
    assert len(rows) == len(CONVENTIONS) == 8
    counts = {c: n for c, n in rows}
    assert counts[PRIMARY] == 376
    assert len({c.name for c in CONVENTIONS}) == 8
