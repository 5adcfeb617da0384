from collections import Counter

import numpy as np
import pytest
from scipy import stats

from lerslab.dualgraph import build_dual
from lerslab.lattice import build_complex
from lerslab.oracle import enumerate_trees
from lerslab.rng import RngStream
from lerslab.ust import (
    Move,
    Multigraph,
    StepCapExceeded,
    TreeEdgeAdded,
    aldous_broder,
    complete_graph,
    count_spanning_trees,
    cycle_graph,
    is_spanning_tree,
    loop_erase,
    path_graph,
    triangle,
    wilson,
)


def small_graphs():
    return {
        "triangle": triangle(),
        "k4": complete_graph(4),
        "cycle4": cycle_graph(4),
        "path3": path_graph(3),
        "dual-n1": build_dual(build_complex(1)),
        "triangle-doubled": Multigraph.from_edges(3, [(0, 1), (0, 1), (1, 2), (0, 2)]),
        "k4-plus": Multigraph.from_edges(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4), (4, 0)]),
    }


def test_count_examples():
    assert count_spanning_trees(build_dual(build_complex(1))) == 6
    assert count_spanning_trees(triangle()) == 3
    assert count_spanning_trees(complete_graph(4)) == 16
    assert count_spanning_trees(complete_graph(6)) == 6**4
    assert count_spanning_trees(path_graph(5)) == 1
    assert count_spanning_trees(Multigraph(3, [(0, 1)])) == 0


def test_count_dual_n2_and_n3_exact():
    assert count_spanning_trees(build_dual(build_complex(2))) == 1157625
    # a big integer, must stay exact; cross-check against float determinant
    g3 = build_dual(build_complex(3))
    exact = count_spanning_trees(g3)
    from lerslab.ust import laplacian

    sign, logdet = np.linalg.slogdet(laplacian(g3)[1:, 1:].astype(float))
    assert sign > 0 and abs(np.log(float(exact)) - logdet) < 1e-9


@pytest.mark.parametrize("name", list(small_graphs()))
def test_samplers_always_return_spanning_trees(name):
    g = small_graphs()[name]
    r = RngStream(11)
    for _ in range(200):
        for t in (aldous_broder(g, 0, r), wilson(g, 0, r)):
            assert is_spanning_tree(g, t.edges.tolist())
            assert len(t) == g.num_vertices - 1


def test_path_graph_has_one_tree():
    g = path_graph(3)
    r = RngStream(1)
    assert {wilson(g, 1, r).edge_set() for _ in range(50)} == {frozenset({0, 1})}
    assert {aldous_broder(g, 0, r).edge_set() for _ in range(50)} == {frozenset({0, 1})}


def test_parent_edges_point_to_root():
    g = complete_graph(5)
    for sampler in (aldous_broder, wilson):
        t = sampler(g, 2, RngStream(4))
        assert t.parent_edge[2] == -1
        for v in range(5):
            seen = 0
            while v != 2:
                v = g.other_end(int(t.parent_edge[v]), v)
                seen += 1
                assert seen <= 5


def test_visitor_event_stream():
    g = complete_graph(5)
    events = []
    t = aldous_broder(g, 0, RngStream(7), visitor=events.append)
    moves = [e for e in events if isinstance(e, Move)]
    added = [e for e in events if isinstance(e, TreeEdgeAdded)]
    assert len(moves) == t.steps
    assert len(added) == 4
    assert len({a.new for a in added}) == 4 and 0 not in {a.new for a in added}
    # each addition immediately follows the move that entered the new vertex
    for i, ev in enumerate(events):
        if isinstance(ev, TreeEdgeAdded):
            prev = events[i - 1]
            assert isinstance(prev, Move) and (prev.edge, prev.src, prev.dst) == (ev.edge, ev.old, ev.new)
    # walk is continuous
    for a, b in zip(moves, moves[1:]):
        assert a.dst == b.src


def test_step_cap_on_disconnected_graph():
    g = Multigraph.from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(StepCapExceeded):
        aldous_broder(g, 0, RngStream(0), step_cap=1000)
    with pytest.raises(StepCapExceeded):
        wilson(g, 0, RngStream(0), step_cap=1000)


def test_default_step_cap_formula():
    g = build_dual(build_complex(2))
    assert g.default_step_cap() == int(1e4 * 9 * np.log2(10))


def tree_frequencies(sampler, g, runs, seed):
    r = RngStream(seed)
    return Counter(sampler(g, 0, r).edge_set() for _ in range(runs))


@pytest.mark.parametrize("name", list(small_graphs()))
@pytest.mark.parametrize("sampler", [aldous_broder, wilson], ids=["aldous-broder", "wilson"])
def test_uniformity_chi_square(name, sampler):
    g = small_graphs()[name]
    trees = {frozenset(t) for t in enumerate_trees(g)}
    per_tree = 60
    counts = tree_frequencies(sampler, g, per_tree * len(trees), seed=2024)
    assert set(counts) <= trees
    if len(trees) == 1:
        return
    obs = [counts.get(t, 0) for t in trees]
    assert stats.chisquare(obs).pvalue >= 0.01


def test_samplers_agree_in_distribution_two_sample():
    g = build_dual(build_complex(1))
    ab = tree_frequencies(aldous_broder, g, 6000, 1)
    wi = tree_frequencies(wilson, g, 6000, 2)
    keys = sorted(set(ab) | set(wi), key=sorted)
    table = np.array([[ab.get(k, 0) for k in keys], [wi.get(k, 0) for k in keys]])
    assert stats.chi2_contingency(table).pvalue >= 0.01


def test_loop_erase_examples():
    assert loop_erase(["a", "b", "c"]) == ["a", "b", "c"]
    assert loop_erase(["a", "b", "a", "c"]) == ["a", "c"]
    assert loop_erase([0, 1, 2, 1, 2, 3, 0, 4]) == [0, 4]
    assert loop_erase([]) == []


def test_loop_erase_checks_adjacency():
    g = path_graph(4)
    assert loop_erase([0, 1, 2, 1, 2, 3], graph=g) == [0, 1, 2, 3]
    with pytest.raises(ValueError):
        loop_erase([0, 2], graph=g)


def test_loop_erase_random_walks_on_cycle():
    g = cycle_graph(4)
    r = RngStream(99)
    for _ in range(10000):
        walk = [0]
        for _ in range(1 + r.randbelow(12)):
            v = walk[-1]
            walk.append(g.other_end(int(g.incident_edges(v)[r.randbelow(2)]), v))
        erased = loop_erase(walk, graph=g)
        assert len(erased) == len(set(erased))
        assert erased[0] == walk[0] and erased[-1] == walk[-1]
        assert all(g.adjacent(a, b) for a, b in zip(erased, erased[1:]))


def test_self_loops_rejected():
    with pytest.raises(ValueError):
        Multigraph(2, [(0, 0)])
