from fractions import Fraction

import pytest

from lerslab.dualgraph import build_dual
from lerslab.lattice import build_complex
from lerslab.oracle import (
    EnumerationCapExceeded,
    ExactDistribution,
    enumerate_trees,
    exact_mn_distribution,
    read_distribution,
    total_variation,
    write_distribution,
)
from lerslab.ust import Multigraph, complete_graph, count_spanning_trees, cycle_graph, is_spanning_tree, triangle

# frozen after the first full enumeration (1,157,625 trees)
N2_COUNTS = {4: 275625, 8: 302400, 10: 210600, 12: 273078, 14: 58320, 16: 33084, 18: 1800, 20: 2610, 24: 108}


@pytest.mark.parametrize(
    "graph",
    [
        triangle(),
        complete_graph(4),
        complete_graph(5),
        cycle_graph(6),
        build_dual(build_complex(1)),
        Multigraph.from_edges(4, [(0, 1), (0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3), (1, 3)]),
    ],
    ids=["triangle", "k4", "k5", "c6", "dual-n1", "multigraph"],
)
def test_enumeration_is_exact(graph):
    trees = list(enumerate_trees(graph))
    assert len(trees) == len(set(trees)) == count_spanning_trees(graph)
    assert all(is_spanning_tree(graph, t) for t in trees)


def test_enumeration_root_does_not_matter():
    g = complete_graph(5)
    assert set(enumerate_trees(g, root=0)) == set(enumerate_trees(g, root=3))


def test_enumeration_counts():
    assert len(list(enumerate_trees(build_dual(build_complex(1))))) == 6
    assert len(list(enumerate_trees(triangle()))) == 3
    assert len(list(enumerate_trees(complete_graph(4)))) == 16


def test_cap_refusal_reports_count():
    with pytest.raises(EnumerationCapExceeded) as info:
        enumerate_trees(complete_graph(6), cap=100)
    assert info.value.count == 1296


def test_disconnected_graph_has_no_trees():
    assert list(enumerate_trees(Multigraph.from_edges(4, [(0, 1), (2, 3)]))) == []


def test_exact_n1(tmp_path):
    d = exact_mn_distribution(1, directory=tmp_path)
    assert d.tree_count == 6
    assert d.probabilities == {1: Fraction(5, 6), 5: Fraction(1, 6)}
    assert d.mean == Fraction(5, 3)
    assert sum(d.probabilities.values()) == 1


def test_exact_n2_regression(oracle_cache):
    d = exact_mn_distribution(2)
    assert d.tree_count == 1157625 == count_spanning_trees(build_dual(build_complex(2)))
    assert d.counts == N2_COUNTS
    assert sum(d.probabilities.values()) == 1
    # every support point is a feasible size
    assert min(d.counts) >= 4 and max(d.counts) <= 3 * 4 * 3 - 8


def test_exact_n3_refused_under_small_cap(tmp_path):
    with pytest.raises(EnumerationCapExceeded):
        exact_mn_distribution(3, cap=10**7, directory=tmp_path)


def test_cache_round_trip(tmp_path):
    d = ExactDistribution(n=2, tree_count=10, counts={4: 7, 8: 3})
    path = tmp_path / "x.tsv"
    write_distribution(d, path, cap=99)
    text = path.read_text()
    assert "# format_version\t1" in text and "size\tcount\tprobability" in text
    assert read_distribution(path) == d


def test_cache_is_used(tmp_path):
    exact_mn_distribution(1, directory=tmp_path)
    (path,) = tmp_path.iterdir()
    # doctor the cached record; a cache hit must return it verbatim
    text = path.read_text().replace("1\t5\t5/6", "1\t4\t2/3").replace("5\t1\t1/6", "5\t2\t1/3")
    path.write_text(text)
    assert exact_mn_distribution(1, directory=tmp_path).counts == {1: 4, 5: 2}
    assert exact_mn_distribution(1, directory=tmp_path, use_cache=False).counts == {1: 5, 5: 1}


def test_corrupt_cache_rejected(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("# format_version\t1\n# n\t1\n# tree_count\t6\nsize\tcount\n1\t4\n")
    with pytest.raises(ValueError):
        read_distribution(path)


def test_total_variation():
    d = ExactDistribution(n=1, tree_count=6, counts={1: 5, 5: 1})
    assert total_variation({1: 5, 5: 1}, d) == pytest.approx(0.0)
    assert total_variation({1: 1}, d) == pytest.approx(1 / 6)
    assert total_variation({2: 1}, d) == pytest.approx(1.0)
