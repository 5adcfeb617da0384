import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lerslab.lattice import (
    Chain1,
    Chain2,
    build_complex,
    equatorial_loop,
    horizontal_plane,
    initial_surface,
    shifted_surface,
)


def brute_force_cells(n):
    """Edges and unit squares of the grid [0, n]^3 as frozensets of vertex tuples."""
    verts = set(itertools.product(range(n + 1), repeat=3))
    units = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    add = lambda p, q: tuple(a + b for a, b in zip(p, q))  # noqa: E731
    edges = {frozenset((v, add(v, u))) for v in verts for u in units if add(v, u) in verts}
    faces = set()
    for v in verts:
        for u, w in itertools.combinations(units, 2):
            sq = (v, add(v, u), add(add(v, u), w), add(v, w))
            if all(c in verts for c in sq):
                faces.add(frozenset(sq))
    cubes = [v for v in verts if all(c < n for c in v)]
    return verts, edges, faces, cubes


@pytest.mark.parametrize("n", range(1, 9))
def test_counts_match_closed_forms_and_brute_force(n):
    cx = build_complex(n)
    verts, edges, faces, cubes = brute_force_cells(n)
    assert cx.num_vertices == len(verts) == (n + 1) ** 3
    assert cx.num_edges == len(edges) == 3 * n * (n + 1) ** 2
    assert cx.num_faces == len(faces) == 3 * n**2 * (n + 1)
    assert cx.num_cubes == len(cubes) == n**3
    assert len(cx.face_edges) == cx.num_faces
    assert len(cx.edge_vertices) == cx.num_edges


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_cells_are_exactly_the_brute_force_cells(n):
    cx = build_complex(n)
    _, edges, faces, _ = brute_force_cells(n)
    vcoord = {i: tuple(int(c) for c in np.unravel_index(i, (n + 1,) * 3)) for i in range(cx.num_vertices)}
    built_edges = {frozenset(vcoord[int(v)] for v in ev) for ev in cx.edge_vertices}
    assert built_edges == edges
    built_faces = {frozenset(map(tuple, cx.face_vertices(f).tolist())) for f in range(cx.num_faces)}
    assert built_faces == faces
    for f in range(cx.num_faces):
        corners = frozenset(map(tuple, cx.face_vertices(f).tolist()))
        for e in cx.face_edges[f]:
            assert {vcoord[int(v)] for v in cx.edge_vertices[e]} <= corners


def test_small_examples():
    c1 = build_complex(1)
    assert (c1.num_vertices, c1.num_edges, c1.num_faces, c1.num_cubes) == (8, 12, 6, 1)
    c2 = build_complex(2)
    assert (c2.num_vertices, c2.num_edges, c2.num_faces, c2.num_cubes) == (27, 54, 36, 8)


def test_rejects_bad_sizes():
    with pytest.raises(ValueError):
        build_complex(0)
    with pytest.raises(TypeError):
        build_complex(2.5)


def test_dense_index_order_is_axis_major_then_lexicographic():
    cx = build_complex(3)
    assert cx.face_index(0, (0, 0, 0)) == 0
    assert cx.face_index(0, (0, 0, 1)) == 1
    assert cx.face_index(1, (0, 0, 0)) == cx.num_faces // 3
    assert np.all(np.diff(cx.face_axis) >= 0)
    for axis in range(3):
        anchors = cx.face_anchor[cx.face_axis == axis]
        keys = [tuple(a) for a in anchors.tolist()]
        assert keys == sorted(keys)


def test_tables_are_read_only():
    cx = build_complex(2)
    with pytest.raises(ValueError):
        cx.face_edges[0, 0] = 1


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_incidence_tables_well_formed(n):
    cx = build_complex(n)
    assert all(len(set(row)) == 4 for row in cx.face_edges.tolist())
    assert all(len(set(row)) == 6 for row in cx.cube_faces.tolist())
    assert cx.face_edges.max() < cx.num_edges and cx.cube_faces.max() < cx.num_faces


@pytest.mark.parametrize("n", [1, 2, 4])
def test_boundary_of_boundary_vanishes(n):
    cx = build_complex(n)
    for cube in range(cx.num_cubes):
        assert not cx.boundary_2(cx.cube_boundary(cube))
    for f in range(cx.num_faces):
        assert not cx.boundary_1(cx.boundary_2(cx.chain2([f]))).any()


def test_boundary_examples():
    cx = build_complex(2)
    one = cx.chain2([0])
    assert len(cx.boundary_2(one)) == 4
    shared = [f for f in range(cx.num_faces) if f != 0 and set(cx.face_edges[f]) & set(cx.face_edges[0])][0]
    assert len(cx.boundary_2(cx.chain2([0, shared]))) == 6
    assert len(cx.boundary_2(cx.cube_boundary(3))) == 0


def test_boundary_rejects_foreign_chains():
    cx = build_complex(2)
    with pytest.raises(IndexError):
        cx.boundary_2(build_complex(1).chain2([0]))
    with pytest.raises(IndexError):
        cx.chain2([cx.num_faces])
    with pytest.raises(TypeError):
        cx.boundary_2(cx.chain1([0]))


def test_equatorial_loop_n1_is_bottom_square():
    cx = build_complex(1)
    loop = equatorial_loop(1)
    assert len(loop) == 4
    bottom = cx.face_index(2, (0, 0, 0))
    assert loop == cx.boundary_2(cx.chain2([bottom]))


def test_equatorial_loop_n2_height():
    cx = build_complex(2)
    loop = equatorial_loop(2)
    assert len(loop) == 8
    z = {int(cx.edge_anchor[e][2]) for e in loop}
    assert z == {1}
    assert set(cx.edge_axis[loop.indices()].tolist()) == {0, 1}


@pytest.mark.parametrize("n", range(1, 9))
def test_loop_is_cycle_bounding_initial_surface(n):
    cx = build_complex(n)
    loop = equatorial_loop(n)
    assert len(loop) == 4 * n
    assert not cx.boundary_1(loop).any()
    s0 = initial_surface(n)
    assert len(s0) == n * n
    assert cx.boundary_2(s0) == loop
    alt = shifted_surface(n)
    assert cx.boundary_2(alt) == loop
    assert not (alt.mask & s0.mask).any()


def test_initial_surface_examples():
    assert len(initial_surface(1)) == 1
    assert len(initial_surface(5)) == 25
    with pytest.raises(ValueError):
        horizontal_plane(3, 4)


def test_chain_basics():
    c = Chain2.from_indices(10, [1, 3, 3, 5])
    assert c.indices().tolist() == [1, 5]
    assert 1 in c and 3 not in c
    assert len(c + c) == 0
    assert c != Chain1.from_indices(10, [1, 5])
    with pytest.raises(TypeError):
        c + Chain1.from_indices(10, [1])
    with pytest.raises(ValueError):
        c + Chain2.from_indices(11, [1])


chains = st.lists(st.integers(0, 63), max_size=40).map(lambda idx: Chain2.from_indices(64, idx))


@settings(max_examples=200, deadline=None)
@given(chains, chains, chains)
def test_chain_addition_is_an_abelian_group_of_exponent_two(a, b, c):
    zero = Chain2.empty(64)
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a + a == zero
    assert a + zero == a


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 35), max_size=20), st.lists(st.integers(0, 35), max_size=20))
def test_boundary_is_linear(x, y):
    cx = build_complex(2)
    a, b = cx.chain2(x), cx.chain2(y)
    assert cx.boundary_2(a + b) == cx.boundary_2(a) + cx.boundary_2(b)
