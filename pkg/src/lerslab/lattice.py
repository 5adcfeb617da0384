"""The cubical complex Q_n with dense cell indexing and GF(2) chains.

Vertices have integer coordinates in ``[0, n]^3``, so there are exactly
``n**3`` unit cubes. Cells of each dimension are indexed densely:
axis-major, then lexicographic order of the lowest corner ("anchor").
For edges the axis is the direction of the edge; for faces it is the
normal axis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

AXES = ("X", "Y", "Z")


class Chain:
    """A chain over GF(2), stored as a boolean mask over cell indices."""

    dim: int = -1

    __slots__ = ("mask",)

    def __init__(self, mask: np.ndarray):
        mask = np.asarray(mask)
        if mask.ndim != 1 or mask.dtype != np.bool_:
            raise TypeError("chain mask must be a 1-d boolean array")
        self.mask = mask

    @classmethod
    def empty(cls, size: int):
        return cls(np.zeros(size, dtype=bool))

    @classmethod
    def from_indices(cls, size: int, indices) -> "Chain":
        """Chain with coefficient 1 on ``indices``; repeated indices cancel."""
        idx = np.asarray(list(indices) if not isinstance(indices, np.ndarray) else indices,
                         dtype=np.int64).ravel()
        if idx.size and (idx.min() < 0 or idx.max() >= size):
            raise IndexError(f"cell index out of range for chain of size {size}")
        counts = np.bincount(idx, minlength=size)
        return cls((counts & 1).astype(bool))

    @property
    def size(self) -> int:
        return self.mask.size

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def copy(self):
        return type(self)(self.mask.copy())

    def _check(self, other) -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.size != self.size:
            raise ValueError("chains belong to complexes of different sizes")

    def __add__(self, other):
        self._check(other)
        return type(self)(self.mask ^ other.mask)

    __sub__ = __add__

    def __iadd__(self, other):
        self._check(other)
        self.mask ^= other.mask
        return self

    def __len__(self) -> int:
        return int(np.count_nonzero(self.mask))

    def __bool__(self) -> bool:
        return bool(self.mask.any())

    def __contains__(self, index: int) -> bool:
        return bool(self.mask[index])

    def __iter__(self):
        return iter(self.indices().tolist())

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self.size == other.size and bool(np.array_equal(self.mask, other.mask))

    __hash__ = None

    def __repr__(self) -> str:
        idx = self.indices()
        shown = ", ".join(map(str, idx[:8].tolist()))
        more = ", ..." if idx.size > 8 else ""
        return f"{type(self).__name__}(size={self.size}, cells=[{shown}{more}])"


class Chain1(Chain):
    """1-chain: a set of edge indices."""

    dim = 1
    __slots__ = ()


class Chain2(Chain):
    """2-chain: a set of face indices."""

    dim = 2
    __slots__ = ()


def _cell_shape(n: int, dim: int, axis: int) -> tuple[int, int, int]:
    # number of anchor positions along each coordinate
    m = n + 1
    if dim == 0:
        return (m, m, m)
    if dim == 3:
        return (n, n, n)
    if dim == 1:
        return tuple(n if a == axis else m for a in range(3))
    return tuple(m if a == axis else n for a in range(3))


def _unit(axis: int) -> np.ndarray:
    e = np.zeros(3, dtype=np.int64)
    e[axis] = 1
    return e


@dataclass(frozen=True, eq=False)
class CubicalComplex:
    """Cells of Q_n plus the face->edge and cube->face incidence tables.

    Arrays are marked read-only after construction; instances are safe to
    share between samplers.
    """

    n: int
    edge_vertices: np.ndarray = field(repr=False)  # (E, 2)
    face_edges: np.ndarray = field(repr=False)  # (F, 4)
    cube_faces: np.ndarray = field(repr=False)  # (C, 6)
    edge_axis: np.ndarray = field(repr=False)
    edge_anchor: np.ndarray = field(repr=False)
    face_axis: np.ndarray = field(repr=False)
    face_anchor: np.ndarray = field(repr=False)
    cube_anchor: np.ndarray = field(repr=False)

    @property
    def num_vertices(self) -> int:
        return (self.n + 1) ** 3

    @property
    def num_edges(self) -> int:
        return 3 * self.n * (self.n + 1) ** 2

    @property
    def num_faces(self) -> int:
        return 3 * self.n**2 * (self.n + 1)

    @property
    def num_cubes(self) -> int:
        return self.n**3

    def count(self, dim: int) -> int:
        return (self.num_vertices, self.num_edges, self.num_faces, self.num_cubes)[dim]

    # -- indexing -----------------------------------------------------------

    def _offset(self, dim: int, axis: int) -> int:
        if dim in (0, 3):
            return 0
        shape = _cell_shape(self.n, dim, 0)
        return axis * int(np.prod(shape))

    def _index(self, dim: int, axis: int, anchor) -> np.ndarray:
        shape = _cell_shape(self.n, dim, axis)
        anchor = np.asarray(anchor, dtype=np.int64)
        coords = tuple(anchor[..., a] for a in range(3))
        return self._offset(dim, axis) + np.ravel_multi_index(coords, shape)

    def vertex_index(self, anchor) -> int:
        return int(self._index(0, 0, anchor))

    def edge_index(self, axis: int, anchor) -> int:
        return int(self._index(1, axis, anchor))

    def face_index(self, axis: int, anchor) -> int:
        return int(self._index(2, axis, anchor))

    def cube_index(self, anchor) -> int:
        return int(self._index(3, 0, anchor))

    def face_vertices(self, face: int) -> np.ndarray:
        """Corner coordinates of a face in cyclic order, shape (4, 3)."""
        axis = int(self.face_axis[face])
        b, c = (a for a in range(3) if a != axis)
        p = self.face_anchor[face]
        eb, ec = _unit(b), _unit(c)
        return np.stack([p, p + eb, p + eb + ec, p + ec])

    # -- chains -------------------------------------------------------------

    def chain1(self, indices=()) -> Chain1:
        return Chain1.from_indices(self.num_edges, indices)

    def chain2(self, indices=()) -> Chain2:
        return Chain2.from_indices(self.num_faces, indices)

    def all_faces(self) -> Chain2:
        return Chain2(np.ones(self.num_faces, dtype=bool))

    def boundary_2(self, chain: Chain2) -> Chain1:
        """GF(2) boundary of a 2-chain."""
        if not isinstance(chain, Chain2):
            raise TypeError("boundary_2 expects a Chain2")
        if chain.size != self.num_faces:
            raise IndexError("chain does not index the faces of this complex")
        edges = self.face_edges[chain.mask].ravel()
        counts = np.bincount(edges, minlength=self.num_edges)
        return Chain1((counts & 1).astype(bool))

    def boundary_1(self, chain: Chain1) -> np.ndarray:
        """GF(2) boundary of a 1-chain, as a boolean vertex mask."""
        if not isinstance(chain, Chain1):
            raise TypeError("boundary_1 expects a Chain1")
        if chain.size != self.num_edges:
            raise IndexError("chain does not index the edges of this complex")
        verts = self.edge_vertices[chain.mask].ravel()
        return (np.bincount(verts, minlength=self.num_vertices) & 1).astype(bool)

    def cube_boundary(self, cube: int) -> Chain2:
        return self.chain2(self.cube_faces[cube])

    @property
    def equator_height(self) -> int:
        return self.n // 2

    def equatorial_loop(self) -> Chain1:
        return equatorial_loop(self.n)

    def initial_surface(self) -> Chain2:
        return initial_surface(self.n)


def _anchors(shape) -> np.ndarray:
    grids = np.meshgrid(*(np.arange(s) for s in shape), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)


def _build(n: int) -> CubicalComplex:
    shell = CubicalComplex.__new__(CubicalComplex)
    object.__setattr__(shell, "n", n)

    vertex_anchor = _anchors(_cell_shape(n, 0, 0))
    assert len(vertex_anchor) == (n + 1) ** 3

    edge_axis, edge_anchor, edge_vertices = [], [], []
    for axis in range(3):
        anchors = _anchors(_cell_shape(n, 1, axis))
        edge_axis.append(np.full(len(anchors), axis, dtype=np.int8))
        edge_anchor.append(anchors)
        v0 = shell._index(0, 0, anchors)
        v1 = shell._index(0, 0, anchors + _unit(axis))
        edge_vertices.append(np.stack([v0, v1], axis=1))

    face_axis, face_anchor, face_edges = [], [], []
    for axis in range(3):
        anchors = _anchors(_cell_shape(n, 2, axis))
        b, c = (a for a in range(3) if a != axis)
        face_axis.append(np.full(len(anchors), axis, dtype=np.int8))
        face_anchor.append(anchors)
        face_edges.append(
            np.stack(
                [
                    shell._index(1, b, anchors),
                    shell._index(1, b, anchors + _unit(c)),
                    shell._index(1, c, anchors),
                    shell._index(1, c, anchors + _unit(b)),
                ],
                axis=1,
            )
        )

    cube_anchor = _anchors(_cell_shape(n, 3, 0))
    cube_faces = np.concatenate(
        [
            np.stack(
                [shell._index(2, axis, cube_anchor), shell._index(2, axis, cube_anchor + _unit(axis))],
                axis=1,
            )
            for axis in range(3)
        ],
        axis=1,
    )

    arrays = dict(
        edge_vertices=np.concatenate(edge_vertices),
        face_edges=np.concatenate(face_edges),
        cube_faces=cube_faces,
        edge_axis=np.concatenate(edge_axis),
        edge_anchor=np.concatenate(edge_anchor),
        face_axis=np.concatenate(face_axis),
        face_anchor=np.concatenate(face_anchor),
        cube_anchor=cube_anchor,
    )
    for arr in arrays.values():
        arr.setflags(write=False)
    return CubicalComplex(n=n, **arrays)


def _check_n(n) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise TypeError(f"lattice size must be an integer, got {n!r}")
    if n < 1:
        raise ValueError(f"lattice size must be >= 1, got {n}")
    return int(n)


@lru_cache(maxsize=16)
def _build_cached(n: int) -> CubicalComplex:
    return _build(n)


def build_complex(n: int) -> CubicalComplex:
    """Build Q_n, the 2-skeleton of the n x n x n block of unit cubes."""
    return _build_cached(_check_n(n))


def equatorial_loop(n: int) -> Chain1:
    """The 4n edges around the square [0, n]^2 at height floor(n/2)."""
    cx = build_complex(n)
    h = n // 2
    t = np.arange(n)
    zeros, ns, hs = np.zeros_like(t), np.full_like(t, n), np.full_like(t, h)
    idx = np.concatenate(
        [
            cx._index(1, 0, np.stack([t, zeros, hs], axis=1)),
            cx._index(1, 0, np.stack([t, ns, hs], axis=1)),
            cx._index(1, 1, np.stack([zeros, t, hs], axis=1)),
            cx._index(1, 1, np.stack([ns, t, hs], axis=1)),
        ]
    )
    return cx.chain1(idx)


def horizontal_plane(n: int, height: int) -> Chain2:
    """The n^2 Z-normal faces filling [0, n]^2 at the given height."""
    cx = build_complex(n)
    if not 0 <= height <= n:
        raise ValueError(f"height {height} outside [0, {n}]")
    a = _anchors((n, n, 1))
    a[:, 2] = height
    return cx.chain2(cx._index(2, 2, a))


def initial_surface(n: int) -> Chain2:
    """Flat starting surface: the n^2 squares spanning the equatorial loop."""
    return horizontal_plane(n, n // 2)


def side_band(n: int, lo: int, hi: int) -> Chain2:
    """Vertical faces on the outer wall of the block between heights lo and hi."""
    cx = build_complex(n)
    if not 0 <= lo <= hi <= n:
        raise ValueError("need 0 <= lo <= hi <= n")
    faces = []
    for z in range(lo, hi):
        for t in range(n):
            faces.append(cx.face_index(1, (t, 0, z)))
            faces.append(cx.face_index(1, (t, n, z)))
            faces.append(cx.face_index(0, (0, t, z)))
            faces.append(cx.face_index(0, (n, t, z)))
    return cx.chain2(faces)


def shifted_surface(n: int) -> Chain2:
    """A second surface bounded by the equatorial loop, disjoint from the flat one.

    The plane one level above the equator, closed off by the band of outer
    wall faces between the two levels.
    """
    h = n // 2
    return horizontal_plane(n, h + 1) + side_band(n, h, h + 1)
