"""The dual multigraph G_n: one vertex per unit cube plus a vertex at infinity.

Every face of Q_n is crossed by exactly one dual edge, and dual edge ``i``
crosses face ``i``: edge ids inherit the face ordering of the lattice.
Cube vertices carry the cube's index; infinity is vertex ``n**3``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from lerslab.lattice import CubicalComplex, build_complex
from lerslab.ust import Multigraph


class DualGraph(Multigraph):
    def __init__(self, complex_: CubicalComplex):
        n = complex_.n
        infinity = complex_.num_cubes
        anchor = complex_.face_anchor
        along = anchor[np.arange(len(anchor)), complex_.face_axis.astype(np.int64)]
        below = anchor.copy()
        below[np.arange(len(anchor)), complex_.face_axis.astype(np.int64)] -= 1
        has_lo = along > 0
        has_hi = along < n
        lo = np.full(len(anchor), infinity, dtype=np.int64)
        hi = np.full(len(anchor), infinity, dtype=np.int64)
        lo[has_lo] = complex_._index(3, 0, below[has_lo])
        hi[has_hi] = complex_._index(3, 0, anchor[has_hi])
        super().__init__(infinity + 1, np.stack([lo, hi], axis=1))
        self.complex = complex_
        self.infinity = infinity

    def dual_face_of_edge(self, edge: int) -> int:
        if not 0 <= edge < self.num_edges:
            raise IndexError(f"dual edge {edge} out of range")
        return int(edge)

    def dual_edge_of_face(self, face: int) -> int:
        if not 0 <= face < self.num_edges:
            raise IndexError(f"face {face} out of range")
        return int(face)

    def cube_of_vertex(self, v: int) -> int:
        if v == self.infinity:
            raise ValueError("the vertex at infinity has no cube")
        if not 0 <= v < self.infinity:
            raise IndexError(f"dual vertex {v} out of range")
        return int(v)

    def vertex_of_cube(self, cube: int) -> int:
        if not 0 <= cube < self.infinity:
            raise IndexError(f"cube {cube} out of range")
        return int(cube)


@lru_cache(maxsize=16)
def _build_dual_cached(n: int) -> DualGraph:
    return DualGraph(build_complex(n))


def build_dual(complex_: CubicalComplex) -> DualGraph:
    """Dual graph of ``complex_`` (cached per lattice size)."""
    if complex_ is build_complex(complex_.n):
        return _build_dual_cached(complex_.n)
    return DualGraph(complex_)
