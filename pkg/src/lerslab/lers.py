"""Loop-erased random surfaces bounded by the equatorial loop.

An Aldous-Broder walk on the dual graph starts at infinity. Removing the
faces crossed by the final spanning tree leaves a uniform spanning 2-tree of
Q_n. While the walk runs we carry a surface whose boundary is the equatorial
loop: whenever the newly added tree edge crosses a face of the surface, the
whole boundary of the newly reached cube is added mod 2. That removes the
crossed face and keeps the boundary fixed, so when the walk finishes the
surface is the unique chain with that boundary inside the 2-tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numba import njit

from lerslab.dualgraph import DualGraph, build_dual
from lerslab.homology import SolveStatus, solve_bounded_chain
from lerslab.lattice import (
    Chain1,
    Chain2,
    CubicalComplex,
    build_complex,
    equatorial_loop,
    initial_surface,
    shifted_surface,
)
from lerslab.rng import RngStream, randbelow
from lerslab.ust import SpanningTree, StepCapExceeded, TreeEdgeAdded, aldous_broder


class BrokenTreeError(RuntimeError):
    """The face set handed to the linear solver is not a 2-tree."""


@lru_cache(maxsize=16)
def structures(n: int) -> tuple[CubicalComplex, DualGraph]:
    cx = build_complex(n)
    return cx, build_dual(cx)


@lru_cache(maxsize=16)
def _kernel_inputs(n: int):
    cx, dual = structures(n)
    edge_face = np.array([dual.dual_face_of_edge(e) for e in range(dual.num_edges)], dtype=np.int64)
    s0 = initial_surface(n).mask
    s0.setflags(write=False)
    return cx, dual, edge_face, s0, dual.default_step_cap()


@dataclass(frozen=True, eq=False)
class LersSample:
    n: int
    seed: int
    surface: Chain2
    steps: int
    tree: SpanningTree

    @property
    def size(self) -> int:
        return len(self.surface)


def size_bounds(n: int) -> tuple[int, int]:
    """Smallest and largest possible surface size at lattice size n."""
    return n * n, 3 * n * n * (n + 1) - n**3


@njit(cache=True)
def _walk(inc_ptr, inc_edges, endpoints, edge_face, cube_faces, start, surface, state,
          step_cap, parent_edge, fault):
    """Aldous-Broder cover walk with the incremental surface update.

    ``surface`` is updated in place. Returns the step count, or
    ``-(visited + 1)`` if the cap was hit. ``fault`` >= 0 corrupts the update
    at that tree-edge addition (negative control for the verifier).
    """
    nv = inc_ptr.shape[0] - 1
    visited = np.zeros(nv, dtype=np.bool_)
    visited[start] = True
    parent_edge[:] = -1
    remaining = nv - 1
    added = 0
    v = start
    steps = 0
    while remaining > 0:
        if steps >= step_cap:
            return -(nv - remaining) - 1
        lo = inc_ptr[v]
        e = inc_edges[lo + randbelow(state, inc_ptr[v + 1] - lo)]
        w = endpoints[e, 0]
        if w == v:
            w = endpoints[e, 1]
        steps += 1
        if not visited[w]:
            visited[w] = True
            parent_edge[w] = e
            remaining -= 1
            f = edge_face[e]
            if added == fault:
                surface[f] = not surface[f]
            elif surface[f]:
                for k in range(6):
                    g = cube_faces[w, k]
                    surface[g] = not surface[g]
            added += 1
        v = w
    return steps


def sample_lers(
    n: int,
    rng: RngStream,
    *,
    initial: Chain2 | None = None,
    step_cap: int | None = None,
    fault: int = -1,
) -> LersSample:
    """Draw one loop-erased random surface on Q_n.

    ``initial`` is the starting surface (default: the flat equatorial
    square); any chain with the equatorial loop as boundary gives the same
    result for the same random stream.
    """
    cx, dual, edge_face, s0, default_cap = _kernel_inputs(n)
    surface = (initial.mask if initial is not None else s0).copy()
    if surface.size != cx.num_faces:
        raise ValueError("initial surface does not belong to Q_n")
    cap = default_cap if step_cap is None else int(step_cap)
    parent_edge = np.empty(dual.num_vertices, dtype=np.int64)
    steps = _walk(dual.inc_ptr, dual.inc_edges, dual.endpoints, edge_face, cx.cube_faces,
                  dual.infinity, surface, rng.state, cap, parent_edge, fault)
    if steps < 0:
        raise StepCapExceeded(cap, -int(steps) - 1, dual.num_vertices)
    tree = SpanningTree(root=dual.infinity, parent_edge=parent_edge, steps=int(steps))
    return LersSample(n=n, seed=rng.seed, surface=Chain2(surface), steps=int(steps), tree=tree)


class SurfaceState:
    """Visitor that maintains the bounded surface from Aldous-Broder events.

    With ``check=True`` the boundary and disjointness invariants are asserted
    after every tree-edge addition; violations raise ``AssertionError``.
    """

    def __init__(self, n: int, initial: Chain2 | None = None, check: bool = False):
        self.complex, self.dual = structures(n)
        self.surface = (initial if initial is not None else initial_surface(n)).copy()
        self.loop = equatorial_loop(n)
        self.updates = 0
        self.check = check
        self._tree_faces: list[int] = []

    def __call__(self, event) -> None:
        if not isinstance(event, TreeEdgeAdded):
            return
        face = self.dual.dual_face_of_edge(event.edge)
        if face in self.surface:
            self.surface += self.complex.cube_boundary(self.dual.cube_of_vertex(event.new))
            self.updates += 1
        if self.check:
            self._tree_faces.append(face)
            assert self.complex.boundary_2(self.surface) == self.loop, "surface boundary drifted"
            assert not self.surface.mask[self._tree_faces].any(), "surface crosses a tree edge"


def sample_lers_reference(
    n: int,
    rng: RngStream,
    *,
    initial: Chain2 | None = None,
    check: bool = False,
    step_cap: int | None = None,
) -> LersSample:
    """Same draw as :func:`sample_lers`, through the generic visitor-driven sampler.

    Much slower; used to cross-check the fused kernel.
    """
    state = SurfaceState(n, initial=initial, check=check)
    tree = aldous_broder(state.dual, state.dual.infinity, rng, visitor=state, step_cap=step_cap)
    return LersSample(n=n, seed=rng.seed, surface=state.surface, steps=tree.steps, tree=tree)


def two_tree_faces(tree: SpanningTree, complex_: CubicalComplex) -> Chain2:
    """Faces of Q_n not crossed by any edge of a spanning tree of G_n."""
    dual = build_dual(complex_)
    if len(tree) != dual.num_vertices - 1:
        raise ValueError("tree does not span the dual graph")
    mask = np.ones(complex_.num_faces, dtype=bool)
    mask[[dual.dual_face_of_edge(int(e)) for e in tree.edges]] = False
    return Chain2(mask)


def extract_surface_linear(two_tree: Chain2, loop: Chain1, complex_: CubicalComplex) -> Chain2:
    """The unique chain in ``two_tree`` bounded by ``loop``, by a GF(2) solve."""
    result = solve_bounded_chain(two_tree, loop, complex_)
    if result.status is SolveStatus.NO_SOLUTION:
        raise BrokenTreeError("loop does not bound inside the face set")
    if result.status is SolveStatus.NON_UNIQUE:
        raise BrokenTreeError(f"face set carries {result.kernel_dim} independent 2-cycles")
    return result.chain


def surface_independence_check(n: int, seed: int, other: Chain2 | None = None) -> bool:
    """Same stream, two starting surfaces: do the final surfaces agree?"""
    a = sample_lers(n, RngStream(seed))
    b = sample_lers(n, RngStream(seed), initial=other if other is not None else shifted_surface(n))
    return a.surface == b.surface
