"""Uniform spanning trees of finite multigraphs.

Aldous-Broder is the production sampler and reports every walk step to an
optional visitor. Wilson's algorithm is kept as an independent check, and
``count_spanning_trees`` gives exact tree counts by the matrix-tree theorem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from lerslab.rng import RngStream


class StepCapExceeded(RuntimeError):
    """A random walk ran past its step cap (disconnected graph or bad cap)."""

    def __init__(self, steps: int, visited: int, total: int):
        super().__init__(
            f"walk aborted after {steps} steps with {visited}/{total} vertices visited"
        )
        self.steps = steps
        self.visited = visited
        self.total = total


class Multigraph:
    """Undirected multigraph with dense vertex and edge ids.

    Parallel edges are allowed; self-loops are not. Incidence is stored in
    CSR form as edge ids, so a vertex with k parallel edges to a neighbour
    lists that neighbour k times.
    """

    def __init__(self, num_vertices: int, endpoints):
        endpoints = np.asarray(endpoints, dtype=np.int64).reshape(-1, 2)
        if num_vertices < 1:
            raise ValueError("graph needs at least one vertex")
        if endpoints.size and (endpoints.min() < 0 or endpoints.max() >= num_vertices):
            raise ValueError("edge endpoint out of range")
        if np.any(endpoints[:, 0] == endpoints[:, 1]):
            raise ValueError("self-loops are not supported")
        self.num_vertices = int(num_vertices)
        self.endpoints = endpoints
        self.endpoints.setflags(write=False)

        ends = endpoints.ravel()
        edge_ids = np.repeat(np.arange(len(endpoints), dtype=np.int64), 2)
        order = np.argsort(ends, kind="stable")
        self.inc_edges = edge_ids[order]
        counts = np.bincount(ends, minlength=num_vertices)
        self.inc_ptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        self.inc_edges.setflags(write=False)
        self.inc_ptr.setflags(write=False)

    @property
    def num_edges(self) -> int:
        return len(self.endpoints)

    def degree(self, v: int) -> int:
        return int(self.inc_ptr[v + 1] - self.inc_ptr[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self.inc_ptr)

    def incident_edges(self, v: int) -> np.ndarray:
        return self.inc_edges[self.inc_ptr[v] : self.inc_ptr[v + 1]]

    def other_end(self, edge: int, v: int) -> int:
        a, b = self.endpoints[edge]
        if a == v:
            return int(b)
        if b == v:
            return int(a)
        raise ValueError(f"vertex {v} is not an endpoint of edge {edge}")

    def adjacent(self, u: int, v: int) -> bool:
        inc = self.incident_edges(u)
        ends = self.endpoints[inc]
        return bool(np.any((ends[:, 0] == v) | (ends[:, 1] == v)))

    def is_connected(self) -> bool:
        seen = np.zeros(self.num_vertices, dtype=bool)
        seen[0] = True
        stack = [0]
        while stack:
            v = stack.pop()
            for e in self.incident_edges(v):
                w = self.other_end(int(e), v)
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        return bool(seen.all())

    def default_step_cap(self) -> int:
        v = self.num_vertices
        return int(1e4 * v * max(1.0, math.log2(v + 1)))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(vertices={self.num_vertices}, edges={self.num_edges})"

    @classmethod
    def from_edges(cls, num_vertices: int, pairs: Iterable[tuple[int, int]]) -> "Multigraph":
        return cls(num_vertices, list(pairs))


def triangle() -> Multigraph:
    return Multigraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


def path_graph(k: int) -> Multigraph:
    return Multigraph.from_edges(k, [(i, i + 1) for i in range(k - 1)])


def cycle_graph(k: int) -> Multigraph:
    return Multigraph.from_edges(k, [(i, (i + 1) % k) for i in range(k)])


def complete_graph(k: int) -> Multigraph:
    return Multigraph.from_edges(k, [(i, j) for i in range(k) for j in range(i + 1, k)])


@dataclass(frozen=True)
class SpanningTree:
    """Spanning tree stored as a parent-edge array rooted at ``root``.

    ``parent_edge[v]`` is the tree edge on the path from ``v`` towards the
    root (``-1`` for the root itself). ``steps`` is the number of walk moves
    the sampler needed, when applicable.
    """

    root: int
    parent_edge: np.ndarray
    steps: int = 0

    @property
    def edges(self) -> np.ndarray:
        pe = self.parent_edge
        return np.sort(pe[pe >= 0])

    def edge_set(self) -> frozenset[int]:
        return frozenset(self.edges.tolist())

    def __len__(self) -> int:
        return int(np.count_nonzero(self.parent_edge >= 0))


def is_spanning_tree(graph: Multigraph, edges: Sequence[int]) -> bool:
    """True iff ``edges`` are |V|-1 distinct edges forming an acyclic, spanning set."""
    edges = list(edges)
    if len(edges) != graph.num_vertices - 1 or len(set(edges)) != len(edges):
        return False
    parent = list(range(graph.num_vertices))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        if not 0 <= e < graph.num_edges:
            return False
        a, b = (find(int(x)) for x in graph.endpoints[e])
        if a == b:
            return False
        parent[a] = b
    return True


@dataclass(frozen=True)
class Move:
    edge: int
    src: int
    dst: int


@dataclass(frozen=True)
class TreeEdgeAdded:
    """First entry into ``new`` through ``edge`` from the tree vertex ``old``."""

    edge: int
    old: int
    new: int


StepEvent = Union[Move, TreeEdgeAdded]
Visitor = Callable[[StepEvent], None]


def aldous_broder(
    graph: Multigraph,
    start: int,
    rng: RngStream,
    visitor: Visitor | None = None,
    step_cap: int | None = None,
) -> SpanningTree:
    """Uniform spanning tree from the first-entry edges of a covering walk.

    Each step picks a uniformly random incident edge slot, so parallel
    edges are weighted by multiplicity. The visitor, if given, receives a
    ``Move`` for every step and, on first entry to a vertex, a
    ``TreeEdgeAdded`` right after that move.
    """
    nv = graph.num_vertices
    if not 0 <= start < nv:
        raise ValueError(f"start vertex {start} out of range")
    cap = graph.default_step_cap() if step_cap is None else int(step_cap)
    inc_ptr, inc_edges, ends = graph.inc_ptr, graph.inc_edges, graph.endpoints
    visited = np.zeros(nv, dtype=bool)
    visited[start] = True
    parent_edge = np.full(nv, -1, dtype=np.int64)
    remaining = nv - 1
    v = start
    steps = 0
    while remaining:
        if steps >= cap:
            raise StepCapExceeded(steps, nv - remaining, nv)
        lo = int(inc_ptr[v])
        deg = int(inc_ptr[v + 1]) - lo
        if deg == 0:
            raise StepCapExceeded(steps, nv - remaining, nv)
        e = int(inc_edges[lo + rng.randbelow(deg)])
        a, b = ends[e]
        w = int(b) if a == v else int(a)
        steps += 1
        if visitor is not None:
            visitor(Move(e, v, w))
        if not visited[w]:
            visited[w] = True
            parent_edge[w] = e
            remaining -= 1
            if visitor is not None:
                visitor(TreeEdgeAdded(e, v, w))
        v = w
    return SpanningTree(root=start, parent_edge=parent_edge, steps=steps)


def loop_erase(walk: Sequence, graph: Multigraph | None = None) -> list:
    """Chronological loop erasure of a vertex sequence.

    Whenever the walk returns to a vertex already on the erased path, the
    loop created since its previous visit is cut out. If ``graph`` is given,
    consecutive vertices must be adjacent in it.
    """
    walk = list(walk)
    if graph is not None:
        for u, v in zip(walk, walk[1:]):
            if not graph.adjacent(int(u), int(v)):
                raise ValueError(f"walk steps between non-adjacent vertices {u} and {v}")
    path: list = []
    position: dict = {}
    for v in walk:
        if v in position:
            cut = position[v] + 1
            for w in path[cut:]:
                del position[w]
            del path[cut:]
        else:
            position[v] = len(path)
            path.append(v)
    return path


def wilson(
    graph: Multigraph,
    root: int,
    rng: RngStream,
    step_cap: int | None = None,
) -> SpanningTree:
    """Uniform spanning tree by stitching loop-erased walks onto the tree.

    Vertices are attached in index order. Each walk records the last edge it
    left every vertex by; following those edges from the start vertex gives
    the chronological loop erasure of the walk.
    """
    nv = graph.num_vertices
    if not 0 <= root < nv:
        raise ValueError(f"root {root} out of range")
    cap = graph.default_step_cap() if step_cap is None else int(step_cap)
    inc_ptr, inc_edges, ends = graph.inc_ptr, graph.inc_edges, graph.endpoints
    in_tree = np.zeros(nv, dtype=bool)
    in_tree[root] = True
    parent_edge = np.full(nv, -1, dtype=np.int64)
    next_edge = np.full(nv, -1, dtype=np.int64)
    steps = 0
    for s in range(nv):
        v = s
        while not in_tree[v]:
            if steps >= cap:
                raise StepCapExceeded(steps, int(in_tree.sum()), nv)
            lo = int(inc_ptr[v])
            deg = int(inc_ptr[v + 1]) - lo
            if deg == 0:
                raise StepCapExceeded(steps, int(in_tree.sum()), nv)
            e = int(inc_edges[lo + rng.randbelow(deg)])
            next_edge[v] = e
            a, b = ends[e]
            v = int(b) if a == v else int(a)
            steps += 1
        v = s
        while not in_tree[v]:
            in_tree[v] = True
            e = int(next_edge[v])
            parent_edge[v] = e
            a, b = ends[e]
            v = int(b) if a == v else int(a)
    return SpanningTree(root=root, parent_edge=parent_edge, steps=steps)


def _bareiss_det(m: list[list[int]]) -> int:
    """Exact integer determinant by fraction-free elimination."""
    a = [row[:] for row in m]
    k = len(a)
    if k == 0:
        return 1
    sign = 1
    prev = 1
    for i in range(k - 1):
        if a[i][i] == 0:
            swap = next((r for r in range(i + 1, k) if a[r][i] != 0), None)
            if swap is None:
                return 0
            a[i], a[swap] = a[swap], a[i]
            sign = -sign
        piv = a[i][i]
        for r in range(i + 1, k):
            for c in range(i + 1, k):
                a[r][c] = (a[r][c] * piv - a[r][i] * a[i][c]) // prev
            a[r][i] = 0
        prev = piv
    return sign * a[k - 1][k - 1]


def laplacian(graph: Multigraph) -> np.ndarray:
    nv = graph.num_vertices
    lap = np.zeros((nv, nv), dtype=np.int64)
    for a, b in graph.endpoints:
        lap[a, a] += 1
        lap[b, b] += 1
        lap[a, b] -= 1
        lap[b, a] -= 1
    return lap


def count_spanning_trees(graph: Multigraph) -> int:
    """Number of spanning trees, exactly, as a reduced-Laplacian determinant."""
    lap = laplacian(graph)
    reduced = [[int(x) for x in row[1:]] for row in lap[1:]]
    return _bareiss_det(reduced)
