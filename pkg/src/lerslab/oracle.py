"""Exact M_n distributions at tiny n by enumerating every spanning tree of G_n.

Trees are enumerated as root-directed parent assignments: every non-root
vertex picks one incident edge towards its parent, and an assignment is kept
iff following parents from every vertex reaches the root. Each spanning tree
has exactly one such assignment. Surfaces are then solved for by GF(2)
elimination, independently of the incremental sampler.
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator

import numpy as np

from lerslab.dualgraph import build_dual
from lerslab.homology import solve_sizes_batch
from lerslab.lattice import build_complex, equatorial_loop
from lerslab.ust import Multigraph, count_spanning_trees

DEFAULT_CAP = 10**7
ALGORITHM = "parent-assignment-v1"
FORMAT_VERSION = 1
CACHE_ENV = "LERSLAB_CACHE_DIR"


class EnumerationCapExceeded(RuntimeError):
    def __init__(self, count: int, cap: int):
        super().__init__(f"graph has {count} spanning trees, above the cap of {cap}")
        self.count = count
        self.cap = cap


def _bfs_order(graph: Multigraph, root: int) -> list[int]:
    order = [root]
    seen = {root}
    for v in order:
        for e in graph.incident_edges(v):
            w = graph.other_end(int(e), v)
            if w not in seen:
                seen.add(w)
                order.append(w)
    return order


def enumerate_trees(graph: Multigraph, cap: int = DEFAULT_CAP, root: int = 0) -> Iterator[tuple[int, ...]]:
    """Yield every spanning tree once, as a sorted tuple of edge ids.

    Refuses (before yielding anything) when the matrix-tree count exceeds
    ``cap``.
    """
    count = count_spanning_trees(graph)
    if count > cap:
        raise EnumerationCapExceeded(count, cap)
    if count == 0:
        return iter(())
    return _enumerate(graph, root)


def _enumerate(graph: Multigraph, root: int) -> Iterator[tuple[int, ...]]:
    # vertices nearer the root pick first, so cycles are caught early
    order = [v for v in _bfs_order(graph, root) if v != root]
    choices = []
    for v in order:
        opts = []
        for e in graph.incident_edges(v):
            e = int(e)
            opts.append((e, graph.other_end(e, v)))
        choices.append(opts)
    parent = [-1] * graph.num_vertices
    edge_of = [-1] * graph.num_vertices
    depth = len(order)

    def closes_cycle(v: int) -> bool:
        w = parent[v]
        while w != -1 and w != root:
            if w == v:
                return True
            w = parent[w]
        return False

    def rec(i: int):
        if i == depth:
            yield tuple(sorted(edge_of[v] for v in order))
            return
        v = order[i]
        for e, w in choices[i]:
            parent[v] = w
            edge_of[v] = e
            if not closes_cycle(v):
                yield from rec(i + 1)
        parent[v] = -1
        edge_of[v] = -1

    yield from rec(0)


@dataclass(frozen=True)
class ExactDistribution:
    n: int
    tree_count: int
    counts: dict[int, int]

    @property
    def probabilities(self) -> dict[int, Fraction]:
        return {size: Fraction(c, self.tree_count) for size, c in sorted(self.counts.items())}

    @property
    def mean(self) -> Fraction:
        return sum((Fraction(s * c, self.tree_count) for s, c in self.counts.items()), Fraction(0))

    def support(self) -> list[int]:
        return sorted(self.counts)


def cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV) or Path.home() / ".cache" / "lerslab")


def _cache_path(n: int, cap: int, directory: Path) -> Path:
    return directory / f"mn_exact_n{n}_cap{cap}_{ALGORITHM}_f{FORMAT_VERSION}.tsv"


def write_distribution(dist: ExactDistribution, path: Path, cap: int) -> None:
    lines = [
        "# lerslab exact surface-size distribution",
        f"# format_version\t{FORMAT_VERSION}",
        f"# algorithm\t{ALGORITHM}",
        f"# n\t{dist.n}",
        f"# cap\t{cap}",
        f"# tree_count\t{dist.tree_count}",
        "size\tcount\tprobability",
    ]
    for size, c in sorted(dist.counts.items()):
        lines.append(f"{size}\t{c}\t{Fraction(c, dist.tree_count)}")
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text("\n".join(lines) + "\n")
    tmp.replace(path)


def read_distribution(path: Path) -> ExactDistribution:
    meta: dict[str, str] = {}
    counts: dict[int, int] = {}
    header_seen = False
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            parts = line[1:].strip().split("\t")
            if len(parts) == 2:
                meta[parts[0]] = parts[1]
            continue
        if not header_seen:
            if line.split("\t")[:2] != ["size", "count"]:
                raise ValueError(f"{path}: missing column header")
            header_seen = True
            continue
        size, c, *_ = line.split("\t")
        counts[int(size)] = int(c)
    if int(meta.get("format_version", -1)) != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported format version")
    dist = ExactDistribution(n=int(meta["n"]), tree_count=int(meta["tree_count"]), counts=counts)
    if sum(counts.values()) != dist.tree_count:
        raise ValueError(f"{path}: counts do not sum to the tree count")
    return dist


def exact_mn_distribution(
    n: int,
    cap: int = DEFAULT_CAP,
    *,
    use_cache: bool = True,
    directory: Path | None = None,
    batch: int = 1 << 16,
) -> ExactDistribution:
    """Exact law of the surface size M_n over all spanning trees of G_n."""
    directory = cache_dir() if directory is None else Path(directory)
    path = _cache_path(n, cap, directory)
    if use_cache and path.exists():
        return read_distribution(path)

    cx = build_complex(n)
    dual = build_dual(cx)
    loop = equatorial_loop(n)
    tree_count = count_spanning_trees(dual)
    counts: Counter[int] = Counter()
    buf = np.ones((batch, cx.num_faces), dtype=bool)
    filled = 0
    seen = 0

    def flush(k: int) -> None:
        sizes, kernels = solve_sizes_batch(buf[:k], loop, cx)
        if np.any(sizes < 0) or np.any(kernels != 0):
            raise RuntimeError("a spanning tree produced a face set that is not a 2-tree")
        counts.update(sizes.tolist())
        buf[:k] = True

    for tree in enumerate_trees(dual, cap=cap, root=dual.infinity):
        buf[filled, list(tree)] = False
        filled += 1
        seen += 1
        if filled == batch:
            flush(filled)
            filled = 0
    if filled:
        flush(filled)
    if seen != tree_count:
        raise RuntimeError(f"enumerated {seen} trees, matrix-tree count is {tree_count}")

    dist = ExactDistribution(n=n, tree_count=tree_count, counts=dict(counts))
    if use_cache:
        write_distribution(dist, path, cap)
    return dist


def total_variation(empirical: dict[int, int] | Counter, exact: ExactDistribution) -> float:
    total = sum(empirical.values())
    if total == 0:
        raise ValueError("empty sample")
    probs = exact.probabilities
    keys = set(probs) | set(empirical)
    return 0.5 * sum(abs(empirical.get(k, 0) / total - float(probs.get(k, 0))) for k in keys)
