"""GF(2) linear algebra for checking 2-trees and solving for bounded chains.

Matrices are bit-packed row-wise into ``uint64`` words. All of this is
validation machinery: production sampling never calls into it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numba import njit

from lerslab.lattice import Chain1, Chain2, CubicalComplex


@njit(cache=True)
def _get(data, r, c):
    return (data[r, c >> 6] >> np.uint64(c & 63)) & np.uint64(1)


@njit(cache=True)
def _rref(data, ncols):
    """Reduced row echelon form in place, pivoting only in columns < ncols.

    Returns (rank, pivot columns). Row operations act on the full word width,
    so any augmented columns past ``ncols`` are carried along.
    """
    rows = data.shape[0]
    words = data.shape[1]
    pivots = np.empty(min(rows, ncols), dtype=np.int64)
    rank = 0
    for c in range(ncols):
        if rank == rows:
            break
        w = c >> 6
        bit = np.uint64(1) << np.uint64(c & 63)
        piv = -1
        for r in range(rank, rows):
            if data[r, w] & bit:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for k in range(words):
                tmp = data[piv, k]
                data[piv, k] = data[rank, k]
                data[rank, k] = tmp
        for r in range(rows):
            if r != rank and (data[r, w] & bit):
                for k in range(w, words):
                    data[r, k] ^= data[rank, k]
        pivots[rank] = c
        rank += 1
    return rank, pivots[:rank]


@njit(cache=True)
def _pack_columns(dense, col_mask, rhs, data):
    """Pack the selected columns of a dense 0/1 matrix (plus an optional rhs column)."""
    rows = dense.shape[0]
    j = 0
    for c in range(dense.shape[1]):
        if col_mask[c]:
            w = j >> 6
            bit = np.uint64(1) << np.uint64(j & 63)
            for r in range(rows):
                if dense[r, c]:
                    data[r, w] |= bit
            j += 1
    if rhs.shape[0] == rows:
        w = j >> 6
        bit = np.uint64(1) << np.uint64(j & 63)
        for r in range(rows):
            if rhs[r]:
                data[r, w] |= bit
    return j


@njit(cache=True)
def _solve_masked(dense, col_mask, rhs, x_out):
    """Solve ``dense[:, col_mask] @ y = rhs`` over GF(2).

    Writes the solution with free variables set to zero into ``x_out``
    (indexed by the full column range). Returns (consistent, kernel_dim).
    """
    k = 0
    for c in range(col_mask.shape[0]):
        if col_mask[c]:
            k += 1
    words = (k + 1 + 63) // 64
    data = np.zeros((dense.shape[0], words), dtype=np.uint64)
    _pack_columns(dense, col_mask, rhs, data)
    rank, pivots = _rref(data, k)
    for r in range(rank, dense.shape[0]):
        if _get(data, r, k):
            return False, k - rank
    cols = np.empty(k, dtype=np.int64)
    j = 0
    for c in range(col_mask.shape[0]):
        if col_mask[c]:
            cols[j] = c
            j += 1
    x_out[:] = False
    for r in range(rank):
        if _get(data, r, k):
            x_out[cols[pivots[r]]] = True
    return True, k - rank


@njit(cache=True)
def _masked_rank(dense, col_mask):
    k = 0
    for c in range(col_mask.shape[0]):
        if col_mask[c]:
            k += 1
    data = np.zeros((dense.shape[0], max(1, (k + 63) // 64)), dtype=np.uint64)
    _pack_columns(dense, col_mask, np.zeros(0, dtype=np.bool_), data)
    rank, _ = _rref(data, k)
    return rank


class Gf2Matrix:
    """Dense GF(2) matrix, bit-packed by rows."""

    def __init__(self, rows: int, cols: int, data: np.ndarray | None = None):
        self.rows = int(rows)
        self.cols = int(cols)
        words = max(1, (self.cols + 63) // 64)
        if data is None:
            data = np.zeros((self.rows, words), dtype=np.uint64)
        if data.shape != (self.rows, words) or data.dtype != np.uint64:
            raise ValueError("packed data has the wrong shape or dtype")
        self.data = data

    @classmethod
    def from_dense(cls, dense) -> "Gf2Matrix":
        dense = np.asarray(dense)
        if dense.ndim != 2:
            raise ValueError("expected a 2-d array")
        rows, cols = dense.shape
        bits = (dense.astype(np.int64) & 1).astype(np.uint8)
        pad = (-cols) % 64 if cols else 64
        bits = np.pad(bits, ((0, 0), (0, pad)))
        packed = np.packbits(bits, axis=1, bitorder="little")
        data = packed.reshape(rows, -1).view("<u8").astype(np.uint64)
        return cls(rows, cols, np.ascontiguousarray(data))

    def to_dense(self) -> np.ndarray:
        raw = self.data.astype("<u8").view(np.uint8)
        bits = np.unpackbits(raw, axis=1, bitorder="little")
        return bits[:, : self.cols].astype(np.uint8)

    def rank(self) -> int:
        return gf2_rank(self)

    def __repr__(self) -> str:
        return f"Gf2Matrix({self.rows}x{self.cols})"


def gf2_rank(m: Gf2Matrix) -> int:
    """Rank over GF(2) by Gaussian elimination on a copy."""
    if m.rows == 0 or m.cols == 0:
        return 0
    rank, _ = _rref(m.data.copy(), m.cols)
    return int(rank)


# -- boundary matrices of Q_n ---------------------------------------------------

_DENSE_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def boundary_dense(complex_: CubicalComplex) -> tuple[np.ndarray, np.ndarray]:
    """(d1, d2) as dense uint8 arrays: d1 is |V| x |E|, d2 is |E| x |F|."""
    n = complex_.n
    if n not in _DENSE_CACHE:
        d1 = np.zeros((complex_.num_vertices, complex_.num_edges), dtype=np.uint8)
        cols = np.arange(complex_.num_edges)
        d1[complex_.edge_vertices[:, 0], cols] = 1
        d1[complex_.edge_vertices[:, 1], cols] = 1
        d2 = np.zeros((complex_.num_edges, complex_.num_faces), dtype=np.uint8)
        d2[complex_.face_edges, np.arange(complex_.num_faces)[:, None]] = 1
        d1.setflags(write=False)
        d2.setflags(write=False)
        if len(_DENSE_CACHE) >= 4:
            _DENSE_CACHE.clear()
        _DENSE_CACHE[n] = (d1, d2)
    return _DENSE_CACHE[n]


def boundary_matrix(complex_: CubicalComplex, dim: int, faces: Chain2 | None = None) -> Gf2Matrix:
    d1, d2 = boundary_dense(complex_)
    if dim == 1:
        return Gf2Matrix.from_dense(d1)
    if dim != 2:
        raise ValueError("only dimensions 1 and 2 are supported")
    if faces is None:
        return Gf2Matrix.from_dense(d2)
    return Gf2Matrix.from_dense(d2[:, faces.mask])


_RANK_D1: dict[int, int] = {}


def _rank_d1(complex_: CubicalComplex) -> int:
    if complex_.n not in _RANK_D1:
        d1, _ = boundary_dense(complex_)
        _RANK_D1[complex_.n] = int(_masked_rank(d1, np.ones(d1.shape[1], dtype=np.bool_)))
    return _RANK_D1[complex_.n]


@dataclass(frozen=True)
class BettiReport:
    b0: int
    b1: int
    b2: int

    @property
    def acyclic(self) -> bool:
        return self.b1 == 0 and self.b2 == 0


def _check_faces(faces: Chain2, complex_: CubicalComplex) -> None:
    if not isinstance(faces, Chain2) or faces.size != complex_.num_faces:
        raise ValueError("faces must be a Chain2 over this complex")


def betti(faces: Chain2, complex_: CubicalComplex) -> BettiReport:
    """Betti numbers over GF(2) of the full 1-skeleton plus the given faces."""
    _check_faces(faces, complex_)
    _, d2 = boundary_dense(complex_)
    r1 = _rank_d1(complex_)
    r2 = int(_masked_rank(d2, faces.mask)) if len(faces) else 0
    b0 = complex_.num_vertices - r1
    b1 = (complex_.num_edges - r1) - r2
    b2 = len(faces) - r2
    return BettiReport(b0, b1, b2)


def two_tree_face_count(complex_: CubicalComplex) -> int:
    return complex_.num_faces - complex_.num_cubes


def verify_2tree(faces: Chain2, complex_: CubicalComplex) -> bool:
    """True iff the subcomplex is GF(2)-acyclic and has the 2-tree face count."""
    if len(faces) != two_tree_face_count(complex_):
        return False
    return betti(faces, complex_).acyclic


class SolveStatus(enum.Enum):
    UNIQUE = "unique"
    NON_UNIQUE = "non-unique"
    NO_SOLUTION = "no-solution"


class BoundedChain(NamedTuple):
    status: SolveStatus
    chain: Chain2 | None
    kernel_dim: int


def solve_bounded_chain(faces: Chain2, loop: Chain1, complex_: CubicalComplex) -> BoundedChain:
    """Solve boundary(x) = loop for a 2-chain x supported on ``faces``.

    ``chain`` is the solution with free variables zeroed (``None`` when there
    is no solution); ``kernel_dim`` is the dimension of the 2-cycle space
    inside ``faces``, so the solution is unique exactly when it is 0.
    """
    _check_faces(faces, complex_)
    if not isinstance(loop, Chain1) or loop.size != complex_.num_edges:
        raise ValueError("loop must be a Chain1 over this complex")
    _, d2 = boundary_dense(complex_)
    x = np.zeros(complex_.num_faces, dtype=np.bool_)
    ok, kernel = _solve_masked(d2, faces.mask, loop.mask, x)
    if not ok:
        return BoundedChain(SolveStatus.NO_SOLUTION, None, int(kernel))
    status = SolveStatus.UNIQUE if kernel == 0 else SolveStatus.NON_UNIQUE
    return BoundedChain(status, Chain2(x), int(kernel))


@njit(cache=True)
def _solve_batch(dense, masks, rhs, sizes, kernels):
    x = np.zeros(dense.shape[1], dtype=np.bool_)
    for t in range(masks.shape[0]):
        ok, kernel = _solve_masked(dense, masks[t], rhs, x)
        kernels[t] = kernel
        if ok:
            s = 0
            for c in range(x.shape[0]):
                if x[c]:
                    s += 1
            sizes[t] = s
        else:
            sizes[t] = -1


def solve_sizes_batch(face_masks: np.ndarray, loop: Chain1, complex_: CubicalComplex):
    """Solution sizes and kernel dimensions for many face sets at once.

    Same solver as :func:`solve_bounded_chain`; size is -1 where no solution
    exists.
    """
    _, d2 = boundary_dense(complex_)
    masks = np.ascontiguousarray(face_masks, dtype=np.bool_)
    sizes = np.empty(len(masks), dtype=np.int64)
    kernels = np.empty(len(masks), dtype=np.int64)
    _solve_batch(d2, masks, loop.mask, sizes, kernels)
    return sizes, kernels
