"""
Exact linear algebra over F_2 on bit-packed row matrices.

Rows are packed 64 columns per uint64 word; column j lives in word j >> 6 at bit
63 - (j & 63), so comparing packed words orders columns left to right. A matrix
acts on column vectors: an (r x c) matrix maps F_2^c to F_2^r.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from tateforge.exceptions import CompositionNonzero

WORD_BITS = 64


def word_count(cols: int) -> int:
    return max(1, (cols + WORD_BITS - 1) // WORD_BITS)


def pack_rows(dense: np.ndarray) -> np.ndarray:
    """Pack a (rows, cols) 0/1 array into (rows, words) uint64."""
    dense = np.asarray(dense, dtype=np.uint8) % 2
    if dense.ndim == 1:
        dense = dense.reshape(1, -1)
    rows, cols = dense.shape
    words = word_count(cols)
    padded = np.zeros((rows, words * WORD_BITS), dtype=np.uint8)
    padded[:, :cols] = dense
    packed = np.packbits(padded, axis=1)
    return np.ascontiguousarray(packed).view('>u8').astype(np.uint64).reshape(rows, words)


def unpack_rows(data: np.ndarray, cols: int) -> np.ndarray:
    """Inverse of pack_rows."""
    rows = data.shape[0]
    as_bytes = np.ascontiguousarray(data.astype('>u8')).view(np.uint8).reshape(rows, -1)
    return np.unpackbits(as_bytes, axis=1)[:, :cols]


def _mask(col: int) -> np.uint64:
    return np.uint64(1) << np.uint64(WORD_BITS - 1 - (col & (WORD_BITS - 1)))


def zero_vector(cols: int) -> np.ndarray:
    return np.zeros(word_count(cols), dtype=np.uint64)


def unit_vector(cols: int, j: int) -> np.ndarray:
    v = zero_vector(cols)
    v[j >> 6] = _mask(j)
    return v


def get_bit(vec: np.ndarray, j: int) -> int:
    return int((vec[j >> 6] & _mask(j)) != 0)


def flip_bit(vec: np.ndarray, j: int) -> None:
    vec[j >> 6] ^= _mask(j)


def support(vec: np.ndarray, cols: int) -> List[int]:
    """Indices of the set bits of a packed vector."""
    return [int(j) for j in np.flatnonzero(unpack_rows(vec.reshape(1, -1), cols)[0])]


@dataclass(frozen=True, eq=False)
class BitMatrix:
    rows: int
    cols: int
    data: np.ndarray

    def __post_init__(self):
        expected = (self.rows, word_count(self.cols))
        if self.data.shape != expected or self.data.dtype != np.uint64:
            raise ValueError(f"packed data shape {self.data.shape} does not match {expected}")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, np.zeros((rows, word_count(cols)), dtype=np.uint64))

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_dense(cls, dense) -> "BitMatrix":
        arr = np.asarray(dense, dtype=np.uint8)
        if arr.ndim != 2:
            raise ValueError("dense matrix must be two-dimensional")
        rows, cols = arr.shape
        if rows == 0:
            return cls.zeros(0, cols)
        return cls(rows, cols, pack_rows(arr))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int = None) -> "BitMatrix":
        if not rows:
            return cls.zeros(0, cols or 0)
        return cls.from_dense(np.array(rows, dtype=np.uint8))

    @classmethod
    def from_columns(cls, rows: int, columns: Iterable[Iterable[int]]) -> "BitMatrix":
        """Build from, for each source index, the target indices it hits (with F_2 cancellation)."""
        columns = list(columns)
        dense = np.zeros((rows, len(columns)), dtype=np.uint8)
        for j, hits in enumerate(columns):
            for i in hits:
                dense[i, j] ^= 1
        return cls.from_dense(dense)

    @classmethod
    def from_packed_rows(cls, packed: Sequence[np.ndarray], cols: int) -> "BitMatrix":
        if not packed:
            return cls.zeros(0, cols)
        return cls(len(packed), cols, np.vstack([np.asarray(p, dtype=np.uint64) for p in packed]))

    def entry(self, i: int, j: int) -> int:
        return get_bit(self.data[i], j)

    def to_dense(self) -> np.ndarray:
        if self.rows == 0:
            return np.zeros((0, self.cols), dtype=np.uint8)
        return unpack_rows(self.data, self.cols)

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense().T) if self.rows else BitMatrix.zeros(self.cols, 0)

    def is_zero(self) -> bool:
        return not self.data.any()

    def matmul(self, other: "BitMatrix") -> "BitMatrix":
        """self · other over F_2."""
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} · {other.rows}x{other.cols}")
        out = np.zeros((self.rows, word_count(other.cols)), dtype=np.uint64)
        if self.rows and other.rows:
            dense = self.to_dense()
            for i in range(self.rows):
                hits = np.flatnonzero(dense[i])
                if hits.size:
                    out[i] = np.bitwise_xor.reduce(other.data[hits], axis=0)
        return BitMatrix(self.rows, other.cols, out)

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """self · v for a packed column vector v of length cols."""
        hits = support(vec, self.cols)
        out = zero_vector(self.rows)
        if hits:
            cols_packed = self.transpose().data
            out = np.bitwise_xor.reduce(cols_packed[hits], axis=0)
        return out

    def row_reduce(self) -> "RowReduceResult":
        return row_reduce(self)

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols}, rank={rank(self)})"


@dataclass(frozen=True, eq=False)
class RowReduceResult:
    echelon: np.ndarray
    rank: int
    pivots: Tuple[int, ...]


def _reduce_packed(data: np.ndarray, cols: int) -> Tuple[np.ndarray, Tuple[int, ...]]:
    """Reduced row echelon form; pivot = leftmost column, topmost available row."""
    mat = data.copy()
    m = mat.shape[0]
    pivots: List[int] = []
    row = 0
    for col in range(cols):
        if row == m:
            break
        w = col >> 6
        mask = _mask(col)
        hits = np.flatnonzero(mat[row:, w] & mask)
        if hits.size == 0:
            continue
        pivot = row + int(hits[0])
        if pivot != row:
            mat[[row, pivot]] = mat[[pivot, row]]
        others = np.flatnonzero(mat[:, w] & mask)
        others = others[others != row]
        if others.size:
            mat[others] ^= mat[row]
        pivots.append(col)
        row += 1
    return mat[:row], tuple(pivots)


def row_reduce(m: BitMatrix) -> RowReduceResult:
    if m.rows == 0:
        return RowReduceResult(np.zeros((0, word_count(m.cols)), dtype=np.uint64), 0, ())
    echelon, pivots = _reduce_packed(m.data, m.cols)
    return RowReduceResult(echelon, len(pivots), pivots)


def rank(m: BitMatrix) -> int:
    return row_reduce(m).rank


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """A subspace of F_2^ambient_dim held in reduced row-echelon form."""

    ambient_dim: int
    basis: np.ndarray
    pivots: Tuple[int, ...]

    @classmethod
    def empty(cls, ambient_dim: int) -> "SubspaceBasis":
        return cls(ambient_dim, np.zeros((0, word_count(ambient_dim)), dtype=np.uint64), ())

    @classmethod
    def full(cls, ambient_dim: int) -> "SubspaceBasis":
        return cls.span(ambient_dim, BitMatrix.identity(ambient_dim).data if ambient_dim else [])

    @classmethod
    def span(cls, ambient_dim: int, vectors) -> "SubspaceBasis":
        vectors = [np.asarray(v, dtype=np.uint64) for v in vectors]
        if not vectors:
            return cls.empty(ambient_dim)
        echelon, pivots = _reduce_packed(np.vstack(vectors), ambient_dim)
        return cls(ambient_dim, echelon, pivots)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def rows(self) -> List[np.ndarray]:
        return [self.basis[r] for r in range(self.dim)]

    def to_dense(self) -> np.ndarray:
        if not self.dim:
            return np.zeros((0, self.ambient_dim), dtype=np.uint8)
        return unpack_rows(self.basis, self.ambient_dim)

    def reduce(self, vec: np.ndarray) -> np.ndarray:
        """Clear every pivot column of vec using the basis rows."""
        out = np.array(vec, dtype=np.uint64, copy=True)
        for r, col in enumerate(self.pivots):
            if get_bit(out, col):
                out ^= self.basis[r]
        return out

    def contains(self, vec: np.ndarray) -> bool:
        return not self.reduce(vec).any()

    def coordinates(self, vec: np.ndarray) -> List[int]:
        """Coefficients of vec on the echelon rows; vec must lie in the span."""
        return [get_bit(vec, col) for col in self.pivots]

    def complement_columns(self) -> List[int]:
        """Non-pivot columns: their unit vectors project to a basis of the quotient."""
        taken = set(self.pivots)
        return [j for j in range(self.ambient_dim) if j not in taken]

    def is_subspace_of(self, other: "SubspaceBasis") -> bool:
        return all(other.contains(v) for v in self.rows())

    def extend(self, vectors) -> "SubspaceBasis":
        return SubspaceBasis.span(self.ambient_dim, self.rows() + [np.asarray(v, dtype=np.uint64) for v in vectors])


def kernel_basis(m: BitMatrix) -> SubspaceBasis:
    """Basis of {v : m·v = 0}, echelonized."""
    reduced = row_reduce(m)
    pivot_set = set(reduced.pivots)
    free_cols = [c for c in range(m.cols) if c not in pivot_set]
    vectors = []
    for free in free_cols:
        vec = unit_vector(m.cols, free)
        for r, col in enumerate(reduced.pivots):
            if get_bit(reduced.echelon[r], free):
                flip_bit(vec, col)
        vectors.append(vec)
    return SubspaceBasis.span(m.cols, vectors)


def image_basis(m: BitMatrix) -> SubspaceBasis:
    """Column space of m inside F_2^rows."""
    if m.cols == 0 or m.rows == 0:
        return SubspaceBasis.empty(m.rows)
    return SubspaceBasis.span(m.rows, m.transpose().data)


@dataclass(frozen=True, eq=False)
class HomologyResult:
    """ker d_out / im d_in with representatives reduced against the boundaries."""

    dim: int
    cycles: SubspaceBasis
    boundaries: SubspaceBasis
    representatives: SubspaceBasis

    def class_coordinates(self, cycle: np.ndarray) -> List[int]:
        """Coordinates of a cycle's class on the representatives."""
        return self.representatives.coordinates(self.boundaries.reduce(cycle))

    def is_boundary(self, vec: np.ndarray) -> bool:
        return self.boundaries.contains(vec)


def homology(d_in: BitMatrix, d_out: BitMatrix, check: bool = True) -> HomologyResult:
    """Homology at the middle spot of A --d_in--> B --d_out--> C."""
    if d_in.rows != d_out.cols:
        raise ValueError(f"middle dimensions differ: {d_in.rows} vs {d_out.cols}")
    if check and d_in.cols and d_out.rows and not d_out.matmul(d_in).is_zero():
        raise CompositionNonzero(
            "d_out ∘ d_in is nonzero",
            {"middle_dim": d_in.rows, "rank": rank(d_out.matmul(d_in))},
        )
    cycles = kernel_basis(d_out)
    boundaries = image_basis(d_in)
    reduced = [boundaries.reduce(v) for v in cycles.rows()]
    reps = SubspaceBasis.span(d_in.rows, [v for v in reduced if v.any()])
    return HomologyResult(cycles.dim - boundaries.dim, cycles, boundaries, reps)


def homology_dim(d_in: BitMatrix, d_out: BitMatrix) -> Tuple[int, SubspaceBasis]:
    result = homology(d_in, d_out)
    return result.dim, result.representatives


def quotient(ambient_dim: int, sub: SubspaceBasis) -> List[int]:
    """Columns whose unit vectors form a basis of F_2^ambient / sub."""
    if sub.ambient_dim != ambient_dim:
        raise ValueError("subspace lives in a different ambient space")
    return sub.complement_columns()
