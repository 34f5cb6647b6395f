"""
Exact rational sparse linear algebra.

Matrices are stored row-wise as dicts of nonzero Fractions. Everything here is
pure: inputs are never mutated, and results do not depend on evaluation order.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple
import heapq

from .base import BoundaryDegree, NotChainMap, Vec, build_logger


class SparseMatrix:
    """Sparse matrix over Q with no stored zeros."""

    def __init__(self, rows: int, cols: int, entries: Optional[Dict[Tuple[int, int], Fraction]] = None):
        self.rows = rows
        self.cols = cols
        self._data: Dict[int, Dict[int, Fraction]] = {}
        for (r, c), value in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside {rows}x{cols}")
            value = Fraction(value)
            if value:
                self._data.setdefault(r, {})[c] = value

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "SparseMatrix":
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        entries = {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row) if v}
        return cls(len(rows), ncols, entries)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Dict[int, Fraction]]) -> "SparseMatrix":
        """Build from column vectors given as {row: value} dicts."""
        entries = {(r, j): v for j, col in enumerate(columns) for r, v in col.items() if v}
        return cls(rows, len(columns), entries)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    @property
    def entries(self) -> Dict[Tuple[int, int], Fraction]:
        return {(r, c): v for r, row in self._data.items() for c, v in row.items()}

    def row(self, r: int) -> Dict[int, Fraction]:
        return dict(self._data.get(r, {}))

    def column(self, c: int) -> Dict[int, Fraction]:
        return {r: row[c] for r, row in self._data.items() if c in row}

    def columns(self) -> List[Dict[int, Fraction]]:
        cols: List[Dict[int, Fraction]] = [{} for _ in range(self.cols)]
        for r, row in self._data.items():
            for c, v in row.items():
                cols[c][r] = v
        return cols

    def get(self, r: int, c: int) -> Fraction:
        return self._data.get(r, {}).get(c, Fraction(0))

    def is_zero(self) -> bool:
        return not self._data

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def apply(self, vector: Dict[int, Fraction]) -> Dict[int, Fraction]:
        """Matrix times a sparse column vector."""
        out: Dict[int, Fraction] = {}
        for r, row in self._data.items():
            total = sum((v * vector[c] for c, v in row.items() if c in vector), Fraction(0))
            if total:
                out[r] = total
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        result: Dict[Tuple[int, int], Fraction] = {}
        for r, row in self._data.items():
            acc: Dict[int, Fraction] = {}
            for k, a in row.items():
                for c, b in other._data.get(k, {}).items():
                    acc[c] = acc.get(c, 0) + a * b
            for c, v in acc.items():
                if v:
                    result[(r, c)] = v
        return SparseMatrix(self.rows, other.cols, result)

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in subtraction")
        entries = self.entries
        for key, v in other.entries.items():
            entries[key] = entries.get(key, 0) - v
        return SparseMatrix(self.rows, self.cols, entries)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self - other.scaled(-1)

    def scaled(self, factor) -> "SparseMatrix":
        return SparseMatrix(self.rows, self.cols, {k: v * factor for k, v in self.entries.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self.entries == other.entries

    def dense(self) -> List[List[Fraction]]:
        return [[self.get(r, c) for c in range(self.cols)] for r in range(self.rows)]

    def triples(self) -> List[Tuple[int, int, str]]:
        """Sorted (row, col, value) triples for serialization."""
        return [(r, c, str(v)) for (r, c), v in sorted(self.entries.items())]

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


# ==================== Incremental echelon basis ====================

class Echelon:
    """
    Incrementally built echelon basis of a subspace.

    Each stored vector has its minimal key as pivot with coefficient 1, so a
    reduction only ever introduces larger keys. Keys must be mutually
    comparable (ints, or tuples of ints).
    """

    def __init__(self, vectors: Iterable[Dict] = ()):
        self.pivots: Dict[Hashable, Dict] = {}
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(self, vector: Dict) -> Dict:
        v = {k: Fraction(c) for k, c in vector.items() if c}
        heap = [k for k in v if k in self.pivots]
        heapq.heapify(heap)
        while heap:
            key = heapq.heappop(heap)
            coeff = v.get(key)
            if not coeff:
                continue
            for k, c in self.pivots[key].items():
                new = v.get(k, 0) - coeff * c
                if new:
                    if k not in v and k in self.pivots:
                        heapq.heappush(heap, k)
                    v[k] = new
                else:
                    v.pop(k, None)
        return v

    def add(self, vector: Dict) -> bool:
        """Add a vector; returns True if it enlarged the span."""
        v = self.reduce(vector)
        if not v:
            return False
        pivot = min(v)
        lead = v[pivot]
        self.pivots[pivot] = {k: c / lead for k, c in v.items()}
        return True

    def contains(self, vector: Dict) -> bool:
        return not self.reduce(vector)

    def reduced_rows(self) -> List[Tuple[Hashable, Dict]]:
        """Fully reduced (RREF) rows sorted by pivot."""
        rows: Dict[Hashable, Dict] = {}
        for pivot in sorted(self.pivots, reverse=True):
            row = dict(self.pivots[pivot])
            for later in [k for k in row if k != pivot and k in rows]:
                coeff = row.pop(later)
                for k, c in rows[later].items():
                    if k == later:
                        continue
                    new = row.get(k, 0) - coeff * c
                    if new:
                        row[k] = new
                    else:
                        row.pop(k, None)
            rows[pivot] = row
        return [(p, rows[p]) for p in sorted(rows)]


# ==================== Core operations ====================

def rref(m: SparseMatrix) -> Tuple[SparseMatrix, int, List[int]]:
    """
    Reduced row echelon form.

    Returns:
        (echelon matrix, rank, pivot columns); pivot rows come first in
        increasing pivot order, remaining rows are zero.
    """
    basis = Echelon(m.row(r) for r in range(m.rows))
    rows = basis.reduced_rows()
    entries = {(i, c): v for i, (_, row) in enumerate(rows) for c, v in row.items()}
    pivots = [p for p, _ in rows]
    return SparseMatrix(m.rows, m.cols, entries), len(pivots), pivots


def rank(m: SparseMatrix) -> int:
    if m.rows <= m.cols:
        return len(Echelon(m.row(r) for r in range(m.rows)))
    return len(Echelon(m.columns()))


def kernel_basis(m: SparseMatrix) -> List[Dict[int, Fraction]]:
    """Null space basis; vector i has a 1 in the i-th free column and 0 in the other free columns."""
    echelon, _, pivots = rref(m)
    pivot_rows = {p: echelon.row(i) for i, p in enumerate(pivots)}
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        vec = {free: Fraction(1)}
        for p, row in pivot_rows.items():
            coeff = row.get(free)
            if coeff:
                vec[p] = -coeff
        basis.append(vec)
    return basis


def solve_affine(a: SparseMatrix, b: Sequence) -> Optional[Tuple[Dict[int, Fraction], List[Dict[int, Fraction]]]]:
    """
    Solve a x = b.

    Returns:
        None when inconsistent, else (particular solution with free variables
        zero, homogeneous basis from kernel_basis).
    """
    if len(b) != a.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {a.rows}")
    rhs_col = a.cols
    augmented = SparseMatrix(a.rows, a.cols + 1, {**a.entries, **{(r, rhs_col): Fraction(v) for r, v in enumerate(b) if v}})
    echelon, _, pivots = rref(augmented)
    if rhs_col in pivots:
        return None
    particular = {}
    for i, p in enumerate(pivots):
        value = echelon.get(i, rhs_col)
        if value:
            particular[p] = value
    return particular, kernel_basis(a)


def coordinates(vectors: Sequence[Dict], target: Dict) -> Optional[List[Fraction]]:
    """Coefficients expressing target in terms of vectors (None if outside the span)."""
    keys = sorted({k for v in vectors for k in v} | set(target))
    index = {k: i for i, k in enumerate(keys)}
    columns = [{index[k]: c for k, c in v.items()} for v in vectors]
    a = SparseMatrix.from_columns(len(keys), columns)
    rhs = [Fraction(0)] * len(keys)
    for k, c in target.items():
        rhs[index[k]] = Fraction(c)
    solution = solve_affine(a, rhs)
    if solution is None:
        return None
    particular, _ = solution
    return [particular.get(j, Fraction(0)) for j in range(len(vectors))]


def normalize_leading(vector: Dict[int, Fraction]) -> Dict[int, Fraction]:
    """Scale so the first nonzero coordinate is +1."""
    if not vector:
        return {}
    lead = vector[min(vector)]
    return {k: v / lead for k, v in vector.items()}


# ==================== Complexes ====================

@dataclass
class HomologyResult:
    degree: int
    dimension: int
    representatives: List[Dict[int, Fraction]] = field(default_factory=list)
    reliable: bool = True


@dataclass
class ComplexSlice:
    """
    Bounded cochain complex: d maps degree k to degree k + 1.

    Attributes:
        spaces: degree -> basis labels
        differentials: degree k -> matrix of shape (dim k+1) x (dim k)
        complete: degree range whose neighbours are fully present; homology
            outside it is flagged unreliable
    """
    spaces: Dict[int, List[Hashable]]
    differentials: Dict[int, SparseMatrix] = field(default_factory=dict)
    complete: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        for k, mat in self.differentials.items():
            src, tgt = self.dim(k), self.dim(k + 1)
            if (mat.rows, mat.cols) != (tgt, src):
                raise ValueError(f"differential at degree {k} has shape {mat.rows}x{mat.cols}, expected {tgt}x{src}")
        for k in self.differentials:
            if k + 1 in self.differentials:
                if not (self.differentials[k + 1] @ self.differentials[k]).is_zero():
                    raise NotChainMap(f"d∘d is nonzero at degree {k}")
        if self.complete is None and self.spaces:
            self.complete = (min(self.spaces), max(self.spaces))

    def dim(self, degree: int) -> int:
        return len(self.spaces.get(degree, []))

    def degrees(self) -> List[int]:
        return sorted(self.spaces)

    def d(self, degree: int) -> SparseMatrix:
        if degree in self.differentials:
            return self.differentials[degree]
        return SparseMatrix.zero(self.dim(degree + 1), self.dim(degree))

    def is_reliable(self, degree: int) -> bool:
        if self.complete is None:
            return True
        lo, hi = self.complete
        return lo <= degree <= hi

    def euler_characteristic(self) -> int:
        return sum((-1) ** (k % 2) * self.dim(k) for k in self.spaces)


def homology(c: ComplexSlice, d: int, representatives: bool = True, strict: bool = False) -> HomologyResult:
    """
    H^d of a complex slice.

    Args:
        c: the complex
        d: degree
        representatives: also return cocycles whose classes form a basis
        strict: raise BoundaryDegree instead of flagging unreliable results
    """
    reliable = c.is_reliable(d)
    if not reliable and strict:
        raise BoundaryDegree(f"degree {d} lies outside the complete range {c.complete}")
    n = c.dim(d)
    if n == 0:
        return HomologyResult(d, 0, [], reliable)
    outgoing = c.d(d)
    incoming = c.d(d - 1)
    if not representatives:
        dim = n - rank(outgoing) - rank(incoming)
        return HomologyResult(d, dim, [], reliable)
    cycles = kernel_basis(outgoing)
    boundaries = Echelon(incoming.columns())
    reps = []
    for z in cycles:
        if boundaries.add(z):
            reps.append(normalize_leading(z))
    build_logger.debug(f"H^{d}: {len(cycles)} cycles, {len(reps)} classes")
    return HomologyResult(d, len(reps), reps, reliable)


def homology_dims(c: ComplexSlice) -> Dict[int, int]:
    return {k: homology(c, k, representatives=False).dimension for k in c.degrees()}


def map_rank_on_homology(source: ComplexSlice, target: ComplexSlice, f: SparseMatrix, degree: int) -> int:
    """Rank of the map induced on H^degree by a chain map given as a matrix."""
    src = homology(source, degree)
    images = [f.apply(z) for z in src.representatives]
    boundaries = Echelon(target.d(degree - 1).columns())
    base = len(boundaries)
    for v in images:
        boundaries.add(v)
    return len(boundaries) - base
