"""
Chain maps between sliced complexes and quasi-isomorphism reports.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Hashable, List, Optional, Tuple

from core.base import NotChainMap, TruncationWindow, Vec, WindowOverflow, check_logger
from core.ratlin import ComplexSlice, SparseMatrix, homology, map_rank_on_homology
from core.symseq import GroupAction

Grading = Callable[[int, Hashable], int]


@dataclass
class ChainMapBetween:
    """
    A degree-0 map of complexes, one slice per arity.

    Attributes:
        name: label used in reports
        source: arity -> complex slice
        target: arity -> complex slice
        maps: (arity, degree) -> matrix (target dim x source dim)
    """
    name: str
    source: Dict[int, ComplexSlice]
    target: Dict[int, ComplexSlice]
    maps: Dict[Tuple[int, int], SparseMatrix] = field(default_factory=dict)

    @classmethod
    def from_function(cls, name: str, source: Dict[int, ComplexSlice], target: Dict[int, ComplexSlice],
                      image: Callable[[int, Hashable], Vec], strict: bool = True) -> "ChainMapBetween":
        """
        Tabulate a map given on basis labels.

        Images outside the target basis of the same degree raise NotChainMap
        when strict, and are dropped otherwise.
        """
        maps: Dict[Tuple[int, int], SparseMatrix] = {}
        for r, src in source.items():
            tgt = target[r]
            for d in src.degrees():
                index = {k: i for i, k in enumerate(tgt.spaces.get(d, []))}
                columns = []
                for key in src.spaces[d]:
                    column = {}
                    for k2, c in image(r, key).items():
                        if k2 not in index:
                            if strict:
                                raise NotChainMap(f"{name}: image of {key!r} leaves the target in degree {d}")
                            continue
                        column[index[k2]] = Fraction(c)
                    columns.append(column)
                maps[(r, d)] = SparseMatrix.from_columns(len(index), columns)
        return cls(name, source, target, maps)

    def matrix(self, r: int, d: int) -> SparseMatrix:
        if (r, d) in self.maps:
            return self.maps[(r, d)]
        return SparseMatrix.zero(self.target[r].dim(d), self.source[r].dim(d))

    def check_chain(self) -> List[Tuple[int, int]]:
        """Raise NotChainMap unless f d = d f on every pair of window degrees."""
        checked = []
        for r, src in self.source.items():
            tgt = self.target[r]
            degrees = sorted(set(src.degrees()) | set(tgt.degrees()))
            for d in degrees:
                if d + 1 not in src.spaces or d + 1 not in tgt.spaces:
                    continue
                if tgt.d(d) @ self.matrix(r, d) != self.matrix(r, d + 1) @ src.d(d):
                    raise NotChainMap(f"{self.name} does not commute with d in arity {r}, degree {d}")
                checked.append((r, d))
        return checked

    def check_equivariant(self, source_actions: Dict[int, GroupAction], target_actions: Dict[int, GroupAction]):
        """Raise NotChainMap unless the map commutes with every transposition."""
        for r, src in self.source.items():
            a, b = source_actions.get(r), target_actions.get(r)
            if a is None or b is None:
                continue
            for i in range(a.n - 1):
                for d in src.degrees():
                    s = a.generators[i].get(d)
                    t = b.generators[i].get(d)
                    if s is None or t is None:
                        continue
                    if t @ self.matrix(r, d) != self.matrix(r, d) @ s:
                        raise NotChainMap(f"{self.name} is not equivariant in arity {r}, degree {d}")

    def compose(self, first: "ChainMapBetween", name: str = "") -> "ChainMapBetween":
        """self ∘ first."""
        maps = {}
        for r in first.source:
            for d in first.source[r].degrees():
                maps[(r, d)] = self.matrix(r, d) @ first.matrix(r, d)
        return ChainMapBetween(name or f"{self.name}∘{first.name}", first.source, self.target, maps)


@dataclass
class SliceReport:
    arity: int
    degree: int
    source_dim: int
    target_dim: int
    rank: int
    reliable: bool
    grade: Optional[int] = None

    @property
    def iso(self) -> bool:
        return self.source_dim == self.target_dim == self.rank

    def as_dict(self) -> Dict:
        out = {
            'arity': self.arity, 'degree': self.degree, 'source_dim': self.source_dim,
            'target_dim': self.target_dim, 'rank': self.rank, 'iso': self.iso, 'reliable': self.reliable,
        }
        if self.grade is not None:
            out['grade'] = self.grade
        return out


@dataclass
class QuasiIsoReport:
    name: str
    slices: List[SliceReport] = field(default_factory=list)

    @property
    def iso(self) -> bool:
        """True when every reliable slice is an isomorphism on homology."""
        return all(s.iso for s in self.slices if s.reliable)

    def failures(self) -> List[SliceReport]:
        return [s for s in self.slices if s.reliable and not s.iso]

    def as_dict(self) -> Dict:
        return {'name': self.name, 'iso': self.iso, 'slices': [s.as_dict() for s in self.slices]}


# ==================== Filtrations ====================

def _graded_piece(c: ComplexSlice, grades: Dict[int, List[int]], p: int) -> Tuple[ComplexSlice, Dict[int, List[int]]]:
    """gr_p of a slice: basis vectors of grade p, differential components within grade p."""
    keep = {d: [i for i, g in enumerate(grades.get(d, [])) if g == p] for d in c.spaces}
    spaces = {d: [c.spaces[d][i] for i in idx] for d, idx in keep.items()}
    differentials = {}
    for d, mat in c.differentials.items():
        if d + 1 not in keep:
            continue
        rows = {i: j for j, i in enumerate(keep[d + 1])}
        columns = []
        for i in keep[d]:
            columns.append({rows[k]: v for k, v in mat.column(i).items() if k in rows})
        differentials[d] = SparseMatrix.from_columns(len(rows), columns)
    return ComplexSlice(spaces, differentials, c.complete), keep


def _restrict(mat: SparseMatrix, rows: List[int], cols: List[int]) -> SparseMatrix:
    index = {i: j for j, i in enumerate(rows)}
    columns = [{index[k]: v for k, v in mat.column(c).items() if k in index} for c in cols]
    return SparseMatrix.from_columns(len(rows), columns)


def _check_filtered(c: ComplexSlice, grades: Dict[int, List[int]], name: str):
    for d, mat in c.differentials.items():
        for (row, col), _ in mat.entries.items():
            if grades[d + 1][row] > grades[d][col]:
                raise NotChainMap(f"{name}: differential raises the filtration degree")


def vertex_count_grading(r: int, key) -> int:
    """Number of vertices of a tree key."""
    count = 0
    stack = [key[1]]
    while stack:
        node = stack.pop()
        count += 1
        stack.extend(c for c in node[1] if isinstance(c, tuple))
    return count


# ==================== Quasi-isomorphism check ====================

def check_quasi_iso(f: ChainMapBetween, w: Optional[TruncationWindow] = None,
                    grading: Optional[Grading] = None, check_chain: bool = True) -> QuasiIsoReport:
    """
    Compare homology on both sides slice by slice.

    Args:
        f: the chain map
        w: restrict to arities within the window
        grading: optional ascending filtration degree on basis labels of both
            sides; the check then runs on every associated graded piece
        check_chain: verify f d = d f first

    Raises:
        NotChainMap: the map (or a differential) is not compatible
    """
    if check_chain:
        f.check_chain()
    report = QuasiIsoReport(f.name)
    for r in sorted(f.source):
        if w is not None and r > w.max_arity + 1:
            continue
        src, tgt = f.source[r], f.target[r]
        degrees = sorted(set(src.degrees()) | set(tgt.degrees()))
        if grading is None:
            for d in degrees:
                s = homology(src, d, representatives=False).dimension
                t = homology(tgt, d, representatives=False).dimension
                rk = map_rank_on_homology(src, tgt, f.matrix(r, d), d) if s and t else 0
                report.slices.append(SliceReport(r, d, s, t, rk, src.is_reliable(d) and tgt.is_reliable(d)))
            continue
        sg = {d: [grading(r, k) for k in src.spaces.get(d, [])] for d in degrees}
        tg = {d: [grading(r, k) for k in tgt.spaces.get(d, [])] for d in degrees}
        _check_filtered(src, sg, f.name)
        _check_filtered(tgt, tg, f.name)
        for d in degrees:
            for (row, col), _ in f.matrix(r, d).entries.items():
                if tg[d][row] > sg[d][col]:
                    raise NotChainMap(f"{f.name}: map raises the filtration degree")
        grades = sorted({g for v in sg.values() for g in v} | {g for v in tg.values() for g in v})
        for p in grades:
            src_p, src_keep = _graded_piece(src, sg, p)
            tgt_p, tgt_keep = _graded_piece(tgt, tg, p)
            for d in degrees:
                s = homology(src_p, d, representatives=False).dimension
                t = homology(tgt_p, d, representatives=False).dimension
                rk = 0
                if s and t:
                    m = _restrict(f.matrix(r, d), tgt_keep.get(d, []), src_keep.get(d, []))
                    rk = map_rank_on_homology(src_p, tgt_p, m, d)
                if s or t:
                    report.slices.append(SliceReport(r, d, s, t, rk, src.is_reliable(d) and tgt.is_reliable(d), p))
    verdict = "iso" if report.iso else f"{len(report.failures())} failing slices"
    check_logger.info(f"[cyan]{f.name}[/cyan]: {verdict}")
    return report


# ==================== Complexes given on keys ====================

class KeyedComplex:
    """
    A complex given by a basis function and a differential on basis keys.

    Args:
        name: label for logs and reports
        window: degree range of every slice
        basis: r -> {degree: keys}
        differential: key -> {key: coeff} (degree +1)
    """

    def __init__(self, name: str, window: TruncationWindow, basis: Callable[[int], Dict[int, List[Hashable]]],
                 differential: Callable[[Hashable], Vec]):
        self.name = name
        self.window = window
        self._basis_fn = basis
        self.differential_of = differential
        self._basis: Dict[int, Dict[int, List[Hashable]]] = {}
        self._slices: Dict[int, ComplexSlice] = {}

    def basis(self, r: int) -> Dict[int, List[Hashable]]:
        if r not in self._basis:
            self._basis[r] = self._basis_fn(r)
        return self._basis[r]

    def slice(self, r: int) -> ComplexSlice:
        if r in self._slices:
            return self._slices[r]
        w = self.window
        basis = self.basis(r)
        spaces = {d: basis.get(d, []) for d in range(w.degree_min, w.degree_max + 1)}
        index = {d: {k: i for i, k in enumerate(keys)} for d, keys in spaces.items()}
        differentials = {}
        for d in range(w.degree_min, w.degree_max):
            if not spaces[d]:
                continue
            columns = []
            for key in spaces[d]:
                column = {}
                for k2, c in self.differential_of(key).items():
                    if k2 not in index[d + 1]:
                        raise WindowOverflow(f"{self.name}({r}): differential leaves the basis at degree {d + 1}")
                    column[index[d + 1][k2]] = c
                columns.append(column)
            differentials[d] = SparseMatrix.from_columns(len(spaces[d + 1]), columns)
        result = ComplexSlice(spaces, differentials, complete=(w.degree_min + 1, w.degree_max - 1))
        self._slices[r] = result
        return result


def identity_map(name: str, slices: Dict[int, ComplexSlice]) -> ChainMapBetween:
    maps = {(r, d): SparseMatrix.identity(c.dim(d)) for r, c in slices.items() for d in c.degrees()}
    return ChainMapBetween(name, slices, slices, maps)
