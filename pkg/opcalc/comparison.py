"""
Comparison of the module bar construction of P^mod with X ⊗ Bar(P).

Keys of X ⊗ Bar(P)‾ are ('c', B) in degree |B| and ('d', j, B) in degree
|B| - 1, where B is a cyclic bar tree and ∂_j belongs to leg j - 1. Keys of
Y ⊗ Bar(P)‾ are ('y', j, B) for ∂_1 - ∂_j.
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, Hashable, List, Optional, Tuple

from core.base import TruncationWindow, Vec, build_logger, check_logger, vec_add
from core.ratlin import homology
from core.treecalc import MARKED

from .barcobar import BarDecorations, Marked, TreeComplex, strip_point
from .modules import PointedModule
from .operads import OperadData
from .quasiiso import ChainMapBetween, KeyedComplex, QuasiIsoReport, check_quasi_iso, vertex_count_grading


def widened(w: TruncationWindow, extra: int = 1) -> TruncationWindow:
    return replace(w, degree_max=w.degree_max + extra)


# ==================== X ⊗ Bar and Y ⊗ Bar ====================

class TensorWithBar:
    """X ⊗ Bar(P)‾ (kind 'X') or Y ⊗ Bar(P)‾ (kind 'Y') at cyclic arities."""

    def __init__(self, operad: OperadData, kind: str = 'X', window: Optional[TruncationWindow] = None,
                 bar_complex: Optional[TreeComplex] = None):
        self.operad = operad
        self.kind = kind
        self.window = window or operad.window
        self.bar = bar_complex or TreeComplex(BarDecorations(operad), 'bar', 'cyclic', widened(self.window),
                                              name=f"Bar({operad.name})")
        self.complex = KeyedComplex(f"{kind}⊗Bar({operad.name})", self.window, self._basis, self.differential_of)

    def _basis(self, r: int) -> Dict[int, List[Hashable]]:
        out: Dict[int, List[Hashable]] = {}
        for d, keys in self.bar.basis(r).items():
            for key in keys:
                if self.kind == 'X':
                    if self.window.contains_degree(d):
                        out.setdefault(d, []).append(('c', key))
                    if self.window.contains_degree(d - 1):
                        out.setdefault(d - 1, []).extend(('d', j, key) for j in range(1, r + 1))
                elif self.window.contains_degree(d - 1):
                    out.setdefault(d - 1, []).extend(('y', j, key) for j in range(2, r + 1))
        return out

    def differential_of(self, key) -> Vec:
        out: Vec = {}
        if key[0] == 'c':
            for b, c in self.bar.differential_of(key[1]).items():
                out[('c', b)] = c
            return out
        if key[0] == 'd':
            out[('c', key[2])] = Fraction(1)
        for b, c in self.bar.differential_of(key[2]).items():
            vec_add(out, {(key[0], key[1], b): -c})
        return out

    def slice(self, r: int):
        return self.complex.slice(r)


def y_inclusion(y: TensorWithBar, x: TensorWithBar, arities: List[int]) -> ChainMapBetween:
    def image(r, key):
        _, j, b = key
        return {('d', 1, b): Fraction(1), ('d', j, b): Fraction(-1)}
    return ChainMapBetween.from_function("incl", {r: y.slice(r) for r in arities},
                                         {r: x.slice(r) for r in arities}, image)


# ==================== The map f = f' + f'' ====================

class ComparisonMap:
    """
    f: Bar(P^mod)‾ -> X ⊗ Bar(P)‾.

    f' forgets the marking (zero when the marked vertex carries the unit);
    f'' is nonzero only when the marked vertex carries the unit, is bivalent
    and touches a leg j: it removes that vertex and records ∂_j.
    """

    def __init__(self, operad: OperadData, window: Optional[TruncationWindow] = None):
        self.operad = operad
        self.window = window or operad.window
        self.module = PointedModule(operad)
        self.source = TreeComplex(BarDecorations(operad, self.module), 'bar', 'module', self.window,
                                  name=f"Bar({self.module.name})")
        self.target = TensorWithBar(operad, 'X', self.window)
        self.bar = self.target.bar

    def is_point_vertex(self, key) -> bool:
        return key[0] == MARKED and key[1][0] == Marked(self.module.point)

    def forget_marking(self, key) -> Vec:
        """f' on one tree."""
        if key[1][0] == Marked(self.module.point):
            return {}
        g = self.source.graph(key)
        g.decorations[0] = g.decorations[0].label
        g.marked = None
        return {('c', b): c for b, c in self.bar.canonical(g, 0).items()}

    def remove_point(self, key) -> Vec:
        """f'' on one tree."""
        stripped = strip_point(self.source, key, self.module.point)
        if stripped is None:
            return {}
        j, t, sign = stripped
        return {('d', j + 1, b): sign * c for b, c in self.bar.canonical(t, 0).items()}

    def image(self, key) -> Vec:
        out = self.forget_marking(key)
        vec_add(out, self.remove_point(key))
        return out

    # ==================== Chain-map identities ====================

    def point_edges(self, key) -> List[int]:
        """Lower vertices of the edges at a point-decorated marked vertex."""
        if not self.is_point_vertex(key):
            return []
        g = self.source.graph(key)
        return [p[1] for p in g.ports[0] if p[0] == 'v']

    def split_contractions(self, key) -> Tuple[Vec, Vec]:
        """(d_c' T, d_c'' T): contractions away from / at the point vertex."""
        g = self.source.graph(key)
        at_point = set(self.point_edges(key))
        away = [w for w in range(1, len(g.ports)) if w not in at_point]
        return (self.source.contraction_part(key, edges=away),
                self.source.contraction_part(key, edges=sorted(at_point)))

    def _apply(self, vec: Vec) -> Vec:
        out: Vec = {}
        for k, c in vec.items():
            vec_add(out, self.image(k), c)
        return out

    def _target_parts(self, vec: Vec) -> Tuple[Vec, Vec, Vec]:
        """(∂ part, d_P part, d_c part) of the target differential."""
        partial, internal, contraction = {}, {}, {}
        for key, c in vec.items():
            if key[0] == 'd':
                vec_add(partial, {('c', key[2]): c})
            b = key[1] if key[0] == 'c' else key[2]
            sign = -1 if key[0] == 'd' else 1
            tag = key[:-1]
            for b2, c2 in self.bar.internal_part(b).items():
                vec_add(internal, {tag + (b2,): sign * c * c2})
            for b2, c2 in self.bar.contraction_part(b).items():
                vec_add(contraction, {tag + (b2,): sign * c * c2})
        return partial, internal, contraction

    def identities(self, arities: List[int]) -> Dict[str, bool]:
        """f d_P = d_P f, f d_c' = d_c f and f d_c'' = ∂ f on every source tree."""
        result = {'internal': True, 'contraction': True, 'partial': True}
        for r in arities:
            for keys in self.source.basis(r).values():
                for key in keys:
                    partial, internal, contraction = self._target_parts(self.image(key))
                    away, at_point = self.split_contractions(key)
                    if self._apply(self.source.internal_part(key)) != internal:
                        result['internal'] = False
                    if self._apply(away) != contraction:
                        result['contraction'] = False
                    if self._apply(at_point) != partial:
                        result['partial'] = False
        check_logger.debug(f"comparison identities: {result}")
        return result

    def chain_map(self, arities: List[int]) -> ChainMapBetween:
        return ChainMapBetween.from_function(
            "f", {r: self.source.slice(r) for r in arities}, {r: self.target.slice(r) for r in arities},
            lambda r, key: self.image(key))

    # ==================== Gradings ====================

    def essential_vertices(self, r: int, key) -> int:
        """Vertices other than a point-decorated marked vertex."""
        if key[0] in ('c', 'd', 'y'):
            return vertex_count_grading(r, key[-1])
        return vertex_count_grading(r, key) - (1 if self.is_point_vertex(key) else 0)


@dataclass
class ComparisonReport:
    identities: Dict[str, bool]
    f: QuasiIsoReport
    incl: QuasiIsoReport
    graded: QuasiIsoReport
    homology_ratio: Dict[int, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return (all(self.identities.values()) and self.f.iso and self.incl.iso and self.graded.iso
                and all(self.homology_ratio.values()))

    def as_dict(self) -> Dict:
        return {
            'identities': self.identities, 'f': self.f.as_dict(), 'incl': self.incl.as_dict(),
            'graded': self.graded.as_dict(), 'homology_ratio': {str(k): v for k, v in self.homology_ratio.items()},
            'ok': self.ok,
        }


def comparison_zigzag(p: OperadData, w: Optional[TruncationWindow] = None,
                      arities: Optional[List[int]] = None) -> Tuple[ChainMapBetween, ChainMapBetween, ComparisonReport]:
    """
    Build f: Bar(P^mod)‾ -> X ⊗ Bar(P)‾ and incl: Y ⊗ Bar(P)‾ -> X ⊗ Bar(P)‾ and
    check both slice-wise, including on the essential-vertex graded pieces.
    """
    w = w or p.window
    arities = arities or list(range(2, w.max_arity + 2))
    comparison = ComparisonMap(p, w)
    f = comparison.chain_map(arities)
    y = TensorWithBar(p, 'Y', w, comparison.bar)
    incl = y_inclusion(y, comparison.target, arities)

    identities = comparison.identities(arities)
    f_report = check_quasi_iso(f, w)
    incl_report = check_quasi_iso(incl, w)
    graded = check_quasi_iso(f, w, grading=comparison.essential_vertices, check_chain=False)
    graded.name = "f (essential vertices)"

    ratio = {}
    for r in arities:
        src = comparison.source.slice(r)
        bar_slice = TreeComplex(BarDecorations(p), 'bar', 'cyclic', w).slice(r)
        ok = True
        for d in src.degrees():
            if not (src.is_reliable(d) and bar_slice.is_reliable(d + 1)):
                continue
            lhs = homology(src, d, representatives=False).dimension
            rhs = homology(bar_slice, d + 1, representatives=False).dimension
            if lhs != (r - 1) * rhs:
                ok = False
        ratio[r] = ok
    build_logger.info(f"comparison for {p.name}: arities {arities}")
    return f, incl, ComparisonReport(identities, f_report, incl_report, graded, ratio)
