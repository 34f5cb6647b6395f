"""
The counit η: G Bar^c Bar F(P) -> P and its factorization through
φ: Ind Bar(F P)‾ ⊕ Bar(P^mod)‾ -> Bar(P)‾, with φ = r ∘ l.

The middle complex L is Ind Bar(F P)‾ ⊕ X ⊗ Bar(P)‾ with keys ('ind', key),
('c', B) and ('d', j, B); its differential adds to that of X ⊗ Bar(P)‾ the
component ∂_j ⊗ B -> -ind(B rooted at leg j - 1).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, Hashable, List, Optional

from core.base import TruncationWindow, Vec, build_logger, vec_add
from core.ratlin import ComplexSlice
from core.treecalc import Canonicalizer, TreeGraph, evaluate_tree

from .barcobar import BarCooperad, BarDecorations, TreeComplex, bar, cobar, cobar_bar_counit
from .comparison import ComparisonMap, TensorWithBar
from .functor_g import COBAR_UNIT, PairCooperad, g_of_cobar
from .operads import OperadData
from .quasiiso import ChainMapBetween, KeyedComplex, QuasiIsoReport, check_quasi_iso


def operad_slices(p: OperadData, arities: List[int], cyclic: bool = True) -> Dict[int, ComplexSlice]:
    """P((r)) (or P(r) when not cyclic) as complexes; the differential is that of P."""
    out = {}
    w = p.window
    for r in arities:
        comp = p.component(r - 1 if cyclic else r)
        spaces = {d: list(comp.space.basis.get(d, [])) for d in range(w.degree_min, w.degree_max + 1)}
        differentials = {d: m for d, m in comp.differential.items() if d + 1 in spaces and d in spaces}
        out[r] = ComplexSlice(spaces, differentials)
    return out


class SecondLine:
    """The complex L between the pair cooperad and Bar(P)‾."""

    def __init__(self, pair: PairCooperad, tensor: TensorWithBar):
        self.pair = pair
        self.tensor = tensor
        self.window = pair.window
        self.complex = KeyedComplex(f"L({pair.p.name})", self.window, self._basis, self.differential_of)

    def _basis(self, r: int) -> Dict[int, List[Hashable]]:
        out: Dict[int, List[Hashable]] = {}
        for x in self.pair.ind_labels(r):
            d = self.pair.degree(x)
            if self.window.contains_degree(d):
                out.setdefault(d, []).append(x)
        for d, keys in self.tensor.complex.basis(r).items():
            out.setdefault(d, []).extend(keys)
        return out

    def differential_of(self, key) -> Vec:
        if key[0] == 'ind':
            return self.pair.internal(key)
        out = self.tensor.differential_of(key)
        if key[0] == 'd':
            _, j, b = key
            g = self.tensor.bar.graph(b)
            for k, c in self.pair.cyc.canonicalize(g, j - 1).items():
                vec_add(out, {('ind', k): -c})
        return out

    def slice(self, r: int) -> ComplexSlice:
        return self.complex.slice(r)


class PairComplex:
    """The pair cooperad as a complex, slice by slice."""

    def __init__(self, pair: PairCooperad):
        self.pair = pair
        self.complex = KeyedComplex(f"K({pair.p.name})", pair.window, self._basis, pair.differential)

    def _basis(self, r: int) -> Dict[int, List[Hashable]]:
        return {d: keys for d, keys in self.pair.basis(r).items() if self.pair.window.contains_degree(d)}

    def slice(self, r: int) -> ComplexSlice:
        return self.complex.slice(r)


@dataclass
class CounitReport:
    eta: QuasiIsoReport
    phi: QuasiIsoReport
    l: QuasiIsoReport
    r: QuasiIsoReport
    factorization: bool
    r_kills_shifted: bool
    l_extends_f: bool
    presentation_dims: Dict[int, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return (self.eta.iso and self.phi.iso and self.l.iso and self.r.iso and self.factorization
                and self.r_kills_shifted and self.l_extends_f and all(self.presentation_dims.values()))

    def as_dict(self) -> Dict:
        return {
            'eta': self.eta.as_dict(), 'phi': self.phi.as_dict(), 'l': self.l.as_dict(), 'r': self.r.as_dict(),
            'factorization': self.factorization, 'r_kills_shifted': self.r_kills_shifted,
            'l_extends_f': self.l_extends_f,
            'presentation_dims': {str(k): v for k, v in self.presentation_dims.items()}, 'ok': self.ok,
        }


class Counit:
    """All maps of the counit factorization for one cyclic operad."""

    def __init__(self, p: OperadData, w: Optional[TruncationWindow] = None):
        self.p = p
        self.window = w or p.window
        self.pair = PairCooperad(p, self.window)
        self.comparison = ComparisonMap(p, self.window)
        self.tensor = self.comparison.target
        self.bar = TreeComplex(BarDecorations(p), 'bar', 'cyclic', self.window, name=f"Bar({p.name})")
        self.line = SecondLine(self.pair, self.tensor)
        self.k = PairComplex(self.pair)
        self.canon = Canonicalizer(permute=p.permute, degree=p.degree, edge_degree=0)

    # ==================== Maps on keys ====================

    def unroot(self, key) -> Vec:
        """An Ind tree seen as a cyclic bar tree."""
        g = self.pair.nc.graph(key)
        return self.bar.canonical(g, 0)

    def l_image(self, x) -> Vec:
        if x[0] == 'ind':
            return {x: Fraction(1)}
        return self.comparison.image(x[1])

    def r_image(self, key) -> Vec:
        if key[0] == 'ind':
            return self.unroot(key[1])
        if key[0] == 'c':
            return {key[1]: Fraction(1)}
        return {}

    def phi_image(self, x) -> Vec:
        if x[0] == 'ind':
            return self.unroot(x[1])
        return {b: c for (_, b), c in self.comparison.forget_marking(x[1]).items()}

    def vertex_image(self, label) -> Vec:
        """A one-vertex pair-cooperad label as an element of P; zero on larger trees."""
        tag, (anchor, (dec, children)) = label
        if any(isinstance(c, tuple) for c in children):
            return {}
        ports = ([anchor] if tag == 'ind' else []) + list(children)
        x = dec.label if tag == 'mod' else dec
        order = tuple(ports.index(t) for t in range(len(ports)))
        if order == tuple(range(len(order))):
            return {x: Fraction(1)}
        return self.p.permute(x, order)

    def eta_image(self, key) -> Vec:
        """η on a cobar tree: evaluate its corolla decorations in P."""
        if key == COBAR_UNIT:
            return {self.p.unit: Fraction(1)}
        graph = self.cobar.graph(key)
        options = [list(self.vertex_image(dec).items()) for dec in graph.decorations]
        out: Vec = {}
        for combo in product(*options):
            coeff = Fraction(1)
            for _, c in combo:
                coeff *= c
            g = TreeGraph(graph.ports, [d for d, _ in combo], list(graph.word), graph.marked)
            vec_add(out, evaluate_tree(g, self.p.glue, self.p.permute, self.canon), coeff)
        return out

    # ==================== Assembly ====================

    def build(self, arities: Optional[List[int]] = None, presentation_oracle: bool = True) -> CounitReport:
        arities = arities or list(range(2, self.window.max_arity + 2))
        k = {r: self.k.slice(r) for r in arities}
        line = {r: self.line.slice(r) for r in arities}
        bar = {r: self.bar.slice(r) for r in arities}

        l_map = ChainMapBetween.from_function("l", k, line, lambda r, x: self.l_image(x))
        r_map = ChainMapBetween.from_function("r", line, bar, lambda r, x: self.r_image(x))
        phi = ChainMapBetween.from_function("φ", k, bar, lambda r, x: self.phi_image(x))
        composite = r_map.compose(l_map)
        factorization = all(composite.matrix(r, d) == phi.matrix(r, d) for r in arities for d in k[r].degrees())

        r_kills = all(not self.r_image(key) for r in arities for keys in line[r].spaces.values()
                      for key in keys if key[0] == 'd')
        l_extends = all(self.l_image(x) == self.comparison.image(x[1])
                        for r in arities for keys in k[r].spaces.values() for x in keys if x[0] == 'mod')

        result = g_of_cobar(self.p, self.window, arities, oracle=presentation_oracle)
        self.cobar = result.complex
        source = {r: result.slice(r) for r in arities}
        target = operad_slices(self.p, arities)
        eta = ChainMapBetween.from_function("η", source, target, lambda r, key: self.eta_image(key))

        report = CounitReport(
            eta=check_quasi_iso(eta, self.window),
            phi=check_quasi_iso(phi, self.window),
            l=check_quasi_iso(l_map, self.window),
            r=check_quasi_iso(r_map, self.window),
            factorization=factorization,
            r_kills_shifted=r_kills,
            l_extends_f=l_extends,
        )
        if presentation_oracle:
            report.presentation_dims = {r: result.dims[r] == result.oracle_dims.get(r) for r in arities}
        build_logger.info(f"counit for {self.p.name}: {'ok' if report.ok else 'FAILED'}")
        return report


def counit_eta(p: OperadData, w: Optional[TruncationWindow] = None, arities: Optional[List[int]] = None,
               presentation_oracle: bool = True) -> CounitReport:
    """Build η, φ, l and r for a cyclic operad and check them slice by slice."""
    return Counit(p, w).build(arities, presentation_oracle)


def cobar_bar_counit_check(p: OperadData, variant: str = 'operad', w: Optional[TruncationWindow] = None,
                           arities: Optional[List[int]] = None) -> QuasiIsoReport:
    """
    The counit Cobar(Bar P) -> P as a chain map, checked slice by slice.

    Arities with a unit-only component are skipped: the reduced bar
    construction has nothing there.
    """
    w = w or p.window
    cyclic = variant == 'cyclic'
    if arities is None:
        arities = list(range(3, w.max_arity + 2)) if cyclic else list(range(2, w.max_arity + 1))
    b = bar(p, variant, w=w)
    complex_ = cobar(BarCooperad(b), variant, w=w, name=f"Cobar(Bar({p.name}))")
    source = {r: complex_.slice(r) for r in arities}
    target = operad_slices(p, arities, cyclic)
    counit = ChainMapBetween.from_function(f"ε({p.name})", source, target,
                                           lambda r, key: cobar_bar_counit(complex_, p, key))
    return check_quasi_iso(counit, w)
