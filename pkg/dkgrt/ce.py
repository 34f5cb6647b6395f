"""
Chevalley-Eilenberg cochains of the framed Drinfeld-Kohno algebra ft(r),
weight by weight, and the map to BV^c(r) given on generators by
t_ij* -> ω_ij and t_ii* -> θ_i.

A cochain is an exterior monomial in the duals of the Lyndon basis of the
Lie algebra, written as a sorted tuple of generator indices. Its degree is
the number of factors and its weight the sum of their weights.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from core.base import TruncationWindow, Vec, WindowOverflow, build_logger, vec_add
from core.ratlin import ComplexSlice, SparseMatrix, homology_dims
from opcalc.quasiiso import ChainMapBetween, QuasiIsoReport, check_quasi_iso

from .dk import DKAlgebra

Cochain = Tuple[int, ...]


def _sorted_with_sign(items: List[int]) -> Tuple[int, Optional[Cochain]]:
    arr = list(items)
    sign = 1
    for a in range(1, len(arr)):
        b = a
        while b > 0 and arr[b - 1] > arr[b]:
            arr[b - 1], arr[b] = arr[b], arr[b - 1]
            sign = -sign
            b -= 1
    if len(set(arr)) != len(arr):
        return 0, None
    return sign, tuple(arr)


def _monomials(weights: List[int], total: int) -> Dict[int, List[Cochain]]:
    """Exterior monomials of the given total weight, by degree."""
    out: Dict[int, List[Cochain]] = {}

    def extend(start: int, chosen: List[int], weight: int):
        if weight == total:
            out.setdefault(len(chosen), []).append(tuple(chosen))
            return
        for k in range(start, len(weights)):
            if weight + weights[k] <= total:
                extend(k + 1, chosen + [k], weight + weights[k])

    extend(0, [], 0)
    return out


@dataclass
class CEComplexSlice:
    """
    C(ft(r)) truncated at a weight.

    Attributes:
        algebra: the framed algebra ft(r)
        weights: weight of each generator (generator k is the dual of the
            k-th Lyndon basis element, weights ascending)
        words: Lyndon word of each generator
        differentials_of_generators: k -> d(ξ_k) as {cochain: coeff}
        slices: weight -> complex in degrees 0..weight + 1
    """
    algebra: DKAlgebra
    weights: List[int]
    words: List[Tuple[int, ...]]
    differentials_of_generators: Dict[int, Dict[Cochain, Fraction]]
    slices: Dict[int, ComplexSlice] = field(default_factory=dict)

    @property
    def r(self) -> int:
        return self.algebra.r

    def differential(self, m: Cochain) -> Dict[Cochain, Fraction]:
        """d(ξ_1 .. ξ_k) = Σ_p (-1)^p ξ_1 .. dξ_p .. ξ_k."""
        out: Dict[Cochain, Fraction] = {}
        for p, k in enumerate(m):
            for pair, c in self.differentials_of_generators.get(k, {}).items():
                s, key = _sorted_with_sign(list(m[:p]) + list(pair) + list(m[p + 1:]))
                if s:
                    vec_add(out, {key: c * s * (-1 if p % 2 else 1)})
        return out

    def homology(self) -> Dict[int, Dict[int, int]]:
        """weight -> degree -> dim H, nonzero entries only."""
        return {w: {d: n for d, n in homology_dims(c).items() if n} for w, c in sorted(self.slices.items())}

    def as_dict(self) -> Dict:
        return {'r': self.r, 'generators_by_weight': {str(w): self.weights.count(w) for w in sorted(set(self.weights))},
                'homology': {str(w): {str(d): n for d, n in h.items()} for w, h in self.homology().items()}}


def ce_complex(r: int, window: Optional[TruncationWindow] = None) -> CEComplexSlice:
    """
    C(ft(r)) in weights 0..window.max_weight.

    Raises:
        WindowOverflow: r exceeds the window arity
        NotChainMap: d² is nonzero on some slice
    """
    w = window or TruncationWindow()
    if r > w.max_arity:
        raise WindowOverflow(f"arity {r} exceeds the window arity {w.max_arity}")
    top = max(1, w.max_weight)
    algebra = DKAlgebra(r, framed=True, max_weight=top)
    weights: List[int] = []
    words: List[Tuple[int, ...]] = []
    images: List[Dict] = []
    for weight in range(1, top + 1):
        for word, image in algebra.lie_basis(weight):
            weights.append(weight)
            words.append(word)
            images.append(image)
    first = {weight: weights.index(weight) for weight in sorted(set(weights))}
    d_gen: Dict[int, Dict[Cochain, Fraction]] = {}
    # dξ_c(x, y) = -ξ_c([x, y])
    for a, b in combinations(range(len(weights)), 2):
        weight = weights[a] + weights[b]
        if weight > top:
            continue
        found = algebra.lie_coordinates(algebra.bracket(images[a], images[b]), weight)
        for k, coeff in enumerate(found):
            if coeff:
                vec_add(d_gen.setdefault(first[weight] + k, {}), {(a, b): -coeff})
    result = CEComplexSlice(algebra, weights, words, d_gen)
    for weight in range(0, top + 1):
        by_degree = _monomials(weights, weight)
        spaces = {d: by_degree.get(d, []) for d in range(0, weight + 2)}
        index = {d: {m: i for i, m in enumerate(ms)} for d, ms in spaces.items()}
        differentials = {}
        for d in range(0, weight + 1):
            columns = []
            for m in spaces[d]:
                columns.append({index[d + 1][k]: c for k, c in result.differential(m).items()})
            differentials[d] = SparseMatrix.from_columns(len(spaces[d + 1]), columns)
        result.slices[weight] = ComplexSlice(spaces, differentials)
    build_logger.info(f"C({algebra.name}): {len(weights)} generators up to weight {top}")
    return result


def generator_image(ce: CEComplexSlice, k: int) -> Optional[Tuple[int, int]]:
    """The BV^c generator that ξ_k maps to, None above weight 1."""
    if ce.weights[k] != 1:
        return None
    return ce.algebra.letters[ce.words[k][0]]


def map_to_bv(ce: CEComplexSlice) -> ChainMapBetween:
    """
    The algebra map C(ft(r)) -> BV^c(r), as a ChainMapBetween keyed by weight
    (BV^c(r) in degree w sits in the weight-w slice with zero differential).
    """
    from bvcalc.bv import component, straighten

    bv = component(ce.r, framed=True)
    targets = {}
    for weight, src in ce.slices.items():
        spaces = {d: (bv.basis(d) if d == weight else []) for d in src.spaces}
        targets[weight] = ComplexSlice(spaces, {})

    def image(weight: int, m: Cochain) -> Vec:
        factors = []
        for k in m:
            g = generator_image(ce, k)
            if g is None:
                return {}
            factors.append(g)
        return dict(straighten(factors))

    return ChainMapBetween.from_function(f"C(ft({ce.r})) -> BV^c({ce.r})", dict(ce.slices), targets, image)


def ce_quasi_iso(r: int, window: Optional[TruncationWindow] = None) -> QuasiIsoReport:
    """Check map_to_bv slice by slice."""
    return check_quasi_iso(map_to_bv(ce_complex(r, window)))
