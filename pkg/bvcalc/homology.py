"""
Homology of the cyclic cobar construction of BV^c and of the module cobar
construction of the pointed comodule BV^{c,mod}, with S_r decompositions,
and the E^1 counts obtained by pairing with the weight pieces of ft((r)).
"""

import concurrent.futures
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from core.base import CostGuard, TruncationWindow, build_logger, check_logger
from core.ratlin import homology
from core.symseq import character, decompose, format_decomposition, homology_action, invariant_pairing
from dkgrt.dk import DKAlgebra, lie_action
from opcalc.barcobar import DualCooperad, TreeComplex, cobar

from .bv import BVOperad, bv_comodule

MAX_BAR_ARITY = 4


def homology_window(r: int) -> TruncationWindow:
    """Smallest degree window in which the slices of arity ((r)) are exact at the interesting degrees."""
    return TruncationWindow(max_arity=max(2, r), degree_min=-1, degree_max=5 if r < 4 else 4)


def bv_cobar(variant: str, window: Optional[TruncationWindow] = None) -> TreeComplex:
    """
    Bar^c BV^c ('operad', built on the cyclic cobar) or Bar^c BV^{c,mod}
    ('module').

    Raises:
        ValueError: unknown variant
    """
    if variant not in ('operad', 'module'):
        raise ValueError(f"unknown variant {variant!r}; expected operad or module")
    w = window or TruncationWindow()
    cooperad = DualCooperad(BVOperad(w, cyclic=True))
    if variant == 'operad':
        return cobar(cooperad, 'cyclic', w=w, name="Cobar(BV^c)")
    return cobar(cooperad, 'module', m=bv_comodule(w), w=w, name="Cobar(BV^c,mod)")


@dataclass
class BarHomology:
    """
    Homology of one arity slice.

    Attributes:
        r: number of legs
        variant: 'operad' or 'module'
        dims: reliable degree -> dimension (nonzero only)
        decompositions: degree -> irreducible multiplicities, e.g. {'V_21': 1}
        window: degree window used
    """
    r: int
    variant: str
    dims: Dict[int, int] = field(default_factory=dict)
    decompositions: Dict[int, Dict[str, int]] = field(default_factory=dict)
    window: Optional[TruncationWindow] = None

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** (d % 2) * n for d, n in self.dims.items())

    def as_dict(self) -> Dict:
        return {
            'r': self.r,
            'variant': self.variant,
            'dims': {str(d): n for d, n in sorted(self.dims.items())},
            'decompositions': {str(d): v for d, v in sorted(self.decompositions.items())},
            'euler_characteristic': self.euler_characteristic,
            'window': self.window.as_dict() if self.window else None,
        }


def bar_bv_homology(r: int, variant: str = 'operad', window: Optional[TruncationWindow] = None,
                    jobs: int = 1, unsafe: bool = False) -> BarHomology:
    """
    Homology of the arity-((r)) slice with its S_r decomposition.

    Args:
        r: number of legs
        variant: 'operad' or 'module'
        window: degree window; defaults to homology_window(r)
        jobs: worker threads, one degree per task
        unsafe: lift the arity guard

    Raises:
        CostGuard: r > 4 without unsafe
    """
    if r > MAX_BAR_ARITY and not unsafe:
        raise CostGuard(f"bar homology at r = {r} exceeds the arity guard {MAX_BAR_ARITY}")
    if r < 2:
        raise ValueError(f"need at least two legs, got {r}")
    w = window or homology_window(r)
    complex_ = bv_cobar(variant, w)
    c = complex_.slice(r)
    action = complex_.action(r)
    degrees = [d for d in c.degrees() if c.is_reliable(d)]

    def one(d: int):
        h = homology(c, d)
        if not h.dimension:
            return d, 0, {}
        induced, dim = homology_action(c, action, d)
        return d, dim, format_decomposition(decompose(induced, d, dim))

    with concurrent.futures.ThreadPoolExecutor(max_workers=max(1, jobs)) as executor:
        results = list(executor.map(one, degrees))
    out = BarHomology(r, variant, window=w)
    for d, dim, parts in results:
        if dim:
            out.dims[d] = dim
            out.decompositions[d] = parts
    build_logger.info(f"{complex_.name}(({r})): H dims {out.dims}")
    return out


def module_ratio_holds(operad_side: BarHomology, module_side: BarHomology) -> bool:
    """dim H^(d+1) of the module side is (r - 1) dim H^d of the operad side, at degrees both windows see."""
    r = operad_side.r
    w = module_side.window
    for d, n in operad_side.dims.items():
        if w is not None and not w.is_interior(d + 1):
            continue
        if module_side.dims.get(d + 1, 0) != (r - 1) * n:
            return False
    return True


# ==================== E^1 page ====================

@dataclass
class E1Entry:
    r: int
    weight: int
    degree: int
    dimension: int

    def as_dict(self) -> Dict:
        return {'r': self.r, 'weight': self.weight, 'degree': self.degree, 'dimension': self.dimension}


def e1_page(r: int, max_weight: int = 1, window: Optional[TruncationWindow] = None) -> List[E1Entry]:
    """
    dim (ft((r))_w ⊗ H^d(Bar^c BV^{c,mod}((r))))^{S_r}, placed in degree d - 1.

    Only nonzero entries are returned, ordered by (weight, degree).
    """
    if r < 2:
        raise ValueError(f"need at least two legs, got {r}")
    w = window or homology_window(r)
    complex_ = bv_cobar('module', w)
    c = complex_.slice(r)
    action = complex_.action(r)
    h_chars = {}
    for d in c.degrees():
        if not c.is_reliable(d):
            continue
        h = homology(c, d)
        if h.dimension:
            induced, dim = homology_action(c, action, d)
            h_chars[d] = character(induced, d, dim)
    algebra = DKAlgebra(r - 1, framed=True, cyclic=True, max_weight=max_weight)
    out = []
    for weight in range(1, max_weight + 1):
        dim_ft = len(algebra.lie_basis(weight))
        if not dim_ft:
            continue
        ft_char = character(lie_action(algebra, weight, cyclic=True), weight, dim_ft)
        for d, chi in sorted(h_chars.items()):
            n = invariant_pairing(ft_char, chi, r)
            if n:
                out.append(E1Entry(r, weight, d - 1, n))
    check_logger.info(f"E1 at (({r})): {[(e.weight, e.degree, e.dimension) for e in out]}")
    return out
