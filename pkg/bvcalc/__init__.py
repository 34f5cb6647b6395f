"""
BV calculus package.
Exports the BV cooperad and operad, the rigidity solves, the bar homology
counts and the ξ derivations.
"""

from .bv import (
    BVComponent, BVOperad, bv_component, bv_cyclic_action, bv_module, bv_comodule,
    delta, e_basis, e_element, monomial_text, parse_monomial, straighten, transport,
)
from .rigidity import RigiditySolution, comodule_endo_space, biderivation_space, symmetry_facts
from .homology import BarHomology, E1Entry, bar_bv_homology, bv_cobar, e1_page, module_ratio_holds
from .xi import XiReport, xi, xi_mod, xi_derivation

__all__ = [
    'BVComponent',
    'BVOperad',
    'bv_component',
    'bv_cyclic_action',
    'bv_module',
    'bv_comodule',
    'delta',
    'e_basis',
    'e_element',
    'monomial_text',
    'parse_monomial',
    'straighten',
    'transport',
    'RigiditySolution',
    'comodule_endo_space',
    'biderivation_space',
    'symmetry_facts',
    'BarHomology',
    'E1Entry',
    'bar_bv_homology',
    'bv_cobar',
    'e1_page',
    'module_ratio_holds',
    'XiReport',
    'xi',
    'xi_mod',
    'xi_derivation'
]
