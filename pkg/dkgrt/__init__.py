"""
Drinfeld-Kohno and Grothendieck-Teichmüller package.
Exports truncated free algebras, the algebras t and ft with their cyclic
maps, GRT residuals and solves, parenthesized permutations and the
Chevalley-Eilenberg comparison with BV^c.
"""

from .series import AssocSeries, LiePoly, dynkin, is_lie, lyndon_words
from .dk import (
    DKAlgebra, LetterMap, build_dk, coxeter_residuals, cyclic_action, dk_cyclic_map, lie_action,
    pbw_dims, presentation_dims_agree, presentation_maps, tau_framed,
)
from .grt import (
    CyclicCheck, GrtCandidate, GrtResiduals, GrtSolution, grt_check, grt_inverse, grt_multiply,
    grt_solve, parcd_cyclic_check,
)
from .pap import associator_objects_check, enumerate_pap, format_pap, pap_action, parse_pap
from .ce import CEComplexSlice, ce_complex, ce_quasi_iso, map_to_bv

__all__ = [
    'AssocSeries',
    'LiePoly',
    'dynkin',
    'is_lie',
    'lyndon_words',
    'DKAlgebra',
    'LetterMap',
    'build_dk',
    'coxeter_residuals',
    'cyclic_action',
    'dk_cyclic_map',
    'lie_action',
    'pbw_dims',
    'presentation_dims_agree',
    'presentation_maps',
    'tau_framed',
    'CyclicCheck',
    'GrtCandidate',
    'GrtResiduals',
    'GrtSolution',
    'grt_check',
    'grt_inverse',
    'grt_multiply',
    'grt_solve',
    'parcd_cyclic_check',
    'associator_objects_check',
    'enumerate_pap',
    'format_pap',
    'pap_action',
    'parse_pap',
    'CEComplexSlice',
    'ce_complex',
    'ce_quasi_iso',
    'map_to_bv'
]
