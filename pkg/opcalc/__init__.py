"""
Operad calculus package.
Exports operads, free and presented operads, bar and cobar complexes,
the comparison zigzag, the functor G and the counit checks.
"""

from .operads import OperadData, ForgetCyclic, BUILTINS, builtin
from .free import FreeOperad, GeneratorSet, QuotientOperad, free_operad, quotient_by_ideal
from .modules import ModuleData, PointedModule, FreePointedModule, FreeTreeModule
from .barcobar import TreeComplex, BarCooperad, DualCooperad, DualComodule, bar, cobar
from .quasiiso import ChainMapBetween, QuasiIsoReport, check_quasi_iso
from .comparison import ComparisonMap, comparison_zigzag
from .functor_g import PairCooperad, functor_G, induced_cyclic, g_of_cobar, presentation_counit
from .counit import Counit, counit_eta, cobar_bar_counit_check

__all__ = [
    'OperadData',
    'ForgetCyclic',
    'BUILTINS',
    'builtin',
    'FreeOperad',
    'GeneratorSet',
    'QuotientOperad',
    'free_operad',
    'quotient_by_ideal',
    'ModuleData',
    'PointedModule',
    'FreePointedModule',
    'FreeTreeModule',
    'TreeComplex',
    'BarCooperad',
    'DualCooperad',
    'DualComodule',
    'bar',
    'cobar',
    'ChainMapBetween',
    'QuasiIsoReport',
    'check_quasi_iso',
    'ComparisonMap',
    'comparison_zigzag',
    'PairCooperad',
    'functor_G',
    'induced_cyclic',
    'g_of_cobar',
    'presentation_counit',
    'Counit',
    'counit_eta',
    'cobar_bar_counit_check'
]
