"""
Verification workbench package.
Exports the base workbench, the suite mixins and the run configuration.
"""

from .base import BaseWorkbench, CheckResult, PASS, FAIL, SKIPPED
from .config import RunConfig
from .operads import OperadChecksMixin
from .dkgrt import DKMixin
from .bv import BVMixin
from .compute import ComputeMixin

__version__ = "0.1.0"

__all__ = [
    'BaseWorkbench',
    'CheckResult',
    'PASS',
    'FAIL',
    'SKIPPED',
    'RunConfig',
    'OperadChecksMixin',
    'DKMixin',
    'BVMixin',
    'ComputeMixin',
    '__version__'
]
