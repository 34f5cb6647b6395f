"""
Suite registration and report output.
"""

from .registry import SUITE_SPECS, SuiteSpec, build_suite_registry, find_suite_spec, get_suite_help
from .report import Report, emit_report

__all__ = [
    'SUITE_SPECS',
    'SuiteSpec',
    'build_suite_registry',
    'find_suite_spec',
    'get_suite_help',
    'Report',
    'emit_report'
]
