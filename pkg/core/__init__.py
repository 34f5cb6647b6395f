"""
Exact-arithmetic core: shared console, loggers and errors, sparse rational
linear algebra, symmetric sequences and tree calculus.
"""

from .base import console, check_logger, build_logger, error_logger, TruncationWindow, WorkbenchError

__all__ = [
    'console',
    'check_logger',
    'build_logger',
    'error_logger',
    'TruncationWindow',
    'WorkbenchError'
]
