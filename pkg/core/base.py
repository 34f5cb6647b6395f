"""
Shared foundation for every package of the workbench.

Console, loggers, the error hierarchy and the truncation window live here so
the math packages and the workbench mixins can import them without cycles.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Hashable, Optional
import logging

from rich.console import Console
from rich.logging import RichHandler

console = Console()


def _setup_logger(name: str, level: int = logging.INFO) -> logging.Logger:
    """Create a properly configured logger with Rich handler."""
    logger = logging.getLogger(name)
    logger.setLevel(level)

    if not logger.handlers:
        handler = RichHandler(
            console=Console(stderr=True),
            show_path=False,
            markup=True,
            show_time=False
        )
        logger.addHandler(handler)
    logger.propagate = False

    return logger


check_logger = _setup_logger("checks", logging.INFO)
build_logger = _setup_logger("build", logging.INFO)
error_logger = _setup_logger("errors", logging.ERROR)


# Sparse vectors are dicts from basis label to nonzero Fraction.
Vec = Dict[Hashable, Fraction]


def vec_add(target: Vec, source: Vec, scale=1) -> Vec:
    """Add scale * source into target in place, dropping zeros."""
    if not scale:
        return target
    for key, value in source.items():
        new = target.get(key, 0) + scale * value
        if new:
            target[key] = new
        else:
            target.pop(key, None)
    return target


def vec_scale(source: Vec, scale) -> Vec:
    if not scale:
        return {}
    return {k: v * scale for k, v in source.items()}


# ==================== Errors ====================

class ErrorType(Enum):
    """Classification of workbench errors."""
    BOUNDARY = "boundary"
    REPRESENTATION = "representation"
    TREE = "tree"
    WINDOW = "window"
    LOOKUP = "lookup"
    CHAIN_MAP = "chain_map"
    GROUP_LIKE = "group_like"
    COST = "cost"
    TRANSPORT = "transport"
    CONFIG = "config"
    UNKNOWN = "unknown"


class WorkbenchError(Exception):
    """Root of all workbench errors."""
    error_type: ErrorType = ErrorType.UNKNOWN


class BoundaryDegree(WorkbenchError):
    """Homology requested at a degree adjacent to the window edge."""
    error_type = ErrorType.BOUNDARY


class NonRepresentation(WorkbenchError):
    """Action matrices violate the Coxeter relations."""
    error_type = ErrorType.REPRESENTATION


class LeafEdge(WorkbenchError):
    """Edge is not internal."""
    error_type = ErrorType.TREE


class UnknownLeaf(WorkbenchError):
    error_type = ErrorType.TREE


class WindowOverflow(WorkbenchError):
    """A result escapes the truncation window."""
    error_type = ErrorType.WINDOW


class WindowMismatch(WorkbenchError):
    """Objects built in different windows were combined."""
    error_type = ErrorType.WINDOW


class UnknownName(WorkbenchError):
    error_type = ErrorType.LOOKUP


class NotChainMap(WorkbenchError):
    error_type = ErrorType.CHAIN_MAP


class NotGroupLike(WorkbenchError):
    error_type = ErrorType.GROUP_LIKE


class CostGuard(WorkbenchError):
    """Requested size exceeds the desk-scale limits."""
    error_type = ErrorType.COST


class TransportFailure(WorkbenchError):
    """A transported structure map is not well defined."""
    error_type = ErrorType.TRANSPORT


class ConfigError(WorkbenchError):
    error_type = ErrorType.CONFIG


# ==================== Truncation window ====================

@dataclass(frozen=True)
class TruncationWindow:
    """
    Global bounds for every computation.

    Attributes:
        max_arity: largest arity (cyclic components go up to ((max_arity + 1)))
        degree_min: lowest cohomological degree kept
        degree_max: highest cohomological degree kept
        max_weight: largest weight for Drinfeld-Kohno and GRT computations
    """
    max_arity: int = 3
    degree_min: int = -6
    degree_max: int = 6
    max_weight: int = 3

    def __post_init__(self):
        if self.max_arity < 2:
            raise ConfigError(f"max_arity must be at least 2, got {self.max_arity}")
        if self.degree_min > self.degree_max:
            raise ConfigError(
                f"empty degree range [{self.degree_min}, {self.degree_max}]"
            )
        if self.max_weight < 0:
            raise ConfigError("max_weight must be non-negative")

    def contains_degree(self, degree: int) -> bool:
        return self.degree_min <= degree <= self.degree_max

    def is_interior(self, degree: int) -> bool:
        """True when both neighbours of the degree lie in the window."""
        return self.degree_min < degree < self.degree_max

    def require_same(self, other: Optional["TruncationWindow"]):
        if other is not None and other != self:
            raise WindowMismatch(f"window {other} differs from {self}")

    def as_dict(self) -> Dict[str, int]:
        return {
            'max_arity': self.max_arity,
            'degree_min': self.degree_min,
            'degree_max': self.degree_max,
            'max_weight': self.max_weight,
        }


def set_verbosity(verbose: bool = False, quiet: bool = False):
    """--verbose opens build progress at DEBUG, --quiet keeps warnings and errors only."""
    if quiet:
        for logger in (check_logger, build_logger):
            logger.setLevel(logging.WARNING)
    elif verbose:
        build_logger.setLevel(logging.DEBUG)
