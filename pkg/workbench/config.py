"""
Run configuration: defaults, then a TOML config file, then command-line flags.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from core.base import ConfigError, CostGuard, TruncationWindow
from opcalc.operads import BUILTINS

MAX_SAFE_ARITY = 5
MAX_SAFE_WEIGHT = 4
FORMATS = ('json', 'csv', 'text')
VARIANTS = ('operad', 'module')

# config-file key -> RunConfig field
FILE_KEYS = {
    'max_arity': 'max_arity',
    'degree_min': 'degree_min',
    'degree_max': 'degree_max',
    'max_weight': 'max_weight',
    'suites': 'suites',
    'tasks': 'tasks',
    'operads': 'operads',
    'phi_file': 'phi_file',
    'arity': 'arity',
    'variant': 'variant',
    'format': 'output_format',
    'jobs': 'jobs',
    'seed': 'seed',
    'output': 'output',
    'unsafe': 'unsafe',
    'timings': 'timings',
}


@dataclass
class RunConfig:
    """
    Everything one invocation needs.

    Attributes:
        window: global truncation window
        suites: verification suites to run, in order
        tasks: compute tasks to run after the suites
        operads: builtin operad names for the operad suites and tasks
        phi_file: JSON file with a GRT candidate; the identity when unset
        arity: number of legs for compute tasks; defaults per task
        variant: 'operad' or 'module' for bar_homology
        output_format: json, csv or text
        jobs: worker threads
        seed: seed for the sampled property checks
        output: report path; stdout when unset
        unsafe: lift the cost guards
        timings: include per-check runtimes in the report
    """
    window: TruncationWindow = field(default_factory=TruncationWindow)
    suites: List[str] = field(default_factory=list)
    tasks: List[str] = field(default_factory=list)
    operads: List[str] = field(default_factory=lambda: ['com_cyc'])
    phi_file: Optional[str] = None
    arity: Optional[int] = None
    variant: str = 'operad'
    output_format: str = 'json'
    jobs: int = 1
    seed: int = 0
    output: Optional[str] = None
    verbose: bool = False
    quiet: bool = False
    unsafe: bool = False
    timings: bool = False

    def validate(self):
        """
        Raises:
            ConfigError: a value out of range or unknown
            CostGuard: the window exceeds the desk-scale limits without unsafe
        """
        if self.output_format not in FORMATS:
            raise ConfigError(f"unknown format {self.output_format!r}; expected one of {', '.join(FORMATS)}")
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}; expected operad or module")
        unknown = [name for name in self.operads if name not in BUILTINS]
        if unknown:
            raise ConfigError(f"unknown operad {unknown[0]!r}; known: {', '.join(BUILTINS)}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be at least 1, got {self.jobs}")
        if self.arity is not None and self.arity < 1:
            raise ConfigError(f"arity must be positive, got {self.arity}")
        if self.unsafe:
            return
        if self.window.max_arity > MAX_SAFE_ARITY:
            raise CostGuard(f"max_arity {self.window.max_arity} exceeds {MAX_SAFE_ARITY}; pass --unsafe to run anyway")
        if self.window.max_weight > MAX_SAFE_WEIGHT:
            raise CostGuard(f"max_weight {self.window.max_weight} exceeds {MAX_SAFE_WEIGHT}; pass --unsafe to run anyway")
        if self.arity is not None and self.arity > MAX_SAFE_ARITY:
            raise CostGuard(f"arity {self.arity} exceeds {MAX_SAFE_ARITY}; pass --unsafe to run anyway")

    def echo(self) -> Dict[str, Any]:
        """The settings that determine report content; jobs and output paths are left out."""
        return {
            'window': self.window.as_dict(),
            'suites': list(self.suites),
            'tasks': list(self.tasks),
            'operads': list(self.operads),
            'phi_file': self.phi_file,
            'arity': self.arity,
            'variant': self.variant,
            'seed': self.seed,
            'unsafe': self.unsafe,
        }

    # ==================== Sources ====================

    @staticmethod
    def read_file(path: str) -> Dict[str, Any]:
        """
        Read a TOML config file into RunConfig field names.

        Raises:
            ConfigError: unreadable file, bad TOML or unknown key
        """
        try:
            with Path(path).open('rb') as f:
                data = tomllib.load(f)
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e}") from None
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"bad config {path}: {e}") from None
        out = {}
        for key, value in data.items():
            if key not in FILE_KEYS:
                raise ConfigError(f"unknown config key {key!r} in {path}")
            out[FILE_KEYS[key]] = value
        return out

    @classmethod
    def from_sources(cls, file_values: Optional[Dict[str, Any]] = None,
                     flag_values: Optional[Dict[str, Any]] = None) -> "RunConfig":
        """
        Merge file values and flags (flags win; None means not given) over the defaults.

        Raises:
            ConfigError: bad types or values
            CostGuard: see validate
        """
        merged: Dict[str, Any] = {}
        for source in (file_values or {}, flag_values or {}):
            merged.update({k: v for k, v in source.items() if v is not None})
        defaults = TruncationWindow()
        try:
            window = TruncationWindow(
                max_arity=int(merged.pop('max_arity', defaults.max_arity)),
                degree_min=int(merged.pop('degree_min', defaults.degree_min)),
                degree_max=int(merged.pop('degree_max', defaults.degree_max)),
                max_weight=int(merged.pop('max_weight', defaults.max_weight)),
            )
            for key in ('suites', 'tasks', 'operads'):
                if key in merged:
                    value = merged[key]
                    merged[key] = [value] if isinstance(value, str) else [str(v) for v in value]
            for key in ('jobs', 'seed', 'arity'):
                if key in merged:
                    merged[key] = int(merged[key])
            config = cls(window=window, **merged)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"invalid configuration: {e}") from None
        config.validate()
        return config
