"""
Base workbench with check bookkeeping.
Runs checks, logs them, keeps the session history and fans suites out
over a thread pool.
"""

from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Callable, Dict, List, Optional, Tuple
import concurrent.futures
import random
import threading
import time
import traceback

from commands.registry import find_suite_spec
from core.base import (
    BoundaryDegree, ErrorType, TruncationWindow, UnknownName, WorkbenchError,
    check_logger, console, error_logger,
)

from .config import RunConfig

PASS = 'pass'
FAIL = 'fail'
SKIPPED = 'skipped-boundary'

CheckOutcome = Tuple[bool, str, Dict[str, Any]]


@dataclass
class CheckResult:
    """
    Result of one check.

    Attributes:
        id: stable identifier, '<suite>/<subject>/<check>'
        anchor: the statement being checked
        status: pass, fail or skipped-boundary
        message: one-line summary
        data: dims, residuals and other tables
        error_type: classification when an error ended the check
        seconds: wall time, reported only on request
    """
    id: str
    anchor: str
    status: str
    message: str = ""
    data: Dict[str, Any] = field(default_factory=dict)
    error_type: Optional[ErrorType] = None
    seconds: Optional[float] = None

    @property
    def success(self) -> bool:
        return self.status != FAIL

    def as_dict(self, timings: bool = False) -> Dict[str, Any]:
        out = {
            'id': self.id,
            'anchor': self.anchor,
            'status': self.status,
            'message': self.message,
            'data': self.data,
            'error_type': self.error_type.value if self.error_type else None,
        }
        if timings and self.seconds is not None:
            out['seconds'] = round(self.seconds, 3)
        return out


class BaseWorkbench:
    """
    Core workbench: configuration, check execution and session history.

    Suite methods live on the mixins; each returns the list of CheckResult
    it produced, in a fixed order.
    """

    def __init__(self, config: Optional[RunConfig] = None):
        self.config = config or RunConfig()
        self.window: TruncationWindow = self.config.window
        self.check_history: List[Dict[str, Any]] = []
        self.check_count: int = 0
        self._lock = threading.Lock()
        check_logger.debug(f"workbench ready in window {self.window.as_dict()}")

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()
        return False

    def rng(self, suite: str) -> random.Random:
        """A generator per suite, so samples do not depend on scheduling."""
        return random.Random(f"{self.config.seed}/{suite}")

    # ==================== Checks ====================

    def run_check(self, check_id: str, anchor: str, check: Callable[[], CheckOutcome]) -> CheckResult:
        """
        Run one check and record it.

        A WorkbenchError becomes a failed record, except BoundaryDegree which
        marks the check as skipped at the window boundary. Any other
        exception fails the check with error type unknown.
        """
        start = time.perf_counter()
        try:
            ok, message, data = check()
            result = CheckResult(check_id, anchor, PASS if ok else FAIL, message, data)
        except BoundaryDegree as e:
            result = CheckResult(check_id, anchor, SKIPPED, str(e), error_type=e.error_type)
        except WorkbenchError as e:
            result = CheckResult(check_id, anchor, FAIL, str(e), error_type=e.error_type)
        except Exception as e:
            error_logger.error(f"{check_id} raised\n{traceback.format_exc()}")
            result = CheckResult(check_id, anchor, FAIL, f"{type(e).__name__}: {e}", error_type=ErrorType.UNKNOWN)
        result.seconds = time.perf_counter() - start
        self.log_check(result)
        return result

    def log_check(self, result: CheckResult):
        """Log check execution."""
        with self._lock:
            self.check_count += 1
            entry = {
                'timestamp': datetime.now().isoformat(),
                'check': result.id,
                'status': result.status,
                'success': result.success,
                'error': None if result.success else result.message,
                'check_number': self.check_count,
            }
            self.check_history.append(entry)
        if result.status == PASS:
            check_logger.info(f"[{entry['check_number']}] {result.id}: {result.message}")
        elif result.status == SKIPPED:
            check_logger.warning(f"[{entry['check_number']}] {result.id} skipped: {result.message}")
        else:
            error_logger.error(f"[{entry['check_number']}] {result.id} - {result.message}")

    # ==================== Suites ====================

    def run_suite(self, name: str) -> List[CheckResult]:
        """
        Raises:
            UnknownName: no suite or task of that name
        """
        spec = find_suite_spec(name)
        if spec is None or not hasattr(self, spec.method_name):
            raise UnknownName(f"unknown suite or task {name!r}")
        check_logger.info(f"running {spec.kind} {spec.name}")
        return getattr(self, spec.method_name)()

    def run_suites(self, names: List[str], jobs: Optional[int] = None) -> List[CheckResult]:
        """Run suites concurrently; records come back in the order the names were given."""
        jobs = jobs or self.config.jobs
        with concurrent.futures.ThreadPoolExecutor(max_workers=max(1, jobs)) as executor:
            batches = list(executor.map(self.run_suite, names))
        return [result for batch in batches for result in batch]

    # ==================== History & Stats ====================

    def get_check_history(self, limit: int = 10):
        """Display recent checks."""
        recent = self.check_history[-limit:]

        if not recent:
            console.print("[yellow]No checks run yet[/yellow]")
            return

        console.print("\n[bold cyan]Recent Checks:[/bold cyan]")
        for entry in recent:
            status = "+" if entry['success'] else "x"
            color = "green" if entry['success'] else "red"
            console.print(f"[{color}]{status}[/{color}] [{entry['check_number']:3}] {entry['check']}")
        console.print()

    def get_check_stats(self) -> Dict[str, int]:
        """Counts by status."""
        total = len(self.check_history)
        skipped = sum(1 for e in self.check_history if e['status'] == SKIPPED)
        failed = sum(1 for e in self.check_history if not e['success'])
        return {'total': total, 'passed': total - skipped - failed, 'skipped': skipped, 'failed': failed}

    def print_check_stats(self, stream=None):
        """Display session statistics."""
        stats = self.get_check_stats()
        out = stream or console
        if stats['total'] == 0:
            out.print("[yellow]No checks run yet[/yellow]")
            return
        rate = stats['passed'] / stats['total'] * 100
        out.print("\n[bold cyan]Session Statistics:[/bold cyan]")
        out.print(f"  Total:    {stats['total']}")
        out.print(f"  Passed:   {stats['passed']} ({rate:.1f}%)")
        out.print(f"  Skipped:  {stats['skipped']}")
        out.print(f"  Failed:   {stats['failed']}")
        out.print()

    # ==================== Cleanup ====================

    def close(self):
        """Safe to call multiple times."""
        check_logger.info(f"Session ended. Checks: {self.check_count}")
