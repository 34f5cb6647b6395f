#!/usr/bin/env python3
"""
Exact-arithmetic workbench for dg cyclic operads.
Entry point: runs verification suites and compute tasks, writes a report.

Reports go to stdout (or --output); logs go to stderr. The exit status is
0 when every executed check passed, 1 when one failed, 2 on a configuration
error or a cost-guard refusal.
"""

from pathlib import Path
from typing import List, Optional
import argparse
import sys

from rich.console import Console

from commands.registry import CATEGORY_ORDER, SUITE_SPECS, get_suites_by_category, resolve_names
from commands.report import Report, emit_report
from core.base import ConfigError, WorkbenchError, console, error_logger, set_verbosity
from workbench import (
    BaseWorkbench, BVMixin, ComputeMixin, DKMixin, OperadChecksMixin, RunConfig, __version__,
)


class Workbench(OperadChecksMixin, DKMixin, BVMixin, ComputeMixin, BaseWorkbench):
    """
    Complete workbench combining all mixins.
    Inherits from mixins first (left-to-right), then the base workbench.
    """

    def list_suites(self, out: Optional[Console] = None):
        """Display suites and tasks grouped by category."""
        out = out or console
        groups = get_suites_by_category()
        out.print("\n[bold cyan]SUITES AND TASKS[/bold cyan]")
        for group in CATEGORY_ORDER:
            if group not in groups:
                continue
            out.print(f"\n[bold yellow]{group}:[/bold yellow]")
            for spec in SUITE_SPECS:
                if spec.category != group:
                    continue
                out.print(f"  [cyan]{spec.name:14}[/cyan] {spec.description}")
                if spec.aliases:
                    out.print(f"  [dim]{'':14} aliases: {', '.join(spec.aliases)}[/dim]")
        out.print()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="main.py",
        description="Run verification suites and compute tasks for dg cyclic operads.",
    )
    parser.add_argument('--config', help="TOML config file; flags override its values")
    window = parser.add_argument_group("truncation window")
    window.add_argument('--max-arity', type=int)
    window.add_argument('--degree-min', type=int)
    window.add_argument('--degree-max', type=int)
    window.add_argument('--max-weight', type=int)
    run = parser.add_argument_group("what to run")
    run.add_argument('--suite', action='append', dest='suites', metavar='NAME',
                     help="verification suite, repeatable, or 'all'")
    run.add_argument('--task', action='append', dest='tasks', metavar='NAME', help="compute task, repeatable")
    run.add_argument('--operad', action='append', dest='operads', metavar='NAME',
                     help="builtin operad (com_cyc, ass_cyc, lie, bv, bv_cyc), repeatable")
    run.add_argument('--phi-file', help="JSON file with a GRT candidate")
    run.add_argument('--arity', type=int, help="number of legs for compute tasks")
    run.add_argument('--variant', choices=['operad', 'module'])
    run.add_argument('--seed', type=int)
    run.add_argument('--jobs', type=int)
    run.add_argument('--unsafe', action='store_true', default=None, help="lift the cost guards")
    run.add_argument('--list', action='store_true', help="list suites and tasks, then exit")
    out = parser.add_argument_group("output")
    out.add_argument('--format', dest='output_format', choices=['json', 'csv', 'text'])
    out.add_argument('--output', help="write the report here instead of stdout")
    out.add_argument('--timings', action='store_true', default=None, help="include per-check runtimes")
    out.add_argument('--verbose', action='store_true')
    out.add_argument('--quiet', action='store_true')
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    """
    Raises:
        ConfigError: unreadable file, unknown names or bad values
        CostGuard: window beyond the desk-scale limits
    """
    file_values = RunConfig.read_file(args.config) if args.config else {}
    flags = {key: getattr(args, key) for key in (
        'max_arity', 'degree_min', 'degree_max', 'max_weight', 'suites', 'tasks', 'operads', 'phi_file',
        'arity', 'variant', 'output_format', 'jobs', 'seed', 'output', 'unsafe', 'timings')}
    config = RunConfig.from_sources(file_values, flags)
    config.verbose, config.quiet = args.verbose, args.quiet
    try:
        config.suites = resolve_names(config.suites, 'verify')
        config.tasks = resolve_names(config.tasks, 'compute')
    except ValueError as e:
        raise ConfigError(str(e)) from None
    return config


def run(config: RunConfig) -> Report:
    """Run the configured suites, then the tasks, and assemble the report."""
    with Workbench(config) as workbench:
        records = workbench.run_suites(config.suites + config.tasks)
        workbench.print_check_stats(Console(stderr=True))
    return Report(__version__, config.echo(), records, timings=config.timings)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point."""
    args = build_parser().parse_args(argv)
    set_verbosity(args.verbose, args.quiet)

    if args.list:
        Workbench().list_suites()
        return 0

    try:
        config = load_config(args)
    except WorkbenchError as e:
        error_logger.error(f"{type(e).__name__}: {e}")
        return 2

    if not config.suites and not config.tasks:
        error_logger.error("nothing to run; pass --suite NAME, --task NAME or --list")
        return 2

    try:
        report = run(config)
    except KeyboardInterrupt:
        error_logger.error("Interrupted")
        return 130
    except WorkbenchError as e:
        error_logger.error(f"{type(e).__name__}: {e}")
        return 2
    except Exception as e:
        error_logger.error(f"Fatal error: {e}")
        import traceback
        Console(stderr=True).print("[dim]" + traceback.format_exc() + "[/dim]")
        return 1

    data = emit_report(report, config.output_format)
    if config.output:
        Path(config.output).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return 0 if report.ok else 1


if __name__ == '__main__':
    sys.exit(main())
