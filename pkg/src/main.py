"""
Compact Symbolic Execution - command line entry point.

Subcommands:
    validate FILE      structural check of a program
    run FILE           classic or compact symbolic execution
    templates FILE     detect program parts and compute their templates
    diff FILE          differential check of compact against classic execution
"""

import argparse
import os
import re
import sys
from logging.config import dictConfig
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from dotenv import load_dotenv
from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

# Configure path for imports
current_dir = os.path.dirname(os.path.abspath(__file__))
if current_dir not in sys.path:
    sys.path.insert(0, current_dir)

from core import ExecConfig, ExecMode, TemplateStore, compute_templates, create_solver, execute
from core.executor import ChooseStrategy
from core.templates import TemplateLimits, mutate_template, verify_template
from frontend import parse_program, validate_program
from harness import DiffBudgets, ExportFormat, differential_check, write_tree
from models import (
    ConfigError,
    CseError,
    CseNameError,
    CseTypeError,
    InitialMemory,
    Mutation,
    ParseError,
    Program,
    Template,
    render,
)
from models.state import render_memory, render_stack
from utils import (
    LogRecord, LogEvent, ColoredConsoleFormatter, JSONFormatter, Settings, SolverBackendKind,
    error, init_logger, load_settings,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

_console = Console()
_err_console = Console(stderr=True)


class UsageError(Exception):
    """Bad input that is the user's to fix (exit code 2)."""


# ===== LOGGING =====

def setup_logging(settings: Settings) -> Dict[str, Any]:
    """Setup logging configuration."""
    log_config: Dict[str, Any] = {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "colored_console": {"()": ColoredConsoleFormatter, "use_colors": settings.log_color},
            "json": {"()": JSONFormatter},
        },
        "handlers": {
            "console": {
                "class": "logging.StreamHandler",
                "level": settings.log_level,
                "formatter": "colored_console",
                "stream": "ext://sys.stderr",
            },
        },
        "loggers": {
            settings.app_name: {
                "level": settings.log_level,
                "handlers": ["console"],
                "propagate": False,
            },
        },
    }

    # Add file handler if configured
    if settings.log_file_path:
        Path(settings.log_file_path).parent.mkdir(parents=True, exist_ok=True)
        log_config["handlers"]["file"] = {
            "class": "logging.FileHandler",
            "level": settings.log_level,
            "formatter": "json",
            "filename": settings.log_file_path,
            "mode": "a",
            "encoding": "utf-8",
        }
        log_config["loggers"][settings.app_name]["handlers"].append("file")

    dictConfig(log_config)
    init_logger(settings.app_name)
    return log_config


# ===== HELPERS =====

def _load_program(path: str) -> Program:
    file = Path(path)
    if not file.is_file():
        raise UsageError(f"No such program file: {path}")
    return parse_program(file.read_text(encoding="utf-8"))


def _check_valid(p: Program, path: str) -> bool:
    violations = validate_program(p)
    for violation in violations:
        _err_console.print(f"[red]✗[/red] {path}: {violation.kind.value}: {violation.message} ({violation.element})")
    return not violations


def _settings_for(args: argparse.Namespace) -> Settings:
    settings = load_settings(args.config)
    overrides: Dict[str, Any] = {}
    if args.log_level:
        overrides["log_level"] = args.log_level.upper()
    if getattr(args, "solver", None):
        overrides["solver_path"] = args.solver
    if getattr(args, "backend", None):
        overrides["solver_backend"] = SolverBackendKind(args.backend)
    if getattr(args, "dump_smt", None):
        overrides["dump_smt_dir"] = args.dump_smt
    return settings.model_copy(update=overrides) if overrides else settings


def _template_limits(settings: Settings) -> TemplateLimits:
    return TemplateLimits(max_cycle_len=settings.max_cycle_len, part_budget=settings.part_budget)


def _describe_template(t: Template, theta0: InitialMemory) -> str:
    lines = [f"template {t.template_id}", f"  kind: {t.kind.value}", f"  entry: {t.entry}",
             f"  cycle length: {t.cycle_length}"]
    for exit in t.exits:
        lines.append(f"  exit {exit.location} (path length {exit.path_length})")
        lines.append(f"    memory: {render_memory(exit.memory, theta0)}")
        lines.append(f"    condition: {render(exit.condition)}")
        lines.append(f"    stack: {render_stack(exit.stack, theta0)}")
    if t.recursion is not None:
        lines.append(f"  return at {t.recursion.exit_location} (length {t.recursion.return_length})")
        lines.append(f"    memory: {render_memory(t.recursion.memory, theta0)}")
    return "\n".join(lines) + "\n"


def _dump_templates(store: TemplateStore, theta0: InitialMemory, directory: str) -> None:
    target = Path(directory)
    target.mkdir(parents=True, exist_ok=True)
    for t in store:
        name = re.sub(r"[^A-Za-z0-9_.-]+", "_", t.template_id)
        (target / f"{name}.txt").write_text(_describe_template(t, theta0), encoding="utf-8")


# ===== SUBCOMMANDS =====

def cmd_validate(args: argparse.Namespace, settings: Settings) -> int:
    p = _load_program(args.file)
    if not _check_valid(p, args.file):
        return EXIT_CHECK_FAILED
    _console.print(f"[green]✓[/green] {args.file}: {len(p.functions)} functions, start {p.start_function}")
    return EXIT_OK


def cmd_run(args: argparse.Namespace, settings: Settings) -> int:
    p = _load_program(args.file)
    if args.tree:
        try:
            ExportFormat.from_path(args.tree)
        except ValueError as e:
            raise UsageError(str(e)) from e
    if not _check_valid(p, args.file):
        return EXIT_CHECK_FAILED
    mode = ExecMode(args.mode)
    budget = args.budget or (settings.default_compact_budget if mode is ExecMode.COMPACT
                             else settings.default_budget)
    theta0 = InitialMemory(p)

    with create_solver(settings) as solver:
        store: Optional[TemplateStore] = None
        if mode is ExecMode.COMPACT:
            store = compute_templates(p, solver, _template_limits(settings), theta0)
            if args.dump_templates:
                _dump_templates(store, theta0, args.dump_templates)
        cfg = ExecConfig(
            mode=mode,
            build_tree=bool(args.tree),
            budget=budget,
            solver=solver,
            templates=store,
            choose=ChooseStrategy(args.choose),
            seed=args.seed,
            max_visits=args.max_visits,
        )
        result = execute(p, cfg, theta0)

    if args.tree and result.tree is not None:
        write_tree(result.tree, args.tree, theta0)

    stats = result.stats
    summary = Text.assemble(
        ("   Mode          : ", "default"), (mode.value, "bold cyan"),
        ("\n   Final states  : ", "default"), (str(len(result.leaves)), "bold green"),
        ("\n   Processed     : ", "default"), (f"{stats.processed}/{budget}", "default"),
        ("\n   Solver calls  : ", "default"), (str(stats.solver_calls), "default"),
        ("\n   Unknown       : ", "default"), (str(stats.unknown), "yellow" if stats.unknown else "default"),
        ("\n   Instantiations: ", "default"), (str(stats.instantiations), "default"),
        ("\n   Pruned        : ", "default"), (str(stats.pruned), "default"),
        ("\n   Budget        : ", "default"),
        ("exhausted" if stats.budget_exhausted else "sufficient", "bold red" if stats.budget_exhausted else "green"),
    )
    _console.print(Panel(summary, title=f"{args.file}", border_style="blue", expand=False))
    return EXIT_OK


def cmd_templates(args: argparse.Namespace, settings: Settings) -> int:
    p = _load_program(args.file)
    if not _check_valid(p, args.file):
        return EXIT_CHECK_FAILED
    theta0 = InitialMemory(p)
    problems: List[str] = []
    with create_solver(settings) as solver:
        store = compute_templates(p, solver, _template_limits(settings), theta0)
        if args.verify:
            for t in store:
                problems.extend(f"{t.template_id}: {problem}" for problem in verify_template(t, theta0, solver))
    if args.dump_templates:
        _dump_templates(store, theta0, args.dump_templates)

    table = Table(title=f"Templates of {args.file}")
    table.add_column("Part")
    table.add_column("Kind")
    table.add_column("Entry")
    table.add_column("Exits")
    table.add_column("Result")
    for t in store:
        table.add_row(t.template_id, t.kind.value, t.entry, ", ".join(e.location for e in t.exits), "[green]ok[/green]")
    for failure in store.failures:
        detail = f" ({failure.detail})" if failure.detail else ""
        table.add_row(failure.part_id, "", "", "", f"[red]{failure.reason.value}[/red]{detail}")
    _console.print(table)
    _console.print(f"{len(store)} templates, {len(store.failures)} failures")

    for problem in problems:
        _err_console.print(f"[red]✗[/red] {problem}")
    return EXIT_CHECK_FAILED if problems else EXIT_OK


def cmd_diff(args: argparse.Namespace, settings: Settings) -> int:
    p = _load_program(args.file)
    if not _check_valid(p, args.file):
        return EXIT_CHECK_FAILED
    bound = args.bound if args.bound is not None else settings.default_bound
    budgets = DiffBudgets(
        classic=args.budget or settings.default_budget,
        compact=args.compact_budget or settings.default_compact_budget,
    )
    theta0 = InitialMemory(p)
    with create_solver(settings) as solver:
        store = compute_templates(p, solver, _template_limits(settings), theta0)
        if args.mutate:
            mutation = Mutation(args.mutate)
            store = TemplateStore((mutate_template(t, mutation) for t in store), store.failures)
        report = differential_check(p, solver, bound, budgets, store, name=args.file)

    table = Table(title=f"Differential check of {args.file} (bound {bound})")
    table.add_column("Direction")
    table.add_column("Leaves", justify="right")
    table.add_column("Matched", justify="right")
    table.add_column("Unmatched", justify="right")
    table.add_column("Uncovered", justify="right")
    table.add_row("soundness", str(report.classic_leaves), str(len(report.soundness)),
                  str(len(report.unmatched_classic)), str(report.uncovered_classic))
    table.add_row("completeness", str(report.compact_leaves), str(len(report.completeness)),
                  str(len(report.unmatched_compact)), str(report.uncovered_compact))
    _console.print(table)

    if report.passed:
        suffix = " (partial)" if report.partial else ""
        _console.print(f"[green]✓[/green] passed{suffix}")
        return EXIT_OK
    for leaf in report.unmatched_classic[:5]:
        _err_console.print(f"[red]✗[/red] classic leaf {leaf.classic_leaf} at {leaf.location}, depth {leaf.depth}")
    for valuation in report.unmatched_compact[:5]:
        _err_console.print(
            f"[red]✗[/red] compact leaf {valuation.compact_leaf} at {valuation.location} "
            f"under {valuation.valuation}"
        )
    return EXIT_CHECK_FAILED


# ===== COMMAND LINE INTERFACE =====

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cse", description="Compact symbolic execution")
    parser.add_argument("--config", type=str, default=None, help="Path to configuration file (default: config.yaml)")
    parser.add_argument("--log-level", type=str, choices=["debug", "info", "warning", "error", "critical"],
                        help="Log level (overrides config file)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="Check program structure")
    p_validate.add_argument("file")

    def solver_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--solver", type=str, help="Path of the SMT solver binary")
        p.add_argument("--backend", choices=[k.value for k in SolverBackendKind], help="Solver backend")
        p.add_argument("--dump-smt", type=str, metavar="DIR", help="Write every solver query to DIR")

    p_run = sub.add_parser("run", help="Execute a program symbolically")
    p_run.add_argument("file")
    p_run.add_argument("--mode", choices=[m.value for m in ExecMode], default=ExecMode.COMPACT.value)
    p_run.add_argument("--budget", type=int, help="Maximum number of processed states")
    p_run.add_argument("--tree", type=str, metavar="OUT", help="Write the tree to OUT (.dot or .json)")
    p_run.add_argument("--dump-templates", type=str, metavar="DIR", help="Write computed templates to DIR")
    p_run.add_argument("--seed", type=int, help="Seed for --choose random")
    p_run.add_argument("--choose", choices=[c.value for c in ChooseStrategy], default=ChooseStrategy.FIRST.value)
    p_run.add_argument("--max-visits", type=int, help="Cut paths visiting a location more often than N")
    solver_flags(p_run)

    p_templates = sub.add_parser("templates", help="Detect parts and compute templates")
    p_templates.add_argument("file")
    p_templates.add_argument("--verify", action="store_true", help="Re-check every computed template")
    p_templates.add_argument("--dump-templates", type=str, metavar="DIR", help="Write computed templates to DIR")
    solver_flags(p_templates)

    p_diff = sub.add_parser("diff", help="Check compact against classic execution")
    p_diff.add_argument("file")
    p_diff.add_argument("--bound", type=int, help="Largest parameter value tried")
    p_diff.add_argument("--budget", type=int, help="Classic budget")
    p_diff.add_argument("--compact-budget", type=int, help="Compact budget")
    p_diff.add_argument("--mutate", choices=[m.value for m in Mutation], help="Corrupt every template first")
    solver_flags(p_diff)
    return parser


COMMANDS = {
    "validate": cmd_validate,
    "run": cmd_run,
    "templates": cmd_templates,
    "diff": cmd_diff,
}


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """Run one CLI command and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    for name in ("budget", "compact_budget", "max_visits"):
        value = getattr(args, name, None)
        if value is not None and value <= 0:
            _err_console.print(f"[red]error:[/red] --{name.replace('_', '-')} must be positive")
            return EXIT_USAGE
    if getattr(args, "bound", None) is not None and args.bound < 0:
        _err_console.print("[red]error:[/red] --bound must not be negative")
        return EXIT_USAGE

    try:
        settings = _settings_for(args)
        setup_logging(settings)
        return COMMANDS[args.command](args, settings)
    except (UsageError, ParseError, CseNameError, CseTypeError, ConfigError) as e:
        _err_console.print(f"[red]error:[/red] {e}")
        return EXIT_USAGE
    except CseError as e:
        error(LogRecord(event=LogEvent.CLI_FAILURE.value, message=f"{args.command} failed"), exc=e)
        _err_console.print(f"[red]error:[/red] {type(e).__name__}: {e}")
        return EXIT_INTERNAL
    except Exception as e:
        error(LogRecord(event=LogEvent.CLI_FAILURE.value, message=f"{args.command} crashed"), exc=e)
        _err_console.print(f"[red]internal error:[/red] {type(e).__name__}: {e}")
        return EXIT_INTERNAL


def main() -> None:
    """Main entry point."""
    load_dotenv()
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
