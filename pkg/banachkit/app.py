"""
banachkit command line.

Subcommands evaluate norms (`norm`), estimate spreading models (`sm`), run the
profile decomposition (`decompose`), build the iterated chain (`chain`) and run
the invariant suites (`check`).

Exit codes: 0 success, 1 failed check cases, 2 parse or usage errors,
3 size or solver errors.
"""
import functools
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Optional

import click
import pandas as pd
from colorama import Back, Fore, Style, init

from .config import config
from .core import parse_vector
from .errors import (
    BanachkitError, EvaluationError, SizeLimitError, SolverError, SpaceSemanticError, SpaceSyntaxError,
)
from .harness import Report, SuiteRunner, chain_smoke, default_registry, report_schema
from .harness.report import jsonable
from .spaces import ChainPolicy, SpaceEvaluator, build_chain, parse_space
from .spreading import cesaro_diagnostic, decompose, generator_from_dict, shift_grid, sm_estimate

EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_EVALUATION = 3


class ColoredFormatter(logging.Formatter):
    """Custom formatter with colors and visual separators"""

    COLORS = {
        'DEBUG': Fore.CYAN,
        'INFO': Fore.GREEN,
        'WARNING': Fore.YELLOW,
        'ERROR': Fore.RED,
        'CRITICAL': Fore.MAGENTA + Style.BRIGHT
    }

    COMPONENT_COLORS = {
        'SuiteRunner': Fore.BLUE + Style.BRIGHT,
        'SuiteRegistry': Fore.CYAN,
        'SpaceEvaluator': Fore.MAGENTA,
    }

    def format(self, record):
        log_color = self.COLORS.get(record.levelname, Fore.WHITE)
        component_color = self.COMPONENT_COLORS.get(record.name, Fore.WHITE)

        return (
            f"{Fore.BLACK + Back.WHITE}[LOG]{Style.RESET_ALL} "
            f"{Fore.CYAN}{self.formatTime(record, '%H:%M:%S')}{Style.RESET_ALL} "
            f"│ {component_color}{record.name}{Style.RESET_ALL} "
            f"│ {log_color}{record.levelname}{Style.RESET_ALL} "
            f"│ {record.getMessage()}"
        )


def configure_logging(level: Optional[str] = None) -> None:
    """Install the console handler on the root logger (stderr, so stdout stays machine-readable).

    Colored when stderr is a terminal, otherwise plain ``logging.format`` lines.
    """
    logger = logging.getLogger()
    logger.setLevel((level or config.log_level).upper())

    for handler in logger.handlers[:]:
        if getattr(handler, "_banachkit", False):
            logger.removeHandler(handler)

    console_handler = logging.StreamHandler()
    if sys.stderr.isatty():
        console_handler.setFormatter(ColoredFormatter())
    else:
        console_handler.setFormatter(logging.Formatter(config.get("logging.format")))
    console_handler._banachkit = True
    logger.addHandler(console_handler)


@dataclass
class CliOptions:
    seed: int = 0
    tol: Optional[float] = None
    as_json: bool = False
    out: Optional[Path] = None

    def emit(self, text: str) -> None:
        if self.out is None:
            click.echo(text)
        else:
            self.out.write_text(text if text.endswith("\n") else text + "\n")
            logging.getLogger(__name__).info(f"Wrote {self.out}")


pass_options = click.make_pass_decorator(CliOptions)


def _dumps(data: Any) -> str:
    return json.dumps(jsonable(data), indent=2)


def _fail(message: str, code: int) -> None:
    click.echo(f"{Fore.RED}error:{Style.RESET_ALL} {message}", err=True)
    click.get_current_context().exit(code)


def handle_errors(func: Callable) -> Callable:
    """Map library errors onto the exit-code contract"""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (SpaceSyntaxError, SpaceSemanticError) as e:
            hint = f"; expected one of {', '.join(e.expected)}" if getattr(e, "expected", None) else ""
            _fail(f"{e}{hint}", EXIT_USAGE)
        except (EvaluationError, SizeLimitError, SolverError) as e:
            _fail(f"{type(e).__name__}: {e}", EXIT_EVALUATION)
        except (BanachkitError, ValueError, KeyError) as e:
            _fail(f"{type(e).__name__}: {e}", EXIT_USAGE)
    return wrapper


def _json_argument(text: str) -> Any:
    """Inline JSON, or the contents of a JSON file when `text` names one"""
    path = Path(text)
    if not text.lstrip().startswith(("{", "[")) and path.is_file():
        text = path.read_text()
    return json.loads(text)


@click.group()
@click.option("--seed", default=0, show_default=True, help="Seed for every random draw.")
@click.option("--tol", type=float, default=None, help="Override the tolerance of every check.")
@click.option("--json", "as_json", is_flag=True, help="Emit JSON instead of tables or summaries.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Write the result to a file instead of stdout.")
@click.option("--log-level", default=None, help="Logging level (default from config or BANACHKIT_LOG_LEVEL).")
@click.version_option(package_name="banachkit")
@click.pass_context
def cli(ctx: click.Context, seed: int, tol: Optional[float], as_json: bool, out: Optional[Path],
        log_level: Optional[str]):
    """Finite-scale norms, spreading models and invariant checks for sequence spaces."""
    configure_logging(log_level)
    if tol is not None and not 0 < tol < 1:
        raise click.BadParameter(f"must lie in (0, 1), got {tol}", param_hint="--tol")
    ctx.obj = CliOptions(seed=seed, tol=tol, as_json=as_json, out=out)


@cli.command()
@click.option("--space", required=True, help='Space expression, e.g. "sb(lp(1), r=2)".')
@click.option("--vec", required=True, help='Vector literal: [1, 0, 2], {"3": 1.5} or {"flat": {...}}.')
@click.option("--sb-mode", type=click.Choice(["exact", "heuristic", "auto"]), default=None,
              help="Schreier evaluation mode (default from config).")
@click.option("--sb-cap", type=click.IntRange(min=1), default=None, help="Support cap for exhaustive search.")
@pass_options
@handle_errors
def norm(opts: CliOptions, space: str, vec: str, sb_mode: Optional[str], sb_cap: Optional[int]):
    """Evaluate a norm and print {value, certificate}."""
    evaluator = SpaceEvaluator(sb_mode=sb_mode, sb_cap=sb_cap)
    result = evaluator.norm_of(parse_space(space), parse_vector(vec))
    opts.emit(_dumps(result.to_dict()))


@cli.command()
@click.option("--gen", "generator", required=True, help="Generator descriptor as JSON text or a JSON file.")
@click.option("--coeffs", required=True, help="Coefficient list a_1..a_n as JSON.")
@click.option("--base", type=click.IntRange(min=1), default=None, help="Smallest grid shift K.")
@click.option("--points", type=click.IntRange(min=1), default=None, help="Number of grid shifts.")
@click.option("--layout", type=click.Choice(["block", "spread"]), default="block", show_default=True)
@click.option("--cesaro", type=click.IntRange(min=1), default=None,
              help="Also report Cesaro means of the generator up to this horizon (JSON output only).")
@pass_options
@handle_errors
def sm(opts: CliOptions, generator: str, coeffs: str, base: Optional[int], points: Optional[int],
       layout: str, cesaro: Optional[int]):
    """Estimate a spreading-model value on a shift grid (CSV, or JSON with --json)."""
    gen = generator_from_dict(_json_argument(generator))
    coeffs = [float(a) for a in json.loads(coeffs)]
    estimate = sm_estimate(gen, coeffs, shift_grid(len(coeffs), base, points, layout), tol=opts.tol)

    if not opts.as_json:
        opts.emit(estimate.to_csv().rstrip("\n"))
        return
    data = estimate.to_dict()
    if cesaro is not None:
        data["cesaro"] = cesaro_diagnostic(gen, cesaro).to_dict()
    opts.emit(_dumps(data))


@cli.command(name="decompose")
@click.option("--gen", "generator", required=True, help="Generator descriptor as JSON text or a JSON file.")
@click.option("--deltas", required=True, help="Threshold schedule as JSON; the last entry repeats.")
@click.option("--horizon", type=click.IntRange(min=1), required=True, help="Number of sequence terms to split.")
@click.option("--window", type=click.IntRange(min=2), default=None, help="Cauchy window for the profile.")
@pass_options
@handle_errors
def decompose_cmd(opts: CliOptions, generator: str, deltas: str, horizon: int, window: Optional[int]):
    """Split a sequence at a threshold schedule and estimate its profile."""
    gen = generator_from_dict(_json_argument(generator))
    result = decompose(gen, json.loads(deltas), horizon, window=window, cauchy_tol=opts.tol)
    if result.status != "ok":
        logging.getLogger(__name__).warning(f"Decomposition inconclusive: {result.reason}")
    opts.emit(_dumps(result.to_dict()))


@cli.command()
@click.option("--k", "k", type=click.IntRange(min=1), required=True, help="Number of chain levels.")
@click.option("--p0", default="2", show_default=True, help="Convexity of the base space (rational).")
@click.option("--q0", default=None, help="Concavity of the base space (rational, default p0).")
@click.option("--base", "base_space", default=None, help="Base space expression (default lp(p0)).")
@click.option("--r-step", default=None, help="Increment of r between levels.")
@click.option("--s-fraction", default=None, help="Position of s_k inside (1, p_{k-1}).")
@click.option("--t-fraction", default=None, help="Position of t_k inside (1, p_{k-1}).")
@click.option("--p-proxy", "p_proxies", multiple=True, help="Configured convexity of level k (repeatable).")
@click.option("--truncation-k", type=click.IntRange(min=1), default=None, help="Davis truncation K per level.")
@click.option("--smoke", type=click.IntRange(min=0), default=5, show_default=True,
              help="Sampled norm-axiom cases on the top space (0 skips the smoke run).")
@pass_options
@handle_errors
def chain(opts: CliOptions, k: int, p0: str, q0: Optional[str], base_space: Optional[str],
          r_step: Optional[str], s_fraction: Optional[str], t_fraction: Optional[str], p_proxies,
          truncation_k: Optional[int], smoke: int):
    """Build the chain X_1..X_k and smoke-test its top space."""
    overrides = {"r_step": r_step, "s_fraction": s_fraction, "t_fraction": t_fraction,
                 "truncation_K": truncation_k, "p_proxies": list(p_proxies) or None}
    policy = ChainPolicy(**{name: value for name, value in overrides.items() if value is not None})
    descriptor = build_chain(p0, q0 or p0, k, policy=policy, base=base_space)

    data = {"descriptor": descriptor.to_dict()}
    passed = True
    if smoke:
        report = chain_smoke(descriptor, seed=opts.seed, n_cases=smoke, tol=opts.tol)
        data["smoke"] = report.model_dump(mode="json")
        passed = report.passed
    opts.emit(_dumps(data))
    if not passed:
        click.get_current_context().exit(EXIT_FAILED)


def _summary(report: Report) -> str:
    frame = pd.DataFrame([{"check": r.check, "passed": r.passed} for r in report.cases])
    table = frame.groupby("check")["passed"].agg(cases="count", passed="sum")
    table["failed"] = table["cases"] - table["passed"]

    status = f"{Fore.GREEN}PASS" if report.passed else f"{Fore.RED}FAIL"
    lines = [
        f"{Style.BRIGHT}{report.suite}{Style.RESET_ALL} seed={report.seed} cases={report.n_cases} "
        f"runtime={report.runtime:.2f}s {status}{Style.RESET_ALL} "
        f"({report.n_passed}/{len(report.cases)} checks)",
        f"{Fore.YELLOW}{'─' * 60}{Style.RESET_ALL}",
        table.to_string(),
    ]
    for record in report.failures():
        lines.append(f"{Fore.YELLOW}{'─' * 60}{Style.RESET_ALL}")
        lines.append(f"{Fore.RED}case {record.case} {record.check}{Style.RESET_ALL}")
        lines.append(_dumps(record.model_dump(mode="json")))
    return "\n".join(lines)


@cli.command(name="check")
@click.argument("suites", nargs=-1)
@click.option("--all", "run_all", is_flag=True, help="Run every registered suite.")
@click.option("--cases", type=click.IntRange(min=1), default=None, help="Number of cases (default per suite).")
@click.option("--schema", is_flag=True, help="Print the report JSON schema and exit.")
@click.option("--list", "list_suites", is_flag=True, help="List the available suites and exit.")
@pass_options
@handle_errors
def check_cmd(opts: CliOptions, suites: tuple, run_all: bool, cases: Optional[int], schema: bool,
              list_suites: bool):
    """Run invariant suites; exits 1 when any check fails.

    One suite prints one report; several print a JSON array of reports (or one summary each).
    """
    if schema:
        opts.emit(_dumps(report_schema()))
        return
    if list_suites:
        available = default_registry.get_available_suites()
        if opts.as_json:
            opts.emit(_dumps(available))
        else:
            opts.emit("\n".join(f"{name:<16} {info['default_cases']:>5}  {info['description']}"
                                for name, info in available.items()))
        return

    names = list(default_registry.get_available_suites()) if run_all else list(suites)
    if not names:
        raise click.UsageError("Missing argument 'SUITES' (see --list or --all).")
    unknown = [name for name in names if not default_registry.has_suite(name)]
    if unknown:
        raise click.UsageError(f"Unknown suite(s): {', '.join(unknown)} (see --list).")

    reports = SuiteRunner(default_registry).run_batch(names, seed=opts.seed, n_cases=cases, tol=opts.tol)
    if opts.as_json:
        bodies = [report.to_json() for report in reports]
        opts.emit(bodies[0] if len(bodies) == 1 else "[\n" + ",\n".join(bodies) + "\n]")
    else:
        opts.emit("\n\n".join(_summary(report) for report in reports))
    if not all(report.passed for report in reports):
        click.get_current_context().exit(EXIT_FAILED)


def main():
    init(autoreset=True)
    cli(prog_name="banachkit")


if __name__ == "__main__":
    main()
