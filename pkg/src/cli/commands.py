"""
CLI commands for dipcheck
Exit codes: 0 success or well-formed, 1 violation or refutation found, 2 usage or input error
"""

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import click

from src import __version__
from src.cli.rendering import render
from src.config.logging_config import get_logger, setup_logging
from src.config.settings import (
    DEFAULT_ELL_MAX,
    DEFAULT_EPS_GRID,
    DEFAULT_MC_SAMPLES,
    DEFAULT_SEED,
    MC_WORKERS,
)
from src.errors import DipCheckError
from src.models.automaton import DipAutomaton, format_rational
from src.models.documents import parse_rational
from src.models.report import Report
from src.services.automaton_service import (
    automaton_digest,
    builtin,
    document_dict,
    list_builtins,
    load_automaton,
)
from src.services.graph_analysis import check_well_formed
from src.services.path_semantics import check_path, load_path, path_function, pathprob_exact
from src.services.refutation import refute
from src.services.simulation import pathprob_mc, run_mechanism
from src.services.weight_analysis import weight_report
from src.services.witness_generator import VIOLATION_STYLES, generate_pair, ratio_report

logger = get_logger(__name__)

EXIT_OK, EXIT_FOUND, EXIT_ERROR = 0, 1, 2


@dataclass
class CliContext:
    output_format: str = "human"


def emit(ctx: click.Context, report: Report):
    if ctx.obj.output_format == "structured":
        click.echo(report.to_json())
    else:
        render(report)


def make_report(command: str, status: str, a: Optional[DipAutomaton] = None, **fields) -> Report:
    return Report(
        command=command,
        tool_version=__version__,
        status=status,
        automaton=a.name if a is not None else None,
        automaton_sha256=automaton_digest(a) if a is not None else None,
        **fields,
    )


def reports_errors(command: str):
    """Turn dipcheck errors raised by a command into an error report and exit code"""

    def decorator(func):
        @functools.wraps(func)
        def wrapper(ctx: click.Context, *args, **kwargs):
            try:
                code = func(ctx, *args, **kwargs)
            except DipCheckError as e:
                logger.debug(f"{command} failed: {e.message}", extra={"command": command})
                emit(ctx, make_report(command, "error", error=e.to_dict()))
                code = e.exit_code
            except (click.ClickException, click.exceptions.Exit, click.Abort):
                raise
            except Exception as e:
                logger.error(f"{command} failed unexpectedly: {e}", exc_info=True)
                emit(ctx, make_report(command, "error", error={"code": "internal_error", "message": str(e)}))
                code = EXIT_ERROR
            ctx.exit(code or EXIT_OK)

        return wrapper

    return decorator


def _rational(ctx, param, value):
    if value is None:
        return None
    try:
        result = parse_rational(value)
    except ValueError as e:
        raise click.BadParameter(str(e))
    if result <= 0:
        raise click.BadParameter("must be positive")
    return result


def _eps_grid(values: Tuple[float, ...]) -> Tuple[float, ...]:
    return tuple(values) if values else DEFAULT_EPS_GRID


@click.group()
@click.version_option(__version__, prog_name="dipcheck")
@click.option("--format", "output_format", type=click.Choice(["human", "structured"]), default="human",
              help="Report format on stdout")
@click.option("--verbose", is_flag=True, help="Log progress to stderr")
@click.option("--debug", is_flag=True, help="Log debugging details to stderr")
@click.pass_context
def cli(ctx: click.Context, output_format: str, verbose: bool, debug: bool):
    """dipcheck - decide differential privacy of DiP automata"""
    setup_logging("DEBUG" if debug else "INFO" if verbose else None)
    ctx.obj = CliContext(output_format=output_format)


@cli.command()
@click.argument("automaton")
@click.pass_context
@reports_errors("validate")
def validate(ctx: click.Context, automaton: str):
    """Parse and validate an automaton file or built-in name"""
    a = load_automaton(automaton)
    result = {
        "states": len(a.states),
        "transitions": len(a.transitions),
        "document": document_dict(a),
    }
    emit(ctx, make_report("validate", "valid", a, result=result))
    return EXIT_OK


@cli.command()
@click.argument("automaton")
@click.pass_context
@reports_errors("check")
def check(ctx: click.Context, automaton: str):
    """Decide well-formedness; report the weight or a violation witness"""
    a = load_automaton(automaton)
    verdict = check_well_formed(a)
    emit(ctx, make_report("check", verdict.status, a, result=verdict.to_dict()))
    return EXIT_OK if verdict.is_well_formed else EXIT_FOUND


@cli.command()
@click.argument("automaton")
@click.option("--unrestricted", is_flag=True,
              help="Report the weight over paths from every state, not only from the initial state")
@click.pass_context
@reports_errors("weight")
def weight(ctx: click.Context, automaton: str, unrestricted: bool):
    """Per-transition costs and weight(A)"""
    a = load_automaton(automaton)
    report = weight_report(a)
    result = report.to_dict()
    result["mode"] = "unrestricted" if unrestricted else "reachable"
    result["value"] = format_rational(report.unrestricted_weight if unrestricted else report.weight)
    emit(ctx, make_report("weight", "ok", a, result=result))
    return EXIT_OK


@cli.command()
@click.argument("automaton")
@click.option("--d", "d", callback=_rational, default="1", show_default=True,
              help="Privacy multiplier to refute (rational)")
@click.option("--ell", type=click.IntRange(min=1), default=None,
              help="Emit the pair for this repetition count instead of searching")
@click.option("--eps", "eps", type=click.FloatRange(min=0, min_open=True), multiple=True,
              help="Evaluation eps (repeatable)")
@click.option("--ell-max", type=click.IntRange(min=1), default=DEFAULT_ELL_MAX, show_default=True)
@click.option("--n", "n", type=click.IntRange(min=0), default=DEFAULT_MC_SAMPLES, show_default=True,
              help="Monte Carlo samples confirming a hit (0 to skip)")
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--style", type=click.Choice(VIOLATION_STYLES), default="tail", show_default=True,
              help="Input style for privacy-violating path witnesses")
@click.pass_context
@reports_errors("witness")
def witness(ctx: click.Context, automaton: str, d: Fraction, ell: Optional[int], eps: Tuple[float, ...],
            ell_max: int, n: int, seed: int, style: str):
    """Concrete path pairs demonstrating a privacy violation"""
    a = load_automaton(automaton)
    verdict = check_well_formed(a)
    if verdict.is_well_formed:
        emit(ctx, make_report("witness", "well_formed", a, result=verdict.to_dict()))
        return EXIT_OK

    grid = _eps_grid(eps)
    if ell is not None:
        pair = generate_pair(a, verdict.witness, ell, style)
        pair = pair.with_report(ratio_report(a, pair, grid, d=d))
        result = {"status": "pair", "d": format_rational(d), "pair": pair.to_dict(a.name)}
        emit(ctx, make_report("witness", "pair", a, result=result))
        return EXIT_FOUND

    outcome = refute(a, d, grid, ell_max, mc_samples=n, seed=seed, style=style, witness=verdict.witness)
    emit(ctx, make_report("witness", outcome.status, a, seed=seed, result=outcome.to_dict(a.name)))
    return EXIT_FOUND if outcome.status == "refuted" else EXIT_OK


@cli.command()
@click.argument("automaton")
@click.argument("path_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--eps", "eps", type=click.FloatRange(min=0, min_open=True), multiple=True,
              help="Evaluation eps (repeatable)")
@click.option("--x0", type=float, default=None, help="Initial value of r (default: the path's x0)")
@click.option("--show-function", is_flag=True, help="Print x -> pathprob as a piecewise formula")
@click.pass_context
@reports_errors("prob")
def prob(ctx: click.Context, automaton: str, path_file: str, eps: Tuple[float, ...],
         x0: Optional[float], show_function: bool):
    """Exact probability of a path"""
    a = load_automaton(automaton)
    document = load_path(path_file)
    path = check_path(a, document)
    x0 = document.x0 if x0 is None else x0

    values, functions = [], {}
    for e in _eps_grid(eps):
        values.append(pathprob_exact(a, e, x0, path).to_dict())
        if show_function:
            functions[str(e)] = path_function(a, e, path).describe()
    result = {"values": values, "path": path.to_document(a.name, x0)}
    if show_function:
        result["functions"] = functions
    emit(ctx, make_report("prob", "ok", a, result=result))
    return EXIT_OK


@cli.command()
@click.argument("automaton")
@click.argument("path_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--eps", type=click.FloatRange(min=0, min_open=True), default=1.0, show_default=True)
@click.option("--x0", type=float, default=None, help="Initial value of r (default: the path's x0)")
@click.option("--n", "n", type=click.IntRange(min=1), default=DEFAULT_MC_SAMPLES, show_default=True)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--workers", type=click.IntRange(min=1), default=MC_WORKERS, show_default=True)
@click.pass_context
@reports_errors("simulate")
def simulate(ctx: click.Context, automaton: str, path_file: str, eps: float, x0: Optional[float],
             n: int, seed: int, workers: int):
    """Monte Carlo estimate of a path probability"""
    a = load_automaton(automaton)
    document = load_path(path_file)
    path = check_path(a, document)
    x0 = document.x0 if x0 is None else x0

    estimate = pathprob_mc(a, eps, x0, path, n=n, seed=seed, workers=workers)
    result = estimate.to_dict()
    result["exact"] = pathprob_exact(a, eps, x0, path).value
    emit(ctx, make_report("simulate", "ok", a, seed=seed, result=result))
    return EXIT_OK


@cli.command()
@click.argument("automaton")
@click.option("--input", "inputs", type=float, multiple=True, help="Input value (repeatable, in order)")
@click.option("--eps", type=click.FloatRange(min=0, min_open=True), default=1.0, show_default=True)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.pass_context
@reports_errors("run")
def run(ctx: click.Context, automaton: str, inputs: Tuple[float, ...], eps: float, seed: int):
    """Execute the mechanism once on an input sequence"""
    a = load_automaton(automaton)
    outcome = run_mechanism(a, eps, inputs, seed=seed)
    emit(ctx, make_report("run", "ok", a, seed=seed, result=outcome.to_dict()))
    return EXIT_OK


@cli.command()
@click.argument("name", required=False)
@click.pass_context
@reports_errors("demo")
def demo(ctx: click.Context, name: Optional[str]):
    """Verdicts and weights of the built-in automata"""
    names = [name] if name else list_builtins()
    entries = []
    for n in names:
        verdict = check_well_formed(builtin(n))
        entries.append({"name": n, **verdict.to_dict()})
    emit(ctx, make_report("demo", "ok", result={"automata": entries}))
    return EXIT_OK
