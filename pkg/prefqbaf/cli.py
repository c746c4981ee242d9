"""The ``prefqbaf`` command line.

Exit codes: 0 success, 1 usage error, 2 invalid input, 3 internal error.
Results go to stdout (or ``--out``); diagnostics and logs go to stderr.
"""
from __future__ import annotations

import json
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence

import click
import polars as pl
from click_help_colors import HelpColorsGroup
from rich.console import Console
from rich.logging import RichHandler

from .bsef import ExtractionConfig, extract_qbaf
from .config.settings import load_settings
from .core import DecisionModel
from .exceptions import ParamError, PrefqbafError
from .experiments import (
    StudyConfig,
    reproduce_published_tables,
    run_agreement_study,
    sensitivity_sweep,
)
from .preferences import parse_dsl
from .semantics import Polarity, SemanticsKind, influence_table
from .storage import STDIO, LocalStorageAdapter, load_framework, save_qbaf
from .version import VERSION

logger = logging.getLogger(__name__)

err_console = Console(stderr=True)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_INTERNAL = 3

_LEVELS = {0: None, 1: logging.INFO}


def _setup_logging(verbose: int) -> None:
    settings = load_settings()
    level = _LEVELS.get(verbose, logging.DEBUG) or settings.log_level
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


def _write_csv(frame: pl.DataFrame, dest: str) -> None:
    precision = load_settings().float_precision
    LocalStorageAdapter().write_text(dest, frame.write_csv(float_precision=precision))


def _extraction_from_options(options: Dict[str, Any]) -> Optional[ExtractionConfig]:
    if options["function"] is None:
        given = [name for name, value in options.items() if value is not None]
        if given:
            raise ParamError(f"--function is required with {', '.join(sorted(given))}")
        return None
    if options["delta"] is None or options["big_delta"] is None:
        raise ParamError("--delta and --big-delta are required with --function")
    return ExtractionConfig.from_fields(**options)


def extraction_options(command: Any) -> Any:
    """Options overriding the document's extraction parameters."""
    for decorator in reversed(
        [
            click.option("--function", type=click.Choice(["nu1", "nu2"]), default=None),
            click.option("--delta", type=float, default=None, help="Weight of '>' gaps."),
            click.option(
                "--big-delta", type=float, default=None, help="Weight of '>>' gaps."
            ),
            click.option("--top", type=float, default=None),
            click.option("--bot", type=float, default=None),
            click.option("--alpha", type=float, default=None),
            click.option("--beta", type=float, default=None),
            click.option(
                "--preferences", default=None, help="Ordering overriding the document's."
            ),
        ]
    ):
        command = decorator(command)
    return command


def _model(document: str, preferences: Optional[str], **options: Any) -> DecisionModel:
    loaded = load_framework(document)
    override = _extraction_from_options(options)
    ordering = parse_dsl(preferences) if preferences is not None else loaded.ordering
    # Explicit preferences or extraction options take over from stored scores.
    use_stored = override is None and preferences is None
    return DecisionModel(
        loaded.framework,
        ordering=ordering,
        extraction=override or loaded.extraction,
        base_scores=loaded.base_scores if use_stored else None,
    )


@click.group(
    cls=HelpColorsGroup,
    help_options_color="green",
    help_headers_color="yellow",
    context_settings={"max_content_width": 115},
)
@click.option("-v", "--verbose", count=True, help="-v for INFO logs, -vv for DEBUG.")
@click.version_option(VERSION, prog_name="prefqbaf")
def cli(verbose: int) -> None:
    """Turn preference orderings into base scores and decide with gradual semantics."""
    _setup_logging(verbose)


@cli.command()
@click.argument("document")
@extraction_options
@click.option("--out", default=STDIO, show_default=True)
def extract(document: str, preferences: Optional[str], out: str, **options: Any) -> None:
    """Write the QBAF obtained by extracting base scores from preferences."""
    model = _model(document, preferences, **options)
    if model.ordering is None or model.extraction is None:
        raise ParamError("extract needs preferences and extraction parameters")
    scores = extract_qbaf(model.framework, model.ordering, model.extraction)
    save_qbaf(model.framework, scores, out, ordering=model.ordering, extraction=model.extraction)


@cli.command()
@click.argument("document")
@click.option(
    "--semantics",
    type=click.Choice([k.value for k in SemanticsKind]),
    default=SemanticsKind.QE.value,
    show_default=True,
)
@extraction_options
@click.option("--json", "as_json", is_flag=True, help="Print the outcome as JSON.")
def decide(
    document: str, semantics: str, preferences: Optional[str], as_json: bool, **options: Any
) -> None:
    """Evaluate a QBAF (or framework plus preferences) and print the winning decision."""
    model = _model(document, preferences, **options)
    outcome = model.decide(semantics)
    if as_json:
        payload = {"semantics": semantics, **outcome.to_dict()}
        click.echo(json.dumps(payload, indent=2, sort_keys=True))
        return
    click.echo(f"semantics: {semantics}")
    for decision, strength in outcome.strengths.items():
        label = model.framework.label(decision)
        name = f"{decision} ({label})" if label else decision
        click.echo(f"{name}: {strength:.6f}")
    click.echo(f"winner: {outcome.label}")


@cli.command()
@click.argument("document")
@extraction_options
@click.option("--against", default=None, help="Second ordering for the structure check.")
def check(
    document: str, preferences: Optional[str], against: Optional[str], **options: Any
) -> None:
    """Report which axioms and properties the extraction meets on this input."""
    model = _model(document, preferences, **options)
    other = parse_dsl(against) if against is not None else None
    report = model.check(other)
    click.echo(json.dumps(report.to_dict(), indent=2, sort_keys=True))


@cli.command()
@click.option("--samples", type=int, default=30000, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--centralisation", is_flag=True, help="Sample bot = 1 - top.")
@click.option("--normalisation", is_flag=True, help="Fix top = 1 and bot = 0.")
@click.option("--workers", type=int, default=None, help="Thread count.")
@click.option("--out", default=STDIO, show_default=True)
def experiment(
    samples: int,
    seed: int,
    centralisation: bool,
    normalisation: bool,
    workers: Optional[int],
    out: str,
) -> None:
    """Agreement and Cohen's kappa between semantics over random scenarios."""
    overrides: Dict[str, Any] = {
        "centralisation": centralisation,
        "normalisation": normalisation,
    }
    if workers is not None:
        overrides["workers"] = workers
    config = StudyConfig.from_settings(load_settings(), samples, seed, **overrides)
    report = run_agreement_study(config)
    LocalStorageAdapter().write_text(out, report.to_json())


@cli.command()
@click.option(
    "--semantics",
    "kinds",
    type=click.Choice([k.value for k in SemanticsKind]),
    multiple=True,
    help="Repeatable; all semantics by default.",
)
@click.option(
    "--polarity",
    "polarities",
    type=click.Choice([p.value for p in Polarity]),
    multiple=True,
)
@click.option("--influencer", "influencers", type=float, multiple=True)
@click.option("--grid", type=int, default=101, show_default=True)
@click.option("--out", default=STDIO, show_default=True)
def curves(
    kinds: Sequence[str],
    polarities: Sequence[str],
    influencers: Sequence[float],
    grid: int,
    out: str,
) -> None:
    """Influence curves: strength against base score under a single influencer."""
    frame = influence_table(
        kinds=kinds or tuple(SemanticsKind),
        polarities=polarities or tuple(Polarity),
        influencers=influencers or (0.25, 0.5, 0.75, 1.0),
        grid_size=grid,
    )
    _write_csv(frame, out)


@cli.command()
@click.option("--out", default=STDIO, show_default=True)
def tables(out: str) -> None:
    """Recompute the published preference/design-choice table on the feeding example."""
    report = reproduce_published_tables()
    logger.info(
        "%d of %d decisions match", report.decision_matches, report.decision_total
    )
    _write_csv(report.to_frame(), out)


@cli.command()
@click.argument("document")
@click.option("--preferences", default=None)
@click.option("--top", "tops", type=float, multiple=True)
@click.option("--ratio", "ratios", type=float, multiple=True)
@click.option("--out", default=STDIO, show_default=True)
def sweep(
    document: str,
    preferences: Optional[str],
    tops: Sequence[float],
    ratios: Sequence[float],
    out: str,
) -> None:
    """Decision strengths over centralised ranges and much-greater ratios (nu1)."""
    loaded = load_framework(document)
    ordering = parse_dsl(preferences) if preferences is not None else loaded.ordering
    if ordering is None:
        raise ParamError("sweep needs a preference ordering")
    kwargs: Dict[str, Any] = {}
    if tops:
        kwargs["tops"] = tops
    if ratios:
        kwargs["ratios"] = ratios
    _write_csv(sensitivity_sweep(loaded.framework, ordering, **kwargs), out)


def cli_main(argv: Optional[List[str]] = None) -> int:
    try:
        cli.main(args=argv, prog_name="prefqbaf", standalone_mode=False)
    except click.Abort:
        err_console.print("aborted", markup=False, highlight=False)
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except PrefqbafError as e:
        err_console.print(f"error: {type(e).__name__}: {e}", markup=False, highlight=False)
        return EXIT_INVALID
    except Exception:
        err_console.print_exception(suppress=[click])
        return EXIT_INTERNAL
    return EXIT_OK


def run() -> None:
    sys.exit(cli_main())
