"""
Command-line interface for tagmetrics.

Usage:
    tagmetrics simulate --rules rules.txt --length 10000 --epochs 10
    tagmetrics predict --rules catalog:alternating --length 10000 --epochs 10
    tagmetrics compare --rules catalog:hourglass --trials 1000 --epochs 7
    tagmetrics render --rules catalog:hourglass --length 100 --epochs 6 --out hourglass.pgm
    tagmetrics catalog [NAME]
"""

from pathlib import Path
from typing import Optional

import click

from controllers.main_controller import FORMATS, TagController
from models.prediction import EmptyProductionMode
from services.config_service import ConfigService

__all__ = [
    "cli",
]

MODES = [mode.value for mode in EmptyProductionMode]


def rules_option(command):
    return click.option(
        "--rules", "rules_source", required=True,
        help="Rule file path, or catalog:<name> for a built-in rule set",
    )(command)


def common_options(command):
    options = [
        click.option("--epochs", type=click.IntRange(min=0), default=10, show_default=True,
                     help="Number of epochs"),
        click.option("--format", "output_format", type=click.Choice(FORMATS), default="text",
                     show_default=True, help="Output format"),
        click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
                     help="Output file (default: standard output)"),
    ]
    for option in reversed(options):
        command = option(command)
    return rules_option(command)


def prediction_options(command):
    command = click.option("--growth-decimals", type=click.IntRange(min=0), default=None,
                           help="Round growth to this many decimals when projecting lengths")(command)
    return click.option("--mode", type=click.Choice(MODES), default=None,
                        help="Empty-production handling (default from TAGMETRICS_EMPTY_PRODUCTION_MODE)")(command)


def seed_option(command):
    return click.option("--seed", type=click.IntRange(min=0, max=2**64 - 1), default=0,
                        show_default=True, help="Master seed")(command)


def emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        out.write_text(text, encoding="utf-8")


def mode_of(mode: Optional[str]) -> Optional[EmptyProductionMode]:
    return EmptyProductionMode(mode) if mode else None


@click.group()
@click.version_option(version="1.0.0", prog_name="tagmetrics")
@click.pass_context
def cli(ctx: click.Context):
    """
    tagmetrics - simulate n-tag systems and predict their epochs.

    Predictions come from the production rules alone; the harness checks
    them against seeded Monte-Carlo trials.
    """
    if ctx.obj is None:
        from main import setup_logging

        config_service = ConfigService()
        setup_logging(config_service.settings)
        ctx.obj = TagController(config_service)


@cli.command()
@common_options
@click.option("--length", type=click.IntRange(min=1), default=10000, show_default=True,
              help="Initial queue length")
@click.option("--trials", type=click.IntRange(min=1), default=1, show_default=True,
              help="Average this many seeded trials")
@seed_option
@click.option("--stride", type=click.IntRange(min=1), default=1, show_default=True,
              help="Sample the length trace every STRIDE steps")
@click.option("--trace", "trace_path", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Write the step,length trace CSV here")
@click.pass_obj
def simulate(controller: TagController, rules_source: str, epochs: int, output_format: str,
             out: Optional[Path], length: int, trials: int, seed: int, stride: int,
             trace_path: Optional[Path]):
    """Simulate from a random queue and report each epoch start."""
    rules = controller.load_rules(rules_source)
    emit(controller.simulate(rules, length, epochs, seed, trials=trials, stride=stride,
                             output_format=output_format, trace_path=trace_path), out)


@cli.command()
@common_options
@click.option("--length", type=click.IntRange(min=1), default=10000, show_default=True,
              help="Initial queue length")
@prediction_options
@click.pass_obj
def predict(controller: TagController, rules_source: str, epochs: int, output_format: str,
            out: Optional[Path], length: int, mode: Optional[str], growth_decimals: Optional[int]):
    """Predict epochs from the rules, starting with a uniformly random queue."""
    rules = controller.load_rules(rules_source)
    emit(controller.predict(rules, length, epochs, mode=mode_of(mode),
                            growth_decimals=growth_decimals, output_format=output_format), out)


@cli.command()
@common_options
@click.option("--length", type=click.IntRange(min=1), default=None,
              help="Simulated initial length (default from TAGMETRICS_MEASURED_LENGTH)")
@click.option("--trials", type=click.IntRange(min=1), default=1, show_default=True)
@seed_option
@click.option("--reference-length", type=click.FloatRange(min=0.0, min_open=True), default=None,
              help="Length units of the table (default from TAGMETRICS_REFERENCE_LENGTH)")
@prediction_options
@click.pass_obj
def compare(controller: TagController, rules_source: str, epochs: int, output_format: str,
            out: Optional[Path], length: Optional[int], trials: int, seed: int,
            reference_length: Optional[float], mode: Optional[str], growth_decimals: Optional[int]):
    """Compare predictions with averaged simulations."""
    rules = controller.load_rules(rules_source)
    length = length or controller.config_service.get_measured_length()
    emit(controller.compare(rules, length, epochs, trials, seed, reference_length=reference_length,
                            mode=mode_of(mode), growth_decimals=growth_decimals,
                            output_format=output_format), out)


@cli.command()
@rules_option
@click.option("--length", type=click.IntRange(min=1), default=10000, show_default=True)
@click.option("--epochs", type=click.IntRange(min=0), default=10, show_default=True)
@seed_option
@click.option("--stride", type=click.IntRange(min=1), default=1, show_default=True,
              help="One image row every STRIDE steps")
@click.option("--epoch-markers/--no-epoch-markers", default=False,
              help="Insert a gray row where an epoch begins")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="PGM file (default: binary standard output)")
@click.pass_obj
def render(controller: TagController, rules_source: str, length: int, epochs: int, seed: int,
           stride: int, epoch_markers: bool, out: Optional[Path]):
    """Draw the queue evolution as a PGM image."""
    rules = controller.load_rules(rules_source)
    image = controller.render(rules, length, epochs, seed, stride=stride, epoch_markers=epoch_markers)
    if out is None:
        stream = click.get_binary_stream("stdout")
        stream.write(image)
        stream.flush()
    else:
        controller.export_service.write_bytes(image, out)


@cli.command()
@click.argument("name", required=False)
@click.pass_obj
def catalog(controller: TagController, name: Optional[str]):
    """List built-in rule sets, or print one in rule-file format."""
    click.echo(controller.catalog(name), nl=False)
