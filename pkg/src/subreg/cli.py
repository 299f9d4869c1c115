"""Command-line interface for subreg."""

import csv
import io
import json
from collections.abc import Iterator
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path
from typing import NoReturn

import click

from .config import OUTPUT_FORMATS, Config
from .resources import read_package_text

# Inline fallback config in case package resources aren't available
_FALLBACK_CONFIG = """\
[compute]
default_order = 8
parallelism = 1

[output]
format = "text"

[cache]
dir = ".subreg/cache"
enabled = true
"""

SUITE_CHOICES = ("cartan", "qzseries", "modes", "classifier", "characters", "all")

EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


def _exit_with_error(message: str, *, code: int = EXIT_USAGE) -> NoReturn:
    """Print a CLI error message and exit with ``code``."""
    click.echo(f"Error: {message}", err=True)
    raise SystemExit(code)


def _load_config_or_exit() -> Config:
    """Load the project config or exit cleanly when it cannot be opened."""
    try:
        return Config.find_and_load()
    except (OSError, TypeError, ValueError) as e:
        _exit_with_error(str(e))


@contextmanager
def _exit_on_errors() -> Iterator[None]:
    """Map library errors to exit codes: bad input 2, anything else 3."""
    from .cartan import CriticalLevelError
    from .characters import CharacterError, WindowOverflowError
    from .classifier import (
        OutOfRangeError,
        UnsupportedLevelError,
        WeightSelectionError,
    )
    from .modes import DepthOverflowError

    try:
        yield
    except (OutOfRangeError, UnsupportedLevelError, CriticalLevelError) as e:
        _exit_with_error(str(e), code=EXIT_USAGE)
    except (
        WindowOverflowError,
        CharacterError,
        WeightSelectionError,
        DepthOverflowError,
        AssertionError,
    ) as e:
        _exit_with_error(str(e), code=EXIT_INTERNAL)
    except (click.ClickException, click.Abort, click.exceptions.Exit):
        raise
    except Exception as e:
        _exit_with_error(f"unexpected {type(e).__name__}: {e}", code=EXIT_INTERNAL)


def get_default_config_content() -> str:
    """Get the default config.toml content from bundled defaults."""
    content = read_package_text("subreg.defaults", "config.toml")
    return content if content else _FALLBACK_CONFIG


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        _exit_with_error(f"not a rational number: {text!r}")


def _parse_level(text: str):
    """Classify ``--k`` and require a principal or coprincipal level."""
    from .classifier import LevelKind, classify_level, require_supported

    level = classify_level(_parse_rational(text))
    if level.kind is LevelKind.CRITICAL:
        _exit_with_error("the critical level k = -3 is not supported")
    with _exit_on_errors():
        return require_supported(level)


def _parse_label(text: str, level):
    from .classifier import Form, make_label

    parts = [part.strip() for part in text.split(",")]
    if len(parts) != 3:
        _exit_with_error(f"label must be s,i,j (for example 1,1,1), got {text!r}")
    try:
        i, j = int(parts[1]), int(parts[2])
    except ValueError:
        _exit_with_error(f"label indices must be integers, got {text!r}")
    with _exit_on_errors():
        return make_label(Form.parse(parts[0]), i, j, level)


def _resolve_format(config: Config, requested: str | None) -> str:
    return requested or config.output.format


def _csv_text(header: list[str], rows: list[list[object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue().rstrip("\n")


_format_option = click.option(
    "--format",
    "output_format",
    type=click.Choice(OUTPUT_FORMATS),
    default=None,
    help="Output format (default: from config)",
)
_verbose_option = click.option("--verbose", "-v", is_flag=True, help="Verbose output")


@click.group()
@click.version_option()
def main():
    """subreg - exact simple modules and characters of W_k(sp4, f_subreg)."""
    pass


@main.command()
@click.option("--force", "-f", is_flag=True, help="Overwrite an existing config")
def init(force: bool):
    """Write a default .subreg/config.toml in the current directory."""
    subreg_dir = Path.cwd() / ".subreg"
    config_file = subreg_dir / "config.toml"

    if subreg_dir.exists() and not subreg_dir.is_dir():
        _exit_with_error(".subreg already exists and is not a directory")
    if config_file.exists() and config_file.is_dir():
        _exit_with_error(".subreg/config.toml already exists and is not a file")
    if config_file.exists() and not force:
        click.echo("Error: .subreg/config.toml already exists", err=True)
        click.echo("Use --force to overwrite", err=True)
        raise SystemExit(EXIT_FAILED)

    subreg_dir.mkdir(exist_ok=True)
    config_file.write_text(get_default_config_content(), encoding="utf-8")
    click.echo(f"Created {config_file}")


@main.command()
def clean():
    """Remove cached characters."""
    from .cache import clear_cache

    config = _load_config_or_exit()
    cache_dir = config.get_cache_dir()
    if clear_cache(cache_dir):
        click.echo(f"Removed {cache_dir}")
    else:
        click.echo("Nothing to clean")


@main.command()
@click.option("--q", "denominator", type=int, required=True, help="3 or 4")
@click.option("--p-max", type=int, required=True, help="Largest numerator p")
@click.option("--p-min", type=int, default=1, show_default=True)
@_format_option
def levels(denominator: int, p_max: int, p_min: int, output_format: str | None):
    """List admissible levels k = -3 + p/q."""
    from .classifier import UnsupportedLevelError, admissible_levels, label_count

    config = _load_config_or_exit()
    if p_max < p_min:
        raise click.BadParameter(
            f"--p-max {p_max} is below --p-min {p_min}", param_hint="--p-max"
        )
    try:
        found = admissible_levels(denominator, p_max, p_min)
    except UnsupportedLevelError as e:
        raise click.BadParameter(str(e), param_hint="--q") from None

    rows = [
        [str(level.k), level.p, level.q, level.kind.value, label_count(level)]
        for level in found
    ]
    header = ["k", "p", "q", "class", "modules"]
    fmt = _resolve_format(config, output_format)
    if fmt == "json":
        click.echo(json.dumps([dict(zip(header, row)) for row in rows], indent=2))
    elif fmt == "csv":
        click.echo(_csv_text(header, rows))
    elif not rows:
        click.echo("No admissible levels in range")
    else:
        for k, p, q, kind, count in rows:
            click.echo(f"k = {k:>7}  p = {p:<3} {kind:<12} {count} modules")


@main.command()
@click.option("--k", "k_text", required=True, help="Level, e.g. -5/3")
@_format_option
@_verbose_option
def modules(k_text: str, output_format: str | None, verbose: bool):
    """Table of simple modules with their psi and phi images."""
    from .classifier import module_table, psi_orbits
    from .logging import debug, setup_logging

    setup_logging(verbose)
    config = _load_config_or_exit()
    level = _parse_level(k_text)
    with _exit_on_errors():
        table = module_table(level)
        debug(f"{len(psi_orbits(level))} psi-orbits at {level}")

    fmt = _resolve_format(config, output_format)
    if fmt == "json":
        click.echo(json.dumps([row.to_json_dict() for row in table], indent=2))
        return
    if fmt == "csv":
        header = ["s", "i", "j", "xi", "chi", "top_dim", "psi_image", "phi_image"]
        rows: list[list[object]] = [
            [
                row.label.s.value,
                row.label.i,
                row.label.j,
                str(row.label.xi),
                str(row.label.chi),
                row.label.top_dim,
                ":".join(str(part) for part in row.psi_image.key),
                ":".join(str(part) for part in row.phi_image.key),
            ]
            for row in table
        ]
        click.echo(_csv_text(header, rows))
        return

    click.echo(f"{level}: {len(table)} simple modules")
    for row in table:
        label = row.label
        psi = "{},{},{}".format(*row.psi_image.key)
        phi = "{},{},{}".format(*row.phi_image.key)
        click.echo(
            f"  ({label.s.value},{label.i},{label.j})  xi = {label.xi!s:>7}  "
            f"chi = {label.chi!s:>7}  top {label.top_dim}  psi -> ({psi})  "
            f"phi -> ({phi})"
        )


@main.command()
@click.option("--k", "k_text", required=True, help="Level, e.g. -5/3")
@click.option("--label", "label_text", required=True, help="s,i,j such as 2,1,1")
@click.option("--order", type=int, default=None, help="q-order above the top")
@click.option("--no-cache", is_flag=True, help="Neither read nor write the cache")
@_format_option
@_verbose_option
def character(
    k_text: str,
    label_text: str,
    order: int | None,
    no_cache: bool,
    output_format: str | None,
    verbose: bool,
):
    """Print the truncated character of one simple module."""
    from .cache import cached_character
    from .logging import setup_logging
    from .qzseries import format_rational, format_table

    setup_logging(verbose)
    config = _load_config_or_exit()
    level = _parse_level(k_text)
    label = _parse_label(label_text, level)
    order = config.compute.default_order if order is None else order
    if order < 0:
        raise click.BadParameter("must be non-negative", param_hint="--order")
    use_cache = config.cache.enabled and not no_cache
    cache_dir = config.get_cache_dir() if use_cache else None

    with _exit_on_errors():
        series = cached_character(label, level, order, cache_dir)

    fmt = _resolve_format(config, output_format)
    if fmt == "json":
        payload = {
            "k": format_rational(level.k),
            "label": {"s": label.s.value, "i": label.i, "j": label.j},
            "series": series.to_json_dict(),
        }
        click.echo(json.dumps(payload, indent=2))
    elif fmt == "csv":
        rows: list[list[object]] = [
            [
                format_rational(series.q_offset + n),
                format_rational(series.z_offset + m),
                str(c),
            ]
            for (n, m), c in series.terms()
        ]
        click.echo(_csv_text(["q_exp", "z_exp", "coefficient"], rows))
    else:
        click.echo(f"{label} at {level}, order {order}")
        click.echo(format_table(series))


@main.command()
@click.option(
    "--suite",
    type=click.Choice(SUITE_CHOICES),
    default="all",
    show_default=True,
)
@click.option("--k", "k_text", default=None, help="Level (default: -5/3 and -7/4)")
@click.option("--order", type=int, default=None, help="Character q-order")
@click.option("--bound", type=int, default=3, show_default=True, help="Mode bound")
@click.option("--depth", type=int, default=4, show_default=True, help="Module depth")
@click.option("--seed", type=int, default=0, show_default=True)
@_verbose_option
def verify(
    suite: str,
    k_text: str | None,
    order: int | None,
    bound: int,
    depth: int,
    seed: int,
    verbose: bool,
):
    """Run verification suites; exit 1 when any check fails."""
    from .logging import setup_logging
    from .verify import SUITES, VerifyOptions, format_suite_report, run_suites

    setup_logging(verbose)
    config = _load_config_or_exit()
    level = _parse_level(k_text) if k_text is not None else None
    options = VerifyOptions(
        level=level,
        order=config.compute.default_order if order is None else order,
        bound=bound,
        depth=depth,
        seed=seed,
        parallelism=config.compute.parallelism,
    )
    names = SUITES if suite == "all" else (suite,)

    with _exit_on_errors():
        reports = run_suites(names, options)

    for report in reports:
        click.echo(format_suite_report(report, verbose))
    if not all(report.passed for report in reports):
        raise SystemExit(EXIT_FAILED)
