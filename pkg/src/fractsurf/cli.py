"""Command-line entry point.

    fractsurf <command> --config <path> | --fixture <name>
              [--out <dir>] [--seed <u64>] [--resolution <R>] [--tol <t>]

Commands: validate, build, surface, dimension, report.  Exactly one of
``--config`` / ``--fixture`` selects the job.  Certification failures
exit nonzero with the offending witness in the message.
"""
from __future__ import annotations

import sys
from pathlib import Path

import click

from .config import parse_config, parse_config_document
from .errors import FractsurfError, MagnitudeError
from .fixtures import fixture_config, fixture_names
from .pipeline import run_pipeline


def _load_config(config_path: str | None, fixture: str | None):
    if (config_path is None) == (fixture is None):
        raise click.UsageError("give exactly one of --config or --fixture")
    if config_path is not None:
        return parse_config(Path(config_path).read_text(encoding="utf-8"))
    return parse_config_document(fixture_config(fixture))


def _run(command: str, config: str | None, fixture: str | None, out: str | None,
         seed: int | None, resolution: int | None, tol: float | None):
    try:
        cfg = _load_config(config, fixture)
        result = run_pipeline(cfg, command, seed=seed, resolution=resolution,
                              tol=tol, out=out)
    except MagnitudeError as exc:
        click.echo(f"magnitude violation: {exc} "
                   f"(witness ({exc.witness[0]!r}, {exc.witness[1]!r}), "
                   f"value {exc.value!r})", err=True)
        sys.exit(2)
    except FractsurfError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(result.summary, nl=False)


def _command(name: str, help_text: str):
    @click.command(name=name, help=help_text)
    @click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
                  default=None, help="Path to a JSON job configuration.")
    @click.option("--fixture", type=click.Choice(fixture_names()), default=None,
                  help="Use a built-in named configuration instead of --config.")
    @click.option("--out", type=click.Path(file_okay=False), default=None,
                  help="Output directory (default: the configured one, else cwd).")
    @click.option("--seed", type=click.IntRange(0, 2 ** 64 - 1), default=None,
                  help="Override the point-cloud sampler seed.")
    @click.option("--resolution", type=click.IntRange(5), default=None,
                  help="Override the solver resolution (must stay knot-aligned).")
    @click.option("--tol", type=click.FloatRange(0, min_open=True), default=None,
                  help="Override the solver tolerance.")
    def cmd(config_path, fixture, out, seed, resolution, tol):
        _run(name, config_path, fixture, out, seed, resolution, tol)

    return cmd


@click.group()
@click.version_option(package_name="fractsurf")
def main():
    """Fractal interpolation surfaces over rectangular grids."""


main.add_command(_command("validate", "Check a configuration end to end and print "
                          "the certification summary."))
main.add_command(_command("build", "Assemble and certify the system; write its "
                          "certificate file."))
main.add_command(_command("surface", "Solve for the surface; write heightmap CSV, "
                          "PGM image and xyz point cloud."))
main.add_command(_command("dimension", "Estimate the box-counting dimension; write "
                          "count CSV and report."))
main.add_command(_command("report", "Run everything and write all artifacts plus "
                          "a summary."))


if __name__ == "__main__":
    main()
