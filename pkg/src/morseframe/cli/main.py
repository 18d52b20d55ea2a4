"""
Command-line interface for morseframe.
"""
from pathlib import Path
from typing import Any, Callable, Optional

import click

from ..core.config import Config
from ..core.exceptions import ConfigurationError
from .commands import (
    execute_analysis_command,
    execute_config_info_command,
    execute_list_scenes_command,
    execute_plot_command,
    execute_project_command,
    execute_verify_command,
    resolve_scene_config,
)


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose logging")
@click.option("--debug", is_flag=True, help="Enable debug logging")
@click.pass_context
def cli(ctx: click.Context, verbose: bool, debug: bool) -> None:
    """Normalize framed Morse functions into special ones."""
    ctx.ensure_object(dict)

    try:
        config = Config.from_dotenv()
        config.validate()
        ctx.obj["config"] = config
    except ConfigurationError as e:
        click.echo(f"Error loading configuration: {e}", err=True)
        ctx.exit(2)

    level = "DEBUG" if debug else ("INFO" if verbose else None)
    config.setup_logging(level)


def scene_options(func: Callable[..., Any]) -> Callable[..., Any]:
    """Options selecting a scene, shared by analyze, normalize and plot."""
    options = [
        click.option("--scene", default=None, help="Registered scene name"),
        click.option("--a", "a", type=float, default=None, help="Scene parameter a"),
        click.option("--b", "b", type=float, default=None, help="Scene parameter b"),
        click.option(
            "--grid",
            type=click.IntRange(64, 4096),
            default=None,
            help="Grid points per torus axis",
        ),
        click.option(
            "--json",
            "json_source",
            default=None,
            help="Scene configuration: a JSON file path or an inline JSON object",
        ),
        click.option("--tie-tol", type=float, default=None, help="Face tie tolerance"),
        click.option(
            "--delta-ext", type=float, default=None, help="Extremum exclusion radius"
        ),
        click.option(
            "--r-capture", type=float, default=None, help="Separatrix capture radius"
        ),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _scene(kwargs: dict) -> Any:
    return resolve_scene_config(
        kwargs.pop("scene"),
        kwargs.pop("a"),
        kwargs.pop("b"),
        kwargs.pop("grid"),
        kwargs.pop("json_source"),
        {
            "tie_tol": kwargs.pop("tie_tol"),
            "delta_ext": kwargs.pop("delta_ext"),
            "r_capture": kwargs.pop("r_capture"),
        },
    )


@cli.command()
@click.option("--values", required=True, help="Comma separated saddle values")
@click.option("--kappa", type=float, required=True, help="Scale of the permutohedron")
@click.option("--tie-tol", type=float, default=None, help="Face tie tolerance")
@click.pass_context
def project(
    ctx: click.Context, values: str, kappa: float, tie_tol: Optional[float]
) -> None:
    """Project values onto kappa * P^{q-1} and print the certificate."""
    execute_project_command(ctx.obj["config"], values, kappa, tie_tol)


@cli.command()
@scene_options
@click.option("--out", type=click.Path(path_type=Path), default=None)
@click.pass_context
def analyze(ctx: click.Context, out: Optional[Path], **kwargs: Any) -> None:
    """Analyze a scene and report whether it is special."""
    execute_analysis_command(ctx.obj["config"], _scene(kwargs), out)


@cli.command()
@scene_options
@click.option("--out", type=click.Path(path_type=Path), default=None)
@click.option(
    "--homotopy-samples",
    type=click.IntRange(2, None),
    default=None,
    help="Sample the homotopy back to the input at this many points",
)
@click.pass_context
def normalize(
    ctx: click.Context,
    out: Optional[Path],
    homotopy_samples: Optional[int],
    **kwargs: Any,
) -> None:
    """Normalize a scene into a special framed pair."""
    execute_analysis_command(
        ctx.obj["config"],
        _scene(kwargs),
        out,
        normalize=True,
        homotopy_samples=homotopy_samples,
    )


@cli.command()
@scene_options
@click.option(
    "--out",
    type=click.Path(file_okay=False, path_type=Path),
    default=Path("plots"),
    show_default=True,
    help="Output directory",
)
@click.option("--values", default=None, help="Plot the permutohedron for these values")
@click.option("--kappa", type=float, default=None, help="Scale for --values plots")
@click.pass_context
def plot(
    ctx: click.Context,
    out: Path,
    values: Optional[str],
    kappa: Optional[float],
    **kwargs: Any,
) -> None:
    """Write SVG figures for a scene or for explicit values."""
    execute_plot_command(ctx.obj["config"], _scene(kwargs), out, values, kappa)


@cli.command()
@click.argument("report", type=click.Path(dir_okay=False, path_type=Path))
@click.pass_context
def verify(ctx: click.Context, report: Path) -> None:
    """Re-check the certificate and reparametrization of a report."""
    execute_verify_command(ctx.obj["config"], report)


@cli.command("list-scenes")
def list_scenes_cmd() -> None:
    """List registered scenes."""
    execute_list_scenes_command()


@cli.command("config-info")
@click.pass_context
def config_info(ctx: click.Context) -> None:
    """Display configuration information."""
    execute_config_info_command(ctx.obj["config"])


if __name__ == "__main__":
    cli()
