"""
Command implementations, kept apart from the click decorators.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import click
import numpy as np

from ..core.config import Config
from ..core.exceptions import (
    ConfigurationError,
    InputError,
    MorseFrameError,
    ReportIOError,
)
from ..core.models import Report, SceneConfig
from ..core.projection import kkt_verify, project
from ..core.reparam import (
    homotopy_face_is_stable,
    homotopy_faces,
    normalize_saddle_values,
)
from ..surface.analysis import AnalysisResult, analyze, is_special, normalize_pair
from ..surface.scenes import list_scenes, make_pair
from ..utils.plotting import plot_permutohedron, plot_portrait
from ..utils.serialization import dumps, loads
from .report import build_report, homotopy_entries, verify_report

logger = logging.getLogger(__name__)


class AnalysisFailed(click.ClickException):
    """A numerical analysis or verification failure (exit code 3)."""

    exit_code = 3


class OutputFailed(click.ClickException):
    """A filesystem failure (exit code 4)."""

    exit_code = 4


def parse_values(text: str) -> List[float]:
    """Parse a comma separated list of finite reals."""
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter(f"Cannot parse {text!r} as a comma list of numbers")
    if not values:
        raise click.BadParameter("At least one value is required")
    if not all(np.isfinite(values)):
        raise click.BadParameter("Values must be finite")
    return values


def resolve_scene_config(
    scene: Optional[str],
    a: Optional[float],
    b: Optional[float],
    grid: Optional[int],
    json_source: Optional[str],
    overrides: Dict[str, Optional[float]],
) -> SceneConfig:
    """Merge a JSON document (file or inline) with explicit flags."""
    try:
        if json_source:
            text = json_source
            if not json_source.lstrip().startswith("{"):
                text = Path(json_source).read_text()
            data = json.loads(text)
            if not isinstance(data, dict):
                raise InputError("Scene configuration must be a JSON object")
        else:
            data = {"scene": scene or "two_cosines"}
        if scene:
            data["scene"] = scene
        params = dict(data.get("params", {}))
        if a is not None:
            params["a"] = a
        if b is not None:
            params["b"] = b
        data["params"] = params
        if grid is not None:
            data["grid_n"] = grid
        tolerances = dict(data.get("tolerances", {}))
        tolerances.update({k: v for k, v in overrides.items() if v is not None})
        data["tolerances"] = tolerances
        return SceneConfig.from_dict(data)
    except OSError as e:
        raise click.BadParameter(f"Cannot read scene configuration: {e}")
    except (ValueError, TypeError, MorseFrameError) as e:
        raise click.BadParameter(str(e))


def apply_overrides(config: Config, scene: SceneConfig) -> Config:
    try:
        return config.with_overrides(**scene.tolerances)
    except ConfigurationError as e:
        raise click.BadParameter(str(e))


def write_output(text: str, out: Optional[Path]) -> None:
    if out is None:
        click.echo(text, nl=False)
        return
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)
    except OSError as e:
        raise OutputFailed(f"Cannot write {out}: {e}")
    click.echo(f"Report written to {out}", err=True)


def _run_analysis(scene: SceneConfig, config: Config) -> AnalysisResult:
    pair = make_pair(scene.scene, scene.params, scene.grid_n)
    return analyze(pair, config)


def _guarded(label: str, func: Any, *args: Any) -> Any:
    """Run a pipeline step, mapping domain errors onto exit codes."""
    try:
        return func(*args)
    except ReportIOError as e:
        raise OutputFailed(f"{label} failed: {e}")
    except InputError as e:
        raise click.BadParameter(str(e))
    except MorseFrameError as e:
        raise AnalysisFailed(f"{label} failed: {e}")
    except click.ClickException:
        raise
    except KeyboardInterrupt:
        raise click.ClickException(f"{label} cancelled by user")
    except Exception as e:
        raise click.ClickException(f"Unexpected error: {e}")


def execute_project_command(
    config: Config, values: str, kappa: float, tie_tol: Optional[float]
) -> None:
    vec = parse_values(values)
    if not kappa > 0:
        raise click.BadParameter("kappa must be positive", param_hint="--kappa")
    tol = config.tie_tol if tie_tol is None else tie_tol

    def _project() -> Dict[str, Any]:
        result = project(vec, kappa, tol)
        check = kkt_verify(vec, kappa, result, config.tol_kkt)
        data = result.to_dict()
        data.update({"residual": check.residual, "kkt_ok": check.ok})
        return data

    write_output(dumps(_guarded("Projection", _project)), None)


def _analysis_report(
    scene: SceneConfig, config: Config, normalize: bool, homotopy_samples: Optional[int]
) -> Report:
    analysis = _run_analysis(scene, config)
    before = is_special(analysis.pair, analysis, config)
    after = None
    if normalize:
        _, normalization, after = normalize_pair(analysis.pair, analysis, config)
    else:
        normalization = normalize_saddle_values(
            analysis.c,
            analysis.d if analysis.q >= 2 else None,
            tie_tol=config.tie_tol,
            merge_tol=config.merge_tol,
            inverse_tol=config.inverse_tol,
            eps=analysis.eps,
        )

    homotopy = None
    if homotopy_samples:
        samples = homotopy_faces(
            analysis.c,
            analysis.d,
            homotopy_samples,
            normalization,
            config.membership_tol,
        )
        homotopy = homotopy_entries(samples)
        if before.special and not homotopy_face_is_stable(samples):
            faces = [entry["face"] for entry in homotopy]
            raise AnalysisFailed(
                f"Open face changes along the homotopy of a special input: {faces}"
            )
    return build_report(scene, config, analysis, normalization, before, after, homotopy)


def display_verdict(report: Report) -> None:
    verdict = report.special_before
    click.echo(
        f"{report.scene['scene']}: p={report.p}, q={report.q}, r={report.r}, "
        f"eps={report.epsilon:.6g}, special={verdict['special']}",
        err=True,
    )
    if report.special_after is not None:
        click.echo(
            f"  after normalization: special={report.special_after['special']}",
            err=True,
        )


def execute_analysis_command(
    config: Config,
    scene: SceneConfig,
    out: Optional[Path],
    normalize: bool = False,
    homotopy_samples: Optional[int] = None,
) -> None:
    """Run analyze or normalize on a scene and emit the JSON report."""
    config = apply_overrides(config, scene)
    label = "Normalization" if normalize else "Analysis"
    logger.info(f"{label} of {scene}")
    report = _guarded(
        label, _analysis_report, scene, config, normalize, homotopy_samples
    )
    display_verdict(report)
    write_output(_guarded("Serialization", dumps, report.to_dict()), out)


def execute_plot_command(
    config: Config,
    scene: SceneConfig,
    out: Path,
    values: Optional[str],
    kappa: Optional[float],
) -> None:
    """Write the torus portrait and, for q in {2, 3}, the permutohedron."""
    config = apply_overrides(config, scene)
    if values is not None:
        vec = parse_values(values)
        if len(vec) not in (2, 3):
            raise click.BadParameter("--values needs 2 or 3 entries for a plot")
        k = kappa if kappa is not None else 2.0 / (len(vec) + 1)
        if not k > 0:
            raise click.BadParameter("kappa must be positive", param_hint="--kappa")
        path = _guarded(
            "Plot",
            lambda: plot_permutohedron(
                vec, k, project(vec, k, config.tie_tol), out / "permutohedron.svg"
            ),
        )
        click.echo(f"Wrote {path}")
        return

    def _plot() -> List[Path]:
        analysis = _run_analysis(scene, config)
        paths = [plot_portrait(analysis, out / "portrait.svg")]
        q = analysis.q
        if q in (2, 3):
            # (2/eps) c projects onto (2/(q+1)) P exactly where c projects onto
            # (eps/(q+1)) P, up to the same scale
            scaled = 2.0 / analysis.eps * analysis.c
            kappa_out = 2.0 / (q + 1)
            paths.append(
                plot_permutohedron(
                    scaled,
                    kappa_out,
                    project(scaled, kappa_out, config.tie_tol),
                    out / "permutohedron.svg",
                    title=(
                        f"(2/eps) c and its projection onto {kappa_out:.4g} P^{q - 1}"
                    ),
                )
            )
        return paths

    for path in _guarded("Plot", _plot):
        click.echo(f"Wrote {path}")


def execute_verify_command(config: Config, report_path: Path) -> None:
    try:
        report = Report.from_dict(loads(report_path.read_text()))
    except OSError as e:
        raise OutputFailed(f"Cannot read {report_path}: {e}")
    except (ValueError, TypeError, MorseFrameError) as e:
        raise click.BadParameter(f"Not a report: {e}", param_hint="REPORT")

    failures = _guarded("Verification", verify_report, report, config)
    if failures:
        for failure in failures:
            click.echo(f"FAIL {failure}", err=True)
        raise AnalysisFailed(f"{len(failures)} check(s) failed for {report_path}")
    click.echo(f"OK {report_path}")


def execute_list_scenes_command() -> None:
    for info in list_scenes():
        defaults = ", ".join(f"{k}={v:g}" for k, v in sorted(info.defaults.items()))
        tag = " [synthetic]" if info.synthetic else ""
        click.echo(f"{info.name}({defaults}){tag}: {info.description}")


def execute_config_info_command(config: Config) -> None:
    click.echo("Configuration:")
    for key, value in config.to_dict().items():
        click.echo(f"  {key}: {value}")
    env_file = config.project_root / ".env"
    if env_file.exists():
        click.echo(f"  Environment file: found ({env_file})")
    else:
        click.echo("  Environment file: not found (.env)")
