from pathlib import Path

import click

# configuration objects
from core.config import REFERENCE_SETTINGS
from problems.spectral import SCHEMES
from services.fem_services import FemServices
from services.reference_services import ReferenceServices

# error translation
from utils.cli_utils import exit_on_error


@click.command("fem-demo")
@click.option("--n", "n_nodes", type=click.IntRange(min=1), default=31, show_default=True)
@click.option("--tol", type=click.FloatRange(min=0, min_open=True), default=1e-12, show_default=True)
@click.option("--output-dir", type=click.Path(path_type=Path), default=Path("runs/fem"), show_default=True)
@exit_on_error
def fem_demo_command(n_nodes, tol, output_dir):
    """Jacobi solve of -u'' = 1 and the one-node-per-sweep propagation check."""
    report = FemServices.demo(n_nodes, tol, output_dir)
    click.echo(report.model_dump_json(indent=2))


@click.command("spectral-ref")
@click.option("--out", type=click.Path(path_type=Path), default=REFERENCE_SETTINGS.allen_cahn_path, show_default=True)
@click.option("--resolution", type=click.IntRange(min=4), default=REFERENCE_SETTINGS.resolution, show_default=True)
@click.option("--timestep", type=float, default=REFERENCE_SETTINGS.timestep, show_default=True)
@click.option("--frames", "n_frames", type=click.IntRange(min=2), default=REFERENCE_SETTINGS.n_frames, show_default=True)
@click.option("--scheme", type=click.Choice(SCHEMES), default=SCHEMES[0], show_default=True)
@exit_on_error
def spectral_ref_command(out, resolution, timestep, n_frames, scheme):
    """Generate, validate and store the Allen-Cahn reference grid."""
    grid = ReferenceServices.generate(out, resolution, timestep, n_frames, scheme)
    click.echo(f"reference {grid.u.shape[0]}x{grid.u.shape[1]} written to {out}")
