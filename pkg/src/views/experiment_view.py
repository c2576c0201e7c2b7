from pathlib import Path

import click

# logger module
from logger.logger_module import ModuleLoger
from schemas.experiment_schema import ExperimentConfig
from services.experiment_services import ExperimentServices

# error translation and config loading
from utils.cli_utils import exit_on_error
from utils.config_utils import load_config, shortcut_overrides, with_iterations

logger = ModuleLoger(Path(__file__).stem)


def experiment_options(command):
    """Options shared by every command that takes an experiment config."""
    options = [
        click.argument("config_path", type=click.Path(path_type=Path)),
        click.option("--set", "overrides", multiple=True, help="Override a config field: path=value."),
        click.option("--iterations", type=click.IntRange(min=0), help="Iterations of the final phase."),
        click.option("--output-dir", type=click.Path(path_type=Path), help="Root of the run directories."),
        click.option("--seed", type=int, help="Set the init, perturbation and sampling seeds."),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def resolve_config(config_path, overrides, iterations, output_dir, seed) -> ExperimentConfig:
    config = load_config(config_path, list(overrides) + shortcut_overrides(output_dir, seed))
    if iterations is not None:
        config = with_iterations(config, iterations)
    return config


@click.command("run")
@experiment_options
@exit_on_error
def run_command(config_path, overrides, iterations, output_dir, seed):
    """Train one model (or one model per sweep value) and export its artifacts."""
    config = resolve_config(config_path, overrides, iterations, output_dir, seed)
    if config.sweep is not None:
        results = ExperimentServices.sweep(config)
        for name, metrics in results.items():
            click.echo(f"{name}: relative L1 {metrics.relative_l1:.6e}, rRMSE {metrics.rrmse:.6e}")
        return
    result = ExperimentServices.run(config)
    click.echo(result.metrics.model_dump_json(indent=2))
    click.echo(f"artifacts: {result.run_dir}")


@click.command("repeat")
@experiment_options
@click.option("--n", "n_runs", type=click.IntRange(min=1), default=3, show_default=True)
@exit_on_error
def repeat_command(config_path, overrides, iterations, output_dir, seed, n_runs):
    """Repeat a run over shifted seeds and aggregate the metrics."""
    config = resolve_config(config_path, overrides, iterations, output_dir, seed)
    report = ExperimentServices.repeat(config, n_runs)
    for name in report.mean:
        click.echo(f"{name}: {report.mean[name]:.6e} +- {report.std[name]:.6e}")


@click.command("compare")
@experiment_options
@click.argument("other_path", type=click.Path(path_type=Path))
@click.option("--n", "n_runs", type=click.IntRange(min=1), default=3, show_default=True)
@click.option("--metric", default="relative_l1", type=click.Choice(["relative_l1", "rmae", "rrmse"]))
@exit_on_error
def compare_command(config_path, overrides, iterations, output_dir, seed, other_path, n_runs, metric):
    """Paired one-sided t-test that CONFIG_PATH has lower error than OTHER_PATH."""
    config_a = resolve_config(config_path, overrides, iterations, output_dir, seed)
    config_b = resolve_config(other_path, overrides, iterations, output_dir, seed)
    report = ExperimentServices.compare(config_a, config_b, n_runs, metric=metric)
    click.echo(f"{metric}: t = {report.t_statistic}, p = {report.p_value}")


@click.command("diagnose")
@experiment_options
@click.option("--params", "params_path", type=click.Path(path_type=Path), help="params.npz of a trained run.")
@exit_on_error
def diagnose_command(config_path, overrides, iterations, output_dir, seed, params_path):
    """Correlation map, positive ratio and boost check on a saved or fresh model."""
    config = resolve_config(config_path, overrides, iterations, output_dir, seed)
    summary = ExperimentServices.diagnose(config, params_path)
    if "correlation" in summary:
        click.echo(f"mean G {summary['correlation']['mean']:.6e}, failed {summary['correlation']['failed_fraction']:.4f}")
    if "positive_ratio" in summary:
        click.echo(f"positive ratio {summary['positive_ratio']:.4f}")
    if "boost" in summary:
        boost = summary["boost"]
        click.echo(f"boost holds in {boost['holds_when_ok']}/{boost['assumption_ok']} compliant cases")
