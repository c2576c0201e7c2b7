import click

from views.experiment_view import compare_command, diagnose_command, repeat_command, run_command
from views.reference_view import fem_demo_command, spectral_ref_command


@click.group()
def cli():
    """Physics-informed network experiments and propagation diagnostics."""


cli.add_command(run_command)
cli.add_command(repeat_command)
cli.add_command(compare_command)
cli.add_command(diagnose_command)
cli.add_command(fem_demo_command)
cli.add_command(spectral_ref_command)


if __name__ == "__main__":
    cli()
