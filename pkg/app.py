"""Ancilla-free PREPARE synthesis CLI"""

import logging
import os
import sys

import click

from pipeline import EXIT_USAGE
from synth.synth_commands import synth, bench
from cost.cost_commands import cost
from verify.verify_commands import verify
from gen.gen_commands import gen

LOG_LEVEL = os.environ.get('PREPARE_LOG_LEVEL', 'WARNING')
LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')


class PrepareGroup(click.Group):
  """Click group whose usage errors exit with 1, keeping 2 for 'not converged'"""

  @staticmethod
  def _usage(error):
    click.echo(f'error reason=usage detail={" ".join(error.format_message().split())}', err=True)
    error.exit_code = EXIT_USAGE

  def make_context(self, *args, **kwargs):
    try:
      return super().make_context(*args, **kwargs)
    except click.UsageError as error:
      self._usage(error)
      raise

  def invoke(self, ctx):
    try:
      return super().invoke(ctx)
    except click.UsageError as error:
      self._usage(error)
      raise


@click.group(cls=PrepareGroup)
@click.option('--log-level', type=click.Choice(LOG_LEVELS, case_sensitive=False), default=LOG_LEVEL,
  show_default=True, help='Log level (env PREPARE_LOG_LEVEL); logs go to stderr')
def cli(log_level):
  """Synthesize ancilla-free PREPARE circuits and compare their T-counts"""

  logging.basicConfig(
    level=log_level.upper(),
    stream=sys.stderr, # stdout carries report rows only
    format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    force=True,
  )


cli.add_command(synth)
cli.add_command(bench)
cli.add_command(cost)
cli.add_command(verify)
cli.add_command(gen)


if __name__ == '__main__':
  cli()
