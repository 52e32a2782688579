"""Options for the 'synth' and 'bench' commands"""

import click

from aqce import default_aqce_config
from cliffordt import get_synthesizer
from terms import CHEMICAL_ACCURACY, COEFF_LIST, FORMATS

POSITIVE = click.FloatRange(min=0, min_open=True)
AT_LEAST_ONE = click.IntRange(min=1)

PIPELINE_OPTIONS = [
  click.option('--format', 'fmt', type=click.Choice(FORMATS), default=COEFF_LIST, show_default=True,
    help='Terms file format'),
  click.option('--method', type=click.Choice(['aqce', 'naive']), default='aqce', show_default=True),
  click.option('--delta-e', type=POSITIVE, default=CHEMICAL_ACCURACY, show_default=True,
    help='Energy accuracy in Hartree; sets epsilon when --epsilon is not given'),
  click.option('--epsilon', type=POSITIVE, default=None, help='max|c - c\'| budget, overrides --delta-e'),
  click.option('--epsilon-prime', type=POSITIVE, default=None, help='AQCE stopping threshold [default: epsilon]'),
  click.option('--m0', type=AT_LEAST_ONE, default=None, help='Initial gate count [default: 1, or 12 when L > 200]'),
  click.option('--delta-m', type=AT_LEAST_ONE, default=None, help='Gates added per round [default: 1, or 6 when L > 200]'),
  click.option('--sweeps', type=AT_LEAST_ONE, default=None, help='Max sweeps per round [default: 100]'),
  click.option('--m-max', type=AT_LEAST_ONE, default=None, help='Gate budget [default: 4 * 2^m]'),
  click.option('--seed', type=int, default=None, help='Random tie-breaking between qubit pairs'),
  click.option('--synthesizer', type=click.Choice(['auto', 'mitm', 'gridsynth']), default=None,
    help='Rz synthesizer [default: env PREPARE_SYNTHESIZER or auto]'),
  click.option('--mitm-depth', type=AT_LEAST_ONE, default=None, help='Half-word depth of the meet-in-the-middle tables'),
  click.option('--emit-circuit', type=click.Path(dir_okay=False), default=None, help='Write the circuit here'),
  click.option('--report', type=click.Path(dir_okay=False), default=None, help='Append the report row to this CSV'),
]


def pipeline_options(command):
  """Attach every pipeline option to a click command"""

  for option in reversed(PIPELINE_OPTIONS):
    command = option(command)
  return command


def aqce_config(L, options):
  return default_aqce_config(
    L,
    m0=options['m0'],
    delta_m=options['delta_m'],
    sweeps=options['sweeps'],
    m_max=options['m_max'],
    epsilon_prime=options['epsilon_prime'],
    seed=options['seed'],
  )


def synthesizer(options):
  """Synthesizer picked by the flags, or None to defer to the environment default"""

  if options['synthesizer'] is None and options['mitm_depth'] is None:
    return None
  return get_synthesizer(options['synthesizer'], options['mitm_depth'])
