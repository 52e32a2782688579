"""'gen' command: seeded synthetic coefficient files"""

import click
import numpy as np

from pipeline import fail
from .gen_options import DecayLaw, decay_text


def draw_coefficients(L, seed, decay):
  """L positive values from the decay law, normalized to sum 1 (PCG64 seeded with seed)"""

  rng = np.random.Generator(np.random.PCG64(seed))
  law, parameter = decay
  if law == 'uniform':
    values = 1.0 - rng.random(L) # (0, 1]
  elif law == 'power':
    values = rng.pareto(parameter, L) + 1.0
  else:
    values = rng.lognormal(0.0, parameter, L)
  return values / values.sum()


def coeff_list_text(values, header):
  lines = [f'# {header}']
  lines.extend(f'{value:.17g}' for value in values)
  return '\n'.join(lines) + '\n'


@click.command()
@click.option('--L', 'L', type=click.IntRange(min=1), required=True, help='Number of terms')
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--decay', type=DecayLaw(), default='uniform', show_default=True,
  help='uniform, power:ALPHA or lognormal:SIGMA')
@click.option('--out', type=click.Path(dir_okay=False), required=True)
@click.pass_context
def gen(ctx, L, seed, decay, out):
  """Write a synthetic coeff-list instance"""

  values = draw_coefficients(L, seed, decay)
  text = coeff_list_text(values, f'gen L={L} seed={seed} decay={decay_text(decay)}')
  try:
    with open(out, 'w', encoding='utf-8', newline='\n') as f:
      f.write(text)
  except OSError as error:
    fail(ctx, 'io', error)
  click.echo(out)
