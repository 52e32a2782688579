"""Decay-law option for synthetic instances"""

import math

import click

DECAY_LAWS = ('uniform', 'power', 'lognormal')


class DecayLaw(click.ParamType):
  """'uniform', 'power:ALPHA' or 'lognormal:SIGMA' as a (law, parameter) pair"""

  name = 'decay'

  def convert(self, value, param, ctx):
    if isinstance(value, tuple):
      return value

    law, _, parameter = value.partition(':')
    if law not in DECAY_LAWS:
      self.fail(f'{value!r} is not one of uniform, power:ALPHA, lognormal:SIGMA', param, ctx)

    if law == 'uniform':
      if parameter:
        self.fail('uniform takes no parameter', param, ctx)
      return (law, None)

    try:
      number = float(parameter)
    except ValueError:
      self.fail(f'{law} needs a numeric parameter, got {parameter!r}', param, ctx)
    if not math.isfinite(number) or number <= 0:
      self.fail(f'{law} parameter must be positive, got {parameter!r}', param, ctx)
    return (law, number)


def decay_text(decay):
  law, parameter = decay
  return law if parameter is None else f'{law}:{parameter:g}'
