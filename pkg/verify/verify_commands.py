"""'verify' command: independent re-check of an emitted circuit"""

import click

from cliffordt import circuit_error
from gatedecomp import CircuitFormatError, ElementaryCircuit
from pipeline import EXIT_OK, EXIT_VERIFY_FAILED, fail, resolve_epsilon
from terms import CHEMICAL_ACCURACY, COEFF_LIST, FORMATS, TermsError, load_terms


@click.command()
@click.option('--circuit', 'circuit_path', type=click.Path(exists=True, dir_okay=False), required=True)
@click.option('--terms', 'terms_path', type=click.Path(exists=True, dir_okay=False), required=True)
@click.option('--format', 'fmt', type=click.Choice(FORMATS), default=COEFF_LIST, show_default=True)
@click.option('--epsilon', type=click.FloatRange(min=0, min_open=True), default=None,
  help='Budget to check against [default: from --delta-e]')
@click.option('--delta-e', type=click.FloatRange(min=0, min_open=True), default=CHEMICAL_ACCURACY, show_default=True)
@click.pass_context
def verify(ctx, circuit_path, terms_path, fmt, epsilon, delta_e):
  """Re-simulate a circuit file and check max|c - c'| <= epsilon"""

  try:
    cs = load_terms(terms_path, fmt)
  except TermsError as error:
    fail(ctx, 'bad-terms', error)

  try:
    with open(circuit_path, encoding='utf-8') as f:
      circ = ElementaryCircuit.from_text(f.read(), m=cs.m)
  except (OSError, UnicodeDecodeError) as error:
    fail(ctx, 'io', error)
  except CircuitFormatError as error:
    fail(ctx, 'bad-circuit', error)

  epsilon = resolve_epsilon(cs, epsilon, delta_e)
  error = circuit_error(circ, cs)
  passed = error <= epsilon
  click.echo(f'achieved_error={error:.17g} epsilon={epsilon:.17g} t_count={circ.t_count} '
    f'status={"pass" if passed else "fail"}')

  if not passed:
    fail(ctx, 'budget-exceeded', f'achieved error {error:.6g} > epsilon {epsilon:.6g}', EXIT_VERIFY_FAILED)
  ctx.exit(EXIT_OK)
