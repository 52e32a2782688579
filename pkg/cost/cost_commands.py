"""'cost' command: QROM-model resource estimate"""

import csv
import io

import click

from baselines import MOLECULES, MU_READINGS, QROM_G_T, RECIPROCAL_SQUARED, qrom_cost
from models import ReportError, append_record
from pipeline import fail
from terms import CHEMICAL_ACCURACY, COEFF_LIST, FORMATS, TermsError, load_terms

COLUMNS = ['method', 'L', 'm', 'mu', 'g_t', 't_count', 'ancilla_count', 'work_qubits',
  'uniform_cost', 'lookup_cost', 'inequality_cost', 'swap_cost']


@click.command()
@click.option('--terms', 'terms_path', type=click.Path(exists=True, dir_okay=False), default=None,
  help='Coefficient file')
@click.option('--molecule', type=click.Choice(sorted(MOLECULES)), default=None,
  help='Use a published molecule row instead of a terms file')
@click.option('--format', 'fmt', type=click.Choice(FORMATS), default=COEFF_LIST, show_default=True)
@click.option('--delta-e', type=click.FloatRange(min=0, min_open=True), default=CHEMICAL_ACCURACY, show_default=True)
@click.option('--g-t', type=click.IntRange(min=0), default=None,
  help=f'T-count of the UNIFORM_L rotation [default: {QROM_G_T}, or the molecule row\'s]')
@click.option('--mu-reading', type=click.Choice(MU_READINGS), default=RECIPROCAL_SQUARED, show_default=True)
@click.option('--report', type=click.Path(dir_okay=False), default=None, help='Append the report row to this CSV')
@click.pass_context
def cost(ctx, terms_path, molecule, fmt, delta_e, g_t, mu_reading, report):
  """Closed-form QROM PREPARE cost"""

  if (terms_path is None) == (molecule is None):
    fail(ctx, 'usage', 'give exactly one of --terms and --molecule')

  if molecule is not None:
    model = MOLECULES[molecule].model(g_t)
  else:
    try:
      cs = load_terms(terms_path, fmt)
    except TermsError as error:
      fail(ctx, 'bad-terms', error)
    model = qrom_cost(cs, delta_e, QROM_G_T if g_t is None else g_t, mu_reading)

  if report:
    try:
      append_record(report, model.report())
    except (OSError, ReportError) as error:
      fail(ctx, 'io', error)

  buffer = io.StringIO()
  writer = csv.writer(buffer, lineterminator='\n')
  writer.writerow(COLUMNS)
  writer.writerow(['qrom-model', model.L, model.m, model.mu, model.g_t, model.t_count, model.ancilla_count,
    model.work_qubits, model.uniform_cost, model.lookup_cost, model.inequality_cost, model.swap_cost])
  click.echo(buffer.getvalue(), nl=False)
