"""'synth' and 'bench' commands"""

import io

import click

from aqce import AqceError
from cliffordt import CalibrationError, SynthesisError, UnsupportedPrecisionError
from gatedecomp import DecompositionError
from gen.gen_commands import draw_coefficients
from gen.gen_options import DecayLaw
from models import ReportError, append_record, write_csv
from pipeline import EXIT_USAGE, EXIT_VERIFY_FAILED, fail, resolve_epsilon, run_pipeline
from terms import CoefficientSet, TermsError, load_terms
from .synth_options import aqce_config, pipeline_options, synthesizer


def echo_csv(records):
  buffer = io.StringIO()
  write_csv(buffer, records)
  click.echo(buffer.getvalue(), nl=False)


def load(ctx, path, fmt):
  try:
    return load_terms(path, fmt)
  except TermsError as error:
    fail(ctx, 'bad-terms', error)


def execute(ctx, cs, options):
  """Run the selected pipeline, mapping failures to exit codes"""

  epsilon = resolve_epsilon(cs, options['epsilon'], options['delta_e'])
  try:
    config = aqce_config(cs.L, options)
  except AqceError as error:
    fail(ctx, 'usage', f'invalid AQCE flags: {error}')

  try:
    return run_pipeline(options['method'], cs, epsilon, config, synthesizer(options))
  except (CalibrationError, UnsupportedPrecisionError) as error:
    fail(ctx, 'budget-not-met', error, EXIT_VERIFY_FAILED)
  except SynthesisError as error:
    fail(ctx, 'synthesis', error)
  except AqceError as error:
    fail(ctx, 'aqce', error)
  except DecompositionError as error:
    fail(ctx, 'decomposition', error)


def save(ctx, result, options, timing_path=None):
  try:
    if options['emit_circuit']:
      with open(options['emit_circuit'], 'w', encoding='utf-8', newline='\n') as f:
        f.write(result.circuit.to_text())
    if options['report']:
      append_record(options['report'], result.report)
    if timing_path:
      append_record(timing_path, result.timing())
  except OSError as error:
    fail(ctx, 'io', error)
  except ReportError as error:
    fail(ctx, 'bad-report', error)


@click.command()
@click.option('--terms', 'terms_path', type=click.Path(exists=True, dir_okay=False), required=True,
  help='Coefficient file')
@pipeline_options
@click.pass_context
def synth(ctx, terms_path, **options):
  """Synthesize an ancilla-free PREPARE circuit and report its T-count"""

  cs = load(ctx, terms_path, options['fmt'])
  result = execute(ctx, cs, options)
  save(ctx, result, options)
  echo_csv([result.report])
  ctx.exit(result.exit_code)


@click.command()
@click.option('--terms', 'terms_path', type=click.Path(exists=True, dir_okay=False), default=None,
  help='Coefficient file; otherwise an instance is generated')
@click.option('--L', 'L', type=click.IntRange(min=1), default=None, help='Terms of the generated instance')
@click.option('--gen-seed', type=int, default=0, show_default=True, help='Seed of the generated instance')
@click.option('--decay', type=DecayLaw(), default='power:1.5', show_default=True,
  help='Decay law of the generated instance')
@click.option('--timing', 'timing_path', type=click.Path(dir_okay=False), default=None,
  help='Append the timing row to this CSV')
@pipeline_options
@click.pass_context
def bench(ctx, terms_path, L, gen_seed, decay, timing_path, **options):
  """Run synth with per-stage timing"""

  if (terms_path is None) == (L is None):
    fail(ctx, 'usage', 'give exactly one of --terms and --L', EXIT_USAGE)

  if terms_path is not None:
    cs = load(ctx, terms_path, options['fmt'])
  else:
    cs = CoefficientSet.from_values(draw_coefficients(L, gen_seed, decay))

  result = execute(ctx, cs, options)
  save(ctx, result, options, timing_path)
  echo_csv([result.timing()])
  ctx.exit(result.exit_code)
