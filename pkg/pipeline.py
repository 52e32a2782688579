"""Stage orchestration shared by the synth and bench commands"""

import logging
import os
import time
from dataclasses import dataclass, replace

import click

from aqce import default_aqce_config, run_aqce
from baselines import naive_prepare, naive_t_count
from cliffordt import CalibrationError, SynthesisBudget, calibrate_eps_t, estimated_t_count
from gatedecomp import ElementaryCircuit, decompose_circuit
from models import SynthesisReport, TimingReport
from terms import CHEMICAL_ACCURACY, build_target, epsilon_budget

logger = logging.getLogger(__name__)

TIGHTEN_FACTOR = float(os.environ.get('PREPARE_TIGHTEN_FACTOR', 0.1))
TIGHTEN_RETRIES = int(os.environ.get('PREPARE_TIGHTEN_RETRIES', 3))

# -------------------------- EXIT CODES ---------------------------

EXIT_OK = 0
EXIT_USAGE = 1 # usage, IO and parse errors
EXIT_NOT_CONVERGED = 2
EXIT_VERIFY_FAILED = 3 # verification failed or budget not met


def fail(ctx, reason, detail, code=EXIT_USAGE):
  """Print the one-line machine-parsable error and leave with code"""

  detail = ' '.join(str(detail).split())
  click.echo(f'error reason={reason} detail={detail}', err=True)
  ctx.exit(code)


# -------------------------- PIPELINES ---------------------------

@dataclass
class PipelineResult:
  report: SynthesisReport
  circuit: ElementaryCircuit # Clifford+T, or rotations when AQCE did not converge
  aqce_seconds: float
  decomp_seconds: float
  synth_seconds: float

  @property
  def total_seconds(self):
    return self.aqce_seconds + self.decomp_seconds + self.synth_seconds

  @property
  def exit_code(self):
    return EXIT_OK if self.report.converged else EXIT_NOT_CONVERGED

  def timing(self):
    report = self.report
    rotations = report.rotation_count
    per_rotation = report.t_count / rotations if rotations else 0.0
    return TimingReport(
      method=report.method,
      L=report.L,
      m=report.m,
      two_qubit_gates=report.two_qubit_gates,
      t_count=report.t_count,
      estimated_t_count=round(estimated_t_count(report.two_qubit_gates, per_rotation)) if report.method == 'aqce' else report.t_count,
      aqce_seconds=self.aqce_seconds,
      decomp_seconds=self.decomp_seconds,
      synth_seconds=self.synth_seconds,
      total_seconds=self.total_seconds,
    )


def resolve_epsilon(cs, epsilon=None, delta_e=CHEMICAL_ACCURACY):
  """Explicit epsilon, or the budget implied by delta_e"""

  return epsilon if epsilon is not None else epsilon_budget(cs, delta_e)


def run_aqce_pipeline(cs, epsilon, config=None, synthesizer=None):
  """AQCE, magic-basis decomposition, then eps_T calibration

  When epsilon_prime was left to default to epsilon and no eps_T meets the
  budget, AQCE is rerun with epsilon_prime scaled by TIGHTEN_FACTOR, up to
  TIGHTEN_RETRIES times. An explicit epsilon_prime is never changed.
  """

  config = config or default_aqce_config(cs.L)
  retries = TIGHTEN_RETRIES if config.epsilon_prime is None and cs.m >= 2 else 0
  epsilon_prime = epsilon
  failure = None

  for attempt in range(retries + 1):
    try:
      result = _aqce_attempt(cs, epsilon, config, synthesizer)
    except CalibrationError as error:
      if attempt == retries:
        raise
      failure = error
      epsilon_prime *= TIGHTEN_FACTOR
      config = replace(config, epsilon_prime=epsilon_prime)
      logger.warning('%s; rerunning AQCE with epsilon_prime=%.3g', error, epsilon_prime)
      continue

    # a tightened run that stops converging leaves the budget unmet
    if failure is not None and not result.report.converged:
      raise failure
    return result


def _aqce_attempt(cs, epsilon, config, synthesizer):
  """One AQCE run; a one-qubit instance is prepared by a single Ry"""

  t0 = time.perf_counter()
  if cs.m < 2:
    circ, aqce_circ = naive_prepare(cs).circuit, None
    M, converged, aqce_error = 0, True, 0.0
  else:
    aqce_circ = run_aqce(build_target(cs.with_epsilon(epsilon)), config)
    M, converged, aqce_error = aqce_circ.M, aqce_circ.converged, aqce_circ.max_coeff_error

  t1 = time.perf_counter()
  if aqce_circ is not None:
    circ = decompose_circuit(aqce_circ)

  t2 = time.perf_counter()
  if converged:
    calibrated = calibrate_eps_t(circ, cs, SynthesisBudget(epsilon), synthesizer)
    lowered, t_count, error, eps_t = calibrated.lowered, calibrated.t_count, calibrated.achieved_error, calibrated.epsilon_t
  else:
    logger.warning('AQCE did not reach epsilon=%.3g with M=%d; emitting the unlowered circuit', epsilon, M)
    lowered, t_count, error, eps_t = circ, 0, aqce_error, 0.0
  t3 = time.perf_counter()

  report = SynthesisReport(
    method='aqce',
    L=cs.L,
    m=cs.m,
    two_qubit_gates=M,
    rotation_count=circ.rotation_count,
    t_count=t_count,
    ancilla_count=0,
    achieved_error=error,
    epsilon=epsilon,
    epsilon_t=eps_t,
    converged=converged,
    wall_seconds=t3 - t0,
  )
  return PipelineResult(report, lowered, t1 - t0, t2 - t1, t3 - t2)


def run_naive_pipeline(cs, epsilon, synthesizer=None):
  report, calibrated = naive_t_count(cs, epsilon, synthesizer)
  return PipelineResult(report, calibrated.lowered, 0.0, 0.0, report.wall_seconds)


def run_pipeline(method, cs, epsilon, config=None, synthesizer=None):
  if method == 'aqce':
    return run_aqce_pipeline(cs, epsilon, config, synthesizer)
  if method == 'naive':
    return run_naive_pipeline(cs, epsilon, synthesizer)
  raise ValueError(f'unknown method {method!r}')
