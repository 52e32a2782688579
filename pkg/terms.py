"""Coefficient data: loading, the PREPARE target state and the error budget"""

import logging
import math
import re
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

logger = logging.getLogger(__name__)

COEFF_LIST = 'coeff-list'
PAULI_TERMS = 'pauli-terms'
FORMATS = (COEFF_LIST, PAULI_TERMS)

CHEMICAL_ACCURACY = 0.0016 # Hartree

PAULI_WORD = re.compile(r'^[IXYZ]+$')


class TermsError(ValueError):
  """Raised when coefficient data cannot be turned into a CoefficientSet"""


@dataclass(frozen=True)
class CoefficientSet:
  """Positive LCU coefficients sorted in descending order"""

  coeffs: np.ndarray
  epsilon: Optional[float] = None

  def __post_init__(self):
    coeffs = np.array(self.coeffs, dtype=float)
    if coeffs.ndim != 1 or coeffs.size == 0:
      raise TermsError('a coefficient set needs at least one coefficient')
    if not np.all(np.isfinite(coeffs)) or np.any(coeffs <= 0):
      raise TermsError('coefficients must be finite and strictly positive')
    if np.any(np.diff(coeffs) > 0):
      raise TermsError('coefficients must be sorted in descending order')
    if self.epsilon is not None and not self.epsilon >= 0:
      raise TermsError(f'epsilon must be non-negative, got {self.epsilon}')
    coeffs.flags.writeable = False
    object.__setattr__(self, 'coeffs', coeffs)

  @classmethod
  def from_values(cls, values, epsilon=None):
    """Take |d_l|, drop zeros and sort descending (stable, so ties keep input order)"""

    magnitudes = np.abs(np.asarray(values, dtype=float))
    if magnitudes.size == 0:
      raise TermsError('no coefficients given')
    if not np.all(np.isfinite(magnitudes)):
      raise TermsError('coefficients must be finite')
    magnitudes = magnitudes[magnitudes > 0]
    if magnitudes.size == 0:
      raise TermsError('all coefficients are zero')
    order = np.argsort(-magnitudes, kind='stable')
    return cls(magnitudes[order], epsilon)

  @property
  def L(self):
    return int(self.coeffs.size)

  @property
  def m(self):
    """Register size ceil(log2 L), clamped to one qubit"""

    return max(1, (self.L - 1).bit_length())

  @property
  def lam(self):
    return float(math.fsum(self.coeffs))

  def padded(self):
    """Coefficients over all 2^m basis slots, zero beyond L"""

    out = np.zeros(2 ** self.m)
    out[:self.L] = self.coeffs
    return out

  def with_epsilon(self, epsilon):
    return replace(self, epsilon=float(epsilon))


@dataclass(frozen=True)
class TargetState:
  """Amplitude vector the PREPARE circuit has to produce from |0...0>"""

  amplitudes: np.ndarray
  source: Optional[CoefficientSet] = field(default=None, compare=False)

  def __post_init__(self):
    amplitudes = np.array(self.amplitudes, dtype=float)
    size = amplitudes.size
    if size < 2 or size & (size - 1):
      raise TermsError(f'target length {size} is not a power of two >= 2')
    if abs(float(np.dot(amplitudes, amplitudes)) - 1.0) > 1e-10:
      raise TermsError('target amplitudes are not normalized')
    amplitudes.flags.writeable = False
    object.__setattr__(self, 'amplitudes', amplitudes)

  @property
  def m(self):
    return self.amplitudes.size.bit_length() - 1

  def distance(self, amps):
    """max_l |c_l - c'_l| of a simulated state against this target"""

    if self.source is not None:
      return max_coeff_error(self.source, induced_coefficients(amps, self.source))
    probabilities = np.abs(np.asarray(amps)) ** 2
    return float(np.max(np.abs(self.amplitudes ** 2 - probabilities)))


# -------------------------- LOADING ---------------------------

def _parse_line(line, fmt, lineno):
  """Return the signed coefficient on a data line"""

  fields = line.split()
  if fmt == COEFF_LIST:
    if len(fields) != 1:
      raise TermsError(f'line {lineno}: expected one number, got {line!r}')
  elif len(fields) != 2 or not PAULI_WORD.match(fields[1]):
    raise TermsError(f'line {lineno}: expected "<float> <Pauli word>", got {line!r}')

  try:
    value = float(fields[0])
  except ValueError:
    raise TermsError(f'line {lineno}: {fields[0]!r} is not a number') from None

  if not math.isfinite(value):
    raise TermsError(f'line {lineno}: non-finite coefficient {fields[0]!r}')
  return value


def parse_terms(text, fmt=COEFF_LIST):
  """Parse coefficient text in either input format into a CoefficientSet"""

  if fmt not in FORMATS:
    raise TermsError(f'unknown terms format {fmt!r}')

  values = []
  for lineno, raw in enumerate(text.splitlines(), start=1):
    line = raw.split('#', 1)[0].strip() # '#' starts a comment
    if line:
      values.append(_parse_line(line, fmt, lineno))

  if not values:
    raise TermsError('no coefficients found')
  return CoefficientSet.from_values(values)


def load_terms(path, fmt=COEFF_LIST):
  """Read a coefficient file (UTF-8, LF or CRLF)"""

  try:
    with open(path, encoding='utf-8') as f:
      text = f.read()
  except (OSError, UnicodeDecodeError) as error:
    raise TermsError(f'cannot read {path}: {error}') from error

  cs = parse_terms(text, fmt)
  logger.info('loaded %d terms from %s (m=%d, lambda=%.6g)', cs.L, path, cs.m, cs.lam)
  return cs


# -------------------------- TARGET AND METRIC ---------------------------

def build_target(cs):
  """Target state with amplitude sqrt(c_l / lambda) on |l>"""

  amplitudes = np.sqrt(cs.padded() / cs.lam)
  amplitudes /= np.linalg.norm(amplitudes) # absorb the rounding of the division
  return TargetState(amplitudes, cs)


def epsilon_budget(cs, delta_e=CHEMICAL_ACCURACY):
  """Largest max-coefficient error that keeps the energy within delta_e"""

  if not delta_e > 0:
    raise TermsError(f'delta_e must be positive, got {delta_e}')
  lam = cs.lam
  return math.sqrt(2) * delta_e / (4 * cs.L * (1 + delta_e ** 2 / (8 * lam ** 2)))


def induced_coefficients(state, cs):
  """c'_l = |amplitude_l|^2 * lambda over all 2^m slots"""

  amps = np.asarray(getattr(state, 'amps', state))
  if amps.size != 2 ** cs.m:
    raise TermsError(f'state has {amps.size} amplitudes, expected {2 ** cs.m}')

  probabilities = np.abs(amps) ** 2
  if abs(float(probabilities.sum()) - 1.0) > 1e-10:
    raise TermsError('state is not normalized')
  return probabilities * cs.lam


def max_coeff_error(cs, cprime):
  """max_l |c_l - c'_l|, with c_l = 0 beyond the L loaded terms"""

  cprime = np.asarray(cprime, dtype=float)
  if cprime.size < cs.L:
    raise TermsError(f'need at least {cs.L} induced coefficients, got {cprime.size}')

  c = np.zeros(max(cprime.size, cs.L))
  c[:cs.L] = cs.coeffs
  padded = np.zeros_like(c)
  padded[:cprime.size] = cprime
  return float(np.max(np.abs(c - padded)))
