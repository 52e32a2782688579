"""Clifford+T approximation of Rz rotations and the global eps_T search

Every Rz angle is mapped to a word over {H, S, SDG, T, TDG, X, Z} whose
phase-invariant operator-norm distance to Rz(theta) is certified by direct
2x2 evaluation. Ry is lowered as S H Rz H SDG, so only Rz is ever
synthesized.

Two interchangeable synthesizers:

  * MeetInTheMiddleSynthesizer: exhaustive search over Matsumoto-Amano
    normal forms, split into a left half T^p (HT|SHT)^a and a right half
    (HT|SHT)^b C. Right halves sit in one k-d tree per length, keyed by
    their SU(2) quaternion. Below what that reaches it falls back to a
    catalogue of long near-diagonal words, good down to 1e-4.
    Deterministic, pure NumPy/SciPy.
  * GridSynthesizer: the number-theoretic grid algorithm from pygridsynth,
    for tolerances down to chemical-accuracy budgets.
"""

import logging
import math
import os
import random
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Optional, Tuple

import mpmath
import numpy as np
from scipy.spatial import cKDTree

from gatedecomp import FIXED_GATES, ElementaryCircuit, rz, wrap_angle
from terms import induced_coefficients, max_coeff_error

try:
  import pygridsynth
except ImportError: # optional grid tier
  pygridsynth = None

logger = logging.getLogger(__name__)

SYNTHESIZER = os.environ.get('PREPARE_SYNTHESIZER', 'auto')
MITM_DEPTH = int(os.environ.get('PREPARE_MITM_DEPTH', 10))
MITM_FLOOR = float(os.environ.get('PREPARE_MITM_FLOOR', 1e-4))
CATALOGUE_LEFT_DEPTH = int(os.environ.get('PREPARE_CATALOGUE_LEFT_DEPTH', 21))
CATALOGUE_RIGHT_DEPTH = int(os.environ.get('PREPARE_CATALOGUE_RIGHT_DEPTH', 18))
GRIDSYNTH_FLOOR = float(os.environ.get('PREPARE_GRIDSYNTH_FLOOR', 1e-12))
SEARCH_ITERATIONS = int(os.environ.get('PREPARE_SEARCH_ITERATIONS', 20))

SEARCH_HI = 0.5
EXACT_TOL = 1e-12 # angles this close to k*pi/4 get exact words
CERTIFICATE_SLACK = 1e-12
GRIDSYNTH_SEED = 1
GRIDSYNTH_RETRIES = 3
FRONTIER_CACHE = 4096 # angles
CATALOGUE_CANDIDATES = 16 # certified per query before giving up

LETTERS = ('H', 'S', 'SDG', 'T', 'TDG', 'X', 'Z')

# Rz(k*pi/4) up to phase, for k mod 8
EXACT_WORDS = {
  0: (),
  1: ('T',),
  2: ('S',),
  3: ('S', 'T'),
  4: ('Z',),
  5: ('SDG', 'TDG'),
  6: ('SDG',),
  7: ('TDG',),
}

# Ry(theta) = S H Rz(theta) H SDG
RY_PREFIX = ('SDG', 'H')
RY_SUFFIX = ('H', 'S')


class SynthesisError(RuntimeError):
  """Raised when a rotation cannot be approximated"""


class UnsupportedPrecisionError(SynthesisError):
  """Raised when eps_T lies outside what the active synthesizer can reach"""


class CalibrationError(SynthesisError):
  """Raised when no eps_T in the search bracket meets the PREPARE budget"""


# -------------------------- WORDS ---------------------------

def word_matrix(letters):
  """Operator of a word whose letters are listed in time order"""

  mat = np.eye(2, dtype=complex)
  for letter in letters:
    mat = FIXED_GATES[letter] @ mat
  return mat


def rz_distance(theta, mat):
  """min over phi of ||Rz(theta) - exp(i phi) mat||_2, and the minimizing phi"""

  target = rz(theta)
  phi = float(np.angle(np.trace(mat.conj().T @ target)))
  return float(np.linalg.norm(target - np.exp(1j * phi) * mat, 2)), phi


@dataclass(frozen=True)
class CliffordTWord:
  """Letters in time order; exp(i*phase) * word approximates Rz(theta)"""

  letters: Tuple[str, ...]
  theta: float
  achieved_error: float
  phase: float = 0.0

  @property
  def t_count(self):
    return sum(1 for letter in self.letters if letter in ('T', 'TDG'))

  def matrix(self):
    return word_matrix(self.letters)

  @classmethod
  def certified(cls, letters, theta):
    """Build a word and measure its error against Rz(theta) from scratch"""

    letters = tuple(letters)
    unknown = set(letters) - set(LETTERS)
    if unknown:
      raise SynthesisError(f'letters outside the Clifford+T alphabet: {sorted(unknown)}')
    error, phase = rz_distance(theta, word_matrix(letters))
    return cls(letters, theta, error, phase)


def exact_word(theta):
  """Exact word when theta is a multiple of pi/4, else None"""

  k = round(theta / (math.pi / 4))
  if abs(theta - k * math.pi / 4) > EXACT_TOL:
    return None
  return CliffordTWord.certified(EXACT_WORDS[k % 8], theta)


# -------------------------- MEET IN THE MIDDLE ---------------------------

def _su2(mats):
  """Matrices rescaled into SU(2)"""

  return mats / np.asarray(np.sqrt(np.linalg.det(mats)))[..., None, None]


def _su2_quaternions(mats):
  """(Re a, Im a, Re b, Im b) of each matrix rescaled into SU(2)"""

  mats = _su2(mats)
  return np.stack([mats[:, 0, 0].real, mats[:, 0, 0].imag, mats[:, 1, 0].real, mats[:, 1, 0].imag], axis=1)


def _cliffords():
  """The 24 single-qubit Cliffords mod phase, as (operator-order letters, matrix)"""

  found = {}
  queue = [((), np.eye(2, dtype=complex))]
  while queue:
    letters, mat = queue.pop(0)
    q = _su2_quaternions(mat[None])[0]
    q = q if q[np.flatnonzero(np.abs(q) > 1e-9)[0]] > 0 else -q
    key = tuple(np.round(q, 9))
    if key in found:
      continue
    found[key] = (letters, mat)
    for gen in ('H', 'S'):
      queue.append(((gen,) + letters, FIXED_GATES[gen] @ mat))
  return list(found.values())


SYLLABLES = (('H', 'T'), ('S', 'H', 'T')) # Matsumoto-Amano syllables, operator order


def _syllable_letters(index, length, base_size):
  """Operator-order letters of syllable string `index` at `length`, plus the base index

  Strings are grown by prepending, so the leftmost syllable is the most
  significant digit.
  """

  letters = []
  for level in range(length, 0, -1):
    size = base_size * 2 ** (level - 1)
    choice, index = divmod(index, size)
    letters.extend(SYLLABLES[choice])
  return letters, index


class MeetInTheMiddleSynthesizer:
  """Shortest word (fewest T) within eps among normal forms of T-count <= 2*depth + 1

  Tolerances the normal-form tables cannot meet go to the near-diagonal
  catalogue, which is built on first use and shared by every instance.
  """

  name = 'mitm'

  def __init__(self, depth=MITM_DEPTH, floor=MITM_FLOOR):
    if depth < 1:
      raise SynthesisError(f'meet-in-the-middle depth must be >= 1, got {depth}')
    self.depth = depth
    self.floor = floor

    syllables = [word_matrix(reversed(s)) for s in SYLLABLES]
    cliffords = _cliffords()
    self._clifford_letters = [letters for letters, _ in cliffords]

    # level k holds every syllable string of length k, first syllable most significant
    self._left = self._levels(np.eye(2, dtype=complex)[None], syllables)
    self._right = self._levels(np.stack([mat for _, mat in cliffords]), syllables)
    self._trees = [cKDTree(_su2_quaternions(level)) for level in self._right]
    self._t_left = [FIXED_GATES['T'] @ level for level in self._left]
    self.frontier = lru_cache(maxsize=FRONTIER_CACHE)(self._frontier)
    logger.info('built meet-in-the-middle tables to depth %d (%d right words)',
      depth, sum(len(level) for level in self._right))

  def _levels(self, base, syllables):
    levels = [base]
    for _ in range(self.depth):
      levels.append(np.concatenate([syl @ levels[-1] for syl in syllables]))
    return levels

  def _frontier(self, theta):
    """Best (error, (p, a, left, b, right)) for each total T-count n = p + a + b"""

    target = rz(theta)
    best = [(math.inf, None)] * (2 * self.depth + 2)
    for p, lefts in ((0, self._left), (1, self._t_left)):
      for a, level in enumerate(lefts):
        queries = _su2_quaternions(level.conj().transpose(0, 2, 1) @ target)
        for b, tree in enumerate(self._trees):
          d_plus, i_plus = tree.query(queries)
          d_minus, i_minus = tree.query(-queries)
          dist = np.minimum(d_plus, d_minus)
          k = int(np.argmin(dist))
          n = p + a + b
          if dist[k] < best[n][0]:
            right = int(i_plus[k] if d_plus[k] <= d_minus[k] else i_minus[k])
            best[n] = (float(dist[k]), (p, a, k, b, right))
    return best

  def _letters(self, key):
    p, a, left, b, right = key
    operator = ['T'] * p
    operator += _syllable_letters(left, a, 1)[0]
    syllables, clifford = _syllable_letters(right, b, len(self._clifford_letters))
    operator += syllables
    operator += self._clifford_letters[clifford]
    return tuple(reversed(operator))

  def _from_catalogue(self, theta, eps):
    catalogue = near_diagonal_catalogue()
    t_counts, errors, index, shifts = catalogue.candidates(theta, eps)
    for k in range(min(len(index), CATALOGUE_CANDIDATES)):
      word = CliffordTWord.certified(catalogue.letters(index[k], shifts[k]), theta)
      if word.achieved_error <= eps + CERTIFICATE_SLACK:
        return word
      logger.debug('catalogue entry T=%d failed certification (%.3e > %.3e)', t_counts[k], word.achieved_error, eps)
    return None

  def synthesize(self, theta, eps):
    """Word for Rz(theta), theta in [0, pi], with the fewest T gates the tables hold"""

    if eps < self.floor:
      raise UnsupportedPrecisionError(f'eps_T={eps:.3g} is below the meet-in-the-middle floor {self.floor:.3g}')

    for n, (dist, key) in enumerate(self.frontier(theta)):
      if key is None or dist > eps:
        continue
      word = CliffordTWord.certified(self._letters(key), theta)
      if word.achieved_error <= eps + CERTIFICATE_SLACK:
        return word
      logger.debug('frontier entry n=%d failed certification (%.3e > %.3e)', n, word.achieved_error, eps)

    word = self._from_catalogue(theta, eps)
    if word is not None:
      return word
    raise UnsupportedPrecisionError(f'no tabulated word reaches eps_T={eps:.3g} for theta={theta:.6f}')


# -------------------------- NEAR-DIAGONAL CATALOGUE ---------------------------

# time-order Cliffords taking |0> to +z, -z, +x, -x, +y, -y
AXIS_CLIFFORDS = ((), ('X',), ('H',), ('H', 'Z'), ('H', 'S'), ('H', 'SDG'))

PERIOD = math.pi / 4


def _bloch(states):
  """Bloch vectors of the rows (r0, r1)"""

  r0, r1 = states[:, 0], states[:, 1]
  cross = np.conj(r0) * r1
  return np.stack([2 * cross.real, 2 * cross.imag, np.abs(r0) ** 2 - np.abs(r1) ** 2], axis=1)


@dataclass(frozen=True, eq=False)
class NearDiagonalCatalogue:
  """Cores K = L R, all in SU(2), with |<1|K|0>| <= cap

  L = HT (HT|SHT)^(a-1) and R = (HT|SHT)^b C, C one of AXIS_CLIFFORDS. Such
  a K is within delta of Rz(phi), phi = -2 arg <0|K|0>, and an exact
  Rz(j pi/4) moves it onto any angle congruent to phi mod pi/4. Entries are
  sorted by that residue.
  """

  cap: float
  a: np.ndarray
  left: np.ndarray
  b: np.ndarray
  right: np.ndarray
  alpha: np.ndarray # <0|K|0>
  delta: np.ndarray # |<1|K|0>|
  key: np.ndarray # phi mod pi/4, ascending

  def __len__(self):
    return len(self.key)

  def _window(self, theta, width):
    if 2 * width >= PERIOD:
      return np.arange(len(self.key))
    t = theta % PERIOD
    spans = []
    for shift in (-PERIOD, 0.0, PERIOD):
      lo = np.searchsorted(self.key, t - width + shift, side='left')
      hi = np.searchsorted(self.key, t + width + shift, side='right')
      spans.append(np.arange(lo, hi))
    return np.concatenate(spans)

  def candidates(self, theta, eps):
    """(t_counts, errors, indices, shifts) of entries within eps of Rz(theta), fewest T first"""

    index = self._window(theta, 4 * math.asin(min(1.0, eps / 2)))
    index = index[self.delta[index] <= eps]

    alpha = self.alpha[index]
    shifts = np.mod(np.rint((theta + 2 * np.angle(alpha)) / PERIOD).astype(np.int64), 8)
    alpha = alpha * np.exp(-1j * math.pi / 8 * shifts)
    target = np.exp(-0.5j * theta)
    gap = np.minimum(np.abs(alpha - target), np.abs(alpha + target))
    errors = np.sqrt(gap ** 2 + self.delta[index] ** 2)
    t_counts = self.a[index] + self.b[index] + (shifts & 1)

    keep = errors <= eps
    t_counts, errors, index, shifts = t_counts[keep], errors[keep], index[keep], shifts[keep]
    order = np.lexsort((errors, t_counts))
    return t_counts[order], errors[order], index[order], shifts[order]

  def letters(self, index, shift):
    """Time-order letters of entry `index` followed by Rz(shift * pi/4)"""

    a, left = int(self.a[index]), int(self.left[index])
    chosen = []
    for level in range(a, 1, -1): # grown by appending, last syllable most significant
      choice, left = divmod(left, 2 ** (level - 2))
      chosen.append(SYLLABLES[choice])

    operator = list(SYLLABLES[0])
    for syllable in reversed(chosen):
      operator.extend(syllable)
    syllables, axis = _syllable_letters(int(self.right[index]), int(self.b[index]), len(AXIS_CLIFFORDS))
    operator += syllables
    return AXIS_CLIFFORDS[axis] + tuple(reversed(operator)) + EXACT_WORDS[int(shift)]


@lru_cache(maxsize=2)
def near_diagonal_catalogue(left_depth=CATALOGUE_LEFT_DEPTH, right_depth=CATALOGUE_RIGHT_DEPTH, cap=MITM_FLOOR):
  """Pair left states L^dag|0> with right states R|0> on the Bloch sphere

  Their chord distance is 2|<1|K|0>|, so a ball of radius 2*cap finds every
  core with delta <= cap. Right lengths are streamed one k-d tree at a time.
  """

  if left_depth < 1 or right_depth < 0:
    raise SynthesisError(f'invalid catalogue depths ({left_depth}, {right_depth})')
  syllables = [_su2(word_matrix(reversed(s))) for s in SYLLABLES]

  # the leftmost syllable is fixed to HT; a leading S or T is diagonal and only shifts phi
  levels = [np.conj(syllables[0][0])[None]]
  for _ in range(left_depth - 1):
    levels.append(np.concatenate([levels[-1] @ syl.conj() for syl in syllables]))
  left = np.concatenate(levels)
  del levels
  left_tree = cKDTree(_bloch(left))
  starts = 2 ** np.arange(left_depth) - 1

  right = np.stack([_su2(word_matrix(letters))[:, 0] for letters in AXIS_CLIFFORDS])
  found = []
  for b in range(right_depth + 1):
    if b:
      right = np.concatenate([right @ syl.T for syl in syllables])
    pairs = left_tree.sparse_distance_matrix(cKDTree(_bloch(right)), 2 * cap, output_type='ndarray')
    i, j = pairs['i'].astype(np.int64), pairs['j'].astype(np.int64)
    u, v = left[i, 0], left[i, 1]
    alpha = np.conj(u) * right[j, 0] + np.conj(v) * right[j, 1]
    delta = np.abs(u * right[j, 1] - v * right[j, 0])
    keep = delta <= cap
    a = np.searchsorted(starts, i[keep], side='right')
    found.append((a, i[keep] - starts[a - 1], np.full(int(keep.sum()), b), j[keep], alpha[keep], delta[keep]))

  a, left_index, b, right_index, alpha, delta = (np.concatenate(parts) for parts in zip(*found))
  key = np.mod(-2 * np.angle(alpha), PERIOD)
  order = np.argsort(key, kind='stable')
  logger.info('built near-diagonal catalogue: %d words, delta <= %.1e (depths %d + %d)',
    len(key), cap, left_depth, right_depth)
  return NearDiagonalCatalogue(cap, a[order], left_index[order], b[order], right_index[order],
    alpha[order], delta[order], key[order])


# -------------------------- GRID SYNTHESIS ---------------------------

GRIDSYNTH_LETTERS = {'H': 'H', 'T': 'T', 'S': 'S', 'X': 'X', 'Z': 'Z', 't': 'TDG', 's': 'SDG'}


class GridSynthesizer:
  """pygridsynth wrapper with an independent certificate on its output"""

  name = 'gridsynth'

  def __init__(self, floor=GRIDSYNTH_FLOOR):
    if pygridsynth is None:
      raise SynthesisError('pygridsynth is not installed')
    self.floor = floor

  def _gates(self, theta, eps):
    """Letters as gridsynth lists them, in matrix-product order"""

    dps = max(30, int(-math.log10(eps)) * 3 + 15)
    state = random.getstate()
    random.seed(GRIDSYNTH_SEED) # norm equations are solved with random draws
    try:
      with mpmath.workdps(dps):
        gates = pygridsynth.gridsynth_gates(mpmath.mpf(theta), epsilon=mpmath.mpf(eps))
    finally:
      random.setstate(state)

    if not isinstance(gates, str):
      gates = ''.join(str(g) for g in gates)

    letters = []
    for g in gates:
      if g in ('W', 'I', ' '): # omega is a global phase
        continue
      if g not in GRIDSYNTH_LETTERS:
        raise SynthesisError(f'unexpected gridsynth gate {g!r}')
      letters.append(GRIDSYNTH_LETTERS[g])
    return letters

  def synthesize(self, theta, eps):
    if eps < self.floor:
      raise UnsupportedPrecisionError(f'eps_T={eps:.3g} is below the gridsynth floor {self.floor:.3g}')

    request = eps
    for _ in range(GRIDSYNTH_RETRIES):
      # the rightmost matrix acts first
      word = CliffordTWord.certified(reversed(self._gates(theta, request)), theta)
      if word.achieved_error <= eps + CERTIFICATE_SLACK:
        return word
      request /= 2
    raise SynthesisError(f'gridsynth output for theta={theta:.6f} failed certification at eps_T={eps:.3g}')


@lru_cache(maxsize=None)
def get_synthesizer(name=None, depth=None):
  """Synthesizer by name: 'auto', 'mitm' or 'gridsynth'"""

  name = name or SYNTHESIZER
  if name == 'auto':
    name = 'gridsynth' if pygridsynth is not None else 'mitm'
  logger.info('using the %s synthesizer', name)

  if name == 'mitm':
    return MeetInTheMiddleSynthesizer(depth or MITM_DEPTH)
  if name == 'gridsynth':
    return GridSynthesizer()
  raise SynthesisError(f'unknown synthesizer {name!r}')


# -------------------------- LOWERING ---------------------------

def synthesize_rz(theta, eps_t, synthesizer=None):
  """Certified Clifford+T word for Rz(theta) within eps_t

  Exact multiples of pi/4 short-circuit to fixed words. Negative angles use
  X Rz(|theta|) X = Rz(-theta), so theta and -theta cost the same T-count.
  """

  if not eps_t > 0:
    raise UnsupportedPrecisionError(f'eps_T must be positive, got {eps_t}')
  theta = wrap_angle(theta)

  word = exact_word(theta)
  if word is not None:
    return word

  synthesizer = synthesizer or get_synthesizer()
  base = synthesizer.synthesize(abs(theta), eps_t)
  if theta > 0:
    return base
  return CliffordTWord.certified(('X',) + base.letters + ('X',), theta)


def lower_circuit(circ, eps_t, synthesizer=None):
  """Replace every RZ/RY by its word; returns (Clifford+T circuit, total T-count)"""

  words = {}
  out = ElementaryCircuit(circ.m, phase=circ.phase)
  for op in circ.ops:
    if op.name not in ('RZ', 'RY'):
      out.append(op.name, *op.qubits)
      continue

    if op.angle not in words:
      words[op.angle] = synthesize_rz(op.angle, eps_t, synthesizer)
    word = words[op.angle]

    q = op.qubits[0]
    letters = word.letters if op.name == 'RZ' else RY_PREFIX + word.letters + RY_SUFFIX
    for letter in letters:
      out.append(letter, q)
    out.phase = wrap_angle(out.phase + word.phase)

  return out, out.t_count


def estimated_t_count(M, n_t):
  """6 rotations per two-qubit gate, n_t T gates per rotation"""

  return 6 * M * n_t


# -------------------------- CALIBRATION ---------------------------

@dataclass(frozen=True)
class SynthesisBudget:
  """Bisection bracket on eps_T and, once calibrated, its outcome"""

  epsilon: float
  epsilon_t: Optional[float] = None
  search_lo: Optional[float] = None # defaults to the synthesizer floor
  search_hi: float = SEARCH_HI
  iterations: int = SEARCH_ITERATIONS
  achieved_error: Optional[float] = None
  t_count: Optional[int] = None
  rejected_epsilon_t: Optional[float] = None # smallest failing eps_T seen, if any
  lowered: Optional[ElementaryCircuit] = field(default=None, compare=False, repr=False)

  def __post_init__(self):
    if not self.epsilon > 0:
      raise SynthesisError(f'epsilon must be positive, got {self.epsilon}')
    if self.search_lo is not None and not 0 < self.search_lo < self.search_hi:
      raise SynthesisError(f'invalid eps_T bracket [{self.search_lo}, {self.search_hi}]')
    if self.iterations < 0:
      raise SynthesisError('iterations must be non-negative')


def circuit_error(circ, cs):
  """max|c - c'| of a circuit re-simulated from |0...0>"""

  return max_coeff_error(cs, induced_coefficients(circ.simulate(), cs))


def calibrate_eps_t(circ, cs, budget, synthesizer=None):
  """Largest shared eps_T whose lowered circuit keeps max|c - c'| <= epsilon"""

  epsilon = budget.epsilon

  if circ.rotation_count == 0:
    error = circuit_error(circ, cs)
    if error > epsilon:
      raise CalibrationError(f'circuit misses epsilon={epsilon:.3g} before lowering (error {error:.3g})')
    return replace(budget, epsilon_t=budget.search_hi, achieved_error=error, t_count=circ.t_count, lowered=circ)

  synthesizer = synthesizer or get_synthesizer()
  lo = budget.search_lo if budget.search_lo is not None else synthesizer.floor
  hi = budget.search_hi
  if not 0 < lo < hi:
    raise CalibrationError(f'invalid eps_T bracket [{lo:.3g}, {hi:.3g}]')

  def attempt(eps_t):
    lowered, t_count = lower_circuit(circ, eps_t, synthesizer)
    error = circuit_error(lowered, cs)
    passed = error <= epsilon
    logger.info('eps_T=%.4e: error %.4e %s (t_count %d)', eps_t, error, 'pass' if passed else 'fail', t_count)
    return passed, lowered, error

  best, rejected = None, None

  try:
    passed, lowered, error = attempt(hi)
  except UnsupportedPrecisionError:
    passed = False
  if passed:
    best = (hi, lowered, error)
  else:
    rejected = hi
    a, b = math.log2(lo), math.log2(hi)
    for _ in range(budget.iterations):
      mid = (a + b) / 2
      eps_t = 2 ** mid
      try:
        passed, lowered, error = attempt(eps_t)
      except UnsupportedPrecisionError:
        a = mid
        continue
      if passed:
        best, a = (eps_t, lowered, error), mid
      else:
        rejected, b = eps_t, mid

    if best is None:
      try:
        passed, lowered, error = attempt(lo)
      except UnsupportedPrecisionError:
        passed = False
      if passed:
        best = (lo, lowered, error)

  if best is None:
    raise CalibrationError(
      f'no eps_T in [{lo:.3g}, {hi:.3g}] meets epsilon={epsilon:.3g}; tighten epsilon_prime or lower the bracket floor')

  eps_t, lowered, _ = best
  # final check on a fresh parse of the emitted text
  final = ElementaryCircuit.from_text(lowered.to_text(), m=circ.m)
  error = circuit_error(final, cs)
  if error > epsilon:
    raise CalibrationError(f'lowered circuit at eps_T={eps_t:.3g} fails re-simulation (error {error:.3g})')

  return replace(budget, epsilon_t=eps_t, search_lo=lo, search_hi=hi, achieved_error=error,
    t_count=final.t_count, rejected_epsilon_t=rejected, lowered=final)
