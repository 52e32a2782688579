"""Comparison points for the AQCE pipeline

* naive: exact ancilla-free preparation from uniformly controlled Ry
  rotations (binary-partition angle tree, Gray-code multiplexors), lowered
  to Clifford+T with the same eps_T search as the AQCE circuit.
* qrom: closed-form T-count and qubit counts of the QROM-based PREPARE.
  Nothing is built.
"""

import logging
import math
import os
import time
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from cliffordt import SynthesisBudget, calibrate_eps_t
from gatedecomp import ElementaryCircuit
from models import SynthesisReport
from terms import CHEMICAL_ACCURACY, build_target

logger = logging.getLogger(__name__)

QROM_G_T = int(os.environ.get('PREPARE_QROM_G_T', 239))

RECIPROCAL_SQUARED = 'reciprocal-squared'
RECIPROCAL_LINEAR = 'reciprocal-linear'
MU_READINGS = (RECIPROCAL_SQUARED, RECIPROCAL_LINEAR)


# -------------------------- NAIVE ---------------------------

def _gray(i):
  return i ^ (i >> 1)


@dataclass
class MultiplexedPrep:
  """Ry angle tree (level k has 2^k entries) and the circuit realizing it"""

  angles: List[np.ndarray]
  circuit: ElementaryCircuit


def partition_angles(amplitudes, m):
  """alpha at each tree node: 2 atan2(sqrt(right mass), sqrt(left mass))"""

  probabilities = np.asarray(amplitudes, dtype=float) ** 2
  levels = []
  for k in range(m):
    masses = probabilities.reshape(2 ** k, 2, 2 ** (m - k - 1)).sum(axis=2)
    levels.append(2 * np.arctan2(np.sqrt(masses[:, 1]), np.sqrt(masses[:, 0])))
  return levels


def _multiplexor_angles(alphas):
  """Gray-code angles theta_i = 2^-k sum_j (-1)^(j . gray(i)) alpha_j"""

  size = len(alphas)
  index = np.arange(size)
  overlap = _gray(index)[:, None] & index[None, :]
  parity = np.zeros_like(overlap)
  while overlap.any():
    parity ^= overlap & 1
    overlap >>= 1
  return (1 - 2 * parity) @ alphas / size


def naive_prepare(cs):
  """Exact uniformly-controlled-Ry preparation of the coefficient state

  Level k rotates qubit m-1-k controlled on the k more significant qubits.
  A level whose angles are all zero is dropped.
  """

  target = build_target(cs)
  m = cs.m
  angles = partition_angles(target.amplitudes, m)
  circ = ElementaryCircuit(m)

  for k, alphas in enumerate(angles):
    if not np.any(alphas):
      continue
    qubit = m - 1 - k
    thetas = _multiplexor_angles(alphas)
    size = 2 ** k
    for i, theta in enumerate(thetas):
      circ.append('RY', qubit, angle=theta)
      if k:
        flipped = (_gray(i) ^ _gray((i + 1) % size)).bit_length() - 1
        circ.append('CNOT', m - k + flipped, qubit)

  logger.info('naive preparation: %d rotations, %d two-qubit gates on %d qubits', circ.rotation_count, circ.two_qubit_count, m)
  return MultiplexedPrep(angles, circ)


def naive_t_count(cs, epsilon, synthesizer=None, budget=None):
  """Lower the naive circuit with the calibrated eps_T and report its cost

  Returns the report and the calibrated budget, whose `lowered` field holds
  the Clifford+T circuit.
  """

  start = time.perf_counter()

  prep = naive_prepare(cs)
  budget = budget or SynthesisBudget(epsilon)
  calibrated = calibrate_eps_t(prep.circuit, cs, budget, synthesizer)

  return SynthesisReport(
    method='naive',
    L=cs.L,
    m=cs.m,
    two_qubit_gates=prep.circuit.two_qubit_count,
    rotation_count=prep.circuit.rotation_count,
    t_count=calibrated.t_count,
    ancilla_count=0,
    achieved_error=calibrated.achieved_error,
    epsilon=epsilon,
    epsilon_t=calibrated.epsilon_t,
    converged=True,
    wall_seconds=time.perf_counter() - start,
  ), calibrated


# -------------------------- QROM MODEL ---------------------------

def qrom_mu(lam, delta_e, reading=RECIPROCAL_SQUARED):
  """Bits of precision of the QROM data register, at least 1"""

  if not lam > 0 or not delta_e > 0:
    raise ValueError('lambda and delta_e must be positive')
  if reading not in MU_READINGS:
    raise ValueError(f'unknown mu reading {reading!r}')

  scale = delta_e ** 2 if reading == RECIPROCAL_SQUARED else delta_e
  argument = 4 * lam * (1 + delta_e ** 2 / (8 * lam ** 2)) / (math.sqrt(2) * scale)
  return max(1, math.ceil(math.log2(argument)))


@dataclass(frozen=True)
class QromCostModel:
  L: int
  m: int
  mu: int
  g_t: int
  lam: Optional[float] = None
  delta_e: Optional[float] = None

  def __post_init__(self):
    if self.L < 1 or self.m < 1 or self.mu < 1:
      raise ValueError(f'L, m and mu must be positive, got ({self.L}, {self.m}, {self.mu})')
    if self.g_t < 0:
      raise ValueError(f'g_t must be non-negative, got {self.g_t}')

  # Sub-costs; their sum is t_count.

  @property
  def uniform_cost(self):
    return 4 * self.m - 4 + 2 * self.g_t

  @property
  def lookup_cost(self):
    return 4 * self.L - 4

  @property
  def inequality_cost(self):
    return 4 * self.mu - 4

  @property
  def swap_cost(self):
    return 7 * self.m

  @property
  def t_count(self):
    return 4 * self.L + 4 * self.mu + 11 * self.m - 12 + 2 * self.g_t

  @property
  def ancilla_count(self):
    return 2 * self.mu + self.m + 1

  @property
  def work_qubits(self):
    return max(self.m + 1, self.mu)

  def report(self, epsilon=0.0, wall_seconds=0.0):
    return SynthesisReport(
      method='qrom-model',
      L=self.L,
      m=self.m,
      two_qubit_gates=0,
      rotation_count=0,
      t_count=self.t_count,
      ancilla_count=self.ancilla_count,
      achieved_error=0.0,
      epsilon=epsilon,
      epsilon_t=0.0,
      converged=True,
      wall_seconds=wall_seconds,
    )


def qrom_cost(cs, delta_e=CHEMICAL_ACCURACY, g_t=QROM_G_T, reading=RECIPROCAL_SQUARED):
  mu = qrom_mu(cs.lam, delta_e, reading)
  model = QromCostModel(L=cs.L, m=cs.m, mu=mu, g_t=g_t, lam=cs.lam, delta_e=delta_e)
  logger.info('QROM model L=%d m=%d mu=%d: %d T gates, %d ancillas', model.L, model.m, mu, model.t_count, model.ancilla_count)
  return model


# -------------------------- REFERENCE ROWS ---------------------------

@dataclass(frozen=True)
class MoleculeRow:
  """Published QROM costs for one molecule"""

  name: str
  L: int
  qrom_t_count: int
  qrom_ancilla: int

  @property
  def m(self):
    return max(1, (self.L - 1).bit_length())

  @property
  def mu(self):
    return (self.qrom_ancilla - self.m - 1) // 2

  @property
  def g_t(self):
    """g_T back-solved from the published T-count"""

    return (self.qrom_t_count - 4 * self.L - 4 * self.mu - 11 * self.m + 12) // 2

  def model(self, g_t=None):
    return QromCostModel(L=self.L, m=self.m, mu=self.mu, g_t=self.g_t if g_t is None else g_t)


MOLECULES = {row.name: row for row in (
  MoleculeRow('H2', 14, 650, 47),
  MoleculeRow('H4', 184, 1942, 55),
  MoleculeRow('H6', 918, 5282, 59),
  MoleculeRow('H8', 2912, 13594, 63),
  MoleculeRow('H10', 7150, 30831, 66),
  MoleculeRow('LiH', 630, 3992, 57),
  MoleculeRow('H2O', 1085, 6125, 64),
  MoleculeRow('NH3', 3056, 14254, 65),
  MoleculeRow('CH4', 2211, 10730, 63),
  MoleculeRow('CO', 4426, 19905, 68),
  MoleculeRow('H2S', 6245, 27341, 70),
  MoleculeRow('C2H2', 5184, 22895, 66),
)}
