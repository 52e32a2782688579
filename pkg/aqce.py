"""Automatic quantum circuit encoding (AQCE) of a real target state

Builds C = U_M ... U_1 out of real two-qubit gates so that C|0...0>
approximates the target. Each gate update maximizes |<Psi|C|0>| over O(4)
and over all qubit pairs through the SVD of the pair's environment matrix.
"""

import logging
import os
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import List, Optional

import numpy as np

from statesim import StateVector, TwoQubitGate, apply_matrix, environment_block

logger = logging.getLogger(__name__)

FORWARD = 'forward'
BACKWARD = 'backward'

SWEEP_TOL = float(os.environ.get('PREPARE_SWEEP_TOL', 1e-12))

SMALL_INSTANCE_TERMS = 200 # above this the wider (12, 6, 100) schedule is used


class AqceError(RuntimeError):
  """Raised when AQCE cannot run on the given target or configuration"""


@dataclass(frozen=True)
class AqceConfig:
  """Hyperparameters (M0, deltaM, N) plus the stopping rules"""

  m0: int = 1
  delta_m: int = 1
  sweeps: int = 100
  epsilon_prime: Optional[float] = None # defaults to the instance epsilon
  m_max: Optional[int] = None # defaults to 4 * 2^m
  seed: Optional[int] = None # random tie-breaking between equally good pairs
  sweep_tol: float = SWEEP_TOL

  def __post_init__(self):
    if self.m0 < 1 or self.delta_m < 1 or self.sweeps < 1:
      raise AqceError(f'need M0, deltaM, N >= 1, got ({self.m0}, {self.delta_m}, {self.sweeps})')
    if self.epsilon_prime is not None and not self.epsilon_prime > 0:
      raise AqceError(f'epsilon_prime must be positive, got {self.epsilon_prime}')
    if self.m_max is not None and self.m_max < self.m0:
      raise AqceError(f'M_max ({self.m_max}) is smaller than M0 ({self.m0})')
    if self.sweep_tol < 0:
      raise AqceError('sweep_tol must be non-negative')

  def resolved(self, target):
    """Fill the defaults that depend on the target"""

    epsilon_prime = self.epsilon_prime
    if epsilon_prime is None:
      epsilon = target.source.epsilon if target.source is not None else None
      if not epsilon:
        raise AqceError('no epsilon_prime given and the target carries no positive epsilon')
      epsilon_prime = epsilon

    m_max = self.m_max if self.m_max is not None else max(4 * 2 ** target.m, self.m0)
    return replace(self, epsilon_prime=epsilon_prime, m_max=m_max)


def default_aqce_config(L, **overrides):
  """(1, 1, 100) for small term counts, (12, 6, 100) otherwise"""

  if L <= SMALL_INSTANCE_TERMS:
    base = AqceConfig(m0=1, delta_m=1, sweeps=100)
  else:
    base = AqceConfig(m0=12, delta_m=6, sweeps=100)
  overrides = {k: v for k, v in overrides.items() if v is not None}
  # a cap below the default M0 lowers M0 with it; an explicit M0 is left alone
  if 'm0' not in overrides and overrides.get('m_max', base.m0) < base.m0:
    overrides['m0'] = overrides['m_max']
  return replace(base, **overrides)


@dataclass(frozen=True)
class SweepRecord:
  direction: str
  M: int
  fidelity: float
  max_coeff_error: float


@dataclass
class AqceCircuit:
  """Gate sequence U_1 ... U_M (applied in list order) and run diagnostics"""

  gates: List[TwoQubitGate]
  m: int
  history: List[SweepRecord] = field(default_factory=list)
  fidelity_trace: List[float] = field(default_factory=list) # one entry per optimize_gate call
  evaluations: List[tuple] = field(default_factory=list) # (M, d) after each round
  converged: bool = False
  max_coeff_error: float = float('inf')

  @property
  def M(self):
    return len(self.gates)

  def state(self):
    """C|0...0> simulated from scratch"""

    return StateVector(_forward(self.gates, _zero(self.m), self.m), self.m)

  def fidelity(self, target):
    return abs(float(np.dot(target.amplitudes, self.state().amps)))


# -------------------------- SNAPSHOTS ---------------------------

def _zero(m):
  amps = np.zeros(2 ** m)
  amps[0] = 1.0
  return amps


def _forward(gates, amps, m):
  for gate in gates:
    amps = apply_matrix(amps, m, gate.mat, gate.qubits)
  return amps


def _backward(gates, amps, m):
  """Apply the adjoints of gates in reverse order"""

  for gate in reversed(gates):
    amps = apply_matrix(amps, m, gate.mat.conj().T, gate.qubits)
  return amps


def qubit_pairs(m):
  """All pairs i < j in lexicographic order"""

  return list(combinations(range(m), 2))


# -------------------------- OPTIMIZE ---------------------------

def optimize_gate(circ, s, target, phi=None, psi=None, rng=None):
  """Replace gate s by the best O(4) gate over all qubit pairs and return it

  phi and psi are the snapshots U_(s-1)...U_1|0> and U_(s+1)^T...U_M^T|Psi>;
  they are recomputed when not supplied.
  """

  if not 0 <= s < circ.M:
    raise AqceError(f'gate index {s} out of range for {circ.M} gates')
  m = circ.m

  if phi is None:
    phi = _forward(circ.gates[:s], _zero(m), m)
  if psi is None:
    psi = _backward(circ.gates[s + 1:], target.amplitudes, m)

  pairs = qubit_pairs(m)
  rhos = np.stack([environment_block(phi, psi, m, i, j) for i, j in pairs])
  x, d, y = np.linalg.svd(rhos) # batched, rho = X diag(D) Y
  scores = d.sum(axis=1) # nuclear norm = best fidelity on that pair

  best = int(np.argmax(scores)) # first maximum, i.e. the lexicographically smallest pair
  if rng is not None:
    ties = np.flatnonzero(scores == scores[best])
    best = int(rng.choice(ties))

  mat = y[best].conj().T @ x[best].conj().T
  gate = TwoQubitGate(np.real_if_close(mat), *pairs[best])
  circ.gates[s] = gate
  circ.fidelity_trace.append(float(scores[best]))
  return gate


def sweep(circ, target, direction=FORWARD, rng=None):
  """Optimize every gate once, s = 1..M (forward) or s = M..1 (backward)"""

  if circ.M < 1:
    raise AqceError('cannot sweep an empty circuit')
  m, M = circ.m, circ.M

  if direction == FORWARD:
    phi = _zero(m)
    psi = _backward(circ.gates[1:], target.amplitudes, m)
    for s in range(M):
      gate = optimize_gate(circ, s, target, phi, psi, rng)
      phi = apply_matrix(phi, m, gate.mat, gate.qubits)
      if s + 1 < M:
        following = circ.gates[s + 1] # not yet updated in this pass
        psi = apply_matrix(psi, m, following.mat, following.qubits)
  elif direction == BACKWARD:
    phi = _forward(circ.gates[:-1], _zero(m), m)
    psi = np.asarray(target.amplitudes, dtype=float)
    for s in reversed(range(M)):
      gate = optimize_gate(circ, s, target, phi, psi, rng)
      psi = apply_matrix(psi, m, gate.mat.conj().T, gate.qubits)
      if s > 0:
        preceding = circ.gates[s - 1]
        phi = apply_matrix(phi, m, preceding.mat.conj().T, preceding.qubits)
  else:
    raise AqceError(f'unknown sweep direction {direction!r}')

  state = circ.state().amps
  record = SweepRecord(direction, M, abs(float(np.dot(target.amplitudes, state))), target.distance(state))
  circ.history.append(record)
  return circ


# -------------------------- DRIVER ---------------------------

def _sweep_round(circ, target, cfg, rng):
  """Up to N forward+backward sweeps, stopping once a sweep stops paying off"""

  previous = None
  for _ in range(cfg.sweeps):
    sweep(circ, target, FORWARD, rng)
    sweep(circ, target, BACKWARD, rng)
    fidelity = circ.history[-1].fidelity
    if previous is not None and fidelity - previous < cfg.sweep_tol:
      break
    previous = fidelity


def run_aqce(target, cfg=None):
  """Grow and optimize the circuit until max|c - c'| <= epsilon_prime or M_max

  Returns the converged circuit, or the best circuit seen flagged
  converged=False when the gate budget runs out.
  """

  if target.m < 2:
    raise AqceError('AQCE needs a register of at least two qubits')
  cfg = (cfg or AqceConfig()).resolved(target)
  rng = np.random.default_rng(cfg.seed) if cfg.seed is not None else None

  circ = AqceCircuit([TwoQubitGate.identity() for _ in range(cfg.m0)], target.m)
  best_gates, best_d = list(circ.gates), float('inf')

  while True:
    _sweep_round(circ, target, cfg, rng)

    d = target.distance(circ.state().amps)
    circ.evaluations.append((circ.M, d))
    logger.info('AQCE M=%d fidelity=%.12f d=%.3e (target %.3e)',
      circ.M, circ.fidelity_trace[-1], d, cfg.epsilon_prime)

    if d < best_d:
      best_gates, best_d = list(circ.gates), d

    if d <= cfg.epsilon_prime:
      circ.converged = True
      circ.max_coeff_error = d
      return circ

    if circ.M + cfg.delta_m > cfg.m_max:
      logger.warning('AQCE stopped at M=%d: adding %d gates would exceed M_max=%d (d=%.3e)',
        circ.M, cfg.delta_m, cfg.m_max, best_d)
      break

    start = circ.M
    circ.gates.extend(TwoQubitGate.identity() for _ in range(cfg.delta_m))
    for s in range(start, circ.M):
      optimize_gate(circ, s, target, rng=rng)

  circ.gates = best_gates
  circ.max_coeff_error = best_d
  circ.converged = False
  return circ
