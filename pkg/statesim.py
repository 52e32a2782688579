"""Dense statevector simulator for PREPARE circuits

Qubit q is bit q of the basis-state integer, so qubit 0 is the least
significant bit and |l> is amplitude index l. A two-qubit matrix acting on
qubits (i, j) is indexed by 2*bit_i + bit_j.
"""

import os
from dataclasses import dataclass

import numpy as np

MAX_QUBITS = int(os.environ.get('PREPARE_MAX_QUBITS', 26)) # memory guard

ORTHOGONALITY_TOL = 1e-10


class SimulationError(ValueError):
  """Raised on malformed states, gates or qubit indices"""


def _check_qubits(m, qubits):
  if len(set(qubits)) != len(qubits):
    raise SimulationError(f'qubit indices must be distinct, got {qubits}')
  for q in qubits:
    if not 0 <= q < m:
      raise SimulationError(f'qubit {q} out of range for {m} qubits')


@dataclass(frozen=True)
class StateVector:
  """Amplitudes of an m-qubit register (real by default, complex allowed)"""

  amps: np.ndarray
  m: int

  def __post_init__(self):
    if not 1 <= self.m <= MAX_QUBITS:
      raise SimulationError(f'{self.m} qubits is outside the supported range 1..{MAX_QUBITS}')
    amps = np.array(self.amps, dtype=complex if np.iscomplexobj(self.amps) else float)
    if amps.shape != (2 ** self.m,):
      raise SimulationError(f'expected {2 ** self.m} amplitudes, got shape {amps.shape}')
    amps.flags.writeable = False
    object.__setattr__(self, 'amps', amps)

  @classmethod
  def zero(cls, m):
    """|0...0> on m qubits"""

    if not 1 <= m <= MAX_QUBITS:
      raise SimulationError(f'{m} qubits is outside the supported range 1..{MAX_QUBITS}')
    amps = np.zeros(2 ** m)
    amps[0] = 1.0
    return cls(amps, m)


@dataclass(frozen=True)
class TwoQubitGate:
  """Orthogonal (or unitary) 4x4 matrix bound to the ordered qubit pair (i, j)"""

  mat: np.ndarray
  i: int
  j: int

  def __post_init__(self):
    mat = np.array(self.mat, dtype=complex if np.iscomplexobj(self.mat) else float)
    if mat.shape != (4, 4):
      raise SimulationError(f'two-qubit gate must be 4x4, got {mat.shape}')
    if self.i == self.j or self.i < 0 or self.j < 0:
      raise SimulationError(f'invalid qubit pair ({self.i}, {self.j})')
    if np.linalg.norm(mat.conj().T @ mat - np.eye(4)) > ORTHOGONALITY_TOL:
      raise SimulationError('gate matrix is not orthogonal')
    mat.flags.writeable = False
    object.__setattr__(self, 'mat', mat)

  @classmethod
  def identity(cls, i=0, j=1):
    return cls(np.eye(4), i, j)

  @property
  def qubits(self):
    return (self.i, self.j)


# -------------------------- KERNELS ---------------------------
# Raw-array helpers used by the optimizer inner loops; the public functions
# below wrap them with validation.

def _to_front(amps, m, qubits):
  """View amps as a (2^k, 2^(m-k)) matrix with the given qubits as row index"""

  axes = [m - 1 - q for q in qubits] # C-order axis 0 is the most significant bit
  tensor = np.moveaxis(amps.reshape((2,) * m), axes, range(len(qubits)))
  return tensor.reshape(2 ** len(qubits), -1)


def _from_front(block, m, qubits):
  axes = [m - 1 - q for q in qubits]
  tensor = block.reshape((2,) * m)
  return np.moveaxis(tensor, range(len(qubits)), axes).reshape(-1)


def apply_matrix(amps, m, mat, qubits):
  """Apply a 2^k x 2^k matrix to the listed qubits of a raw amplitude vector"""

  block = _to_front(amps, m, qubits)
  return _from_front(mat @ block, m, qubits)


def environment_block(phi, psi, m, i, j):
  """Partial trace of |phi><psi| onto (i, j) for raw amplitude vectors"""

  return _to_front(phi, m, (i, j)) @ _to_front(psi, m, (i, j)).conj().T


# -------------------------- OPERATIONS ---------------------------

def apply_gate(state, gate, adjoint=False):
  """Return the state after gate (or its adjoint) acts on qubits (i, j)"""

  if state.m < 2:
    raise SimulationError('two-qubit gates need at least two qubits')
  _check_qubits(state.m, gate.qubits)
  mat = gate.mat.conj().T if adjoint else gate.mat
  return StateVector(apply_matrix(state.amps, state.m, mat, gate.qubits), state.m)


def environment_matrix(phi, psi, i, j):
  """Environment matrix rho with Tr(rho G) = <psi|G_(i,j)|phi>"""

  if phi.m != psi.m:
    raise SimulationError(f'state sizes differ: {phi.m} and {psi.m} qubits')
  if phi.m < 2:
    raise SimulationError('an environment matrix needs at least two qubits')
  _check_qubits(phi.m, (i, j))
  return environment_block(phi.amps, psi.amps, phi.m, i, j)


def overlap(a, b):
  """Signed overlap <a|b>; callers take the absolute value for fidelities"""

  if a.m != b.m:
    raise SimulationError(f'state sizes differ: {a.m} and {b.m} qubits')
  value = np.vdot(a.amps, b.amps)
  if np.iscomplexobj(a.amps) or np.iscomplexobj(b.amps):
    return complex(value)
  return float(value)
