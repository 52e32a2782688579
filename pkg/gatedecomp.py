"""Real orthogonal two-qubit gates as Clifford gates plus six rotations

In the magic basis every SO(4) gate is a tensor product A (x) B of SU(2)
matrices; gates with determinant -1 pick up one extra SWAP. A and B are then
written as Rz Ry Rz, so each gate becomes the fixed Clifford frame of the
magic matrix around six single-qubit rotations.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from statesim import MAX_QUBITS, ORTHOGONALITY_TOL, apply_matrix

logger = logging.getLogger(__name__)

DET_TOL = 1e-8
KRON_TOL = 1e-9
GIMBAL_TOL = 1e-12

# Columns are the magic basis; M g M^dagger is local for any g in SO(4).
MAGIC = np.array([
  [1, 1j, 0, 0],
  [0, 0, 1j, 1],
  [0, 0, 1j, -1],
  [1, -1j, 0, 0],
]) / math.sqrt(2)


class DecompositionError(ValueError):
  """Raised when a gate or circuit cannot be decomposed or represented"""


class CircuitFormatError(DecompositionError):
  """Raised on malformed plain-text circuit files"""


# -------------------------- GATE MATRICES ---------------------------

def rz(theta):
  return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def ry(theta):
  c, s = math.cos(theta / 2), math.sin(theta / 2)
  return np.array([[c, -s], [s, c]], dtype=complex)


FIXED_GATES = {
  'H': np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2),
  'S': np.diag([1, 1j]),
  'SDG': np.diag([1, -1j]),
  'T': np.diag([1, np.exp(0.25j * math.pi)]),
  'TDG': np.diag([1, np.exp(-0.25j * math.pi)]),
  'X': np.array([[0, 1], [1, 0]], dtype=complex),
  'Z': np.diag([1, -1]).astype(complex),
  # two-qubit matrices are indexed by 2*bit(first qubit) + bit(second qubit)
  'CNOT': np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
  'SWAP': np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}

ROTATION_GATES = {'RZ': rz, 'RY': ry}

CLIFFORD_NAMES = frozenset({'H', 'S', 'SDG', 'X', 'Z', 'CNOT', 'SWAP'})
T_NAMES = frozenset({'T', 'TDG'})
TWO_QUBIT_NAMES = frozenset({'CNOT', 'SWAP'})
GATE_NAMES = frozenset(FIXED_GATES) | frozenset(ROTATION_GATES)


def wrap_angle(theta):
  """Reduce an angle to (-pi, pi]"""

  if not math.isfinite(theta):
    raise DecompositionError(f'rotation angle {theta} is not finite')
  r = math.remainder(theta, 2 * math.pi)
  return r + 2 * math.pi if r <= -math.pi else r


# -------------------------- CIRCUITS ---------------------------

@dataclass(frozen=True)
class Op:
  """One gate application; CNOT qubits are (control, target)"""

  name: str
  qubits: Tuple[int, ...]
  angle: Optional[float] = None

  def matrix(self):
    if self.name in ROTATION_GATES:
      return ROTATION_GATES[self.name](self.angle)
    return FIXED_GATES[self.name]

  def to_text(self):
    line = f'{self.name} {",".join(str(q) for q in self.qubits)}'
    if self.angle is not None:
      line += f' {self.angle:.17g}'
    return line


@dataclass
class ElementaryCircuit:
  """Ordered gate list over m qubits

  phase is a global phase: the circuit implements exp(i*phase) times the
  product of its ops. It is tracked for reporting and never affects
  probabilities.
  """

  m: int
  ops: List[Op] = field(default_factory=list)
  phase: float = 0.0

  def __post_init__(self):
    if not 1 <= self.m <= MAX_QUBITS:
      raise DecompositionError(f'{self.m} qubits is outside the supported range 1..{MAX_QUBITS}')

  def append(self, name, *qubits, angle=None):
    name = name.upper()
    if name not in GATE_NAMES:
      raise DecompositionError(f'unknown gate {name!r}')

    arity = 2 if name in TWO_QUBIT_NAMES else 1
    if len(qubits) != arity:
      raise DecompositionError(f'{name} acts on {arity} qubit(s), got {qubits}')
    if len(set(qubits)) != arity or any(not 0 <= q < self.m for q in qubits):
      raise DecompositionError(f'{name} has invalid qubits {qubits} for {self.m} qubits')

    if name in ROTATION_GATES:
      if angle is None:
        raise DecompositionError(f'{name} needs an angle')
      angle = wrap_angle(float(angle))
    elif angle is not None:
      raise DecompositionError(f'{name} takes no angle')

    op = Op(name, tuple(int(q) for q in qubits), angle)
    self.ops.append(op)
    return op

  def extend(self, other):
    """Append another circuit's ops and accumulate its phase"""

    if other.m > self.m:
      raise DecompositionError(f'cannot append a {other.m}-qubit circuit to {self.m} qubits')
    self.ops.extend(other.ops)
    self.phase = wrap_angle(self.phase + other.phase)
    return self

  def count(self, *names):
    return sum(1 for op in self.ops if op.name in names)

  @property
  def rotation_count(self):
    return self.count(*ROTATION_GATES)

  @property
  def t_count(self):
    return self.count(*T_NAMES)

  @property
  def two_qubit_count(self):
    return self.count(*TWO_QUBIT_NAMES)

  def is_clifford_t(self):
    return all(op.name in CLIFFORD_NAMES or op.name in T_NAMES for op in self.ops)

  # -------------------------- SIMULATION ---------------------------

  def apply(self, amps):
    """Apply every op to a raw amplitude vector

    Consecutive single-qubit gates on a qubit are multiplied into one 2x2
    matrix before touching the state.
    """

    amps = np.asarray(amps, dtype=complex)
    pending = {}

    def flush(qubit):
      nonlocal amps
      mat = pending.pop(qubit, None)
      if mat is not None:
        amps = apply_matrix(amps, self.m, mat, (qubit,))

    for op in self.ops:
      if len(op.qubits) == 1:
        q = op.qubits[0]
        pending[q] = op.matrix() @ pending[q] if q in pending else op.matrix()
      else:
        for q in op.qubits:
          flush(q)
        amps = apply_matrix(amps, self.m, op.matrix(), op.qubits)

    for q in list(pending):
      flush(q)
    return amps * np.exp(1j * self.phase)

  def simulate(self):
    """State prepared from |0...0>"""

    amps = np.zeros(2 ** self.m, dtype=complex)
    amps[0] = 1.0
    return self.apply(amps)

  def unitary(self):
    """Dense 2^m x 2^m matrix, column k is the image of |k>"""

    return np.column_stack([self.apply(column) for column in np.eye(2 ** self.m, dtype=complex)])

  # -------------------------- TEXT FORMAT ---------------------------

  def to_text(self):
    lines = [f'# qubits {self.m}', f'# phase {self.phase:.17g}']
    lines.extend(op.to_text() for op in self.ops)
    return '\n'.join(lines) + '\n'

  @classmethod
  def from_text(cls, text, m=None):
    """Parse the one-op-per-line format; m overrides the '# qubits' header"""

    header_m, phase, parsed = None, 0.0, []
    for lineno, raw in enumerate(text.splitlines(), start=1):
      line = raw.strip()
      if not line:
        continue
      if line.startswith('#'):
        fields = line[1:].split()
        try:
          if fields[:1] == ['qubits'] and len(fields) == 2:
            header_m = int(fields[1])
          elif fields[:1] == ['phase'] and len(fields) == 2:
            phase = float(fields[1])
        except ValueError:
          raise CircuitFormatError(f'line {lineno}: bad header {line!r}') from None
        continue
      parsed.append((lineno, _parse_op(line, lineno)))

    if m is None:
      m = header_m
    if m is None:
      m = max([max(op[1]) + 1 for _, op in parsed] + [1])

    try:
      circ = cls(m, phase=wrap_angle(phase))
    except DecompositionError as error:
      raise CircuitFormatError(str(error)) from None
    for lineno, (name, qubits, angle) in parsed:
      try:
        circ.append(name, *qubits, angle=angle)
      except DecompositionError as error:
        raise CircuitFormatError(f'line {lineno}: {error}') from None
    return circ


def _parse_op(line, lineno):
  fields = line.split()
  if len(fields) not in (2, 3):
    raise CircuitFormatError(f'line {lineno}: expected "GATE q[,q] [angle]", got {line!r}')

  name = fields[0].upper()
  if name not in GATE_NAMES:
    raise CircuitFormatError(f'line {lineno}: unknown gate {fields[0]!r}')
  try:
    qubits = tuple(int(q) for q in fields[1].split(','))
    angle = float(fields[2]) if len(fields) == 3 else None
  except ValueError:
    raise CircuitFormatError(f'line {lineno}: cannot parse {line!r}') from None

  if any(q < 0 for q in qubits):
    raise CircuitFormatError(f'line {lineno}: negative qubit index')
  if angle is not None and not math.isfinite(angle):
    raise CircuitFormatError(f'line {lineno}: non-finite angle')
  return name, qubits, angle


# -------------------------- MAGIC BASIS ---------------------------

def magic_conjugate(g):
  """M g M^dagger, times SWAP when det g = -1; returns (matrix, det sign)"""

  g = np.asarray(g)
  if g.shape != (4, 4):
    raise DecompositionError(f'expected a 4x4 matrix, got shape {g.shape}')
  if np.linalg.norm(g.conj().T @ g - np.eye(4)) > ORTHOGONALITY_TOL:
    raise DecompositionError('gate is not orthogonal')

  det = complex(np.linalg.det(g))
  if abs(det - 1) <= DET_TOL:
    sign = 1
  elif abs(det + 1) <= DET_TOL:
    sign = -1
  else:
    raise DecompositionError(f'determinant {det:.3g} is not +1 or -1')

  conjugated = MAGIC @ g @ MAGIC.conj().T
  if sign < 0:
    conjugated = conjugated @ FIXED_GATES['SWAP']
  return conjugated, sign


def kron_factor(c):
  """Split c = exp(i*phase) A (x) B with det A = det B = 1; returns (A, B, phase)"""

  c = np.asarray(c, dtype=complex)
  upper, lower = c[:2, :2], c[2:, :2] # A00 * B and A10 * B
  block = upper if abs(np.linalg.det(upper)) >= abs(np.linalg.det(lower)) else lower
  det_block = np.linalg.det(block)
  if abs(det_block) < KRON_TOL:
    raise DecompositionError('matrix has no tensor-product structure')
  b = block / np.sqrt(det_block)

  a = (c @ np.kron(np.eye(2), b.conj().T))[::2, ::2]
  det_a = np.linalg.det(a)
  if abs(det_a) < KRON_TOL:
    raise DecompositionError('matrix has no tensor-product structure')
  a = a / np.sqrt(det_a)

  # (A, B) and (-A, -B) give the same product; fix the representative
  lead = a[0, 0].real if abs(a[0, 0].real) > GIMBAL_TOL else b[0, 0].real
  if lead < 0:
    a, b = -a, -b

  product = np.kron(a, b)
  phase = float(np.angle(np.trace(product.conj().T @ c)))
  residual = np.linalg.norm(c - np.exp(1j * phase) * product)
  if residual > KRON_TOL:
    raise DecompositionError(f'matrix is not a tensor product (residual {residual:.3g})')
  return a, b, phase


@dataclass(frozen=True)
class Su2Euler:
  """a = Rz(alpha) Ry(beta) Rz(gamma) up to a global sign"""

  alpha: float
  beta: float
  gamma: float

  def matrix(self):
    return rz(self.alpha) @ ry(self.beta) @ rz(self.gamma)


def zyz_angles(a):
  """ZYZ Euler angles of an SU(2) matrix with beta in [0, pi]"""

  a = np.asarray(a, dtype=complex)
  if abs(np.linalg.det(a) - 1) > KRON_TOL:
    raise DecompositionError('matrix is not special unitary')

  beta = 2 * math.atan2(abs(a[1, 0]), abs(a[0, 0]))
  if abs(a[1, 0]) < GIMBAL_TOL: # beta ~ 0
    alpha, gamma = -2 * np.angle(a[0, 0]), 0.0
  elif abs(a[0, 0]) < GIMBAL_TOL: # beta ~ pi
    alpha, gamma = 2 * np.angle(a[1, 0]), 0.0
  else:
    alpha = np.angle(a[1, 0]) - np.angle(a[0, 0])
    gamma = -np.angle(a[0, 0]) - np.angle(a[1, 0])
  return Su2Euler(wrap_angle(float(alpha)), beta, wrap_angle(float(gamma)))


# -------------------------- TEMPLATES ---------------------------

def _append_magic(circ, i, j):
  """M = CNOT(j -> i) H_j S_j S_i, in time order"""

  circ.append('S', i)
  circ.append('S', j)
  circ.append('H', j)
  circ.append('CNOT', j, i)


def _append_magic_adjoint(circ, i, j):
  circ.append('CNOT', j, i)
  circ.append('H', j)
  circ.append('SDG', j)
  circ.append('SDG', i)


def _append_template(circ, i, j, euler_a, euler_b, sign):
  """g = M^dagger (A (x) B) [SWAP] M, emitted right to left"""

  _append_magic(circ, i, j)
  if sign < 0:
    circ.append('SWAP', i, j)
  for q, euler in ((i, euler_a), (j, euler_b)):
    circ.append('RZ', q, angle=euler.gamma)
    circ.append('RY', q, angle=euler.beta)
    circ.append('RZ', q, angle=euler.alpha)
  _append_magic_adjoint(circ, i, j)


def decompose_o4(gate, m=None):
  """Clifford + six-rotation circuit for an orthogonal TwoQubitGate"""

  i, j = gate.qubits
  m = m if m is not None else max(i, j) + 1

  conjugated, sign = magic_conjugate(gate.mat)
  a, b, _ = kron_factor(conjugated)
  euler_a, euler_b = zyz_angles(a), zyz_angles(b)

  # the same template on a two-qubit register where i -> 1 and j -> 0
  local = ElementaryCircuit(2)
  _append_template(local, 1, 0, euler_a, euler_b, sign)
  phase = float(np.angle(np.trace(local.unitary().conj().T @ gate.mat)))

  circ = ElementaryCircuit(m, phase=wrap_angle(phase))
  _append_template(circ, i, j, euler_a, euler_b, sign)
  logger.debug('decomposed gate on (%d, %d): det %+d, phase %.6f', i, j, sign, phase)
  return circ


def decompose_circuit(aqce_circ):
  """Decompose every gate of an AQCE circuit, in order"""

  out = ElementaryCircuit(aqce_circ.m)
  for gate in aqce_circ.gates:
    out.extend(decompose_o4(gate, aqce_circ.m))
  logger.info('decomposed %d two-qubit gates into %d ops (%d rotations)',
    len(aqce_circ.gates), len(out.ops), out.rotation_count)
  return out
